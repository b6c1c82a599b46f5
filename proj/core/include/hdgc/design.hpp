#pragma once

#include "hdgc/panel.hpp"

#include <string>
#include <vector>

namespace hdgc {

/// VAR lag length p and lag-augmentation order d.
struct LagSpec {
  int p = 1;
  int d = 2;

  void validate() const;
};

/// Regression matrices for one (J -> I) Granger-causality question.
///
/// Row r corresponds to time t = p + d + r (0-based). Column (k, l) of
/// `lagged`, at position k * p + (l - 1), holds series k at lag l, so columns
/// are series-major and lag-minor. `augmentation` holds lags p+1 .. p+d of the
/// causing series, again series-major.
struct DesignMatrices {
  Matrix response;      ///< effective_T x N_I
  Matrix lagged;        ///< effective_T x K*p
  Matrix augmentation;  ///< effective_T x d*N_J
  std::vector<Index> gc_columns;      ///< positions in `lagged` of the tested block, size p*N_J
  std::vector<Index> control_columns; ///< complement of gc_columns, ascending
  std::vector<Index> caused;          ///< panel column indices of I
  std::vector<Index> causing;         ///< panel column indices of J
  std::vector<std::string> lagged_labels;
  std::vector<std::string> augmentation_labels;
  Index effective_T = 0;

  /// Regressors available to one equation, including augmentation lags.
  Index candidate_count() const { return lagged.cols() + augmentation.cols(); }
};

/// Builds the design for caused set I and causing set J. Throws
/// ValidationError for overlapping or empty sets and InfeasibleError when
/// T - p - d < 1.
DesignMatrices build_design(const TimeSeriesPanel& panel, const std::vector<std::string>& caused,
                            const std::vector<std::string>& causing, const LagSpec& spec);

/// Lag matrix of every series, no augmentation, rows t = first_row .. T-1.
Matrix lag_matrix(const Matrix& values, int p, Index first_row);

}  // namespace hdgc
