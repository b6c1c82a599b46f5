#pragma once

#include "hdgc/design.hpp"
#include "hdgc/panel.hpp"
#include "hdgc/regress.hpp"

#include <string>
#include <vector>

namespace hdgc {

enum class Statistic { chi_square, f_approx };

enum class SelectionMethod {
  adaptive_lasso,
  lasso,
  none,  ///< keep every candidate (equivalent to lambda = 0 in every selection step)
};

struct SelectionSettings {
  SelectionMethod method = SelectionMethod::adaptive_lasso;
  int n_lambda = 100;
  double lambda_ratio = 1e-3;
  LassoOptions solver{};
};

/// Does the block J Granger-cause the block I, given every other series?
struct GcQuery {
  std::vector<std::string> caused;   ///< I
  std::vector<std::string> causing;  ///< J
  LagSpec spec{3, 2};
  double alpha = 0.1;
  Statistic statistic = Statistic::chi_square;
  /// Count the augmentation lags once per caused equation in the degrees of
  /// freedom (N_I * d * N_J) instead of once (d * N_J).
  bool df_augment_per_equation = false;
  /// Add the augmentation lags (d * N_J) to the chi-square degrees of freedom.
  /// They are never restricted, so this makes the test conservative; off by default.
  bool chi2_df_includes_augmentation = false;
  SelectionSettings selection{};

  void validate() const;
};

/// Variables kept by the double-selection step. Control columns are indexed
/// by their position among DesignMatrices::control_columns; stacked indices
/// are `equation * n_controls + position`.
struct SelectionRecord {
  std::vector<Index> s0;         ///< stacked, from the outcome regression
  std::vector<Index> sx;         ///< control positions, union over the GC-column regressions
  std::vector<Index> union_set;  ///< stacked, s0 united with sx replicated for every equation
  Index size = 0;                ///< |union_set|
  Index n_controls = 0;
};

/// Residual covariance of the caused block and its symmetric inverse square root.
struct ErrorCovariance {
  Matrix sigma;
  Matrix whitener;
  bool regularized = false;

  /// Sigma = R'R / rows. A ridge of 1e-8 * trace / N_I is added when the
  /// condition number exceeds 1e12.
  static ErrorCovariance from_residuals(const Matrix& residuals);
};

struct PdsLmResult {
  std::vector<std::string> caused;
  std::vector<std::string> causing;
  LagSpec spec{};
  double alpha = 0.1;
  Statistic statistic = Statistic::chi_square;

  double lm_stat = 0.0;
  int df = 0;  ///< chi-square degrees of freedom
  double f_stat = 0.0;
  int f_df1 = 0;
  int f_df2 = 0;
  double p_chi2 = 1.0;
  double p_f = 1.0;
  SelectionRecord selection{};
  /// Sum of the p estimated lag coefficients of the causing block, one entry per caused equation.
  std::vector<double> long_run_effect;
  bool reject = false;
  bool covariance_regularized = false;
  Index effective_T = 0;

  double p_value() const { return statistic == Statistic::chi_square ? p_chi2 : p_f; }
  double long_run() const { return long_run_effect.empty() ? 0.0 : long_run_effect.front(); }
};

/// Lag length from univariate AR(j) fits of every series on the common
/// sample t = p_max+1 .. T, minimizing
///   sum_k ln sigma^2_{k,j} + j K ln(T_eff) / T_eff.
int select_lag_length(const TimeSeriesPanel& panel, int p_max);

/// Post-double-selection LM test with lag augmentation. The panel is used as
/// given; demean it beforehand.
PdsLmResult pds_lm_test(const TimeSeriesPanel& panel, const GcQuery& query);

/// pds_lm_test with the augmentation order forced to zero, for use on
/// differenced (stationary) data.
PdsLmResult stationary_pds_lm(const TimeSeriesPanel& panel, GcQuery query);

std::string to_string(Statistic s);
Statistic parse_statistic(const std::string& s);

}  // namespace hdgc
