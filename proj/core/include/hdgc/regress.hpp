#pragma once

#include "hdgc/panel.hpp"

#include <optional>
#include <vector>

namespace hdgc {

struct OlsFit {
  Vector coefficients;
  Vector residuals;
  double rss = 0.0;
  Index rank = 0;
  Index dof = 0;  ///< rows - rank
};

/// Minimum-norm least squares via a complete orthogonal decomposition, so
/// rank-deficient designs are fine. Throws NumericError on non-finite input.
OlsFit ols(const Matrix& X, const Vector& y);

struct LassoFit {
  Vector coefficients;  ///< original (unstandardized) scale
  double lambda = 0.0;
  Vector weights;
  std::vector<Index> active_set;
  double rss = 0.0;
  double bic = 0.0;
  int sweeps = 0;
  double kkt_gap = 0.0;  ///< max KKT violation on standardized columns
};

struct LassoOptions {
  double tolerance = 1e-7;  ///< relative to the root-mean-square of y
  int max_sweeps = 10000;
  /// Check after every sweep that the objective did not increase (NumericError otherwise).
#ifdef NDEBUG
  bool verify_descent = false;
#else
  bool verify_descent = true;
#endif
};

/// Weighted lasso
///
///   minimize (1/T) ||y - X b||^2 + lambda * sum_m w_m |b_m|
///
/// solved by cyclic coordinate descent with covariance updates on columns
/// scaled to unit root-mean-square; coefficients are returned on the original
/// scale. Columns with w_m = 0 are not penalized. All-zero columns get a zero
/// coefficient.
///
/// The object precomputes the Gram matrix once so that a whole lambda path
/// can be solved with warm starts.
class LassoProblem {
 public:
  LassoProblem(const Matrix& X, const Vector& y, Vector weights, LassoOptions options = {});

  /// Solves at `lambda`. `warm` is a previous fit on the same problem.
  LassoFit solve(double lambda, const LassoFit* warm = nullptr) const;

  /// Smallest lambda at which every penalized coefficient is zero.
  double lambda_max() const;

  /// Penalized objective at original-scale coefficients.
  double objective(const Vector& coefficients, double lambda) const;

  /// Max KKT violation of original-scale coefficients (standardized units).
  double kkt_violation(const Vector& coefficients, double lambda) const;

  Index rows() const noexcept { return X_.rows(); }
  Index cols() const noexcept { return X_.cols(); }
  const Vector& scales() const noexcept { return scale_; }

 private:
  double standardized_objective(const Vector& beta, double lambda) const;

  Matrix X_;
  Vector y_;
  Vector weights_;
  LassoOptions options_;
  Vector scale_;  // root-mean-square of each column
  Matrix gram_;   // Z'Z / T
  Vector xty_;    // Z'y / T
  double yty_ = 0.0;
  double y_scale_ = 0.0;
};

LassoFit lasso_solve(const Matrix& X, const Vector& y, double lambda, const Vector& weights,
                     const LassoOptions& options = {});

/// Geometric grid from lambda_max down to ratio * lambda_max.
std::vector<double> lambda_path(const Matrix& X, const Vector& y, const Vector& weights, int n_lambda,
                                double ratio);

/// Fits the whole path and returns the fit minimizing
///   BIC = T ln(rss / T) + |active| ln(T),
/// preferring the larger lambda on ties. Fits with |active| >= T are skipped
/// because their rss can be exactly zero.
LassoFit lasso_bic(const Matrix& X, const Vector& y, const Vector& weights, int n_lambda = 100,
                   double ratio = 1e-3, const LassoOptions& options = {});

inline constexpr double kAdaptiveWeightFloor = 1e-4;

/// Adaptive-lasso weights 1 / max(|b_m|, 1e-4), where b is a first-step OLS
/// fit when N < 0.8 T and a BIC-tuned unit-weight lasso otherwise. The
/// first-step coefficients are measured with both the columns and y scaled to
/// unit root-mean-square.
Vector adaptive_weights(const Matrix& X, const Vector& y, int n_lambda = 100, double ratio = 1e-3);

/// True when adaptive_weights() uses OLS for an N-column, T-row design.
inline bool adaptive_uses_ols(Index rows, Index cols) { return static_cast<double>(cols) < 0.8 * rows; }

double soft_threshold(double z, double threshold);

}  // namespace hdgc
