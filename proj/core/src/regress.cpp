#include "hdgc/regress.hpp"

#include "hdgc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hdgc {

double soft_threshold(double z, double threshold) {
  if (z > threshold) return z - threshold;
  if (z < -threshold) return z + threshold;
  return 0.0;
}

OlsFit ols(const Matrix& X, const Vector& y) {
  if (X.rows() != y.size()) throw ValidationError("ols: X has " + std::to_string(X.rows()) + " rows, y has " +
                                                  std::to_string(y.size()));
  if (!X.allFinite() || !y.allFinite()) throw NumericError("ols: non-finite entries in design or response");
  OlsFit fit;
  if (X.cols() == 0) {
    fit.coefficients = Vector(0);
    fit.residuals = y;
    fit.rss = y.squaredNorm();
    fit.dof = X.rows();
    return fit;
  }
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(X);
  fit.coefficients = cod.solve(y);
  fit.residuals = y - X * fit.coefficients;
  fit.rss = fit.residuals.squaredNorm();
  fit.rank = cod.rank();
  fit.dof = X.rows() - fit.rank;
  return fit;
}

LassoProblem::LassoProblem(const Matrix& X, const Vector& y, Vector weights, LassoOptions options)
    : X_(X), y_(y), weights_(std::move(weights)), options_(options) {
  const Index T = X_.rows();
  const Index N = X_.cols();
  if (T < 1) throw ValidationError("lasso: empty design");
  if (y_.size() != T) throw ValidationError("lasso: response length does not match design rows");
  if (weights_.size() != N) throw ValidationError("lasso: weights length does not match design columns");
  if ((weights_.array() < 0.0).any() || !weights_.allFinite())
    throw ValidationError("lasso: weights must be finite and nonnegative");
  if (!X_.allFinite() || !y_.allFinite()) throw NumericError("lasso: non-finite entries in design or response");

  const double Td = static_cast<double>(T);
  scale_ = (X_.colwise().squaredNorm().transpose() / Td).cwiseSqrt();
  Vector inv(N);
  for (Index m = 0; m < N; ++m) inv(m) = scale_(m) > 0.0 ? 1.0 / scale_(m) : 0.0;
  const Matrix Z = X_ * inv.asDiagonal();
  gram_ = Matrix::Zero(N, N);
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(Z.transpose(), 1.0 / Td);
  gram_.triangularView<Eigen::StrictlyUpper>() = gram_.transpose();
  xty_ = Z.transpose() * y_ / Td;
  yty_ = y_.squaredNorm() / Td;
  y_scale_ = std::sqrt(yty_);
}

double LassoProblem::standardized_objective(const Vector& beta, double lambda) const {
  return yty_ - 2.0 * xty_.dot(beta) + beta.dot(gram_ * beta) + lambda * weights_.dot(beta.cwiseAbs());
}

double LassoProblem::objective(const Vector& coefficients, double lambda) const {
  const Vector r = y_ - X_ * coefficients;
  const Vector beta = coefficients.cwiseProduct(scale_);
  return r.squaredNorm() / static_cast<double>(rows()) + lambda * weights_.dot(beta.cwiseAbs());
}

double LassoProblem::kkt_violation(const Vector& coefficients, double lambda) const {
  const Vector beta = coefficients.cwiseProduct(scale_);
  const Vector grad = xty_ - gram_ * beta;  // z_m' r / T
  double worst = 0.0;
  for (Index m = 0; m < cols(); ++m) {
    if (scale_(m) == 0.0) continue;
    const double bound = 0.5 * lambda * weights_(m);
    double v;
    if (weights_(m) == 0.0)
      v = std::abs(grad(m));
    else if (beta(m) != 0.0)
      v = std::abs(grad(m) - std::copysign(bound, beta(m)));
    else
      v = std::max(0.0, std::abs(grad(m)) - bound);
    worst = std::max(worst, v);
  }
  return worst;
}

double LassoProblem::lambda_max() const {
  const Index N = cols();
  std::vector<Index> free_cols;
  for (Index m = 0; m < N; ++m)
    if (weights_(m) == 0.0 && scale_(m) > 0.0) free_cols.push_back(m);

  Vector grad = xty_;
  if (!free_cols.empty()) {
    // Gradient at the OLS fit on the unpenalized columns.
    const auto nf = static_cast<Index>(free_cols.size());
    Matrix G(nf, nf);
    Vector c(nf);
    for (Index a = 0; a < nf; ++a) {
      c(a) = xty_(free_cols[a]);
      for (Index b = 0; b < nf; ++b) G(a, b) = gram_(free_cols[a], free_cols[b]);
    }
    const Vector bf = Eigen::CompleteOrthogonalDecomposition<Matrix>(G).solve(c);
    Vector beta = Vector::Zero(N);
    for (Index a = 0; a < nf; ++a) beta(free_cols[a]) = bf(a);
    grad = xty_ - gram_ * beta;
  }
  double lmax = 0.0;
  bool any_penalized = false;
  for (Index m = 0; m < N; ++m) {
    if (weights_(m) <= 0.0) continue;
    any_penalized = true;
    lmax = std::max(lmax, 2.0 * std::abs(grad(m)) / weights_(m));
  }
  if (!any_penalized) throw ValidationError("lambda path: every weight is zero, nothing to tune");
  return lmax;
}

LassoFit LassoProblem::solve(double lambda, const LassoFit* warm) const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ValidationError("lasso: lambda must be finite and >= 0");
  const Index N = cols();
  Vector beta = Vector::Zero(N);
  if (warm != nullptr && warm->coefficients.size() == N) beta = warm->coefficients.cwiseProduct(scale_);
  Vector grad = xty_ - gram_ * beta;

  LassoFit fit;
  fit.lambda = lambda;
  fit.weights = weights_;
  const double tol = options_.tolerance * (y_scale_ > 0.0 ? y_scale_ : 1.0);
  double previous = options_.verify_descent ? standardized_objective(beta, lambda) : 0.0;

  bool converged = y_scale_ == 0.0;
  if (converged) beta.setZero();
  int sweep = 0;
  while (!converged && sweep < options_.max_sweeps) {
    ++sweep;
    double max_change = 0.0;
    for (Index m = 0; m < N; ++m) {
      if (scale_(m) == 0.0) continue;
      const double g_mm = gram_(m, m);
      const double old = beta(m);
      const double z = grad(m) + g_mm * old;
      const double updated = soft_threshold(z, 0.5 * lambda * weights_(m)) / g_mm;
      const double delta = updated - old;
      if (delta != 0.0) {
        beta(m) = updated;
        grad.noalias() -= gram_.col(m) * delta;
        max_change = std::max(max_change, std::abs(delta));
      }
    }
    if (options_.verify_descent) {
      const double current = standardized_objective(beta, lambda);
      if (current > previous + 1e-12 * std::max(1.0, std::abs(previous)))
        throw NumericError("lasso: objective increased during sweep " + std::to_string(sweep));
      previous = current;
    }
    if (max_change < tol) converged = true;
    // Refresh the gradient occasionally to stop rounding drift.
    if (sweep % 50 == 0) grad = xty_ - gram_ * beta;
  }

  Vector coef(N);
  for (Index m = 0; m < N; ++m) coef(m) = scale_(m) > 0.0 ? beta(m) / scale_(m) : 0.0;
  fit.coefficients = coef;
  fit.sweeps = sweep;
  fit.kkt_gap = kkt_violation(coef, lambda);
  if (!converged)
    throw ConvergenceError("lasso: no convergence after " + std::to_string(options_.max_sweeps) +
                               " sweeps (KKT gap " + std::to_string(fit.kkt_gap) + ")",
                           fit.kkt_gap);
  for (Index m = 0; m < N; ++m)
    if (coef(m) != 0.0) fit.active_set.push_back(m);
  fit.rss = (y_ - X_ * coef).squaredNorm();
  const double T = static_cast<double>(rows());
  const double rss = std::max(fit.rss, std::numeric_limits<double>::min());
  fit.bic = T * std::log(rss / T) + static_cast<double>(fit.active_set.size()) * std::log(T);
  return fit;
}

LassoFit lasso_solve(const Matrix& X, const Vector& y, double lambda, const Vector& weights,
                     const LassoOptions& options) {
  return LassoProblem(X, y, weights, options).solve(lambda);
}

namespace {

std::vector<double> geometric_grid(double lmax, int n_lambda, double ratio) {
  if (lmax <= 0.0) lmax = std::numeric_limits<double>::min() * 1e20;
  std::vector<double> grid(static_cast<std::size_t>(n_lambda));
  if (n_lambda == 1) {
    grid[0] = lmax;
    return grid;
  }
  const double step = std::log(ratio) / static_cast<double>(n_lambda - 1);
  for (int i = 0; i < n_lambda; ++i) grid[static_cast<std::size_t>(i)] = lmax * std::exp(step * i);
  grid.back() = lmax * ratio;
  return grid;
}

void check_grid_args(int n_lambda, double ratio, int min_n) {
  if (n_lambda < min_n) throw ValidationError("lambda path: n_lambda must be >= " + std::to_string(min_n));
  if (!(ratio > 0.0 && ratio < 1.0)) throw ValidationError("lambda path: ratio must lie in (0, 1)");
}

}  // namespace

std::vector<double> lambda_path(const Matrix& X, const Vector& y, const Vector& weights, int n_lambda,
                                double ratio) {
  check_grid_args(n_lambda, ratio, 2);
  return geometric_grid(LassoProblem(X, y, weights).lambda_max(), n_lambda, ratio);
}

LassoFit lasso_bic(const Matrix& X, const Vector& y, const Vector& weights, int n_lambda, double ratio,
                   const LassoOptions& options) {
  check_grid_args(n_lambda, ratio, 1);
  const LassoProblem problem(X, y, weights, options);
  const auto grid = geometric_grid(problem.lambda_max(), n_lambda, ratio);
  const auto T = static_cast<std::size_t>(X.rows());

  std::optional<LassoFit> best;
  LassoFit previous;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    LassoFit fit = problem.solve(grid[i], i == 0 ? nullptr : &previous);
    previous = fit;
    if (grid.size() > 1 && fit.active_set.size() >= T) break;
    if (!best || fit.bic < best->bic) best = std::move(fit);
  }
  if (!best) best = problem.solve(grid.front());
  return *best;
}

Vector adaptive_weights(const Matrix& X, const Vector& y, int n_lambda, double ratio) {
  const Index N = X.cols();
  Vector init;
  if (adaptive_uses_ols(X.rows(), N)) {
    init = ols(X, y).coefficients;
  } else {
    init = lasso_bic(X, y, Vector::Ones(N), n_lambda, ratio).coefficients;
  }
  // Coefficients on the fully standardized scale, so the floor is unit-free.
  const double Td = static_cast<double>(X.rows());
  const Vector scale = (X.colwise().squaredNorm().transpose() / Td).cwiseSqrt();
  const double y_rms = std::sqrt(y.squaredNorm() / Td);
  const double y_inv = y_rms > 0.0 ? 1.0 / y_rms : 1.0;
  Vector w(N);
  for (Index m = 0; m < N; ++m) w(m) = 1.0 / std::max(std::abs(init(m) * scale(m) * y_inv), kAdaptiveWeightFloor);
  return w;
}

}  // namespace hdgc
