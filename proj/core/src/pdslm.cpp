#include "hdgc/pdslm.hpp"

#include "hdgc/distributions.hpp"
#include "hdgc/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace hdgc {

void GcQuery::validate() const {
  spec.validate();
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("query: alpha must lie in (0, 1)");
  if (caused.empty() || causing.empty()) throw ValidationError("query: caused and causing sets must be nonempty");
  for (const auto& c : caused)
    if (std::find(causing.begin(), causing.end(), c) != causing.end())
      throw ValidationError("query: series '" + c + "' is both caused and causing");
  if (selection.n_lambda < 1) throw ValidationError("query: n_lambda must be >= 1");
  if (!(selection.lambda_ratio > 0.0 && selection.lambda_ratio < 1.0))
    throw ValidationError("query: lambda ratio must lie in (0, 1)");
}

std::string to_string(Statistic s) { return s == Statistic::chi_square ? "chi2" : "f"; }

Statistic parse_statistic(const std::string& s) {
  if (s == "chi2" || s == "chi_square") return Statistic::chi_square;
  if (s == "f" || s == "F" || s == "f_approx") return Statistic::f_approx;
  throw ValidationError("unknown statistic '" + s + "' (expected chi2 or f)");
}

ErrorCovariance ErrorCovariance::from_residuals(const Matrix& residuals) {
  ErrorCovariance ec;
  const Index n = residuals.cols();
  ec.sigma = residuals.transpose() * residuals / static_cast<double>(residuals.rows());
  ec.sigma = 0.5 * (ec.sigma + ec.sigma.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(ec.sigma);
  Vector ev = eig.eigenvalues();
  const double max_ev = ev.maxCoeff();
  const double min_ev = ev.minCoeff();
  if (!(max_ev > 0.0)) throw NumericError("error covariance is zero: caused series fitted exactly");
  if (min_ev <= 0.0 || max_ev / min_ev > 1e12) {
    ec.sigma += Matrix::Identity(n, n) * (1e-8 * ec.sigma.trace() / static_cast<double>(n));
    eig.compute(ec.sigma);
    ev = eig.eigenvalues();
    ec.regularized = true;
  }
  const Matrix& V = eig.eigenvectors();
  const Matrix W = V * ev.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
  ec.whitener = 0.5 * (W + W.transpose());
  return ec;
}

int select_lag_length(const TimeSeriesPanel& panel, int p_max) {
  if (p_max < 1) throw ValidationError("lag selection: p_max must be >= 1");
  const Index T = panel.T();
  if (T - p_max < 10)
    throw InfeasibleError("lag selection: T - p_max = " + std::to_string(T - p_max) + " < 10 observations");
  const Index T_eff = T - p_max;
  const double Td = static_cast<double>(T_eff);
  const Index K = panel.K();

  int best_j = 1;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 1; j <= p_max; ++j) {
    double crit = static_cast<double>(j) * static_cast<double>(K) * std::log(Td) / Td;
    for (Index k = 0; k < K; ++k) {
      const Matrix series = panel.values().col(k);
      const Matrix X = lag_matrix(series, j, p_max);
      const Vector y = series.col(0).tail(T_eff);
      const double s2 = std::max(ols(X, y).rss / Td, std::numeric_limits<double>::min());
      crit += std::log(s2);
    }
    if (crit < best) {
      best = crit;
      best_j = j;
    }
  }
  return best_j;
}

namespace {

Matrix take_columns(const Matrix& X, const std::vector<Index>& cols) {
  Matrix out(X.rows(), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) out.col(static_cast<Index>(i)) = X.col(cols[i]);
  return out;
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

// Support of a selection regression of y on X.
std::vector<Index> select_support(const Matrix& X, const Vector& y, const SelectionSettings& s) {
  std::vector<Index> all(static_cast<std::size_t>(X.cols()));
  for (Index m = 0; m < X.cols(); ++m) all[static_cast<std::size_t>(m)] = m;
  if (s.method == SelectionMethod::none || X.cols() == 0) return all;
  const Vector w = s.method == SelectionMethod::adaptive_lasso ? adaptive_weights(X, y, s.n_lambda, s.lambda_ratio)
                                                               : Vector(Vector::Ones(X.cols()));
  return lasso_bic(X, y, w, s.n_lambda, s.lambda_ratio, s.solver).active_set;
}

// Whitened stacked design: block (e, f) equals W(e, f) * blocks[f].
Matrix whiten_blocks(const Matrix& W, const std::vector<Matrix>& blocks, Index rows) {
  const auto n = static_cast<Index>(blocks.size());
  Index cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  Matrix out = Matrix::Zero(rows * n, cols);
  for (Index e = 0; e < n; ++e) {
    Index c = 0;
    for (Index f = 0; f < n; ++f) {
      const Matrix& b = blocks[static_cast<std::size_t>(f)];
      if (W(e, f) != 0.0) out.block(e * rows, c, rows, b.cols()) = W(e, f) * b;
      c += b.cols();
    }
  }
  return out;
}

}  // namespace

PdsLmResult pds_lm_test(const TimeSeriesPanel& panel, const GcQuery& query) {
  query.validate();
  panel.require_analysable();
  const DesignMatrices dm = build_design(panel, query.caused, query.causing, query.spec);
  const Index T = dm.effective_T;
  const Index N_I = static_cast<Index>(dm.caused.size());
  const Index N_J = static_cast<Index>(dm.causing.size());
  const int p = query.spec.p;
  const int d = query.spec.d;
  const Index N_X = p * N_J;
  const Index N_GC = N_I * N_X;
  const Index n_aug_df = (query.df_augment_per_equation ? N_I : 1) * d * N_J;

  const Matrix X_ctrl = take_columns(dm.lagged, dm.control_columns);
  const Matrix X_gc = take_columns(dm.lagged, dm.gc_columns);
  const Index n_c = X_ctrl.cols();

  PdsLmResult res;
  res.caused = query.caused;
  res.causing = query.causing;
  res.spec = query.spec;
  res.alpha = query.alpha;
  res.statistic = query.statistic;
  res.effective_T = T;

  // Step 1: outcome regression of the stacked caused block on I (x) X_{-GC} ...
  SelectionRecord& sel = res.selection;
  sel.n_controls = n_c;
  {
    Matrix Xs = Matrix::Zero(T * N_I, N_I * n_c);
    Vector ys(T * N_I);
    for (Index e = 0; e < N_I; ++e) {
      Xs.block(e * T, e * n_c, T, n_c) = X_ctrl;
      ys.segment(e * T, T) = dm.response.col(e);
    }
    sel.s0 = select_support(Xs, ys, query.selection);
  }
  // ... and of every tested lag column on X_{-GC}.
  std::set<Index> sx;
  for (Index j = 0; j < N_X; ++j) {
    const auto s = select_support(X_ctrl, X_gc.col(j), query.selection);
    sx.insert(s.begin(), s.end());
  }
  sel.sx.assign(sx.begin(), sx.end());

  // Step 2: union, per-equation retained control sets.
  std::vector<std::set<Index>> kept(static_cast<std::size_t>(N_I));
  for (Index idx : sel.s0) kept[static_cast<std::size_t>(idx / n_c)].insert(idx % n_c);
  for (auto& k : kept) k.insert(sel.sx.begin(), sel.sx.end());
  for (Index e = 0; e < N_I; ++e)
    for (Index c : kept[static_cast<std::size_t>(e)]) sel.union_set.push_back(e * n_c + c);
  sel.size = static_cast<Index>(sel.union_set.size());

  const Index total_rows = T * N_I;
  if (sel.size + N_GC + n_aug_df >= total_rows)
    throw InfeasibleError("infeasible refit: s_hat + N_GC + d N_J = " + std::to_string(sel.size + N_GC + n_aug_df) +
                          " >= T N_I = " + std::to_string(total_rows));

  std::vector<Matrix> restricted(static_cast<std::size_t>(N_I));
  std::vector<Matrix> unrestricted(static_cast<std::size_t>(N_I));
  Matrix resid(T, N_I);
  for (Index e = 0; e < N_I; ++e) {
    const auto& ke = kept[static_cast<std::size_t>(e)];
    const Matrix Xe = take_columns(X_ctrl, std::vector<Index>(ke.begin(), ke.end()));
    const Matrix Xe_aug = hconcat(Xe, dm.augmentation);
    if (Xe_aug.cols() + X_gc.cols() >= T)
      throw InfeasibleError("infeasible refit: equation " + query.caused[static_cast<std::size_t>(e)] + " has " +
                            std::to_string(Xe_aug.cols() + X_gc.cols()) + " regressors for " + std::to_string(T) +
                            " observations");
    resid.col(e) = ols(Xe_aug, dm.response.col(e)).residuals;
    restricted[static_cast<std::size_t>(e)] = Xe_aug;
    unrestricted[static_cast<std::size_t>(e)] = hconcat(Xe_aug, X_gc);

    // Long-run effect: sum of the tested lag coefficients in the unwhitened unrestricted fit.
    const OlsFit full = ols(unrestricted[static_cast<std::size_t>(e)], dm.response.col(e));
    res.long_run_effect.push_back(full.coefficients.tail(X_gc.cols()).sum());
  }
  const ErrorCovariance cov = ErrorCovariance::from_residuals(resid);
  res.covariance_regularized = cov.regularized;

  // Step 3: FGLS whitening, restricted refit, auxiliary regression.
  Vector y_star(total_rows);
  {
    const Matrix Y_star = dm.response * cov.whitener.transpose();
    for (Index e = 0; e < N_I; ++e) y_star.segment(e * T, T) = Y_star.col(e);
  }
  const Vector xi = ols(whiten_blocks(cov.whitener, restricted, T), y_star).residuals;
  const Vector nu = ols(whiten_blocks(cov.whitener, unrestricted, T), xi).residuals;
  const double xi_ss = xi.squaredNorm();
  const double nu_ss = nu.squaredNorm();
  double lm = xi_ss - nu_ss;
  if (lm < -1e-10 * std::max(1.0, xi_ss)) throw NumericError("LM statistic negative: nested fits inconsistent");
  lm = std::max(lm, 0.0);
  res.lm_stat = lm;

  // Step 4: calibration.
  // The augmentation lags sit in both nested models, so only the N_GC tested
  // lags are restricted; the chi-square df counts them unless asked otherwise.
  res.df = static_cast<int>(query.chi2_df_includes_augmentation ? N_GC + n_aug_df : N_GC);
  res.f_df1 = static_cast<int>(N_GC);
  res.f_df2 = static_cast<int>(total_rows - sel.size - N_GC - n_aug_df);
  res.p_chi2 = chi2_sf(lm, res.df);
  res.f_stat = nu_ss > 0.0 ? (lm / res.f_df1) / (nu_ss / res.f_df2) : std::numeric_limits<double>::infinity();
  res.p_f = f_sf(res.f_stat, res.f_df1, res.f_df2);
  res.reject = res.p_value() < query.alpha;
  return res;
}

PdsLmResult stationary_pds_lm(const TimeSeriesPanel& panel, GcQuery query) {
  query.spec.d = 0;
  return pds_lm_test(panel, query);
}

}  // namespace hdgc
