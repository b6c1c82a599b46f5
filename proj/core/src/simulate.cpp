#include "hdgc/simulate.hpp"

#include "hdgc/error.hpp"

#include <Eigen/Eigenvalues>

#include <random>
#include <string>

namespace hdgc {

namespace {

constexpr double kUnitRootTol = 1e-8;

}  // namespace

Matrix companion_matrix(const std::vector<Matrix>& coefficients) {
  if (coefficients.empty()) throw ValidationError("VAR spec: no coefficient matrices");
  const Index K = coefficients.front().rows();
  const auto p = static_cast<Index>(coefficients.size());
  Matrix C = Matrix::Zero(K * p, K * p);
  for (Index l = 0; l < p; ++l) C.block(0, l * K, K, K) = coefficients[static_cast<std::size_t>(l)];
  if (p > 1) C.block(K, 0, K * (p - 1), K * (p - 1)).setIdentity();
  return C;
}

double spectral_radius(const std::vector<Matrix>& coefficients) {
  Eigen::EigenSolver<Matrix> es(companion_matrix(coefficients), false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

void VarProcessSpec::validate() const {
  if (K < 1) throw ValidationError("VAR spec: K must be >= 1");
  if (coefficients.empty()) throw ValidationError("VAR spec: order p must be >= 1");
  for (const auto& A : coefficients)
    if (A.rows() != K || A.cols() != K) throw ValidationError("VAR spec: coefficient matrix is not K x K");
  if (error_covariance.rows() != K || error_covariance.cols() != K)
    throw ValidationError("VAR spec: error covariance is not K x K");
  if (Eigen::LLT<Matrix>(error_covariance).info() != Eigen::Success)
    throw ValidationError("VAR spec: error covariance is not positive definite");

  Eigen::EigenSolver<Matrix> es(companion_matrix(coefficients), false);
  const Eigen::VectorXcd ev = es.eigenvalues();
  Index unit = 0;
  double outside = 0.0;
  for (Index i = 0; i < ev.size(); ++i) {
    if (std::abs(ev(i) - std::complex<double>(1.0, 0.0)) < kUnitRootTol)
      ++unit;
    else
      outside = std::max(outside, std::abs(ev(i)));
  }
  switch (integration) {
    case Integration::stationary:
      if (unit > 0 || outside >= 1.0)
        throw ValidationError("VAR spec: stationary process has companion spectral radius >= 1");
      break;
    case Integration::unit_root_diagonal:
    case Integration::cointegrated: {
      const Index r = integration == Integration::cointegrated ? cointegration_rank : 0;
      if (integration == Integration::cointegrated && (r < 1 || r >= K))
        throw ValidationError("VAR spec: cointegration rank must lie in [1, K-1]");
      if (unit != K - r)
        throw ValidationError("VAR spec: expected " + std::to_string(K - r) + " unit roots, found " +
                              std::to_string(unit));
      if (outside >= 1.0) throw ValidationError("VAR spec: explosive root outside the unit circle");
      break;
    }
  }
}

TimeSeriesPanel simulate_var(const VarProcessSpec& spec, Index T, Index burn_in) {
  if (T < 1) throw ValidationError("simulate: T must be >= 1");
  if (burn_in < 0) throw ValidationError("simulate: burn_in must be >= 0");
  spec.validate();
  const Index K = spec.K;
  const Index p = spec.p();
  const Matrix L = Eigen::LLT<Matrix>(spec.error_covariance).matrixL();

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Index total = burn_in + T;
  Matrix y = Matrix::Zero(total + p, K);  // first p rows are the zero initial state
  Vector z(K);
  for (Index t = p; t < total + p; ++t) {
    for (Index k = 0; k < K; ++k) z(k) = normal(rng);
    Vector next = L * z;
    for (Index l = 1; l <= p; ++l)
      next.noalias() += spec.coefficients[static_cast<std::size_t>(l - 1)] * y.row(t - l).transpose();
    y.row(t) = next.transpose();
  }
  std::vector<std::string> names;
  for (Index k = 0; k < K; ++k) names.push_back("y" + std::to_string(k + 1));
  std::vector<long> years(static_cast<std::size_t>(T));
  for (Index t = 0; t < T; ++t) years[static_cast<std::size_t>(t)] = static_cast<long>(t + 1);
  return TimeSeriesPanel(y.bottomRows(T), std::move(names), std::move(years));
}

VarProcessSpec make_gc_pair_spec(double strength, Integration integration, std::uint64_t seed) {
  VarProcessSpec spec;
  spec.K = 2;
  spec.error_covariance = Matrix::Identity(2, 2);
  spec.integration = integration;
  spec.seed = seed;
  Matrix A(2, 2);
  switch (integration) {
    case Integration::stationary:
      A << 0.5, 0.0, strength, 0.5;
      break;
    case Integration::unit_root_diagonal:
      A << 1.0, 0.0, strength, 1.0;
      break;
    case Integration::cointegrated:
      if (!(strength > 0.0 && strength < 2.0))
        throw ValidationError("cointegrated pair: strength must lie in (0, 2)");
      A << 1.0, 0.0, strength, 1.0 - strength;
      spec.cointegration_rank = 1;
      break;
  }
  spec.coefficients = {A};
  spec.validate();
  return spec;
}

}  // namespace hdgc
