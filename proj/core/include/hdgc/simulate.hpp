#pragma once

#include "hdgc/panel.hpp"

#include <cstdint>
#include <vector>

namespace hdgc {

enum class Integration { stationary, unit_root_diagonal, cointegrated };

/// VAR(p) data-generating process y_t = A_1 y_{t-1} + ... + A_p y_{t-p} + u_t
/// with Gaussian u_t ~ N(0, error_covariance).
struct VarProcessSpec {
  Index K = 2;
  std::vector<Matrix> coefficients;  ///< A_1 .. A_p, each K x K
  Matrix error_covariance;
  Integration integration = Integration::stationary;
  Index cointegration_rank = 0;  ///< r, used when integration == cointegrated
  std::uint64_t seed = 1;

  int p() const { return static_cast<int>(coefficients.size()); }

  /// Stationary specs need spectral radius < 1; integrated specs need exactly
  /// K - r eigenvalues equal to one (K for unit_root_diagonal) and none outside
  /// the unit circle. Throws ValidationError otherwise.
  void validate() const;
};

/// Companion matrix of A_1 .. A_p (Kp x Kp).
Matrix companion_matrix(const std::vector<Matrix>& coefficients);

/// Largest eigenvalue modulus of the companion matrix.
double spectral_radius(const std::vector<Matrix>& coefficients);

/// Simulates T observations after discarding `burn_in` (zero initial state).
/// Same spec and seed give bitwise identical output. Series are named
/// y1 .. yK and indexed by years 1 .. T.
TimeSeriesPanel simulate_var(const VarProcessSpec& spec, Index T, Index burn_in = 200);

/// Bivariate VAR(1) where y1 Granger-causes y2 through a lag-1 coefficient
/// `strength` and y2 does not cause y1:
///   stationary:          A_1 = [[0.5, 0], [strength, 0.5]]
///   unit_root_diagonal:  A_1 = [[1, 0], [strength, 1]]  (independent random walks at strength 0)
///   cointegrated:        A_1 = [[1, 0], [strength, 1 - strength]], rank 1; strength must be in (0, 2)
VarProcessSpec make_gc_pair_spec(double strength, Integration integration, std::uint64_t seed = 1);

}  // namespace hdgc
