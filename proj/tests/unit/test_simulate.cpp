#include "hdgc/error.hpp"
#include "hdgc/simulate.hpp"

#include <doctest.h>

using namespace hdgc;

TEST_CASE("stationary AR(1) has the textbook variance") {
  // Each component follows y = 0.5 y_{-1} + u, Var = 1 / (1 - 0.25).
  const auto panel = simulate_var(make_gc_pair_spec(0.0, Integration::stationary, 42), 200000);
  const double var = (panel.values().col(0).array() - panel.values().col(0).mean()).square().mean();
  CHECK(var == doctest::Approx(4.0 / 3.0).epsilon(0.02));
  const Vector x = panel.values().col(0);
  const double rho = x.head(x.size() - 1).dot(x.tail(x.size() - 1)) / x.squaredNorm();
  CHECK(rho == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("simulation is deterministic per seed") {
  const auto spec = make_gc_pair_spec(0.3, Integration::stationary, 7);
  const auto a = simulate_var(spec, 100);
  const auto b = simulate_var(spec, 100);
  CHECK(a.values() == b.values());
  const auto c = simulate_var(make_gc_pair_spec(0.3, Integration::stationary, 8), 100);
  CHECK(a.values() != c.values());
  CHECK(a.names() == std::vector<std::string>{"y1", "y2"});
  CHECK(a.time_index().front() == 1);
  CHECK(a.time_index().back() == 100);
}

TEST_CASE("companion matrix and spectral radius") {
  Matrix A1(2, 2), A2(2, 2);
  A1 << 0.5, 0.1, 0.0, 0.2;
  A2 << 0.1, 0.0, 0.0, 0.1;
  const Matrix C = companion_matrix({A1, A2});
  CHECK(C.rows() == 4);
  CHECK(C.block(0, 2, 2, 2) == A2);
  CHECK(C.block(2, 0, 2, 2) == Matrix::Identity(2, 2));
  CHECK(C.block(2, 2, 2, 2) == Matrix::Zero(2, 2));
  // AR(2) on the first component: roots of z^2 - 0.5 z - 0.1.
  const double root = (0.5 + std::sqrt(0.25 + 0.4)) / 2.0;
  CHECK(spectral_radius({A1, A2}) == doctest::Approx(root));
  CHECK(spectral_radius({Matrix::Identity(3, 3)}) == doctest::Approx(1.0));
}

TEST_CASE("spec validation") {
  CHECK_NOTHROW(make_gc_pair_spec(0.4, Integration::unit_root_diagonal));
  CHECK_NOTHROW(make_gc_pair_spec(0.4, Integration::cointegrated));
  CHECK_THROWS_AS(make_gc_pair_spec(0.0, Integration::cointegrated), ValidationError);

  VarProcessSpec spec = make_gc_pair_spec(0.0, Integration::stationary);
  spec.coefficients[0](0, 0) = 1.2;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.coefficients[0](0, 0) = 1.0;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.integration = Integration::unit_root_diagonal;
  CHECK_THROWS_AS(spec.validate(), ValidationError);  // only one unit root
  spec.coefficients[0](1, 1) = 1.0;
  CHECK_NOTHROW(spec.validate());
  spec.error_covariance(0, 0) = -1.0;
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  CHECK_THROWS_AS(simulate_var(make_gc_pair_spec(0.0, Integration::stationary), 0), ValidationError);
}

TEST_CASE("cointegrated pair keeps the spread stationary") {
  const auto panel = simulate_var(make_gc_pair_spec(0.5, Integration::cointegrated, 3), 5000);
  // y2 - y1 is stationary while y1 wanders.
  const Vector spread = panel.values().col(1) - panel.values().col(0);
  const Vector level = panel.values().col(0);
  auto var = [](const Vector& v) { return (v.array() - v.mean()).square().mean(); };
  CHECK(var(spread) < 10.0);
  CHECK(var(level) > 10.0 * var(spread));
}
