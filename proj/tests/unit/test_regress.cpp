#include "hdgc/error.hpp"
#include "hdgc/regress.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace hdgc;

namespace {

Matrix gaussian(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = z(rng);
  return m;
}

// y = X b + noise with the first `k` coefficients nonzero.
Vector sparse_response(const Matrix& X, Index k, double noise, std::mt19937_64& rng) {
  Vector b = Vector::Zero(X.cols());
  for (Index m = 0; m < std::min(k, X.cols()); ++m) b(m) = (m % 2 == 0 ? 1.0 : -0.7) / (1.0 + 0.3 * m);
  std::normal_distribution<double> z;
  Vector y = X * b;
  for (Index i = 0; i < y.size(); ++i) y(i) += noise * z(rng);
  return y;
}

// n x n block with Q'Q / n = I.
Matrix orthonormal_design(Index n, Index cols, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(n, cols, rng));
  return Matrix(qr.householderQ()).leftCols(cols) * std::sqrt(static_cast<double>(n));
}

}  // namespace

TEST_CASE("ols on exact and rank-deficient designs") {
  Matrix X(4, 2);
  X << 1, 0, 1, 1, 1, 2, 1, 3;
  Vector y(4);
  y << 1, 3, 5, 7;
  const auto fit = ols(X, y);
  CHECK(fit.coefficients(0) == doctest::Approx(1.0));
  CHECK(fit.coefficients(1) == doctest::Approx(2.0));
  CHECK(fit.rss < 1e-20);
  CHECK(fit.rank == 2);
  CHECK(fit.dof == 2);

  Matrix D(4, 3);
  D << X, X.col(1);
  const auto dup = ols(D, y);
  CHECK(dup.rank == 2);
  CHECK(dup.rss < 1e-20);
  CHECK(dup.coefficients(1) == doctest::Approx(dup.coefficients(2)));  // minimum norm splits evenly

  CHECK(ols(Matrix(4, 0), y).rss == doctest::Approx(y.squaredNorm()));
  CHECK_THROWS_AS(ols(X, Vector(3)), ValidationError);
  Matrix bad = X;
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(ols(bad, y), NumericError);
}

TEST_CASE("soft threshold") {
  CHECK(soft_threshold(3.0, 1.0) == 2.0);
  CHECK(soft_threshold(-3.0, 1.0) == -2.0);
  CHECK(soft_threshold(0.5, 1.0) == 0.0);
  CHECK(soft_threshold(-1.0, 1.0) == 0.0);
}

TEST_CASE("lasso at lambda zero is least squares") {
  std::mt19937_64 rng(11);
  const Matrix X = gaussian(80, 6, rng);
  const Vector y = sparse_response(X, 3, 0.5, rng);
  const auto fit = lasso_solve(X, y, 0.0, Vector::Ones(6));
  const Vector ref = ols(X, y).coefficients;
  CHECK((fit.coefficients - ref).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("lambda_max zeroes every penalized coefficient") {
  std::mt19937_64 rng(12);
  const Matrix X = gaussian(60, 9, rng);
  const Vector y = sparse_response(X, 4, 0.3, rng);
  Vector w = Vector::Ones(9);
  w(2) = 3.0;
  const LassoProblem prob(X, y, w);
  const double lmax = prob.lambda_max();
  CHECK(prob.solve(lmax).active_set.empty());
  CHECK_FALSE(prob.solve(0.99 * lmax).active_set.empty());

  // An unpenalized column stays in and lambda_max is measured after fitting it.
  w(0) = 0.0;
  const LassoProblem partial(X, y, w);
  const auto fit = partial.solve(partial.lambda_max());
  CHECK(fit.active_set == std::vector<Index>{0});
  CHECK_FALSE(partial.solve(0.99 * partial.lambda_max()).active_set.size() == 1);
}

TEST_CASE("orthonormal design gives closed-form soft thresholding") {
  std::mt19937_64 rng(13);
  for (int rep = 0; rep < 10; ++rep) {
    const Index n = 50;
    const Matrix X = orthonormal_design(n, 8, rng);
    const Vector y = sparse_response(X, 3, 0.8, rng);
    Vector w = Vector::Ones(8);
    if (rep % 2 == 1) w = (Vector::Random(8).array() + 1.5).matrix();
    const LassoProblem prob(X, y, w);
    const double lambda = 0.3 * prob.lambda_max();
    const auto fit = prob.solve(lambda);
    const Vector z = X.transpose() * y / static_cast<double>(n);
    for (Index m = 0; m < 8; ++m) CHECK(std::abs(fit.coefficients(m) - soft_threshold(z(m), 0.5 * lambda * w(m))) < 1e-8);
  }
}

TEST_CASE("lasso matches the sign-pattern enumeration") {
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 12; ++rep) {
    const Index N = 3 + rep % 6;
    const Index T = rep % 3 == 0 ? N - 1 : 40;  // includes N > T
    Matrix X = gaussian(T, N, rng);
    X.col(0) *= 5.0;
    const Vector y = sparse_response(X, 2, 0.4, rng);
    const Vector w = (Vector::Random(N).array().abs() + 0.5).matrix();
    LassoOptions tight;
    tight.tolerance = 1e-12;
    tight.max_sweeps = 200000;
    const LassoProblem prob(X, y, w, tight);
    for (double frac : {0.6, 0.2, 0.05}) {
      const double lambda = frac * prob.lambda_max();
      const auto fit = prob.solve(lambda);
      const Vector ref = oracle::brute_force_lasso(X, y, w, lambda);
      CHECK_MESSAGE(prob.objective(fit.coefficients, lambda) <= prob.objective(ref, lambda) + 1e-10,
                    "rep " << rep << " frac " << frac);
      if (T > N) CHECK((fit.coefficients - ref).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("KKT certificate on random instances") {
  std::mt19937_64 rng(15);
  for (int rep = 0; rep < 40; ++rep) {
    const Index T = 30 + rep;
    const Index N = rep % 2 == 0 ? T / 3 : 2 * T;
    const Matrix X = gaussian(T, N, rng);
    const Vector y = sparse_response(X, 5, 1.0, rng);
    const LassoProblem prob(X, y, Vector::Ones(N));
    for (double frac : {0.5, 0.1, 0.02}) {
      const auto fit = prob.solve(frac * prob.lambda_max());
      CHECK(fit.kkt_gap <= 1e-6);
      CHECK(prob.kkt_violation(fit.coefficients, fit.lambda) == doctest::Approx(fit.kkt_gap));
    }
  }
}

TEST_CASE("warm and cold starts agree") {
  std::mt19937_64 rng(16);
  const Matrix X = gaussian(70, 25, rng);
  const Vector y = sparse_response(X, 6, 0.5, rng);
  const LassoProblem prob(X, y, Vector::Ones(25));
  const auto path = lambda_path(X, y, Vector::Ones(25), 20, 1e-2);
  LassoFit warm = prob.solve(path.front());
  for (double lambda : path) {
    warm = prob.solve(lambda, &warm);
    const auto cold = prob.solve(lambda);
    CHECK((warm.coefficients - cold.coefficients).cwiseAbs().maxCoeff() < 1e-5);
    CHECK(warm.active_set == cold.active_set);
  }
}

TEST_CASE("coordinate descent never increases the objective") {
  std::mt19937_64 rng(17);
  const Matrix X = gaussian(40, 60, rng);
  const Vector y = sparse_response(X, 4, 0.7, rng);
  LassoOptions checked;
  checked.verify_descent = true;
  const LassoProblem prob(X, y, Vector::Ones(60), checked);
  for (double frac : {0.7, 0.1, 0.01}) CHECK_NOTHROW(prob.solve(frac * prob.lambda_max()));
}

TEST_CASE("lasso invariances and errors") {
  std::mt19937_64 rng(18);
  const Matrix X = gaussian(50, 10, rng);
  const Vector y = sparse_response(X, 3, 0.5, rng);
  const Vector w = Vector::Ones(10);
  const auto base = lasso_solve(X, y, 0.05, w);

  // Rescaling a column rescales its coefficient and nothing else.
  Matrix Xs = X;
  Xs.col(3) *= 7.0;
  const auto scaled = lasso_solve(Xs, y, 0.05, w);
  CHECK(scaled.active_set == base.active_set);
  CHECK(scaled.coefficients(3) * 7.0 == doctest::Approx(base.coefficients(3)).epsilon(1e-6));

  CHECK(lasso_solve(X, Vector::Zero(50), 0.1, w).active_set.empty());
  Matrix Xz = X;
  Xz.col(0).setZero();
  CHECK(lasso_solve(Xz, y, 0.05, w).coefficients(0) == 0.0);

  CHECK_THROWS_AS(lasso_solve(X, y, -1.0, w), ValidationError);
  CHECK_THROWS_AS(lasso_solve(X, y, 0.1, Vector::Ones(3)), ValidationError);
  CHECK_THROWS_AS(lasso_solve(X, y, 0.1, -w), ValidationError);
  LassoOptions starved;
  starved.max_sweeps = 1;
  starved.tolerance = 1e-15;
  CHECK_THROWS_AS(lasso_solve(X, y, 1e-4, w, starved), ConvergenceError);
}

TEST_CASE("lambda path is geometric and starts at lambda_max") {
  std::mt19937_64 rng(19);
  const Matrix X = gaussian(40, 12, rng);
  const Vector y = sparse_response(X, 3, 0.5, rng);
  const auto path = lambda_path(X, y, Vector::Ones(12), 100, 1e-3);
  REQUIRE(path.size() == 100);
  CHECK(path.front() == doctest::Approx(LassoProblem(X, y, Vector::Ones(12)).lambda_max()));
  CHECK(path.back() == doctest::Approx(1e-3 * path.front()));
  for (std::size_t i = 1; i < path.size(); ++i) {
    CHECK(path[i] < path[i - 1]);
    CHECK(path[i] / path[i - 1] == doctest::Approx(path[1] / path[0]));
  }
  CHECK_THROWS_AS(lambda_path(X, y, Vector::Ones(12), 1, 1e-3), ValidationError);
  CHECK_THROWS_AS(lambda_path(X, y, Vector::Ones(12), 10, 1.0), ValidationError);
  CHECK_THROWS_AS(lambda_path(X, y, Vector::Zero(12), 10, 0.1), ValidationError);
}

TEST_CASE("BIC selection recovers a sparse support") {
  // BIC is evaluated on the shrunken fit, so a few spurious columns can buy
  // back the shrinkage bias. The true columns must never be dropped.
  std::mt19937_64 rng(20);
  int exact = 0;
  int false_positives = 0;
  const int reps = 50;
  for (int rep = 0; rep < reps; ++rep) {
    const Matrix X = gaussian(150, 30, rng);
    Vector b = Vector::Zero(30);
    b(0) = 1.0;
    b(1) = -0.8;
    b(2) = 0.6;
    std::normal_distribution<double> z;
    Vector y = X * b;
    for (Index i = 0; i < y.size(); ++i) y(i) += z(rng);
    const auto w = adaptive_weights(X, y, 100, 1e-3);
    const auto fit = lasso_bic(X, y, w, 100, 1e-3);
    if (fit.active_set == std::vector<Index>{0, 1, 2}) ++exact;
    REQUIRE(fit.active_set.size() >= 3);
    CHECK(std::vector<Index>(fit.active_set.begin(), fit.active_set.begin() + 3) == std::vector<Index>{0, 1, 2});
    false_positives += static_cast<int>(fit.active_set.size()) - 3;
    CHECK(fit.bic == doctest::Approx(150.0 * std::log(fit.rss / 150.0) +
                                     static_cast<double>(fit.active_set.size()) * std::log(150.0)));
  }
  CHECK(exact >= reps / 2);
  CHECK(false_positives <= reps);
}

TEST_CASE("BIC choice is the minimum over the path") {
  std::mt19937_64 rng(21);
  const Matrix X = gaussian(60, 15, rng);
  const Vector y = sparse_response(X, 4, 0.8, rng);
  const Vector w = Vector::Ones(15);
  const auto best = lasso_bic(X, y, w, 30, 1e-2);
  const LassoProblem prob(X, y, w);
  for (double lambda : lambda_path(X, y, w, 30, 1e-2)) CHECK(prob.solve(lambda).bic >= best.bic - 1e-9);
  const auto single = lasso_bic(X, y, w, 1, 1e-2);
  CHECK(single.active_set.empty());
}

TEST_CASE("adaptive weights") {
  Matrix X(6, 2);
  X << 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0, 1;
  Vector y(6);
  y << 2, 0, 2, 0, 2, 0;
  // OLS gives b = (2, 0); column RMS is sqrt(1/2) and y RMS is sqrt(2), so b0 standardizes to 1.
  const Vector w = adaptive_weights(X, y, 100, 1e-3);
  CHECK(w(0) == doctest::Approx(1.0));
  CHECK((adaptive_weights(X, 50.0 * y, 100, 1e-3) - w).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(w(1) == doctest::Approx(1.0 / kAdaptiveWeightFloor));
  CHECK(adaptive_uses_ols(100, 79));
  CHECK_FALSE(adaptive_uses_ols(100, 80));

  std::mt19937_64 rng(22);
  const Matrix Xw = gaussian(30, 50, rng);
  const Vector yw = sparse_response(Xw, 2, 0.3, rng);
  const Vector ww = adaptive_weights(Xw, yw, 50, 1e-2);
  CHECK(ww.size() == 50);
  CHECK((ww.array() > 0.0).all());
  CHECK(ww(0) < ww(40));
}
