#include "hdgc/distributions.hpp"
#include "hdgc/error.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace hdgc;

TEST_CASE("quantiles agree with printed tables") {
  CHECK(std::abs(chi2_quantile(0.95, 1) - 3.84146) < 1e-4);
  CHECK(std::abs(chi2_quantile(0.95, 2) - 5.99146) < 1e-4);
  CHECK(std::abs(chi2_quantile(0.95, 5) - 11.0705) < 1e-4);
  CHECK(std::abs(chi2_quantile(0.99, 10) - 23.2093) < 1e-4);
  CHECK(std::abs(chi2_quantile(0.90, 3) - 6.25139) < 1e-4);
  CHECK(std::abs(f_quantile(0.95, 1, 10) - 4.9646) < 1e-4);
  CHECK(std::abs(f_quantile(0.95, 3, 20) - 3.0984) < 1e-4);
  CHECK(std::abs(f_quantile(0.99, 5, 30) - 3.6990) < 1e-4);
}

TEST_CASE("chi-square agrees with a high-precision reference") {
  for (double df : {1.0, 2.0, 3.0, 7.0, 12.0, 30.0, 90.0, 250.0}) {
    for (double prob : {0.01, 0.1, 0.5, 0.9, 0.95, 0.99, 0.999}) {
      const double q = chi2_quantile(prob, df);
      CHECK_MESSAGE(oracle::relative_error(q, oracle::chi2_quantile(prob, df)) < 1e-8, "df " << df << " p " << prob);
    }
    for (double x : {0.05, 0.5, 1.0, 4.0, 10.0, 40.0, 150.0}) {
      const double ref = oracle::chi2_sf(x, df);
      if (ref < 1e-250) continue;
      CHECK_MESSAGE(oracle::relative_error(chi2_sf(x, df), ref) < 1e-8, "df " << df << " x " << x);
      CHECK(std::abs(chi2_cdf(x, df) + chi2_sf(x, df) - 1.0) < 1e-14);
    }
  }
}

TEST_CASE("F agrees with a high-precision reference") {
  for (double d1 : {1.0, 2.0, 5.0, 12.0, 40.0})
    for (double d2 : {3.0, 10.0, 57.0, 300.0}) {
      for (double prob : {0.05, 0.5, 0.9, 0.95, 0.99}) {
        const double q = f_quantile(prob, d1, d2);
        CHECK_MESSAGE(oracle::relative_error(q, oracle::f_quantile(prob, d1, d2)) < 1e-8,
                      d1 << "," << d2 << " p " << prob);
      }
      for (double x : {0.1, 0.8, 1.5, 3.0, 9.0}) {
        CHECK_MESSAGE(oracle::relative_error(f_sf(x, d1, d2), oracle::f_sf(x, d1, d2)) < 1e-8,
                      d1 << "," << d2 << " x " << x);
      }
    }
}

TEST_CASE("tiny upper tails keep relative accuracy") {
  CHECK(oracle::relative_error(chi2_sf(200.0, 3), oracle::chi2_sf(200.0, 3)) < 1e-8);
  CHECK(oracle::relative_error(f_sf(60.0, 2, 200), oracle::f_sf(60.0, 2, 200)) < 1e-8);
  CHECK(chi2_sf(0.0, 4) == 1.0);
  CHECK(f_sf(0.0, 2, 9) == 1.0);
}

TEST_CASE("quantile inverts the cdf") {
  for (double df : {1.0, 4.0, 33.0})
    for (double prob : {0.001, 0.3, 0.77, 0.9999}) CHECK(std::abs(chi2_cdf(chi2_quantile(prob, df), df) - prob) < 1e-12);
}

TEST_CASE("incomplete functions at known points") {
  CHECK(std::abs(gamma_p(1.0, 2.0) - (1.0 - std::exp(-2.0))) < 1e-15);
  CHECK(std::abs(gamma_q(1.0, 2.0) - std::exp(-2.0)) < 1e-15);
  CHECK(std::abs(beta_inc(1.0, 1.0, 0.37) - 0.37) < 1e-15);
  CHECK(std::abs(beta_inc(2.0, 1.0, 0.5) - 0.25) < 1e-15);
}

TEST_CASE("distribution arguments are validated") {
  CHECK_THROWS_AS(chi2_quantile(1.0, 3), ValidationError);
  CHECK_THROWS_AS(chi2_quantile(0.5, 0), ValidationError);
  CHECK_THROWS_AS(f_quantile(0.5, 1, -2), ValidationError);
  CHECK_THROWS_AS(gamma_p(-1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(beta_inc(1.0, 1.0, 1.5), ValidationError);
}
