#include "hdgc/error.hpp"
#include "hdgc/forcing.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace hdgc;

TEST_CASE("forcing is zero at the pre-industrial baseline") {
  CHECK(std::abs(concentration_to_forcing({Gas::co2, 280.0, 1750})) <= 1e-12);
  CHECK(std::abs(concentration_to_forcing({Gas::ch4, 700.0, 1750})) <= 1e-12);
  CHECK(std::abs(concentration_to_forcing({Gas::n2o, 275.0, 1750})) <= 1e-12);
}

TEST_CASE("forcing matches a 50-digit evaluation") {
  using oracle::big;
  for (double c : {180.0, 280.0, 315.97, 409.85, 560.0, 1200.0})
    CHECK(std::abs(concentration_to_forcing({Gas::co2, c, 0}) - static_cast<double>(oracle::co2_forcing(big(c)))) <=
          1e-10);
  for (double m : {400.0, 700.0, 1866.0, 2500.0})
    CHECK(std::abs(concentration_to_forcing({Gas::ch4, m, 0}) - static_cast<double>(oracle::ch4_forcing(big(m)))) <=
          1e-10);
  for (double n : {200.0, 275.0, 331.0, 400.0})
    CHECK(std::abs(concentration_to_forcing({Gas::n2o, n, 0}) - static_cast<double>(oracle::n2o_forcing(big(n)))) <=
          1e-10);
}

TEST_CASE("forcing increases with concentration") {
  for (Gas g : {Gas::co2, Gas::ch4, Gas::n2o}) {
    double prev = concentration_to_forcing({g, 1.0, 0});
    for (double x = 2.0; x <= 5000.0; x += 1.0) {
      const double f = concentration_to_forcing({g, x, 0});
      CHECK_MESSAGE(f > prev, to_string(g) << " at " << x);
      prev = f;
    }
  }
}

TEST_CASE("baseline is configurable") {
  const PreindustrialBaseline b{300.0, 750.0, 270.0};
  CHECK(std::abs(concentration_to_forcing({Gas::co2, 300.0, 0}, b)) <= 1e-12);
  CHECK(std::abs(concentration_to_forcing({Gas::ch4, 750.0, 0}, b)) <= 1e-12);
  CHECK(std::abs(concentration_to_forcing({Gas::n2o, 270.0, 0}, b)) <= 1e-12);
  CHECK(concentration_to_forcing({Gas::co2, 409.85, 0}, b) < concentration_to_forcing({Gas::co2, 409.85, 0}));
}

TEST_CASE("forcing rejects non-positive concentrations") {
  CHECK_THROWS_AS(concentration_to_forcing({Gas::co2, 0.0, 0}), ValidationError);
  CHECK_THROWS_AS(concentration_to_forcing({Gas::ch4, -5.0, 0}), ValidationError);
  CHECK_THROWS_AS(concentration_to_forcing({Gas::n2o, std::nan(""), 0}), ValidationError);
  CHECK(parse_gas("CO2") == Gas::co2);
  CHECK(parse_gas("n2o") == Gas::n2o);
  CHECK_THROWS_AS(parse_gas("so2"), ValidationError);
}
