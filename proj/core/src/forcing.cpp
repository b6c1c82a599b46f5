#include "hdgc/forcing.hpp"

#include "hdgc/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace hdgc {

namespace {

double co2_f(double c) { return 5.04 * std::log(c + 0.0005 * c * c); }

double overlap_g(double m, double n) { return 0.5 * std::log(1.0 + 0.00002 * std::pow(m * n, 0.75)); }

}  // namespace

double concentration_to_forcing(const GasConcentrationRecord& record, const PreindustrialBaseline& b) {
  const double x = record.concentration;
  if (!(x > 0.0) || !std::isfinite(x))
    throw ValidationError("forcing: concentration must be positive and finite, got " + std::to_string(x));
  switch (record.gas) {
    case Gas::co2:
      return co2_f(x) - co2_f(b.c0);
    case Gas::ch4:
      return 0.04 * (std::sqrt(x) - std::sqrt(b.m0)) - (overlap_g(x, b.n0) - overlap_g(b.m0, b.n0));
    case Gas::n2o:
      return 0.14 * (std::sqrt(x) - std::sqrt(b.n0)) - (overlap_g(b.m0, x) - overlap_g(b.m0, b.n0));
  }
  throw ValidationError("forcing: unknown gas");
}

Gas parse_gas(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "co2") return Gas::co2;
  if (s == "ch4") return Gas::ch4;
  if (s == "n2o") return Gas::n2o;
  throw ValidationError("unknown gas '" + name + "' (expected co2, ch4 or n2o)");
}

std::string to_string(Gas gas) {
  switch (gas) {
    case Gas::co2: return "co2";
    case Gas::ch4: return "ch4";
    case Gas::n2o: return "n2o";
  }
  return "?";
}

}  // namespace hdgc
