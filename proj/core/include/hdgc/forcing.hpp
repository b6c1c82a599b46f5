#pragma once

#include <string>

namespace hdgc {

enum class Gas { co2, ch4, n2o };

/// One annual concentration reading. CO2 in ppm, CH4 and N2O in ppb.
struct GasConcentrationRecord {
  Gas gas = Gas::co2;
  double concentration = 0.0;
  int year = 0;
};

/// Pre-industrial reference concentrations.
struct PreindustrialBaseline {
  double c0 = 280.0;  // CO2, ppm
  double m0 = 700.0;  // CH4, ppb
  double n0 = 275.0;  // N2O, ppb
};

/// Radiative forcing (W/m^2) of a well-mixed greenhouse gas relative to the
/// baseline:
///   CO2: f(c) - f(c0),                      f(c) = 5.04 ln(c + 0.0005 c^2)
///   CH4: 0.04 (sqrt m - sqrt m0) - [g(m, n0) - g(m0, n0)]
///   N2O: 0.14 (sqrt n - sqrt n0) - [g(m0, n) - g(m0, n0)]
/// with the CH4/N2O overlap term g(m, n) = 0.5 ln(1 + 0.00002 (m n)^0.75).
double concentration_to_forcing(const GasConcentrationRecord& record,
                                const PreindustrialBaseline& baseline = {});

Gas parse_gas(const std::string& name);
std::string to_string(Gas gas);

}  // namespace hdgc
