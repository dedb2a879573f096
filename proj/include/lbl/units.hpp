#pragma once

namespace lbl::units {

inline constexpr double kReferenceTemperature = 296.0;       // K, line-list reference
inline constexpr double kSpeedOfLight = 2.99792458e10;       // cm/s
inline constexpr double kSecondRadiation = 1.4387769;        // c2 = hc/k, cm K
inline constexpr double kLoschmidt = 2.6867811e19;           // molecules/cm^3 per amagat
inline constexpr double kStandardTemperature = 273.15;       // K, amagat reference
inline constexpr double kTorrPerAtm = 760.0;

inline constexpr double torr_to_atm(double torr) { return torr / kTorrPerAtm; }

/// Ideal-gas pressure (atm) of a gas with density `amagat` at temperature T.
inline constexpr double amagat_to_atm(double amagat, double temperature) {
  return amagat * temperature / kStandardTemperature;
}

inline constexpr double atm_to_amagat(double atm, double temperature) {
  return atm * kStandardTemperature / temperature;
}

inline constexpr double amagat_to_number_density(double amagat) { return amagat * kLoschmidt; }

}  // namespace lbl::units
