#include "lbl/profile.hpp"

#include <cmath>

#include "lbl/error.hpp"
#include "lbl/units.hpp"

namespace lbl {

double population_factor(const SpectralLine& line, double temperature, double number_density) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  constexpr double t_ref = units::kReferenceTemperature;
  if (temperature == t_ref) return number_density;

  constexpr double c2 = units::kSecondRadiation;
  const double boltzmann =
      std::exp(-c2 * line.lower_state_energy * (1.0 / temperature - 1.0 / t_ref));
  const double stimulated = -std::expm1(-c2 * line.position / temperature) /
                            -std::expm1(-c2 * line.position / t_ref);
  const double partition = t_ref / temperature;
  return number_density * boltzmann * stimulated * partition;
}

double wing_factor_fermi(double w, double w_i, double /*temperature*/, double m,
                         double width_scale) {
  if (!(width_scale > 0.0) || !(m > 0.0)) throw DomainError("Fermi factor needs M, width > 0");
  return 1.0 / (1.0 + std::exp((std::abs(w - w_i) - m * width_scale) / width_scale));
}

ProfileHooks make_fermi_hooks(double width_scale, double m) {
  if (!(width_scale > 0.0) || !(m > 0.0)) throw ConfigError("Fermi factor needs M, width > 0");
  ProfileHooks hooks;
  hooks.slope_m = m;
  hooks.label = "fermi";
  hooks.wing_factor = [width_scale](double w, double w_i, double t, double slope) {
    return wing_factor_fermi(w, w_i, t, slope, width_scale);
  };
  return hooks;
}

}  // namespace lbl
