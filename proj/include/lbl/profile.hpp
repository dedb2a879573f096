#pragma once

#include <functional>
#include <numbers>
#include <string>

#include "lbl/linelist.hpp"

namespace lbl {

/// Asymmetric wing damping Ab(w, w_i, T, M). Must return values in [0, 1] and tend to 1 at
/// line centre.
using WingFactor = std::function<double(double w, double w_i, double temperature, double m)>;

struct ProfileHooks {
  WingFactor wing_factor;   // empty: identity
  double slope_m = 5.0;
  std::string label = "none";

  bool has_wing_factor() const { return static_cast<bool>(wing_factor); }
};

/// S (gamma/pi) / ((w - w_i)^2 + gamma^2).
inline double lorentz(double w, double w_i, double gamma, double intensity) {
  const double d = w - w_i;
  return intensity * (gamma / std::numbers::pi) / (d * d + gamma * gamma);
}

/// Absorber number density scaled from the 296 K intensity reference to temperature T:
/// Boltzmann factor, stimulated emission and a rigid-rotor partition sum Q(T) ~ T.
/// Returns number_density exactly at the reference temperature.
double population_factor(const SpectralLine& line, double temperature, double number_density);

/// Fermi-type stand-in for the wing factor:
/// 1 / (1 + exp((|w - w_i| - M width_scale) / width_scale)).
double wing_factor_fermi(double w, double w_i, double temperature, double m, double width_scale);

/// ProfileHooks using wing_factor_fermi with the given width scale.
ProfileHooks make_fermi_hooks(double width_scale, double m = 5.0);

}  // namespace lbl
