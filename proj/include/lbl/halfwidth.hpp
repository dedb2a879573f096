#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "lbl/linelist.hpp"

namespace lbl {

enum class HalfwidthMode { Linear, Saturating, Combined };

std::string_view to_string(HalfwidthMode m);
std::optional<HalfwidthMode> halfwidth_mode_from_string(std::string_view text);

/// Pressure dependence of the collisional (Lorentz) halfwidth.
///
/// The conventional width grows linearly with pressure; the saturated width
/// gamma_s = saturation_multiplier * delta_omega_rot is the ceiling it approaches at
/// high pressure. `mode` selects how the two are combined in effective_halfwidth().
struct HalfwidthModel {
  HalfwidthMode mode = HalfwidthMode::Saturating;
  double gamma0 = 0.0;                  // cm^-1, zero-pressure floor
  double delta_omega_rot = 1.2;         // cm^-1, mean rotational line separation
  double saturation_multiplier = 3.919;
  bool hard_clamp = false;              // saturating mode: min(gamma_c, gamma_s) instead of tanh
  double linear_lo = 0.0;               // atm, p_D (informational)
  double linear_hi = 0.0;               // atm, p_L (informational)
  /// Explicit critical pressure; when unset it is derived per line from gamma_c(p_s) = gamma_s.
  std::optional<double> critical_pressure_override;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
  friend bool operator==(const HalfwidthModel&, const HalfwidthModel&) = default;
};

enum class BroadenerId { N2, He, Self, Other };

std::string_view to_string(BroadenerId id);
std::optional<BroadenerId> broadener_from_string(std::string_view text);

struct BroadenerSpec {
  BroadenerId id = BroadenerId::N2;
  std::string name;                     // free text for BroadenerId::Other
  double scale_vs_n2 = 1.0;             // e.g. 0.52 for He
  double partial_pressure = 0.0;        // atm
  std::optional<double> partial_density;  // amagat

  void validate() const;
  friend bool operator==(const BroadenerSpec&, const BroadenerSpec&) = default;
};

/// Width per atm of one broadener for `line` at temperature T: scale * gamma_ref * (T_ref/T)^n.
/// The self broadener uses the line's self-broadening coefficient.
double pressure_slope(const SpectralLine& line, const BroadenerSpec& broadener, double temperature);

/// gamma0 + slope * p. Throws DomainError for T <= 0 or negative pressure.
double conventional_halfwidth(const SpectralLine& line, const BroadenerSpec& broadener,
                              double temperature, const HalfwidthModel& model);

/// Mixture: gamma0 plus the sum of the per-broadener linear contributions.
double conventional_halfwidth(const SpectralLine& line, std::span<const BroadenerSpec> broadeners,
                              double temperature, const HalfwidthModel& model);

/// gamma_s = saturation_multiplier * delta_omega_rot.
double saturated_halfwidth(const HalfwidthModel& model);

/// Lorentz width for a conventional width gamma_c under model.mode.
double effective_halfwidth(double gamma_c, const HalfwidthModel& model);

/// Smallest pressure at which the conventional width reaches gamma_s (0 when already there).
/// Throws DomainError when the width does not grow with pressure.
double critical_pressure(const SpectralLine& line, const BroadenerSpec& broadener,
                         double temperature, const HalfwidthModel& model);

/// tau = 1 / (2 c gamma), seconds.
double relaxation_time(double gamma);

}  // namespace lbl
