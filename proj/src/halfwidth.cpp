#include "lbl/halfwidth.hpp"

#include <algorithm>
#include <cmath>

#include "lbl/error.hpp"
#include "lbl/units.hpp"

namespace lbl {

std::string_view to_string(HalfwidthMode m) {
  switch (m) {
    case HalfwidthMode::Linear: return "linear";
    case HalfwidthMode::Saturating: return "saturating";
    case HalfwidthMode::Combined: return "combined";
  }
  return "?";
}

std::optional<HalfwidthMode> halfwidth_mode_from_string(std::string_view text) {
  if (text == "linear") return HalfwidthMode::Linear;
  if (text == "saturating") return HalfwidthMode::Saturating;
  if (text == "combined") return HalfwidthMode::Combined;
  return std::nullopt;
}

std::string_view to_string(BroadenerId id) {
  switch (id) {
    case BroadenerId::N2: return "N2";
    case BroadenerId::He: return "He";
    case BroadenerId::Self: return "self";
    case BroadenerId::Other: return "other";
  }
  return "?";
}

std::optional<BroadenerId> broadener_from_string(std::string_view text) {
  if (text == "N2") return BroadenerId::N2;
  if (text == "He") return BroadenerId::He;
  if (text == "self") return BroadenerId::Self;
  if (text == "other") return BroadenerId::Other;
  return std::nullopt;
}

void HalfwidthModel::validate() const {
  if (!(delta_omega_rot > 0.0) || !(saturation_multiplier > 0.0)) {
    throw ConfigError("saturated halfwidth must be positive (delta_omega_rot and multiplier > 0)");
  }
  if (!(gamma0 >= 0.0)) throw ConfigError("gamma0 must be non-negative");
  if (critical_pressure_override && !(*critical_pressure_override >= 0.0)) {
    throw ConfigError("critical pressure override must be non-negative");
  }
}

void BroadenerSpec::validate() const {
  if (!(scale_vs_n2 > 0.0) || scale_vs_n2 > 2.0) {
    throw ConfigError("broadener scale must lie in (0, 2]");
  }
  if (!(partial_pressure >= 0.0)) throw ConfigError("broadener pressure must be non-negative");
  if (partial_density && !(*partial_density >= 0.0)) {
    throw ConfigError("broadener density must be non-negative");
  }
}

double pressure_slope(const SpectralLine& line, const BroadenerSpec& broadener, double temperature) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  const double gamma_ref =
      broadener.id == BroadenerId::Self ? line.gamma_self_ref : line.gamma_foreign_ref;
  return broadener.scale_vs_n2 * gamma_ref *
         std::pow(units::kReferenceTemperature / temperature, line.temp_exponent);
}

double conventional_halfwidth(const SpectralLine& line, const BroadenerSpec& broadener,
                              double temperature, const HalfwidthModel& model) {
  return conventional_halfwidth(line, std::span(&broadener, 1), temperature, model);
}

double conventional_halfwidth(const SpectralLine& line, std::span<const BroadenerSpec> broadeners,
                              double temperature, const HalfwidthModel& model) {
  if (!(temperature > 0.0)) throw DomainError("temperature must be positive");
  double gamma = model.gamma0;
  for (const auto& b : broadeners) {
    if (!(b.partial_pressure >= 0.0)) throw DomainError("partial pressure must be non-negative");
    gamma += pressure_slope(line, b, temperature) * b.partial_pressure;
  }
  return gamma;
}

double saturated_halfwidth(const HalfwidthModel& model) {
  const double gs = model.saturation_multiplier * model.delta_omega_rot;
  if (!(gs > 0.0)) throw ConfigError("saturated halfwidth must be positive");
  return gs;
}

double effective_halfwidth(double gamma_c, const HalfwidthModel& model) {
  if (!(gamma_c >= 0.0)) throw DomainError("conventional halfwidth must be non-negative");
  switch (model.mode) {
    case HalfwidthMode::Linear:
      return gamma_c;
    case HalfwidthMode::Saturating: {
      const double gs = saturated_halfwidth(model);
      return model.hard_clamp ? std::min(gamma_c, gs) : gs * std::tanh(gamma_c / gs);
    }
    case HalfwidthMode::Combined: {
      const double gs = saturated_halfwidth(model);
      if (std::isinf(gamma_c)) return gs;
      return gamma_c * gs / (gamma_c + gs);
    }
  }
  return gamma_c;
}

double critical_pressure(const SpectralLine& line, const BroadenerSpec& broadener,
                         double temperature, const HalfwidthModel& model) {
  const double gs = saturated_halfwidth(model);
  if (model.gamma0 >= gs) return 0.0;
  const double slope = pressure_slope(line, broadener, temperature);
  if (!(slope > 0.0)) throw DomainError("halfwidth does not grow with pressure; no saturation");
  return (gs - model.gamma0) / slope;
}

double relaxation_time(double gamma) {
  if (!(gamma > 0.0)) throw DomainError("halfwidth must be positive");
  return 1.0 / (2.0 * units::kSpeedOfLight * gamma);
}

}  // namespace lbl
