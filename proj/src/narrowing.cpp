#include "lbl/narrowing.hpp"

#include <cmath>

#include "lbl/error.hpp"

namespace lbl {

void NarrowingParams::validate() const {
  if (!(0.0 < a && a < c && c < b)) throw ConfigError("narrowing parameters need 0 < a < c < b");
  if (!(base > 0.0 && base < 1.0)) throw ConfigError("narrowing base must lie in (0, 1)");
  if (!(wing_floor > 0.0 && wing_floor < 1.0)) {
    throw ConfigError("narrowing wing floor must lie in (0, 1)");
  }
  if (!(x_min < 0.0)) throw ConfigError("narrowing x_min must be negative");
}

std::string_view to_string(Regime r) { return r == Regime::AbovePs ? "above-ps" : "below-ps"; }

double wing_exponent(double gamma, double gamma_s, const NarrowingParams& params) {
  if (!(gamma > 0.0) || !(gamma_s > 0.0)) throw DomainError("halfwidths must be positive");
  const double ratio = params.wing_floor * gamma / gamma_s;
  if (ratio >= 1.0) {
    throw DomainError("degenerate narrowing wing: wing_floor * gamma >= gamma_s");
  }
  return std::log(ratio) / std::log(params.base);
}

double narrowing_exponent(double detuning, double gamma, double x_max,
                          const NarrowingParams& p) {
  if (!(detuning >= 0.0)) throw DomainError("detuning must be non-negative");
  if (!(gamma > 0.0)) throw DomainError("halfwidth must be positive");
  if (detuning <= p.a * gamma) return p.x_min;
  if (detuning >= p.b * gamma) return x_max;
  if (detuning > p.c * gamma) return x_max * (detuning - p.c * gamma) / ((p.b - p.c) * gamma);
  return p.x_min * (p.c * gamma - detuning) / ((p.c - p.a) * gamma);
}

double narrowing_factor(double w, double w_i, double gamma, double gamma_s,
                        const NarrowingParams& params, Regime regime) {
  if (regime == Regime::BelowPs) return 1.0;
  const double x_max = wing_exponent(gamma, gamma_s, params);
  return std::pow(params.base, narrowing_exponent(std::abs(w - w_i), gamma_s, x_max, params));
}

NarrowingShape::NarrowingShape(double gamma, double gamma_s, const NarrowingParams& p,
                               Regime regime) {
  if (regime == Regime::BelowPs) return;
  active_ = true;
  x_min_ = p.x_min;
  x_max_ = wing_exponent(gamma, gamma_s, p);
  core_edge_ = p.a * gamma_s;
  neutral_edge_ = p.c * gamma_s;
  wing_edge_ = p.b * gamma_s;
  inv_inner_ = 1.0 / ((p.c - p.a) * gamma_s);
  inv_outer_ = 1.0 / ((p.b - p.c) * gamma_s);
  log2_base_ = std::log2(p.base);
  core_value_ = std::pow(p.base, x_min_);
  wing_value_ = std::pow(p.base, x_max_);
}

}  // namespace lbl
