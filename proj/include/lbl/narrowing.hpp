#pragma once

#include <cmath>
#include <optional>
#include <string_view>

namespace lbl {

/// Shape parameters of the narrowing factor-function.
///
/// The detuning axis is split at a*gamma, c*gamma and b*gamma (0 < a < c < b). The exponent x
/// is x_min inside a*gamma, rises linearly through 0 at c*gamma and reaches x_max at b*gamma;
/// the factor itself is base^x.
struct NarrowingParams {
  double a = 0.72;
  double c = 1.2;
  double b = 3.92;
  double x_min = -1.0;
  double base = 0.25;
  double wing_floor = 0.1;

  /// Throws ConfigError when an invariant is violated.
  void validate() const;
  friend bool operator==(const NarrowingParams&, const NarrowingParams&) = default;
};

enum class Regime { AbovePs, BelowPs };

std::string_view to_string(Regime r);

/// ln(wing_floor * gamma / gamma_s) / ln(base). Throws DomainError when the wing would not
/// decay (wing_floor * gamma >= gamma_s) or a width is not positive.
double wing_exponent(double gamma, double gamma_s, const NarrowingParams& params);

/// Piecewise exponent at detuning `detuning` = |w - w_i| for region width `gamma`.
double narrowing_exponent(double detuning, double gamma, double x_max,
                          const NarrowingParams& params);

/// Narrowing factor at w for the line at w_i.
///
/// Above p_s the region boundaries scale with gamma_s while the wing level follows the
/// conventional width `gamma` through x_max. Below p_s the factor is 1.
double narrowing_factor(double w, double w_i, double gamma, double gamma_s,
                        const NarrowingParams& params, Regime regime);

/// Precomputed per-line form of narrowing_factor for the summation kernels.
class NarrowingShape {
 public:
  NarrowingShape() = default;
  NarrowingShape(double gamma, double gamma_s, const NarrowingParams& params, Regime regime);

  double operator()(double detuning) const {
    if (!active_) return 1.0;
    if (detuning <= core_edge_) return core_value_;
    if (detuning >= wing_edge_) return wing_value_;
    const double x = detuning > neutral_edge_
                         ? x_max_ * (detuning - neutral_edge_) * inv_outer_
                         : x_min_ * (neutral_edge_ - detuning) * inv_inner_;
    return std::exp2(x * log2_base_);
  }

  bool active() const { return active_; }
  double wing_value() const { return wing_value_; }
  double core_value() const { return core_value_; }
  /// Detuning beyond which the factor is constant (0 when inactive).
  double wing_edge() const { return active_ ? wing_edge_ : 0.0; }

 private:
  bool active_ = false;
  double core_edge_ = 0.0;
  double neutral_edge_ = 0.0;
  double wing_edge_ = 0.0;
  double inv_inner_ = 0.0;
  double inv_outer_ = 0.0;
  double x_min_ = 0.0;
  double x_max_ = 0.0;
  double log2_base_ = 0.0;
  double core_value_ = 1.0;
  double wing_value_ = 1.0;
};

}  // namespace lbl
