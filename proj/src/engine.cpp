#include "lbl/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lbl/error.hpp"
#include "lbl/units.hpp"

namespace lbl {

double GasConditions::absorber_number_density() const {
  if (absorber_unit == AmountUnit::Amagat) return units::amagat_to_number_density(absorber_amount);
  return units::amagat_to_number_density(units::atm_to_amagat(absorber_amount, temperature));
}

double GasConditions::broadener_pressure() const {
  if (broadener.partial_pressure > 0.0 || !broadener.partial_density) {
    return broadener.partial_pressure;
  }
  return units::amagat_to_atm(*broadener.partial_density, temperature);
}

void GasConditions::validate() const {
  if (!(temperature > 0.0)) throw ConfigError("temperature must be positive");
  if (!(path_length > 0.0)) throw ConfigError("path length must be positive");
  if (!(absorber_amount >= 0.0)) throw ConfigError("absorber amount must be non-negative");
  if (!(nonlinear_b >= 0.0)) throw ConfigError("nonlinear coefficient must be non-negative");
  broadener.validate();
}

bool operator==(const GasConditions& x, const GasConditions& y) {
  return x.temperature == y.temperature && x.absorber_amount == y.absorber_amount &&
         x.absorber_unit == y.absorber_unit && x.broadener == y.broadener &&
         x.path_length == y.path_length && x.nonlinear_b == y.nonlinear_b &&
         static_cast<bool>(x.nonlinear_coefficient) == static_cast<bool>(y.nonlinear_coefficient);
}

std::size_t SpectralGrid::size() const {
  // Tolerate stop landing a rounding error short of an exact multiple of step.
  const double n = std::floor((stop - start) / step * (1.0 + 1e-12) + 1e-9);
  return static_cast<std::size_t>(n) + 1;
}

void SpectralGrid::validate() const {
  if (!(std::isfinite(start) && std::isfinite(stop) && start <= stop)) {
    throw ConfigError("grid needs start <= stop");
  }
  if (!(step > 0.0)) throw ConfigError("grid step must be positive");
}

const BranchParams& lookup_branch(const NarrowingMap& map, double w_i) {
  if (map.empty()) throw ConfigError("narrowing map is empty");
  const BranchParams* nearest = &map.front();
  double best = std::numeric_limits<double>::infinity();
  for (const auto& entry : map) {
    if (entry.interval.contains(w_i)) return entry;
    const double d = w_i < entry.interval.lo ? entry.interval.lo - w_i : w_i - entry.interval.hi;
    if (d < best) {
      best = d;
      nearest = &entry;
    }
  }
  return *nearest;
}

std::string_view to_string(RegimeMode r) {
  switch (r) {
    case RegimeMode::Auto: return "auto";
    case RegimeMode::AbovePs: return "above-ps";
    case RegimeMode::BelowPs: return "below-ps";
  }
  return "?";
}

std::optional<RegimeMode> regime_mode_from_string(std::string_view text) {
  if (text == "auto") return RegimeMode::Auto;
  if (text == "above-ps") return RegimeMode::AbovePs;
  if (text == "below-ps") return RegimeMode::BelowPs;
  return std::nullopt;
}

namespace {

void validate_inputs(const GasConditions& cond, const HalfwidthModel& hw,
                     const NarrowingMap& narrowing, const SpectralGrid& grid,
                     const EngineOptions& options) {
  cond.validate();
  hw.validate();
  grid.validate();
  if (narrowing.empty()) throw ConfigError("narrowing map is empty");
  for (const auto& entry : narrowing) {
    entry.params.validate();
    if (entry.broadener_scale && !(*entry.broadener_scale > 0.0)) {
      throw ConfigError("branch broadener scale must be positive");
    }
  }
  if (!(options.cutoff > 0.0)) throw ConfigError("cutoff must be positive");
}

Spectrum make_spectrum(const SpectralGrid& grid, const EngineOptions& options,
                       std::size_t line_count) {
  Spectrum s;
  s.grid = grid;
  const std::size_t n = grid.size();
  s.alpha_lorentz.assign(n, 0.0);
  s.alpha_narrowed.assign(n, 0.0);
  s.alpha_effective.assign(n, 0.0);
  if (options.gamma_column) s.gamma_factor.assign(n, 1.0);
  s.metadata["cutoff"] = std::to_string(options.cutoff);
  s.metadata["regime"] = std::string(to_string(options.regime));
  s.metadata["lines"] = std::to_string(line_count);
  return s;
}

void fill_effective(Spectrum& s, const GasConditions& cond) {
  for (std::size_t j = 0; j < s.alpha_narrowed.size(); ++j) {
    s.alpha_effective[j] =
        effective_absorption(s.alpha_narrowed[j], cond.nonlinear(s.grid.at(j)), cond.path_length);
  }
}

}  // namespace

std::vector<LinePlan> plan_lines(const LineTable& table, const GasConditions& cond,
                                 const HalfwidthModel& hw, const NarrowingMap& narrowing,
                                 RegimeMode regime) {
  const double gamma_s = saturated_halfwidth(hw);
  const double density = cond.absorber_number_density();
  BroadenerSpec broadener = cond.broadener;
  broadener.partial_pressure = cond.broadener_pressure();

  std::vector<LinePlan> plans;
  plans.reserve(table.size());
  for (const auto& line : table.lines()) {
    const BranchParams& branch = lookup_branch(narrowing, line.position);
    BroadenerSpec b = broadener;
    if (branch.broadener_scale) b.scale_vs_n2 = *branch.broadener_scale;

    LinePlan plan;
    plan.position = line.position;
    plan.strength = population_factor(line, cond.temperature, density) * line.intensity_ref;
    plan.gamma_lorentz = conventional_halfwidth(line, b, cond.temperature, hw);
    if (!(plan.gamma_lorentz > 0.0)) {
      throw DomainError("Lorentz halfwidth is zero; set a positive pressure or gamma0");
    }
    switch (regime) {
      case RegimeMode::AbovePs: plan.regime = Regime::AbovePs; break;
      case RegimeMode::BelowPs: plan.regime = Regime::BelowPs; break;
      case RegimeMode::Auto:
        if (hw.critical_pressure_override) {
          plan.regime = b.partial_pressure >= *hw.critical_pressure_override ? Regime::AbovePs
                                                                             : Regime::BelowPs;
        } else {
          plan.regime = plan.gamma_lorentz >= gamma_s ? Regime::AbovePs : Regime::BelowPs;
        }
        break;
    }
    plan.gamma_narrowed = plan.regime == Regime::AbovePs
                              ? gamma_s
                              : effective_halfwidth(plan.gamma_lorentz, hw);
    plan.shape = NarrowingShape(plan.gamma_lorentz, gamma_s, branch.params, plan.regime);
    plans.push_back(plan);
  }
  return plans;
}

namespace {

// Structure-of-arrays copy of the plans for the summation loop.
struct KernelLines {
  std::vector<double> position;
  std::vector<double> lorentz_scale;   // strength * gamma_lorentz / pi
  std::vector<double> lorentz_width2;
  std::vector<double> narrowed_scale;  // strength * gamma_narrowed / pi
  std::vector<double> narrowed_width2;
  std::vector<double> wing_value;      // narrowing factor beyond the wing edge
  double max_wing_edge = 0.0;

  explicit KernelLines(const std::vector<LinePlan>& plans) {
    constexpr double inv_pi = 1.0 / std::numbers::pi;
    const std::size_t n = plans.size();
    position.resize(n);
    lorentz_scale.resize(n);
    lorentz_width2.resize(n);
    narrowed_scale.resize(n);
    narrowed_width2.resize(n);
    wing_value.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const LinePlan& p = plans[i];
      position[i] = p.position;
      lorentz_scale[i] = p.strength * p.gamma_lorentz * inv_pi;
      lorentz_width2[i] = p.gamma_lorentz * p.gamma_lorentz;
      narrowed_scale[i] = p.strength * p.gamma_narrowed * inv_pi;
      narrowed_width2[i] = p.gamma_narrowed * p.gamma_narrowed;
      wing_value[i] = p.shape.wing_value();
      max_wing_edge = std::max(max_wing_edge, p.shape.wing_edge());
    }
  }
};

constexpr std::size_t kChunk = 256;

}  // namespace

Spectrum absorption_spectrum(const LineTable& table, const GasConditions& cond,
                             const HalfwidthModel& hw, const NarrowingMap& narrowing,
                             const ProfileHooks& hooks, const SpectralGrid& grid,
                             const EngineOptions& options) {
  validate_inputs(cond, hw, narrowing, grid, options);
  const std::vector<LinePlan> plans = plan_lines(table, cond, hw, narrowing, options.regime);
  Spectrum s = make_spectrum(grid, options, plans.size());
  const KernelLines k(plans);

  const auto n = static_cast<std::ptrdiff_t>(s.alpha_lorentz.size());
  const double cutoff = options.cutoff;
  const double temperature = cond.temperature;
  const bool use_hook = hooks.has_wing_factor();
  const auto& pos = k.position;

#ifdef _OPENMP
  const int threads = options.threads > 0 ? options.threads : omp_get_max_threads();
#endif

#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
  for (std::ptrdiff_t j = 0; j < n; ++j) {
    const double w = grid.at(static_cast<std::size_t>(j));
    const auto begin = static_cast<std::size_t>(
        std::lower_bound(pos.begin(), pos.end(), w - cutoff) - pos.begin());
    const auto end = static_cast<std::size_t>(
        std::upper_bound(pos.begin() + static_cast<std::ptrdiff_t>(begin), pos.end(), w + cutoff) -
        pos.begin());
    // Lines closer than the widest wing edge need the full piecewise factor.
    const auto near_begin = static_cast<std::size_t>(
        std::upper_bound(pos.begin() + static_cast<std::ptrdiff_t>(begin),
                         pos.begin() + static_cast<std::ptrdiff_t>(end), w - k.max_wing_edge) -
        pos.begin());
    const auto near_end = static_cast<std::size_t>(
        std::lower_bound(pos.begin() + static_cast<std::ptrdiff_t>(near_begin),
                         pos.begin() + static_cast<std::ptrdiff_t>(end), w + k.max_wing_edge) -
        pos.begin());

    CompensatedSum lorentz_sum;
    CompensatedSum narrowed_sum;
    double lorentz_terms[kChunk];
    double narrowed_terms[kChunk];
    for (std::size_t c0 = begin; c0 < end; c0 += kChunk) {
      const std::size_t c1 = std::min(end, c0 + kChunk);
      const std::size_t m = c1 - c0;
      const double* px = pos.data() + c0;
      const double* ls = k.lorentz_scale.data() + c0;
      const double* lw = k.lorentz_width2.data() + c0;
      const double* ns = k.narrowed_scale.data() + c0;
      const double* nw = k.narrowed_width2.data() + c0;
      const double* wv = k.wing_value.data() + c0;
#pragma omp simd
      for (std::size_t i = 0; i < m; ++i) {
        const double d = w - px[i];
        const double d2 = d * d;
        lorentz_terms[i] = ls[i] / (d2 + lw[i]);
        narrowed_terms[i] = ns[i] / (d2 + nw[i]) * wv[i];
      }
      const std::size_t f0 = std::max(c0, near_begin);
      const std::size_t f1 = std::min(c1, near_end);
      for (std::size_t i = f0; i < f1; ++i) {
        const double d = std::abs(w - pos[i]);
        narrowed_terms[i - c0] = k.narrowed_scale[i] / (d * d + k.narrowed_width2[i]) * plans[i].shape(d);
      }
      if (use_hook) {
        for (std::size_t i = 0; i < m; ++i) {
          narrowed_terms[i] *= hooks.wing_factor(w, px[i], temperature, hooks.slope_m);
        }
      }
      for (std::size_t i = 0; i < m; ++i) {
        lorentz_sum.add(lorentz_terms[i]);
        narrowed_sum.add(narrowed_terms[i]);
      }
    }
    s.alpha_lorentz[static_cast<std::size_t>(j)] = lorentz_sum.value();
    s.alpha_narrowed[static_cast<std::size_t>(j)] = narrowed_sum.value();

    if (options.gamma_column && !plans.empty()) {
      auto near = std::lower_bound(pos.begin(), pos.end(), w);
      if (near == pos.end() || (near != pos.begin() && w - *(near - 1) <= *near - w)) --near;
      const LinePlan& p = plans[static_cast<std::size_t>(near - pos.begin())];
      s.gamma_factor[static_cast<std::size_t>(j)] = p.shape(std::abs(w - p.position));
    }
  }

  fill_effective(s, cond);
  return s;
}

Spectrum absorption_spectrum_reference(const LineTable& table, const GasConditions& cond,
                                       const HalfwidthModel& hw, const NarrowingMap& narrowing,
                                       const ProfileHooks& hooks, const SpectralGrid& grid,
                                       const EngineOptions& options) {
  validate_inputs(cond, hw, narrowing, grid, options);
  Spectrum s = make_spectrum(grid, options, table.size());
  const double gamma_s = saturated_halfwidth(hw);
  const double density = cond.absorber_number_density();
  const double pressure = cond.broadener_pressure();

  for (std::size_t j = 0; j < s.alpha_lorentz.size(); ++j) {
    const double w = grid.at(j);
    CompensatedSum lorentz_sum;
    CompensatedSum narrowed_sum;
    double nearest_distance = std::numeric_limits<double>::infinity();

    for (const auto& line : table.lines()) {
      const BranchParams& branch = lookup_branch(narrowing, line.position);
      BroadenerSpec b = cond.broadener;
      b.partial_pressure = pressure;
      if (branch.broadener_scale) b.scale_vs_n2 = *branch.broadener_scale;

      const double gamma_c = conventional_halfwidth(line, b, cond.temperature, hw);
      Regime regime = Regime::BelowPs;
      if (options.regime == RegimeMode::AbovePs) {
        regime = Regime::AbovePs;
      } else if (options.regime == RegimeMode::Auto) {
        const double ps = hw.critical_pressure_override
                              ? *hw.critical_pressure_override
                              : critical_pressure(line, b, cond.temperature, hw);
        if (pressure >= ps) regime = Regime::AbovePs;
      }
      const double factor =
          narrowing_factor(w, line.position, gamma_c, gamma_s, branch.params, regime);

      const double distance = std::abs(w - line.position);
      if (options.gamma_column && distance < nearest_distance) {
        nearest_distance = distance;
        s.gamma_factor[j] = factor;
      }
      if (distance > options.cutoff) continue;

      const double strength = population_factor(line, cond.temperature, density) *
                              line.intensity_ref;
      const double width =
          regime == Regime::AbovePs ? gamma_s : effective_halfwidth(gamma_c, hw);
      lorentz_sum.add(lorentz(w, line.position, gamma_c, strength));
      double narrowed = lorentz(w, line.position, width, strength) * factor;
      if (hooks.has_wing_factor()) {
        narrowed *= hooks.wing_factor(w, line.position, cond.temperature, hooks.slope_m);
      }
      narrowed_sum.add(narrowed);
    }
    s.alpha_lorentz[j] = lorentz_sum.value();
    s.alpha_narrowed[j] = narrowed_sum.value();
  }

  fill_effective(s, cond);
  return s;
}

double effective_absorption(double alpha, double b, double x) {
  if (!(b >= 0.0)) throw DomainError("nonlinear coefficient must be non-negative");
  if (!(x > 0.0)) throw DomainError("path length must be positive");
  if (!(alpha >= 0.0)) throw DomainError("absorption must be non-negative");
  if (b == 0.0) return alpha;
  if (alpha < 1e-30) return std::log1p(b * x) / (2.0 * x);
  const double saturation = -std::expm1(-2.0 * alpha * x) / (2.0 * alpha);
  return alpha + std::log1p(b * saturation) / (2.0 * x);
}

std::string_view to_string(SpectrumVariant v) {
  switch (v) {
    case SpectrumVariant::Lorentz: return "alpha_lorentz";
    case SpectrumVariant::Narrowed: return "alpha_narrowed";
    case SpectrumVariant::Effective: return "alpha_effective";
  }
  return "?";
}

const std::vector<double>& values(const Spectrum& s, SpectrumVariant v) {
  switch (v) {
    case SpectrumVariant::Lorentz: return s.alpha_lorentz;
    case SpectrumVariant::Narrowed: return s.alpha_narrowed;
    case SpectrumVariant::Effective: break;
  }
  return s.alpha_effective;
}

std::optional<double> TabulatedCurve::at(double w) const {
  if (wavenumber.empty() || w < wavenumber.front() || w > wavenumber.back()) return std::nullopt;
  const auto it = std::lower_bound(wavenumber.begin(), wavenumber.end(), w);
  const auto i = static_cast<std::size_t>(it - wavenumber.begin());
  if (*it == w) return value[i];
  const double t = (w - wavenumber[i - 1]) / (wavenumber[i] - wavenumber[i - 1]);
  return value[i - 1] + t * (value[i] - value[i - 1]);
}

namespace {

ResidualReport build_report(const std::vector<double>& grid_w, const std::vector<double>& model,
                            const std::vector<std::optional<double>>& reference) {
  ResidualReport r;
  double sum = 0.0;
  for (std::size_t j = 0; j < model.size(); ++j) {
    if (!reference[j]) continue;
    const double ref = *reference[j];
    const double val = model[j];
    double ratio = 1.0;
    double dev = 0.0;
    if (ref != 0.0) {
      ratio = val / ref;
      dev = std::abs(val - ref) / std::abs(ref);
    } else if (val != 0.0) {
      ratio = std::numeric_limits<double>::infinity();
      dev = std::numeric_limits<double>::infinity();
    }
    r.wavenumber.push_back(grid_w[j]);
    r.ratio.push_back(ratio);
    r.difference.push_back(val - ref);
    r.max_abs_rel_deviation = std::max(r.max_abs_rel_deviation, dev);
    sum += dev;
  }
  if (r.wavenumber.empty()) throw ConfigError("spectrum and reference ranges are disjoint");
  r.mean_abs_rel_deviation = sum / static_cast<double>(r.wavenumber.size());
  return r;
}

}  // namespace

ResidualReport compare_to_reference(const Spectrum& spectrum, SpectrumVariant variant,
                                    const TabulatedCurve& reference) {
  const auto& model = values(spectrum, variant);
  std::vector<double> w(model.size());
  std::vector<std::optional<double>> ref(model.size());
  for (std::size_t j = 0; j < model.size(); ++j) {
    w[j] = spectrum.grid.at(j);
    ref[j] = reference.at(w[j]);
  }
  return build_report(w, model, ref);
}

ResidualReport compare_to_reference(const Spectrum& spectrum, const Spectrum& reference,
                                    SpectrumVariant variant) {
  const auto& model = values(spectrum, variant);
  const auto aligned = [&] {
    if (spectrum.grid.size() != reference.grid.size()) return false;
    const double tol = 1e-9 * spectrum.grid.step;
    return std::abs(spectrum.grid.start - reference.grid.start) <= tol &&
           std::abs(spectrum.grid.stop - reference.grid.stop) <= tol;
  };
  if (aligned()) {
    const auto& ref_values = values(reference, variant);
    std::vector<double> w(model.size());
    std::vector<std::optional<double>> ref(model.size());
    for (std::size_t j = 0; j < model.size(); ++j) {
      w[j] = spectrum.grid.at(j);
      ref[j] = ref_values[j];
    }
    return build_report(w, model, ref);
  }
  TabulatedCurve curve;
  curve.value = values(reference, variant);
  curve.wavenumber.resize(curve.value.size());
  for (std::size_t j = 0; j < curve.value.size(); ++j) curve.wavenumber[j] = reference.grid.at(j);
  return compare_to_reference(spectrum, variant, curve);
}

}  // namespace lbl
