#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lbl/halfwidth.hpp"
#include "lbl/linelist.hpp"
#include "lbl/narrowing.hpp"
#include "lbl/profile.hpp"

namespace lbl {

enum class AmountUnit { Amagat, Atm };

struct GasConditions {
  double temperature = 296.0;              // K
  double absorber_amount = 0.0;            // in absorber_unit
  AmountUnit absorber_unit = AmountUnit::Amagat;
  BroadenerSpec broadener;
  double path_length = 1.0;                // cm
  double nonlinear_b = 0.0;                // cm^-1, constant b(w)
  std::function<double(double)> nonlinear_coefficient;  // overrides nonlinear_b when set

  double absorber_number_density() const;  // molecules / cm^3
  /// Broadener pressure (atm); derived from its density via the ideal gas when no pressure
  /// is given.
  double broadener_pressure() const;
  double nonlinear(double w) const {
    return nonlinear_coefficient ? nonlinear_coefficient(w) : nonlinear_b;
  }
  void validate() const;

  friend bool operator==(const GasConditions& x, const GasConditions& y);
};

struct SpectralGrid {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::size_t size() const;
  double at(std::size_t i) const { return start + static_cast<double>(i) * step; }
  void validate() const;
  friend bool operator==(const SpectralGrid&, const SpectralGrid&) = default;
};

/// Narrowing parameters (and optionally a broadener scale) for lines inside `interval`.
struct BranchParams {
  WavenumberWindow interval;
  NarrowingParams params;
  std::optional<double> broadener_scale;

  friend bool operator==(const BranchParams&, const BranchParams&) = default;
};

using NarrowingMap = std::vector<BranchParams>;

/// Entry governing a line at w_i: the containing interval, else the nearest one.
const BranchParams& lookup_branch(const NarrowingMap& map, double w_i);

enum class RegimeMode { Auto, AbovePs, BelowPs };

std::string_view to_string(RegimeMode r);
std::optional<RegimeMode> regime_mode_from_string(std::string_view text);

struct EngineOptions {
  double cutoff = 600.0;                 // cm^-1; infinity disables truncation
  RegimeMode regime = RegimeMode::Auto;
  int threads = 0;                       // 0: OpenMP default
  bool gamma_column = false;             // record the factor of the nearest line
};

struct Spectrum {
  SpectralGrid grid;
  std::vector<double> alpha_lorentz;    // cm^-1, conventional width, no narrowing
  std::vector<double> alpha_narrowed;   // cm^-1
  std::vector<double> alpha_effective;  // cm^-1, alpha_narrowed with the nonlinear term
  std::vector<double> gamma_factor;     // optional diagnostic, empty unless requested
  std::map<std::string, std::string> metadata;
};

/// Everything the summation needs for one line, resolved once per call.
struct LinePlan {
  double position = 0.0;
  double strength = 0.0;       // number density * intensity, cm^-2 per cm^-1
  double gamma_lorentz = 0.0;  // conventional width
  double gamma_narrowed = 0.0; // width used together with the narrowing factor
  Regime regime = Regime::BelowPs;
  NarrowingShape shape;
};

std::vector<LinePlan> plan_lines(const LineTable& table, const GasConditions& cond,
                                 const HalfwidthModel& hw, const NarrowingMap& narrowing,
                                 RegimeMode regime);

/// Line-by-line sum on `grid`. Each grid point is one work item; lines inside +/- cutoff are
/// found by binary search and summed in ascending position with Neumaier compensation, so
/// the output does not depend on the thread count.
Spectrum absorption_spectrum(const LineTable& table, const GasConditions& cond,
                             const HalfwidthModel& hw, const NarrowingMap& narrowing,
                             const ProfileHooks& hooks, const SpectralGrid& grid,
                             const EngineOptions& options = {});

/// Single-threaded reference: scans every line for every grid point and evaluates each pair
/// through the public halfwidth / narrowing / profile functions.
Spectrum absorption_spectrum_reference(const LineTable& table, const GasConditions& cond,
                                       const HalfwidthModel& hw, const NarrowingMap& narrowing,
                                       const ProfileHooks& hooks, const SpectralGrid& grid,
                                       const EngineOptions& options = {});

/// alpha + ln(1 + b/(2 alpha) (1 - exp(-2 alpha x))) / (2x).
double effective_absorption(double alpha, double b, double path_length);

enum class SpectrumVariant { Lorentz, Narrowed, Effective };

std::string_view to_string(SpectrumVariant v);
const std::vector<double>& values(const Spectrum& s, SpectrumVariant v);

struct TabulatedCurve {
  std::vector<double> wavenumber;  // ascending
  std::vector<double> value;

  /// Linear interpolation; nullopt outside the tabulated range.
  std::optional<double> at(double w) const;
};

struct ResidualReport {
  std::vector<double> wavenumber;
  std::vector<double> ratio;       // spectrum / reference
  std::vector<double> difference;  // spectrum - reference
  double max_abs_rel_deviation = 0.0;
  double mean_abs_rel_deviation = 0.0;
};

/// Point-by-point comparison over the overlap of the two ranges. Throws ConfigError when
/// the ranges are disjoint.
ResidualReport compare_to_reference(const Spectrum& spectrum, SpectrumVariant variant,
                                    const TabulatedCurve& reference);
ResidualReport compare_to_reference(const Spectrum& spectrum, const Spectrum& reference,
                                    SpectrumVariant variant);

/// Running sum with Neumaier compensation.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace lbl
