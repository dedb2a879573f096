#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include "lbl/engine.hpp"
#include "lbl/scenario.hpp"
#include "lbl/spectrum_io.hpp"
#include "lbl/units.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace lbl;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

SpectralLine isolated_line(double position = 2349.0) {
  SpectralLine l;
  l.molecule_id = 2;
  l.isotopologue_id = 1;
  l.position = position;
  l.intensity_ref = 1e-19;
  l.gamma_foreign_ref = 0.07;
  l.gamma_self_ref = 0.09;
  l.temp_exponent = 0.75;
  return l;
}

GasConditions helium(double p) {
  GasConditions c;
  c.temperature = units::kReferenceTemperature;
  c.absorber_amount = 1e-3;
  c.broadener.id = BroadenerId::He;
  c.broadener.scale_vs_n2 = 0.52;
  c.broadener.partial_pressure = p;
  return c;
}

NarrowingMap single_map(const NarrowingParams& p = {}) { return {{{0.0, 1e6}, p, std::nullopt}}; }

Outcome narrowing_values() {
  const NarrowingParams p;
  const double gs = oracle::kGammaSatNu3;
  const NarrowingShape shape(gs, gs, p, Regime::AbovePs);
  double worst_max = 0.0;
  double worst_min = 0.0;
  worst_max = std::max(worst_max, std::abs(narrowing_factor(0.0, 0.0, gs, gs, p, Regime::AbovePs) - 4.0));
  worst_max = std::max(worst_max, std::abs(shape(0.0) - 4.0));
  for (double m : {1.0, 1.0 + 1e-12, 1.5, 3.0, 10.0, 127.0}) {
    const double d = m * p.b * gs;
    worst_min = std::max(worst_min, std::abs(narrowing_factor(d, 0.0, gs, gs, p, Regime::AbovePs) - 0.1));
    worst_min = std::max(worst_min, std::abs(shape(d) - 0.1));
  }
  return {worst_max <= 1e-12 && worst_min <= 1e-12,
          fmt("|G(0)-4| = %.3g, max |G(d>=b gs)-0.1| = %.3g", worst_max, worst_min)};
}

Outcome continuity() {
  // One-sided limits at each boundary, extrapolated linearly from samples at h and 2h.
  std::vector<NarrowingParams> sets;
  for (const auto& s : builtin_scenarios()) {
    for (const auto& br : s.narrowing) {
      if (std::find(sets.begin(), sets.end(), br.params) == sets.end()) sets.push_back(br.params);
    }
  }
  double worst_limit = 0.0;
  double worst_raw = 0.0;
  const double gs = oracle::kGammaSatNu3;
  for (const auto& p : sets) {
    for (double gamma_c : {gs, 0.3 * gs, 2.0 * gs}) {
      const NarrowingShape shape(gamma_c, gs, p, Regime::AbovePs);
      const std::function<double(double)> views[] = {
          [&](double d) { return narrowing_factor(d, 0.0, gamma_c, gs, p, Regime::AbovePs); },
          [&](double d) { return shape(d); }};
      for (const auto& f : views) {
        for (double edge : {p.a * gs, p.c * gs, p.b * gs}) {
          const double h = 1e-9 * gs;
          const double left = 2.0 * f(edge - h) - f(edge - 2.0 * h);
          const double right = 2.0 * f(edge + h) - f(edge + 2.0 * h);
          worst_limit = std::max(worst_limit, std::abs(left - right));
          worst_raw = std::max(worst_raw, std::abs(f(edge - h) - f(edge + h)));
        }
      }
    }
  }
  return {worst_limit <= 1e-12,
          fmt("%zu parameter sets, max one-sided limit gap %.3g (raw +/-1e-9 gs sample gap %.3g)",
              sets.size(), worst_limit, worst_raw)};
}

Outcome peak_enhancement() {
  const LineTable t({isolated_line()});
  const GasConditions c = helium(140.0);
  const HalfwidthModel hw;
  const double gs = saturated_halfwidth(hw);
  const double gc = conventional_halfwidth(t[0], c.broadener, c.temperature, hw);
  EngineOptions o;
  o.cutoff = 600.0;
  const SpectralGrid g{2349.0 - 600.0, 2349.0 + 600.0, 0.25};
  const Spectrum s = absorption_spectrum(t, c, hw, single_map(), {}, g, o);
  const auto centre = static_cast<std::size_t>(2400);
  const double strength = c.absorber_number_density() * t[0].intensity_ref;
  const double saturated_peak = strength / (std::numbers::pi * gs);
  const double peak_ratio = s.alpha_narrowed[centre] / saturated_peak;
  double worst_wing = 0.0;
  std::size_t samples = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = std::abs(g.at(i) - 2349.0);
    if (d < 50.0 * gs || d > o.cutoff) continue;
    worst_wing = std::max(worst_wing, rel(s.alpha_narrowed[i] / s.alpha_lorentz[i], 0.1));
    ++samples;
  }
  return {std::abs(peak_ratio - 4.0) <= 1e-9 && worst_wing <= 5e-3 && samples > 0,
          fmt("gc/gs = %.4f, peak ratio %.12f, wing ratio within %.2e of 0.1 over %zu points",
              gc / gs, peak_ratio, worst_wing, samples)};
}

Outcome combined_width() {
  HalfwidthModel m;
  m.mode = HalfwidthMode::Combined;
  const double gs = saturated_halfwidth(m);
  const double half = effective_halfwidth(gs, m);
  const double big = effective_halfwidth(1e9 * gs, m);
  return {half == gs / 2.0 && rel(big, gs) <= 1e-8,
          fmt("g(gs) - gs/2 = %.3g, |g(1e9 gs)/gs - 1| = %.3g", half - gs / 2.0, rel(big, gs))};
}

Outcome nonlinear_limits() {
  bool exact = true;
  for (double a : {0.0, 1e-12, 0.3, 1.0, 42.0}) exact = exact && effective_absorption(a, 0.0, 3.85) == a;
  const double x = 3.85;
  const double b = 0.1;
  const double small = effective_absorption(1e-12, b, x);
  const double limit = std::log1p(b * x) / (2.0 * x);
  const double v = effective_absorption(1.0, b, x);
  return {exact && rel(small, limit) <= 1e-9 && std::abs(v - 1.006334) <= 1e-6,
          fmt("b=0 exact: %s, small-alpha rel err %.3g, alpha=1 -> %.9f", exact ? "yes" : "no",
              rel(small, limit), v)};
}

Outcome lorentz_oracle() {
  const LineTable t({isolated_line(1000.0)});
  const GasConditions c = helium(20.0);
  HalfwidthModel hw;
  hw.mode = HalfwidthMode::Linear;
  EngineOptions o;
  o.cutoff = std::numeric_limits<double>::infinity();
  o.regime = RegimeMode::BelowPs;
  const double gamma = conventional_halfwidth(t[0], c.broadener, c.temperature, hw);
  const double strength = c.absorber_number_density() * t[0].intensity_ref;

  const SpectralGrid g{900.0, 1100.0, 200.0 / 9999.0};
  const Spectrum s = absorption_spectrum(t, c, hw, single_map(), {}, g, o);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double d = g.at(i) - 1000.0;
    const double exact = strength * gamma / (std::numbers::pi * (d * d + gamma * gamma));
    worst = std::max({worst, rel(s.alpha_lorentz[i], exact), rel(s.alpha_narrowed[i], exact)});
  }

  // Trapezoid over +/- 5e4 gamma with step gamma/2.
  const double h = gamma / 2.0;
  const SpectralGrid q{1000.0 - 1e5 * h, 1000.0 + 1e5 * h, h};
  const Spectrum sq = absorption_spectrum(t, c, hw, single_map(), {}, q, o);
  CompensatedSum area;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double wgt = (i == 0 || i + 1 == q.size()) ? 0.5 : 1.0;
    area.add(wgt * h * sq.alpha_narrowed[i]);
  }
  const double recovered = area.value() / strength;
  return {g.size() == 10000 && worst <= 1e-14 && std::abs(recovered - 1.0) <= 1e-4,
          fmt("%zu points, max rel deviation %.3g, integral/S = %.8f", g.size(), worst, recovered)};
}

Outcome comb_morphology() {
  const Scenario sc = *find_builtin("comb_demo");
  const LineTable t = resolve_linelist(sc);
  const double gs = saturated_halfwidth(sc.halfwidth);
  const double b = sc.narrowing.front().params.b;
  const auto plans = plan_lines(t, sc.conditions, sc.halfwidth, sc.narrowing, sc.regime);
  bool above = true;
  for (const auto& p : plans) above = above && p.regime == Regime::AbovePs;

  double min_core = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    Scenario one = sc;
    one.grid = {t[i].position, t[i].position, 1.0};
    const Spectrum s = run_scenario(one, t);
    min_core = std::min(min_core, s.alpha_narrowed[0] / s.alpha_lorentz[0]);
  }
  const Spectrum s = run_scenario(sc, t);
  const double lo = t[0].position - b * gs;
  const double hi = t[t.size() - 1].position + b * gs;
  double max_wing = 0.0;
  std::size_t wing_points = 0;
  for (std::size_t i = 0; i < s.grid.size(); ++i) {
    const double w = s.grid.at(i);
    if (w > lo && w < hi) continue;
    max_wing = std::max(max_wing, s.alpha_narrowed[i] / s.alpha_lorentz[i]);
    ++wing_points;
  }
  return {above && t.size() == 41 && min_core > 1.0 && max_wing < 1.0 && wing_points > 0,
          fmt("%zu lines above p_s: %s, min interior-centre ratio %.4f, max outer ratio %.4f "
              "(%zu points)",
              t.size(), above ? "yes" : "no", min_core, max_wing, wing_points)};
}

Outcome determinism() {
  const Scenario sc = *find_builtin("comb_demo");
  const LineTable t = resolve_linelist(sc);
  std::vector<std::string> csv;
  for (int threads : {1, 2, 8}) {
    std::ostringstream out;
    write_spectrum_csv(out, run_scenario(sc, t, threads, true));
    csv.push_back(out.str());
  }
  const bool same = csv[0] == csv[1] && csv[0] == csv[2];
  return {same, fmt("1/2/8 threads, %zu bytes each, identical: %s", csv[0].size(), same ? "yes" : "no")};
}

Outcome parser_round_trip() {
  const auto recs = synth::records(1000, 2026);
  std::size_t identical = 0;
  std::stringstream stream;
  for (const auto& r : recs) {
    const auto parsed = parse_record(r);
    if (parsed.ok() && serialize_record(parsed.line()) == r) ++identical;
    stream << r << '\n';
  }
  const LineTable table = parse_linelist(stream);
  std::multiset<std::string> in(recs.begin(), recs.end());
  std::multiset<std::string> out;
  for (const auto& l : table.lines()) out.insert(serialize_record(l));

  std::mt19937 rng(7);
  std::stringstream bad;
  std::size_t single_fatal = 0;
  for (unsigned i = 0; i < 100; ++i) {
    const auto kind = static_cast<synth::Mutation>(i % 3);
    const std::string m = synth::mutate(recs[rng() % recs.size()], kind, static_cast<unsigned>(rng()));
    std::stringstream one(m + "\n");
    const LineTable t = parse_linelist(one);
    if (t.size() == 0 && t.fatal_count() == 1 && t.diagnostics().size() == 1) ++single_fatal;
    bad << m << '\n';
  }
  const LineTable mixed = parse_linelist(bad);
  std::set<std::size_t> indices;
  for (const auto& d : mixed.diagnostics()) indices.insert(d.record_index);
  const bool pass = identical == 1000 && table.size() == 1000 && in == out &&
                    single_fatal == 100 && mixed.fatal_count() == 100 && indices.size() == 100;
  return {pass, fmt("%zu/1000 byte-identical, %zu/100 mutated records with exactly one fatal",
                    identical, single_fatal)};
}

Outcome critical_pressure_check() {
  HalfwidthModel hw;
  hw.saturation_multiplier = 3.919;
  hw.delta_omega_rot = 1.2;
  BroadenerSpec he;
  he.id = BroadenerId::He;
  he.scale_vs_n2 = 0.52;
  const double ps = critical_pressure(isolated_line(), he, units::kReferenceTemperature, hw);
  return {ps >= 110.0 && ps <= 160.0,
          fmt("gs = %.4f, slope = %.4f, p_s = %.2f atm", saturated_halfwidth(hw), 0.52 * 0.07, ps)};
}

Outcome performance() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<SpectralLine> lines;
  lines.reserve(100000);
  for (int i = 0; i < 100000; ++i) {
    SpectralLine l = isolated_line(500.0 + 2000.0 * u(rng));
    l.intensity_ref = 1e-21 * (0.1 + u(rng));
    l.gamma_foreign_ref = 0.05 + 0.05 * u(rng);
    l.lower_state_energy = 2000.0 * u(rng);
    lines.push_back(l);
  }
  const LineTable t(std::move(lines));
  GasConditions c = helium(200.0);
  c.temperature = 298.0;
  const SpectralGrid g{500.0, 2500.0, 2000.0 / 99999.0};
  const auto t0 = std::chrono::steady_clock::now();
  const Spectrum s = absorption_spectrum(t, c, {}, single_map(), {}, g, {});
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {s.alpha_narrowed.size() == 100000 && seconds <= 60.0,
          fmt("1e5 lines x %zu points, cutoff 600: %.2f s on %d thread(s)", g.size(), seconds,
              omp_get_max_threads())};
}

}  // namespace

int main() {
  const std::pair<const char*, Outcome (*)()> criteria[] = {
      {"narrowing-function extreme values", narrowing_values},
      {"narrowing-function continuity", continuity},
      {"single-line peak enhancement and wing ratio", peak_enhancement},
      {"combined halfwidth checkpoints", combined_width},
      {"nonlinear absorption limits", nonlinear_limits},
      {"Lorentz oracle and area", lorentz_oracle},
      {"comb morphology", comb_morphology},
      {"thread-count determinism", determinism},
      {"parser round trip and mutations", parser_round_trip},
      {"critical-pressure consistency", critical_pressure_check},
      {"performance envelope", performance},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2d %s: %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
