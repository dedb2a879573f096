#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "lbl/engine.hpp"

namespace lbl {

enum class CombEnvelope { Flat, Gaussian };

/// Synthetic band stand-in: `count` lines at center + k * spacing, k symmetric about 0.
struct CombRecipe {
  double center = 2349.0;
  int count = 41;
  double spacing = 1.2;
  CombEnvelope envelope = CombEnvelope::Flat;
  double envelope_width = 10.0;   // cm^-1, Gaussian sigma
  double intensity = 1e-19;       // per-line peak intensity
  double gamma_foreign = 0.07;
  double gamma_self = 0.09;
  double lower_state_energy = 0.0;
  double temp_exponent = 0.75;

  void validate() const;
  friend bool operator==(const CombRecipe&, const CombRecipe&) = default;
};

LineTable generate_comb(const CombRecipe& recipe);

struct LinelistSource {
  std::string path;                 // user-supplied database file
  std::optional<CombRecipe> comb;   // used when set

  friend bool operator==(const LinelistSource&, const LinelistSource&) = default;
};

struct HookSpec {
  std::string wing_factor = "none";  // none | fermi
  double slope_m = 5.0;
  double width_scale = 1.0;          // cm^-1

  friend bool operator==(const HookSpec&, const HookSpec&) = default;
};

ProfileHooks make_hooks(const HookSpec& spec);

struct Scenario {
  std::string name;
  std::string description;
  WavenumberWindow window;
  SpectralGrid grid;
  GasConditions conditions;
  HalfwidthModel halfwidth;
  NarrowingMap narrowing;
  LinelistSource linelist;
  double cutoff = 600.0;
  RegimeMode regime = RegimeMode::Auto;
  HookSpec hooks;

  /// Throws ConfigError. Narrowing intervals must cover the window without overlapping
  /// (touching end points are allowed).
  void validate() const;
  friend bool operator==(const Scenario&, const Scenario&) = default;
};

std::vector<Scenario> builtin_scenarios();
std::optional<Scenario> find_builtin(std::string_view name);

nlohmann::json to_json(const Scenario& s);
Scenario scenario_from_json(const nlohmann::json& j);

enum class ScenarioFormat { Json, Yaml };

std::string save_scenario(const Scenario& s, ScenarioFormat format);
Scenario load_scenario(std::string_view text, ScenarioFormat format);
/// *.json is read as JSON, anything else as YAML. Throws IoError / ConfigError.
Scenario load_scenario_file(const std::string& path);

/// Keys accepted by apply_override().
std::vector<std::string> override_keys();
/// Sets one parameter from "key=value" text. Throws ConfigError for unknown keys or values.
void apply_override(Scenario& s, std::string_view key, std::string_view value);

/// Comb recipe, or the line-list file (`path_override` wins over the scenario's path).
LineTable resolve_linelist(const Scenario& s, const std::string& path_override = {});

Spectrum run_scenario(const Scenario& s, const LineTable& table, int threads = 0,
                      bool gamma_column = false);

}  // namespace lbl
