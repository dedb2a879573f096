#include "lbl/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "lbl/error.hpp"
#include "lbl/units.hpp"

namespace lbl {

using json = nlohmann::json;

void CombRecipe::validate() const {
  if (count < 1) throw ConfigError("comb needs at least one line");
  if (!(spacing > 0.0)) throw ConfigError("comb spacing must be positive");
  if (!(intensity >= 0.0)) throw ConfigError("comb intensity must be non-negative");
  if (!(gamma_foreign > 0.0)) throw ConfigError("comb gamma_foreign must be positive");
  if (envelope == CombEnvelope::Gaussian && !(envelope_width > 0.0)) {
    throw ConfigError("comb envelope width must be positive");
  }
  const double lowest = center - 0.5 * (count - 1) * spacing;
  if (!(lowest > 0.0)) throw ConfigError("comb extends to non-positive wavenumbers");
}

LineTable generate_comb(const CombRecipe& r) {
  r.validate();
  std::vector<SpectralLine> lines;
  lines.reserve(static_cast<std::size_t>(r.count));
  const double half = 0.5 * (r.count - 1);
  for (int k = 0; k < r.count; ++k) {
    const double offset = (k - half) * r.spacing;
    SpectralLine l;
    l.molecule_id = 2;
    l.isotopologue_id = 1;
    l.position = r.center + offset;
    l.intensity_ref = r.intensity;
    if (r.envelope == CombEnvelope::Gaussian) {
      const double u = offset / r.envelope_width;
      l.intensity_ref *= std::exp(-0.5 * u * u);
    }
    l.gamma_foreign_ref = r.gamma_foreign;
    l.gamma_self_ref = r.gamma_self;
    l.lower_state_energy = r.lower_state_energy;
    l.temp_exponent = r.temp_exponent;
    lines.push_back(std::move(l));
  }
  return LineTable(std::move(lines), "comb");
}

ProfileHooks make_hooks(const HookSpec& spec) {
  if (spec.wing_factor == "none") {
    ProfileHooks hooks;
    hooks.slope_m = spec.slope_m;
    return hooks;
  }
  if (spec.wing_factor == "fermi") return make_fermi_hooks(spec.width_scale, spec.slope_m);
  throw ConfigError("unknown wing factor '" + spec.wing_factor + "' (expected none|fermi)");
}

void Scenario::validate() const {
  if (name.empty()) throw ConfigError("scenario needs a name");
  if (!(window.lo > 0.0 && window.lo < window.hi)) {
    throw ConfigError("scenario window needs 0 < lo < hi");
  }
  grid.validate();
  conditions.validate();
  halfwidth.validate();
  if (!(cutoff > 0.0)) throw ConfigError("cutoff must be positive");
  if (narrowing.empty()) throw ConfigError("scenario needs at least one narrowing interval");

  std::vector<BranchParams> sorted(narrowing);
  std::sort(sorted.begin(), sorted.end(),
            [](const BranchParams& x, const BranchParams& y) { return x.interval.lo < y.interval.lo; });
  for (const auto& entry : sorted) {
    entry.params.validate();
    if (!(entry.interval.lo < entry.interval.hi)) {
      throw ConfigError("narrowing interval needs lo < hi");
    }
    if (entry.broadener_scale && !(*entry.broadener_scale > 0.0 && *entry.broadener_scale <= 2.0)) {
      throw ConfigError("branch broadener scale must lie in (0, 2]");
    }
  }
  if (sorted.front().interval.lo > window.lo || sorted.back().interval.hi < window.hi) {
    throw ConfigError("narrowing intervals do not cover the scenario window");
  }
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].interval.lo < sorted[i - 1].interval.hi) {
      throw ConfigError("narrowing intervals overlap");
    }
    if (sorted[i].interval.lo > sorted[i - 1].interval.hi) {
      throw ConfigError("gap between narrowing intervals");
    }
  }
  if (linelist.comb) linelist.comb->validate();
  make_hooks(hooks);
}

namespace {

BranchParams branch(double lo, double hi, double a, double c, double b,
                    std::optional<double> scale = std::nullopt) {
  BranchParams p;
  p.interval = {lo, hi};
  p.params.a = a;
  p.params.c = c;
  p.params.b = b;
  p.broadener_scale = scale;
  return p;
}

BroadenerSpec helium(double pressure_atm, std::optional<double> density_amagat, double scale) {
  BroadenerSpec b;
  b.id = BroadenerId::He;
  b.scale_vs_n2 = scale;
  b.partial_pressure = pressure_atm;
  b.partial_density = density_amagat;
  return b;
}

Scenario nu3(std::string name, double n_co2, double n_he, double p_he) {
  Scenario s;
  s.name = std::move(name);
  s.description = "CO2-He, nu3 band near 4.3 um, T = 298 K";
  s.window = {2200.0, 2500.0};
  s.grid = {2200.0, 2500.0, 0.05};
  s.conditions.temperature = 298.0;
  s.conditions.absorber_amount = n_co2;
  s.conditions.absorber_unit = AmountUnit::Amagat;
  s.conditions.broadener = helium(p_he, n_he, 0.52);
  s.halfwidth.delta_omega_rot = 1.2;
  s.halfwidth.critical_pressure_override = 135.8;
  s.narrowing = {branch(2200.0, 2500.0, 0.72, 1.2, 3.92)};
  return s;
}

Scenario nu2q(std::string name, double lo, double p_co2_torr, double p_he, double scale) {
  Scenario s;
  s.name = std::move(name);
  s.description = "CO2-He, nu2 Q-branch near 14 um, T = 296 K";
  s.window = {lo, 700.0};
  s.grid = {lo, 700.0, 0.01};
  s.conditions.temperature = 296.0;
  s.conditions.absorber_amount = units::torr_to_atm(p_co2_torr);
  s.conditions.absorber_unit = AmountUnit::Atm;
  s.conditions.broadener = helium(p_he, std::nullopt, scale);
  s.conditions.path_length = 3.85;
  s.halfwidth.delta_omega_rot = 0.35;
  s.halfwidth.critical_pressure_override = 37.2;
  s.narrowing = {branch(lo, 700.0, 0.6, 1.2, 8.0)};
  return s;
}

// 3nu3 band origin of 12C16O2; P-branch below, R-branch (with head) above.
constexpr double k3nu3Origin = 6972.58;

Scenario three_nu3(std::string name, double n_co2, double n_he, double p_he) {
  Scenario s;
  s.name = std::move(name);
  s.description = "CO2-He, 3nu3 band near 1.4 um, P- and R-branch parameters, T = 297 K";
  s.window = {6800.0, 7100.0};
  s.grid = {6800.0, 7100.0, 0.05};
  s.conditions.temperature = 297.0;
  s.conditions.absorber_amount = n_co2;
  s.conditions.absorber_unit = AmountUnit::Amagat;
  s.conditions.broadener = helium(p_he, n_he, 0.52);
  s.halfwidth.delta_omega_rot = 1.2;
  s.halfwidth.critical_pressure_override = 131.86;
  s.narrowing = {branch(6800.0, k3nu3Origin, 0.72, 1.6, 8.0, 0.52),
                 branch(k3nu3Origin, 7100.0, 0.72, 1.2, 8.0, 0.2)};
  return s;
}

}  // namespace

std::vector<Scenario> builtin_scenarios() {
  std::vector<Scenario> out;
  out.push_back(nu3("nu3_135atm", 1.63e-5, 124.3, 135.8));
  out.push_back(nu3("nu3_657atm", 2.73e-5, 603.4, 657.1));
  out.push_back(nu2q("nu2Q_49atm", 620.0, 4.2, 49.6, 0.52));
  out.push_back(nu2q("nu2Q_9.85atm", 640.0, 1.0, 9.85, 0.52));
  out.push_back(nu2q("nu2Q_9.85atm_0.64", 640.0, 1.0, 9.85, 0.64));
  out.push_back(three_nu3("3nu3_131atm", 4.62, 121.2, 131.86));
  out.push_back(three_nu3("3nu3_645atm", 4.66, 598.7, 645.41));

  Scenario comb;
  comb.name = "comb_demo";
  comb.description = "41 equal lines spaced 1.2 cm-1 about 2349 cm-1, CO2-He above p_s";
  comb.window = {2250.0, 2450.0};
  comb.grid = {2250.0, 2450.0, 0.02};
  comb.conditions.temperature = 298.0;
  comb.conditions.absorber_amount = 1.63e-5;
  comb.conditions.absorber_unit = AmountUnit::Amagat;
  comb.conditions.broadener = helium(135.8, std::nullopt, 0.52);
  comb.halfwidth.delta_omega_rot = 1.2;
  comb.narrowing = {branch(2250.0, 2450.0, 0.72, 1.2, 3.92)};
  comb.linelist.comb = CombRecipe{};
  out.push_back(std::move(comb));
  return out;
}

std::optional<Scenario> find_builtin(std::string_view name) {
  for (auto& s : builtin_scenarios()) {
    if (s.name == name) return s;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------------------------
// Serialization

namespace {

json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double get_number(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
  const json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  }
  throw ConfigError(std::string("key '") + key + "' must be a number");
}

double get_number(const json& j, const char* key, double fallback) {
  return j.contains(key) ? get_number(j, key) : fallback;
}

std::optional<double> get_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get_number(j, key);
}

std::string get_string(const json& j, const char* key, std::string fallback = {}) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number() || v.is_boolean()) return v.dump();
  throw ConfigError(std::string("key '") + key + "' must be a string");
}

bool get_bool(const json& j, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ConfigError(std::string("key '") + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

const json& get_object(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_object()) {
    throw ConfigError(std::string("missing section '") + key + "'");
  }
  return j.at(key);
}

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

json comb_to_json(const CombRecipe& c) {
  return {{"center", c.center},
          {"count", c.count},
          {"spacing", c.spacing},
          {"envelope", c.envelope == CombEnvelope::Flat ? "flat" : "gaussian"},
          {"envelope_width", c.envelope_width},
          {"intensity", c.intensity},
          {"gamma_foreign", c.gamma_foreign},
          {"gamma_self", c.gamma_self},
          {"lower_state_energy", c.lower_state_energy},
          {"temp_exponent", c.temp_exponent}};
}

CombRecipe comb_from_json(const json& j) {
  CombRecipe c;
  c.center = get_number(j, "center", c.center);
  c.count = static_cast<int>(get_number(j, "count", c.count));
  c.spacing = get_number(j, "spacing", c.spacing);
  const auto env = get_string(j, "envelope", "flat");
  if (env == "flat") {
    c.envelope = CombEnvelope::Flat;
  } else if (env == "gaussian") {
    c.envelope = CombEnvelope::Gaussian;
  } else {
    throw ConfigError("comb envelope must be flat|gaussian");
  }
  c.envelope_width = get_number(j, "envelope_width", c.envelope_width);
  c.intensity = get_number(j, "intensity", c.intensity);
  c.gamma_foreign = get_number(j, "gamma_foreign", c.gamma_foreign);
  c.gamma_self = get_number(j, "gamma_self", c.gamma_self);
  c.lower_state_energy = get_number(j, "lower_state_energy", c.lower_state_energy);
  c.temp_exponent = get_number(j, "temp_exponent", c.temp_exponent);
  return c;
}

}  // namespace

json to_json(const Scenario& s) {
  const auto& c = s.conditions;
  const auto& h = s.halfwidth;
  json narrowing = json::array();
  for (const auto& n : s.narrowing) {
    narrowing.push_back({{"lo", n.interval.lo},
                         {"hi", n.interval.hi},
                         {"a", n.params.a},
                         {"c", n.params.c},
                         {"b", n.params.b},
                         {"x_min", n.params.x_min},
                         {"base", n.params.base},
                         {"wing_floor", n.params.wing_floor},
                         {"broadener_scale", optional_number(n.broadener_scale)}});
  }
  json linelist = json::object();
  if (s.linelist.comb) linelist["comb"] = comb_to_json(*s.linelist.comb);
  if (!s.linelist.path.empty()) linelist["path"] = s.linelist.path;

  return {
      {"name", s.name},
      {"description", s.description},
      {"window", {{"lo", s.window.lo}, {"hi", s.window.hi}}},
      {"grid", {{"start", s.grid.start}, {"stop", s.grid.stop}, {"step", s.grid.step}}},
      {"conditions",
       {{"temperature", c.temperature},
        {"absorber",
         {{"amount", c.absorber_amount},
          {"unit", c.absorber_unit == AmountUnit::Amagat ? "amagat" : "atm"}}},
        {"broadener",
         {{"id", std::string(to_string(c.broadener.id))},
          {"name", c.broadener.name},
          {"scale_vs_n2", c.broadener.scale_vs_n2},
          {"partial_pressure_atm", c.broadener.partial_pressure},
          {"partial_density_amagat", optional_number(c.broadener.partial_density)}}},
        {"path_length_cm", c.path_length},
        {"nonlinear_b", c.nonlinear_b}}},
      {"halfwidth",
       {{"mode", std::string(to_string(h.mode))},
        {"gamma0", h.gamma0},
        {"delta_omega_rot", h.delta_omega_rot},
        {"saturation_multiplier", h.saturation_multiplier},
        {"hard_clamp", h.hard_clamp},
        {"linear_region", {h.linear_lo, h.linear_hi}},
        {"critical_pressure", optional_number(h.critical_pressure_override)}}},
      {"narrowing", narrowing},
      {"linelist", linelist},
      {"cutoff", number(s.cutoff)},
      {"regime", std::string(to_string(s.regime))},
      {"hooks",
       {{"wing_factor", s.hooks.wing_factor},
        {"slope_m", s.hooks.slope_m},
        {"width_scale", s.hooks.width_scale}}},
  };
}

Scenario scenario_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("scenario must be an object");
  Scenario s;
  s.name = get_string(j, "name");
  s.description = get_string(j, "description");

  const json& window = get_object(j, "window");
  s.window = {get_number(window, "lo"), get_number(window, "hi")};
  const json& grid = get_object(j, "grid");
  s.grid = {get_number(grid, "start"), get_number(grid, "stop"), get_number(grid, "step")};

  const json& cond = get_object(j, "conditions");
  auto& c = s.conditions;
  c.temperature = get_number(cond, "temperature");
  const json& absorber = get_object(cond, "absorber");
  c.absorber_amount = get_number(absorber, "amount");
  const auto unit = get_string(absorber, "unit", "amagat");
  if (unit == "amagat") {
    c.absorber_unit = AmountUnit::Amagat;
  } else if (unit == "atm") {
    c.absorber_unit = AmountUnit::Atm;
  } else if (unit == "torr") {
    c.absorber_unit = AmountUnit::Atm;
    c.absorber_amount = units::torr_to_atm(c.absorber_amount);
  } else {
    throw ConfigError("absorber unit must be amagat|atm|torr");
  }
  const json& br = get_object(cond, "broadener");
  const auto id = broadener_from_string(get_string(br, "id", "N2"));
  if (!id) throw ConfigError("broadener id must be N2|He|self|other");
  c.broadener.id = *id;
  c.broadener.name = get_string(br, "name");
  c.broadener.scale_vs_n2 = get_number(br, "scale_vs_n2", 1.0);
  c.broadener.partial_pressure = get_number(br, "partial_pressure_atm", 0.0);
  c.broadener.partial_density = get_optional(br, "partial_density_amagat");
  c.path_length = get_number(cond, "path_length_cm", 1.0);
  c.nonlinear_b = get_number(cond, "nonlinear_b", 0.0);

  const json& hw = get_object(j, "halfwidth");
  auto& h = s.halfwidth;
  const auto mode = halfwidth_mode_from_string(get_string(hw, "mode", "saturating"));
  if (!mode) throw ConfigError("halfwidth mode must be linear|saturating|combined");
  h.mode = *mode;
  h.gamma0 = get_number(hw, "gamma0", 0.0);
  h.delta_omega_rot = get_number(hw, "delta_omega_rot");
  h.saturation_multiplier = get_number(hw, "saturation_multiplier", 3.919);
  h.hard_clamp = get_bool(hw, "hard_clamp", false);
  if (hw.contains("linear_region")) {
    const json& lr = hw.at("linear_region");
    if (!lr.is_array() || lr.size() != 2) throw ConfigError("linear_region must be [p_D, p_L]");
    h.linear_lo = lr[0].get<double>();
    h.linear_hi = lr[1].get<double>();
  }
  h.critical_pressure_override = get_optional(hw, "critical_pressure");

  if (!j.contains("narrowing") || !j.at("narrowing").is_array()) {
    throw ConfigError("missing list 'narrowing'");
  }
  for (const json& n : j.at("narrowing")) {
    BranchParams p;
    p.interval = {get_number(n, "lo"), get_number(n, "hi")};
    p.params.a = get_number(n, "a");
    p.params.c = get_number(n, "c");
    p.params.b = get_number(n, "b");
    p.params.x_min = get_number(n, "x_min", p.params.x_min);
    p.params.base = get_number(n, "base", p.params.base);
    p.params.wing_floor = get_number(n, "wing_floor", p.params.wing_floor);
    p.broadener_scale = get_optional(n, "broadener_scale");
    s.narrowing.push_back(p);
  }

  if (j.contains("linelist")) {
    const json& ll = j.at("linelist");
    s.linelist.path = get_string(ll, "path");
    if (ll.contains("comb")) s.linelist.comb = comb_from_json(ll.at("comb"));
  }
  s.cutoff = get_number(j, "cutoff", 600.0);
  const auto regime = regime_mode_from_string(get_string(j, "regime", "auto"));
  if (!regime) throw ConfigError("regime must be auto|above-ps|below-ps");
  s.regime = *regime;
  if (j.contains("hooks")) {
    const json& hk = j.at("hooks");
    s.hooks.wing_factor = get_string(hk, "wing_factor", "none");
    s.hooks.slope_m = get_number(hk, "slope_m", 5.0);
    s.hooks.width_scale = get_number(hk, "width_scale", 1.0);
  }
  return s;
}

namespace {

std::string shortest(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void emit_yaml(YAML::Emitter& out, const json& j) {
  switch (j.type()) {
    case json::value_t::object:
      out << YAML::BeginMap;
      for (const auto& [key, value] : j.items()) {
        out << YAML::Key << key << YAML::Value;
        emit_yaml(out, value);
      }
      out << YAML::EndMap;
      break;
    case json::value_t::array:
      out << YAML::BeginSeq;
      for (const auto& value : j) emit_yaml(out, value);
      out << YAML::EndSeq;
      break;
    case json::value_t::string:
      out << YAML::DoubleQuoted << j.get<std::string>();
      break;
    case json::value_t::boolean:
      out << (j.get<bool>() ? "true" : "false");
      break;
    case json::value_t::null:
      out << YAML::Null;
      break;
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
      out << j.dump();
      break;
    default:
      out << shortest(j.get<double>());
      break;
  }
}

json yaml_to_json(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Map: {
      json obj = json::object();
      for (const auto& kv : node) obj[kv.first.as<std::string>()] = yaml_to_json(kv.second);
      return obj;
    }
    case YAML::NodeType::Sequence: {
      json arr = json::array();
      for (const auto& item : node) arr.push_back(yaml_to_json(item));
      return arr;
    }
    case YAML::NodeType::Scalar: {
      const std::string text = node.Scalar();
      if (node.Tag() == "!") return text;  // quoted
      if (text == "true") return true;
      if (text == "false") return false;
      if (text == "null" || text == "~") return nullptr;
      if (text == "inf" || text == "infinity") return text;
      long long iv = 0;
      if (auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), iv);
          ec == std::errc{} && p == text.data() + text.size()) {
        return iv;
      }
      double dv = 0.0;
      if (auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), dv);
          ec == std::errc{} && p == text.data() + text.size()) {
        return dv;
      }
      return text;
    }
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
      break;
  }
  return nullptr;
}

}  // namespace

std::string save_scenario(const Scenario& s, ScenarioFormat format) {
  const json j = to_json(s);
  if (format == ScenarioFormat::Json) return j.dump(2) + "\n";
  YAML::Emitter out;
  emit_yaml(out, j);
  return std::string(out.c_str()) + "\n";
}

Scenario load_scenario(std::string_view text, ScenarioFormat format) {
  json j;
  try {
    if (format == ScenarioFormat::Json) {
      j = json::parse(text);
    } else {
      j = yaml_to_json(YAML::Load(std::string(text)));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed scenario JSON: ") + e.what());
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("malformed scenario YAML: ") + e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid scenario: ") + e.what());
  }
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const bool is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  return load_scenario(ss.str(), is_json ? ScenarioFormat::Json : ScenarioFormat::Yaml);
}

// ---------------------------------------------------------------------------------------------
// Overrides

namespace {

double parse_number(std::string_view key, std::string_view value) {
  if (value == "inf" || value == "infinity") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || p != value.data() + value.size()) {
    throw ConfigError("override '" + std::string(key) + "' needs a number, got '" +
                      std::string(value) + "'");
  }
  return v;
}

using Setter = std::function<void(Scenario&, std::string_view key, std::string_view value)>;

Setter number_setter(std::function<double&(Scenario&)> field) {
  return [field](Scenario& s, std::string_view k, std::string_view v) {
    field(s) = parse_number(k, v);
  };
}

Setter branch_setter(double NarrowingParams::*member) {
  return [member](Scenario& s, std::string_view k, std::string_view v) {
    const double x = parse_number(k, v);
    for (auto& entry : s.narrowing) entry.params.*member = x;
  };
}

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"cutoff", number_setter([](Scenario& s) -> double& { return s.cutoff; })},
      {"regime",
       [](Scenario& s, std::string_view, std::string_view v) {
         const auto r = regime_mode_from_string(v);
         if (!r) throw ConfigError("regime must be auto|above-ps|below-ps");
         s.regime = *r;
       }},
      {"temperature",
       number_setter([](Scenario& s) -> double& { return s.conditions.temperature; })},
      {"absorber_amagat",
       [](Scenario& s, std::string_view k, std::string_view v) {
         s.conditions.absorber_amount = parse_number(k, v);
         s.conditions.absorber_unit = AmountUnit::Amagat;
       }},
      {"absorber_atm",
       [](Scenario& s, std::string_view k, std::string_view v) {
         s.conditions.absorber_amount = parse_number(k, v);
         s.conditions.absorber_unit = AmountUnit::Atm;
       }},
      {"broadener_pressure",
       [](Scenario& s, std::string_view k, std::string_view v) {
         s.conditions.broadener.partial_pressure = parse_number(k, v);
         s.conditions.broadener.partial_density.reset();
       }},
      {"broadener_scale",
       [](Scenario& s, std::string_view k, std::string_view v) {
         const double x = parse_number(k, v);
         s.conditions.broadener.scale_vs_n2 = x;
         for (auto& entry : s.narrowing) entry.broadener_scale.reset();
       }},
      {"path_length",
       number_setter([](Scenario& s) -> double& { return s.conditions.path_length; })},
      {"nonlinear_b",
       number_setter([](Scenario& s) -> double& { return s.conditions.nonlinear_b; })},
      {"halfwidth_mode",
       [](Scenario& s, std::string_view, std::string_view v) {
         const auto m = halfwidth_mode_from_string(v);
         if (!m) throw ConfigError("halfwidth_mode must be linear|saturating|combined");
         s.halfwidth.mode = *m;
       }},
      {"hard_clamp",
       [](Scenario& s, std::string_view, std::string_view v) {
         if (v != "true" && v != "false") throw ConfigError("hard_clamp must be true|false");
         s.halfwidth.hard_clamp = v == "true";
       }},
      {"gamma0", number_setter([](Scenario& s) -> double& { return s.halfwidth.gamma0; })},
      {"delta_omega_rot",
       number_setter([](Scenario& s) -> double& { return s.halfwidth.delta_omega_rot; })},
      {"saturation_multiplier",
       number_setter([](Scenario& s) -> double& { return s.halfwidth.saturation_multiplier; })},
      {"critical_pressure",
       [](Scenario& s, std::string_view k, std::string_view v) {
         if (v == "derived" || v == "none") {
           s.halfwidth.critical_pressure_override.reset();
         } else {
           s.halfwidth.critical_pressure_override = parse_number(k, v);
         }
       }},
      {"grid_start", number_setter([](Scenario& s) -> double& { return s.grid.start; })},
      {"grid_stop", number_setter([](Scenario& s) -> double& { return s.grid.stop; })},
      {"grid_step", number_setter([](Scenario& s) -> double& { return s.grid.step; })},
      {"a", branch_setter(&NarrowingParams::a)},
      {"b", branch_setter(&NarrowingParams::b)},
      {"c", branch_setter(&NarrowingParams::c)},
      {"x_min", branch_setter(&NarrowingParams::x_min)},
      {"base", branch_setter(&NarrowingParams::base)},
      {"wing_floor", branch_setter(&NarrowingParams::wing_floor)},
      {"wing_factor",
       [](Scenario& s, std::string_view, std::string_view v) { s.hooks.wing_factor = v; }},
      {"slope_m", number_setter([](Scenario& s) -> double& { return s.hooks.slope_m; })},
      {"width_scale", number_setter([](Scenario& s) -> double& { return s.hooks.width_scale; })},
  };
  return table;
}

}  // namespace

std::vector<std::string> override_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  return keys;
}

void apply_override(Scenario& s, std::string_view key, std::string_view value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) {
    std::string msg = "unknown override key '" + std::string(key) + "'; valid keys:";
    for (const auto& k : override_keys()) msg += " " + k;
    throw ConfigError(msg);
  }
  it->second(s, key, value);
}

LineTable resolve_linelist(const Scenario& s, const std::string& path_override) {
  // Lines up to one cutoff outside the window still contribute to it.
  std::optional<WavenumberWindow> reach;
  if (std::isfinite(s.cutoff)) reach = WavenumberWindow{s.window.lo - s.cutoff, s.window.hi + s.cutoff};
  if (!path_override.empty()) return load_linelist(path_override, reach);
  if (s.linelist.comb) return generate_comb(*s.linelist.comb);
  if (!s.linelist.path.empty()) return load_linelist(s.linelist.path, reach);
  throw ConfigError("scenario '" + s.name + "' needs a line list (--linelist PATH)");
}

Spectrum run_scenario(const Scenario& s, const LineTable& table, int threads, bool gamma_column) {
  s.validate();
  EngineOptions options;
  options.cutoff = s.cutoff;
  options.regime = s.regime;
  options.threads = threads;
  options.gamma_column = gamma_column;
  Spectrum spectrum = absorption_spectrum(table, s.conditions, s.halfwidth, s.narrowing,
                                          make_hooks(s.hooks), s.grid, options);
  spectrum.metadata["scenario"] = s.name;
  return spectrum;
}

}  // namespace lbl
