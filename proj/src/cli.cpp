#include "lbl/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "lbl/error.hpp"
#include "lbl/scenario.hpp"
#include "lbl/spectrum_io.hpp"

namespace lbl {

namespace {

using json = nlohmann::json;

struct RunFlags {
  std::string linelist;
  std::string window;
  std::optional<double> grid_step;
  std::optional<double> cutoff;
  std::string regime;
  std::string halfwidth_mode;
  int threads = 0;
  std::string output;
  std::string format = "csv";
  bool gamma_column = false;
  std::vector<std::string> overrides;
};

WavenumberWindow parse_window(const std::string& text) {
  const auto colon = text.find(':');
  double lo = 0.0;
  double hi = 0.0;
  bool ok = colon != std::string::npos;
  if (ok) {
    const char* b = text.data();
    const char* e = b + text.size();
    auto r1 = std::from_chars(b, b + colon, lo);
    auto r2 = std::from_chars(b + colon + 1, e, hi);
    ok = r1.ec == std::errc{} && r1.ptr == b + colon && r2.ec == std::errc{} && r2.ptr == e;
  }
  if (!ok || !(lo < hi)) throw ConfigError("--window expects LO:HI with LO < HI, got '" + text + "'");
  return {lo, hi};
}

Scenario resolve_scenario(const std::string& ref) {
  if (auto s = find_builtin(ref)) return *s;
  if (std::filesystem::exists(ref)) return load_scenario_file(ref);
  const bool looks_like_path = ref.find('/') != std::string::npos ||
                               ref.find(".json") != std::string::npos ||
                               ref.find(".yaml") != std::string::npos ||
                               ref.find(".yml") != std::string::npos;
  if (looks_like_path) throw IoError("cannot open scenario file " + ref);
  std::string msg = "unknown scenario '" + ref + "'; builtins:";
  for (const auto& s : builtin_scenarios()) msg += " " + s.name;
  throw ConfigError(msg);
}

void apply_flags(Scenario& s, const RunFlags& f) {
  if (!f.window.empty()) {
    const auto w = parse_window(f.window);
    s.window = w;
    s.grid.start = w.lo;
    s.grid.stop = w.hi;
    // Stretch the outermost narrowing intervals so the map still covers the window.
    auto by_lo = [](const BranchParams& x, const BranchParams& y) { return x.interval.lo < y.interval.lo; };
    std::sort(s.narrowing.begin(), s.narrowing.end(), by_lo);
    if (!s.narrowing.empty()) {
      s.narrowing.front().interval.lo = std::min(s.narrowing.front().interval.lo, w.lo);
      s.narrowing.back().interval.hi = std::max(s.narrowing.back().interval.hi, w.hi);
    }
  }
  if (f.grid_step) s.grid.step = *f.grid_step;
  if (f.cutoff) s.cutoff = *f.cutoff;
  if (!f.regime.empty()) apply_override(s, "regime", f.regime);
  if (!f.halfwidth_mode.empty()) apply_override(s, "halfwidth_mode", f.halfwidth_mode);
  for (const auto& kv : f.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override '" + kv + "' must have the form key=value");
    }
    apply_override(s, kv.substr(0, eq), kv.substr(eq + 1));
  }
  s.validate();
}

std::string fnv1a(const LineTable& table) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& line : table.lines()) {
    for (const char c : serialize_record(line)) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ULL;
    }
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

json sidecar(const Scenario& s, const LineTable& table, const Spectrum& spectrum,
             const RunFlags& f) {
  json columns = {"wavenumber", "alpha_lorentz", "alpha_narrowed", "alpha_effective"};
  if (f.gamma_column) columns.push_back("gamma_factor");
  return {
      {"tool", "lblnarrow"},
      {"format_version", 1},
      {"scenario", to_json(s)},
      {"linelist",
       {{"source", table.source()},
        {"lines", table.size()},
        {"fatal", table.fatal_count()},
        {"warnings", table.warning_count()},
        {"fnv1a64", fnv1a(table)}}},
      {"engine",
       {{"cutoff", s.cutoff == std::numeric_limits<double>::infinity() ? json("inf") : json(s.cutoff)},
        {"regime", std::string(to_string(s.regime))},
        {"halfwidth_mode", std::string(to_string(s.halfwidth.mode))},
        {"gamma_column", f.gamma_column}}},
      {"format", f.format},
      {"columns", columns},
      {"points", spectrum.alpha_lorentz.size()},
  };
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("failed writing " + path);
}

// Writes the spectrum and its parameter sidecar; returns the data path.
std::string emit(const Scenario& s, const LineTable& table, const Spectrum& spectrum,
                 const RunFlags& f, const std::string& path) {
  const json meta = sidecar(s, table, spectrum, f);
  std::ostringstream data;
  if (f.format == "json") {
    json j = spectrum_to_json(spectrum);
    j["parameters"] = meta;
    data << j.dump(1) << '\n';
  } else {
    write_spectrum_csv(data, spectrum);
  }
  write_file(path, data.str());
  write_file(path + ".meta.json", meta.dump(2) + "\n");
  return path;
}

int cmd_validate(const std::string& path, const std::string& window, std::ostream& out,
                 std::ostream& err) {
  std::optional<WavenumberWindow> w;
  if (!window.empty()) w = parse_window(window);
  if (!std::filesystem::exists(path)) throw IoError("cannot open " + path);
  const LineTable table = load_linelist(path, w);
  for (const auto& d : table.diagnostics()) err << format_diagnostic(d) << '\n';
  out << "lines: " << table.size() << '\n'
      << "fatal: " << table.fatal_count() << '\n'
      << "warnings: " << table.warning_count() << '\n';
  return table.fatal_count() == 0 ? kExitOk : kExitInvalid;
}

LineTable load_for(const Scenario& s, const RunFlags& f, std::ostream& err) {
  LineTable table = resolve_linelist(s, f.linelist);
  for (const auto& d : table.diagnostics()) err << format_diagnostic(d) << '\n';
  return table;
}

int cmd_compute(const std::string& ref, RunFlags f, std::ostream& out, std::ostream& err) {
  Scenario s = resolve_scenario(ref);
  apply_flags(s, f);
  const LineTable table = load_for(s, f, err);
  const Spectrum spectrum = run_scenario(s, table, f.threads, f.gamma_column);
  const std::string path = f.output.empty() ? s.name + "." + f.format : f.output;
  emit(s, table, spectrum, f, path);
  out << "wrote " << path << " (" << spectrum.alpha_lorentz.size() << " points, "
      << table.size() << " lines)\n";
  return kExitOk;
}

double peak(const std::vector<double>& v) {
  return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

int cmd_sweep(const std::string& ref, RunFlags f, const std::vector<double>& pressures,
              bool relative, std::ostream& out, std::ostream& err) {
  if (pressures.empty()) throw ConfigError("sweep needs at least one pressure");
  for (double p : pressures) {
    if (!(p > 0.0)) throw ConfigError("sweep pressures must be positive");
  }
  Scenario base = resolve_scenario(ref);
  apply_flags(base, f);
  const LineTable table = load_for(base, f, err);

  double scale = 1.0;
  if (relative) {
    if (base.halfwidth.critical_pressure_override) {
      scale = *base.halfwidth.critical_pressure_override;
    } else {
      if (table.empty()) throw ConfigError("cannot derive p_s from an empty line list");
      const auto strongest = std::max_element(
          table.lines().begin(), table.lines().end(),
          [](const SpectralLine& x, const SpectralLine& y) { return x.intensity_ref < y.intensity_ref; });
      BroadenerSpec b = base.conditions.broadener;
      if (const auto& br = lookup_branch(base.narrowing, strongest->position); br.broadener_scale) {
        b.scale_vs_n2 = *br.broadener_scale;
      }
      scale = critical_pressure(*strongest, b, base.conditions.temperature, base.halfwidth);
    }
  }

  const std::string prefix = f.output.empty() ? base.name : f.output;
  std::ostringstream summary;
  summary << "pressure_atm,peak_alpha_lorentz,peak_alpha_narrowed,peak_ratio,output\n";
  for (double factor : pressures) {
    const double p = factor * scale;
    Scenario s = base;
    apply_override(s, "broadener_pressure", format_double(p));
    s.validate();
    const Spectrum spectrum = run_scenario(s, table, f.threads, f.gamma_column);
    const std::string path = prefix + "_p" + format_double(p) + "." + f.format;
    emit(s, table, spectrum, f, path);
    const double pl = peak(spectrum.alpha_lorentz);
    const double pn = peak(spectrum.alpha_narrowed);
    summary << format_double(p) << ',' << format_double(pl) << ',' << format_double(pn) << ','
            << format_double(pl > 0.0 ? pn / pl : 0.0) << ',' << path << '\n';
  }
  write_file(prefix + "_summary.csv", summary.str());
  out << summary.str();
  return kExitOk;
}

void add_run_flags(CLI::App& cmd, RunFlags& f) {
  cmd.add_option("--linelist", f.linelist, "Line-list file (160-column or CSV, optionally .gz)");
  cmd.add_option("--window", f.window, "Spectral window LO:HI in cm-1");
  cmd.add_option("--grid-step", f.grid_step, "Grid step in cm-1")->check(CLI::PositiveNumber);
  cmd.add_option("--cutoff", f.cutoff, "Line cutoff in cm-1 (default 600)")->check(CLI::PositiveNumber);
  cmd.add_option("--threads", f.threads, "Worker threads (default: all cores)")->check(CLI::NonNegativeNumber);
  cmd.add_option("--output", f.output, "Output path (sweep: file prefix)");
  cmd.add_option("--format", f.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  cmd.add_option("--regime", f.regime, "auto|above-ps|below-ps")
      ->check(CLI::IsMember({"auto", "above-ps", "below-ps"}));
  cmd.add_option("--halfwidth-mode", f.halfwidth_mode, "linear|saturating|combined")
      ->check(CLI::IsMember({"linear", "saturating", "combined"}));
  cmd.add_flag("--gamma-column", f.gamma_column, "Add the narrowing factor of the nearest line");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Line-by-line absorption with high-pressure line-shape narrowing", "lblnarrow"};
  app.require_subcommand(1);

  std::string validate_path;
  std::string validate_window;
  auto* validate = app.add_subcommand("validate", "Check a line-list file");
  validate->add_option("linelist", validate_path, "Line-list file")->required();
  validate->add_option("--window", validate_window, "Keep lines inside LO:HI");

  std::string scenario_ref;
  RunFlags compute_flags;
  auto* compute = app.add_subcommand("compute", "Compute one spectrum");
  compute->add_option("scenario", scenario_ref, "Builtin name or scenario file")->required();
  compute->add_option("overrides", compute_flags.overrides, "key=value parameter overrides");
  add_run_flags(*compute, compute_flags);

  RunFlags sweep_flags;
  std::vector<double> pressures;
  bool relative = false;
  auto* sweep = app.add_subcommand("sweep", "Compute spectra over a list of broadener pressures");
  sweep->add_option("scenario", scenario_ref, "Builtin name or scenario file")->required();
  sweep->add_option("overrides", sweep_flags.overrides, "key=value parameter overrides");
  sweep->add_option("--pressures", pressures, "Broadener pressures in atm")
      ->required()
      ->delimiter(',');
  sweep->add_flag("--relative", relative, "Pressures are multiples of the critical pressure");
  add_run_flags(*sweep, sweep_flags);

  auto* list = app.add_subcommand("list", "List builtin scenarios");

  std::string show_format = "yaml";
  auto* show = app.add_subcommand("show", "Print a resolved scenario");
  show->add_option("scenario", scenario_ref, "Builtin name or scenario file")->required();
  show->add_option("--format", show_format, "yaml|json")->check(CLI::IsMember({"yaml", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*validate) return cmd_validate(validate_path, validate_window, out, err);
    if (*compute) return cmd_compute(scenario_ref, compute_flags, out, err);
    if (*sweep) return cmd_sweep(scenario_ref, sweep_flags, pressures, relative, out, err);
    if (*list) {
      for (const auto& s : builtin_scenarios()) out << s.name << "  " << s.description << '\n';
      return kExitOk;
    }
    if (*show) {
      const Scenario s = resolve_scenario(scenario_ref);
      out << save_scenario(s, show_format == "json" ? ScenarioFormat::Json : ScenarioFormat::Yaml);
      return kExitOk;
    }
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace lbl
