#include "lbl/linelist.hpp"

#include <zlib.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <tuple>

#include "lbl/error.hpp"

namespace lbl {

namespace {

// 0-based [offset, offset + width) column spans of the HITRAN-2004 160-character record.
struct Field {
  std::size_t offset;
  std::size_t width;
};

constexpr Field kMolecule{0, 2};
constexpr Field kIsotopologue{2, 1};
constexpr Field kPosition{3, 12};
constexpr Field kIntensity{15, 10};
constexpr Field kEinsteinA{25, 10};
constexpr Field kGammaForeign{35, 5};
constexpr Field kGammaSelf{40, 5};
constexpr Field kLowerEnergy{45, 10};
constexpr Field kTempExponent{55, 4};
constexpr Field kLocalLowerQuanta{112, 15};

std::string_view column(std::string_view rec, Field f) { return rec.substr(f.offset, f.width); }

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  if (text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::optional<int> to_int(std::string_view text) {
  text = trim(text);
  if (text.empty()) return std::nullopt;
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

// HITRAN numbers isotopologues 1..9, then 0 for 10 and A, B, ... beyond.
std::optional<int> to_isotopologue(char c) {
  if (c >= '1' && c <= '9') return c - '0';
  if (c == '0') return 10;
  if (c >= 'A' && c <= 'Z') return 11 + (c - 'A');
  return std::nullopt;
}

char isotopologue_char(int id) {
  if (id >= 1 && id <= 9) return static_cast<char>('0' + id);
  if (id == 10) return '0';
  if (id >= 11 && id < 11 + 26) return static_cast<char>('A' + id - 11);
  return ' ';
}

// Linear-molecule local quanta carry the branch letter followed by J, e.g. "     R 12e     ".
Branch branch_from_quanta(std::string_view quanta) {
  for (std::size_t i = 0; i < quanta.size(); ++i) {
    const char c = quanta[i];
    if (c != 'P' && c != 'Q' && c != 'R') continue;
    if (i > 0 && quanta[i - 1] != ' ') continue;
    std::size_t j = i + 1;
    while (j < quanta.size() && quanta[j] == ' ') ++j;
    if (j < quanta.size() && quanta[j] >= '0' && quanta[j] <= '9') {
      return c == 'P' ? Branch::P : c == 'Q' ? Branch::Q : Branch::R;
    }
  }
  return Branch::Unknown;
}

ParseDiagnostic fatal(std::size_t index, std::string message) {
  return {index, Severity::Fatal, std::move(message)};
}

std::string_view strip_newline(std::string_view s) {
  if (!s.empty() && s.back() == '\n') s.remove_suffix(1);
  if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
  return s;
}

// Checks shared by both record formats; returns an error message or empty.
std::string check_line(const SpectralLine& l) {
  if (!(l.position > 0.0)) return "non-positive wavenumber";
  if (l.intensity_ref < 0.0) return "negative line intensity";
  if (!(l.gamma_foreign_ref > 0.0)) return "non-positive foreign-broadening halfwidth";
  if (l.gamma_self_ref < 0.0) return "negative self-broadening halfwidth";
  if (l.lower_state_energy < 0.0) return "negative lower-state energy";
  return {};
}

// Fortran-style fixed field: right-justified, leading "0" dropped if needed, '*' on overflow.
std::string fixed_field(double value, int width, int precision, char conversion = 'f') {
  char buf[64];
  const char fmt[] = {'%', '*', '.', '*', conversion, '\0'};
  int n = std::snprintf(buf, sizeof buf, fmt, width, precision, value);
  std::string s(buf, static_cast<std::size_t>(n));
  if (s.size() > static_cast<std::size_t>(width)) {
    if (s.rfind("0.", 0) == 0) {
      s.erase(0, 1);
    } else if (s.rfind("-0.", 0) == 0) {
      s.erase(1, 1);
    }
  }
  if (s.size() > static_cast<std::size_t>(width)) return std::string(width, '*');
  return std::string(width - s.size(), ' ') + s;
}

auto sort_key(const SpectralLine& l) {
  return std::tie(l.position, l.molecule_id, l.isotopologue_id, l.intensity_ref,
                  l.gamma_foreign_ref, l.gamma_self_ref, l.lower_state_energy, l.temp_exponent,
                  l.branch, l.record);
}

}  // namespace

std::string_view to_string(Branch b) {
  switch (b) {
    case Branch::P: return "P";
    case Branch::Q: return "Q";
    case Branch::R: return "R";
    case Branch::Head: return "head";
    case Branch::Unknown: break;
  }
  return "unknown";
}

std::optional<Branch> branch_from_string(std::string_view text) {
  text = trim(text);
  if (text == "P" || text == "p") return Branch::P;
  if (text == "Q" || text == "q") return Branch::Q;
  if (text == "R" || text == "r") return Branch::R;
  if (text == "head" || text == "H") return Branch::Head;
  if (text == "unknown" || text.empty()) return Branch::Unknown;
  return std::nullopt;
}

std::string format_diagnostic(const ParseDiagnostic& d) {
  std::ostringstream os;
  os << "record " << d.record_index << ": "
     << (d.severity == Severity::Fatal ? "fatal" : "warning") << ": " << d.message;
  return os.str();
}

LineTable::LineTable(std::vector<SpectralLine> lines, std::string source,
                     std::vector<ParseDiagnostic> diagnostics)
    : lines_(std::move(lines)), source_(std::move(source)), diagnostics_(std::move(diagnostics)) {
  std::sort(lines_.begin(), lines_.end(),
            [](const SpectralLine& a, const SpectralLine& b) { return sort_key(a) < sort_key(b); });
}

std::size_t LineTable::fatal_count() const {
  return static_cast<std::size_t>(std::count_if(
      diagnostics_.begin(), diagnostics_.end(),
      [](const ParseDiagnostic& d) { return d.severity == Severity::Fatal; }));
}

std::size_t LineTable::warning_count() const { return diagnostics_.size() - fatal_count(); }

std::pair<std::size_t, std::size_t> LineTable::range(double lo, double hi) const {
  const auto first = std::lower_bound(lines_.begin(), lines_.end(), lo,
                                      [](const SpectralLine& l, double w) { return l.position < w; });
  const auto last = std::upper_bound(first, lines_.end(), hi,
                                     [](double w, const SpectralLine& l) { return w < l.position; });
  return {static_cast<std::size_t>(first - lines_.begin()),
          static_cast<std::size_t>(last - lines_.begin())};
}

LineTable LineTable::concat(const LineTable& a, const LineTable& b) {
  std::vector<SpectralLine> lines(a.lines_);
  lines.insert(lines.end(), b.lines_.begin(), b.lines_.end());
  std::vector<ParseDiagnostic> diags(a.diagnostics_);
  diags.insert(diags.end(), b.diagnostics_.begin(), b.diagnostics_.end());
  return LineTable(std::move(lines), a.source_ + "+" + b.source_, std::move(diags));
}

RecordResult parse_record(std::string_view record, std::size_t index) {
  record = strip_newline(record);
  RecordResult result{fatal(index, ""), {}};
  if (record.size() != kRecordLength) {
    result.value = fatal(index, "wrong record length " + std::to_string(record.size()) +
                                    " (expected 160)");
    return result;
  }

  SpectralLine line;
  const auto molecule = to_int(column(record, kMolecule));
  if (!molecule) {
    result.value = fatal(index, "non-numeric molecule id");
    return result;
  }
  const auto iso = to_isotopologue(record[kIsotopologue.offset]);
  if (!iso) {
    result.value = fatal(index, "invalid isotopologue id");
    return result;
  }
  line.molecule_id = *molecule;
  line.isotopologue_id = *iso;

  struct Numeric {
    Field field;
    double SpectralLine::*member;
    const char* name;
  };
  static constexpr Numeric numerics[] = {
      {kPosition, &SpectralLine::position, "wavenumber"},
      {kIntensity, &SpectralLine::intensity_ref, "line intensity"},
      {kGammaForeign, &SpectralLine::gamma_foreign_ref, "foreign-broadening halfwidth"},
      {kGammaSelf, &SpectralLine::gamma_self_ref, "self-broadening halfwidth"},
      {kLowerEnergy, &SpectralLine::lower_state_energy, "lower-state energy"},
      {kTempExponent, &SpectralLine::temp_exponent, "temperature exponent"},
  };
  for (const auto& n : numerics) {
    const auto v = to_double(column(record, n.field));
    if (!v) {
      result.value = fatal(index, std::string("non-numeric ") + n.name);
      return result;
    }
    line.*n.member = *v;
  }
  if (auto msg = check_line(line); !msg.empty()) {
    result.value = fatal(index, std::move(msg));
    return result;
  }

  if (!to_double(column(record, kEinsteinA))) {
    result.warnings.push_back({index, Severity::Warning, "non-numeric Einstein A coefficient"});
  }
  line.branch = branch_from_quanta(column(record, kLocalLowerQuanta));
  line.record = std::string(record);
  result.value = std::move(line);
  return result;
}

std::string serialize_record(const SpectralLine& line) {
  if (line.record.size() == kRecordLength) return line.record;

  std::string rec;
  rec.reserve(kRecordLength);
  rec += fixed_field(line.molecule_id, 2, 0);
  rec += isotopologue_char(line.isotopologue_id);
  rec += fixed_field(line.position, 12, 6);
  rec += fixed_field(line.intensity_ref, 10, 3, 'E');
  rec += fixed_field(0.0, 10, 3, 'E');
  rec += fixed_field(line.gamma_foreign_ref, 5, 4);
  rec += fixed_field(line.gamma_self_ref, 5, 3);
  rec += fixed_field(line.lower_state_energy, 10, 4);
  rec += fixed_field(line.temp_exponent, 4, 2);
  rec += fixed_field(0.0, 8, 6);
  rec.resize(kRecordLength, ' ');
  if (line.branch == Branch::P || line.branch == Branch::Q || line.branch == Branch::R) {
    // "     R  0      " in the lower local quanta; J is not tracked.
    rec[kLocalLowerQuanta.offset + 5] = to_string(line.branch)[0];
    rec[kLocalLowerQuanta.offset + 8] = '0';
  }
  return rec;
}

RecordResult parse_csv_line(std::string_view row, std::size_t index) {
  row = strip_newline(row);
  RecordResult result{fatal(index, ""), {}};

  std::string text(row);
  // Accept a typographic minus sign.
  for (std::size_t pos; (pos = text.find("\xE2\x88\x92")) != std::string::npos;) {
    text.replace(pos, 3, "-");
  }

  std::vector<std::string_view> fields;
  std::string_view rest(text);
  while (true) {
    const auto comma = rest.find(',');
    fields.push_back(trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (fields.size() < 6) {
    result.value = fatal(index, "too few fields (" + std::to_string(fields.size()) +
                                    ", expected at least 6)");
    return result;
  }

  static constexpr std::pair<double SpectralLine::*, const char*> order[] = {
      {&SpectralLine::position, "wavenumber"},
      {&SpectralLine::intensity_ref, "line intensity"},
      {&SpectralLine::gamma_foreign_ref, "foreign-broadening halfwidth"},
      {&SpectralLine::gamma_self_ref, "self-broadening halfwidth"},
      {&SpectralLine::lower_state_energy, "lower-state energy"},
      {&SpectralLine::temp_exponent, "temperature exponent"},
  };
  SpectralLine line;
  for (std::size_t i = 0; i < 6; ++i) {
    const auto v = to_double(fields[i]);
    if (!v) {
      result.value = fatal(index, std::string("non-numeric ") + order[i].second);
      return result;
    }
    line.*order[i].first = *v;
  }
  if (auto msg = check_line(line); !msg.empty()) {
    result.value = fatal(index, std::move(msg));
    return result;
  }
  if (fields.size() > 6) {
    if (const auto b = branch_from_string(fields[6])) {
      line.branch = *b;
    } else {
      result.warnings.push_back({index, Severity::Warning, "unrecognized branch tag"});
    }
  }
  if (fields.size() > 7) {
    result.warnings.push_back({index, Severity::Warning, "extra fields ignored"});
  }
  result.value = std::move(line);
  return result;
}

std::string serialize_csv_line(const SpectralLine& line) {
  auto num = [](double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  };
  std::string out = num(line.position) + "," + num(line.intensity_ref) + "," +
                    num(line.gamma_foreign_ref) + "," + num(line.gamma_self_ref) + "," +
                    num(line.lower_state_energy) + "," + num(line.temp_exponent);
  if (line.branch != Branch::Unknown) {
    out += ",";
    out += to_string(line.branch);
  }
  return out;
}

LineTable parse_linelist(std::istream& in, std::optional<WavenumberWindow> window,
                         LineFormat format, std::string source) {
  if (!in) throw IoError("unreadable line-list stream" + (source.empty() ? "" : ": " + source));

  std::vector<SpectralLine> lines;
  std::vector<ParseDiagnostic> diagnostics;
  std::string row;
  std::size_t index = 0;
  while (std::getline(in, row)) {
    ++index;
    if (!row.empty() && row.back() == '\r') row.pop_back();
    if (row.empty()) continue;
    if (format == LineFormat::Csv && row.front() == '#') continue;

    auto result = format == LineFormat::Csv ? parse_csv_line(row, index) : parse_record(row, index);
    if (!result.ok()) {
      diagnostics.push_back(result.error());
      continue;
    }
    if (window && !window->contains(result.line().position)) continue;
    diagnostics.insert(diagnostics.end(), result.warnings.begin(), result.warnings.end());
    lines.push_back(std::get<SpectralLine>(std::move(result.value)));
  }
  if (in.bad()) throw IoError("error while reading line list" + (source.empty() ? "" : ": " + source));
  return LineTable(std::move(lines), std::move(source), std::move(diagnostics));
}

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string read_gzip(const std::string& path) {
  gzFile f = gzopen(path.c_str(), "rb");
  if (!f) throw IoError("cannot open " + path);
  std::string content;
  char buf[1 << 16];
  int n = 0;
  while ((n = gzread(f, buf, sizeof buf)) > 0) content.append(buf, static_cast<std::size_t>(n));
  int err = 0;
  const char* msg = gzerror(f, &err);
  gzclose(f);
  if (n < 0 || (err != Z_OK && err != Z_STREAM_END)) {
    throw IoError("cannot decompress " + path + ": " + msg);
  }
  return content;
}

}  // namespace

LineTable load_linelist(const std::string& path, std::optional<WavenumberWindow> window) {
  const bool gz = ends_with(path, ".gz");
  const std::string_view stem = gz ? std::string_view(path).substr(0, path.size() - 3) : path;
  const LineFormat format = ends_with(stem, ".csv") ? LineFormat::Csv : LineFormat::FixedWidth;

  if (gz) {
    std::istringstream in(read_gzip(path));
    return parse_linelist(in, window, format, path);
  }
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return parse_linelist(in, window, format, path);
}

}  // namespace lbl
