#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace lbl {

enum class Branch { P, Q, R, Head, Unknown };

std::string_view to_string(Branch b);
std::optional<Branch> branch_from_string(std::string_view text);

/// One transition. Widths and intensity are at the 296 K reference temperature.
struct SpectralLine {
  int molecule_id = 0;
  int isotopologue_id = 0;
  double position = 0.0;             // cm^-1
  double intensity_ref = 0.0;        // cm^-1 / (molecule cm^-2)
  double gamma_foreign_ref = 0.0;    // cm^-1 / atm
  double gamma_self_ref = 0.0;       // cm^-1 / atm
  double lower_state_energy = 0.0;   // cm^-1
  double temp_exponent = 0.0;
  Branch branch = Branch::Unknown;
  /// Original 160-column record. Empty for lines that did not come from a fixed-width file.
  std::string record;

  friend bool operator==(const SpectralLine&, const SpectralLine&) = default;
};

struct WavenumberWindow {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double w) const { return lo <= w && w <= hi; }
  friend bool operator==(const WavenumberWindow&, const WavenumberWindow&) = default;
};

enum class Severity { Warning, Fatal };

struct ParseDiagnostic {
  std::size_t record_index = 0;  // 1-based
  Severity severity = Severity::Fatal;
  std::string message;

  friend bool operator==(const ParseDiagnostic&, const ParseDiagnostic&) = default;
};

/// "record <n>: <severity>: <message>"
std::string format_diagnostic(const ParseDiagnostic& d);

/// Immutable, wavenumber-sorted line collection.
class LineTable {
 public:
  LineTable() = default;
  /// Sorts `lines`; ties on position are broken on the remaining fields so the result
  /// does not depend on input order.
  LineTable(std::vector<SpectralLine> lines, std::string source = {},
            std::vector<ParseDiagnostic> diagnostics = {});

  std::span<const SpectralLine> lines() const { return lines_; }
  const std::string& source() const { return source_; }
  std::span<const ParseDiagnostic> diagnostics() const { return diagnostics_; }

  std::size_t size() const { return lines_.size(); }
  bool empty() const { return lines_.empty(); }
  const SpectralLine& operator[](std::size_t i) const { return lines_[i]; }

  std::size_t fatal_count() const;
  std::size_t warning_count() const;

  /// Index range [first, last) of lines with lo <= position <= hi.
  std::pair<std::size_t, std::size_t> range(double lo, double hi) const;

  /// Lines of both tables merged in sorted order.
  static LineTable concat(const LineTable& a, const LineTable& b);

 private:
  std::vector<SpectralLine> lines_;
  std::string source_;
  std::vector<ParseDiagnostic> diagnostics_;
};

inline constexpr std::size_t kRecordLength = 160;

struct RecordResult {
  std::variant<SpectralLine, ParseDiagnostic> value;
  std::vector<ParseDiagnostic> warnings;

  bool ok() const { return std::holds_alternative<SpectralLine>(value); }
  const SpectralLine& line() const { return std::get<SpectralLine>(value); }
  const ParseDiagnostic& error() const { return std::get<ParseDiagnostic>(value); }
};

/// Decode one HITRAN-2004 style record. A trailing "\n" or "\r\n" is accepted.
RecordResult parse_record(std::string_view record, std::size_t record_index = 1);

/// 160-column text for `line`. Lines parsed from a record return that record verbatim;
/// other lines are formatted with the standard field widths.
std::string serialize_record(const SpectralLine& line);

/// "w,S,gamma_foreign,gamma_self,E'',n[,branch]"
RecordResult parse_csv_line(std::string_view row, std::size_t record_index = 1);
std::string serialize_csv_line(const SpectralLine& line);

enum class LineFormat { FixedWidth, Csv };

/// Throws IoError when the stream is in a failed state before reading.
LineTable parse_linelist(std::istream& in, std::optional<WavenumberWindow> window = std::nullopt,
                         LineFormat format = LineFormat::FixedWidth, std::string source = {});

/// Loads a file, choosing CSV for *.csv / *.csv.gz and gunzipping *.gz.
LineTable load_linelist(const std::string& path,
                        std::optional<WavenumberWindow> window = std::nullopt);

}  // namespace lbl
