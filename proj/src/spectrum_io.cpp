#include "lbl/spectrum_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lbl/error.hpp"

namespace lbl {

std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_spectrum_csv(std::ostream& out, const Spectrum& s) {
  const bool gamma = !s.gamma_factor.empty();
  out << "wavenumber,alpha_lorentz,alpha_narrowed,alpha_effective";
  if (gamma) out << ",gamma_factor";
  out << '\n';
  std::string row;
  for (std::size_t j = 0; j < s.alpha_lorentz.size(); ++j) {
    row = format_double(s.grid.at(j));
    row += ',';
    row += format_double(s.alpha_lorentz[j]);
    row += ',';
    row += format_double(s.alpha_narrowed[j]);
    row += ',';
    row += format_double(s.alpha_effective[j]);
    if (gamma) {
      row += ',';
      row += format_double(s.gamma_factor[j]);
    }
    row += '\n';
    out << row;
  }
  if (!out) throw IoError("failed writing spectrum");
}

Spectrum read_spectrum_csv(std::istream& in) {
  std::string header;
  if (!std::getline(in, header) || header.rfind("wavenumber,", 0) != 0) {
    throw IoError("spectrum CSV lacks the expected header");
  }
  const bool gamma = header.find("gamma_factor") != std::string::npos;
  const std::size_t columns = gamma ? 5 : 4;

  Spectrum s;
  std::vector<double> w;
  std::string row;
  std::size_t line_no = 1;
  while (std::getline(in, row)) {
    ++line_no;
    if (row.empty()) continue;
    double v[5] = {};
    const char* p = row.data();
    const char* end = row.data() + row.size();
    for (std::size_t c = 0; c < columns; ++c) {
      const auto [next, ec] = std::from_chars(p, end, v[c]);
      if (ec != std::errc{}) throw IoError("bad number on spectrum CSV line " + std::to_string(line_no));
      p = next;
      if (c + 1 < columns) {
        if (p == end || *p != ',') throw IoError("short row on spectrum CSV line " + std::to_string(line_no));
        ++p;
      }
    }
    w.push_back(v[0]);
    s.alpha_lorentz.push_back(v[1]);
    s.alpha_narrowed.push_back(v[2]);
    s.alpha_effective.push_back(v[3]);
    if (gamma) s.gamma_factor.push_back(v[4]);
  }
  if (w.size() < 2) throw IoError("spectrum CSV needs at least two rows");
  s.grid = {w.front(), w.back(), (w.back() - w.front()) / static_cast<double>(w.size() - 1)};
  return s;
}

Spectrum read_spectrum_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_spectrum_csv(in);
}

nlohmann::json spectrum_to_json(const Spectrum& s) {
  nlohmann::json j;
  j["grid"] = {{"start", s.grid.start}, {"stop", s.grid.stop}, {"step", s.grid.step},
               {"points", s.alpha_lorentz.size()}};
  std::vector<double> w(s.alpha_lorentz.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = s.grid.at(i);
  j["wavenumber"] = w;
  j["alpha_lorentz"] = s.alpha_lorentz;
  j["alpha_narrowed"] = s.alpha_narrowed;
  j["alpha_effective"] = s.alpha_effective;
  if (!s.gamma_factor.empty()) j["gamma_factor"] = s.gamma_factor;
  j["metadata"] = s.metadata;
  return j;
}

}  // namespace lbl
