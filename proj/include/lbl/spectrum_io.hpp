#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"

#include "lbl/engine.hpp"

namespace lbl {

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Header "wavenumber,alpha_lorentz,alpha_narrowed,alpha_effective[,gamma_factor]", then one
/// row per grid point.
void write_spectrum_csv(std::ostream& out, const Spectrum& s);
Spectrum read_spectrum_csv(std::istream& in);
Spectrum read_spectrum_csv_file(const std::string& path);

nlohmann::json spectrum_to_json(const Spectrum& s);

}  // namespace lbl
