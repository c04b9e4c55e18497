#pragma once

// Two-column text tables: `wavelength_nm value`, whitespace or comma
// separated, '#' starts a comment, one optional non-numeric header line.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "arng/error.hpp"
#include "arng/instrument_models.hpp"
#include "arng/spectral_model.hpp"

#ifndef ARNG_DATA_DIR
#define ARNG_DATA_DIR "data"
#endif

namespace arng::spectral {

inline std::filesystem::path default_data_dir() { return std::filesystem::path(ARNG_DATA_DIR); }

inline TabulatedCurve parse_curve(std::istream& in, const std::string& origin = "<stream>") {
  std::vector<double> x, y;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    for (char& c : line)
      if (c == ',' || c == '\t' || c == ';') c = ' ';
    std::istringstream ls(line);
    std::string a, b, extra;
    if (!(ls >> a)) continue;
    const auto where = origin + ":" + std::to_string(lineno);
    if (!(ls >> b)) throw FormatError(where + ": expected two columns");
    if (ls >> extra) throw FormatError(where + ": expected two columns, found more");
    double xv = 0.0, yv = 0.0;
    try {
      std::size_t pa = 0, pb = 0;
      xv = std::stod(a, &pa);
      yv = std::stod(b, &pb);
      if (pa != a.size() || pb != b.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      if (x.empty() && !header_seen) {
        header_seen = true;
        continue;
      }
      throw FormatError(where + ": non-numeric value");
    }
    if (!x.empty() && !(xv > x.back())) throw FormatError(where + ": wavelengths must be strictly increasing");
    x.push_back(xv);
    y.push_back(yv);
  }
  try {
    return TabulatedCurve(WavelengthGrid(std::move(x)), std::move(y));
  } catch (const InvalidArgument& e) {
    throw FormatError(origin + ": " + e.what());
  }
}

inline TabulatedCurve read_curve(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open table " + path.string());
  return parse_curve(in, path.string());
}

inline void write_curve(std::ostream& out, const TabulatedCurve& c, const std::string& header = {}) {
  if (!header.empty()) out << "# " << header << '\n';
  out << std::setprecision(10);
  for (std::size_t i = 0; i < c.size(); ++i) out << c.grid()[i] << ' ' << c[i] << '\n';
}

inline Spectrum read_spectrum(const std::filesystem::path& path) { return Spectrum(read_curve(path)); }

// Zenith transmission from a table, Rayleigh depth analytic; both on `grid`.
inline AtmosphereModel load_atmosphere(const std::filesystem::path& transmission_table, const WavelengthGrid& grid,
                                       double tau0 = 0.1, double reference_nm = 550.0) {
  return AtmosphereModel(read_curve(transmission_table).resample(grid), rayleigh_optical_depth(grid, tau0, reference_nm));
}

inline AtmosphereModel standin_atmosphere(const WavelengthGrid& grid) {
  return load_atmosphere(default_data_dir() / "atmosphere_standin.txt", grid);
}

// Rest-frame composite quasar template (wavelengths in nm).
inline Spectrum standin_quasar_composite() { return read_spectrum(default_data_dir() / "quasar_composite_standin.txt"); }

}  // namespace arng::spectral
