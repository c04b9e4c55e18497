#pragma once

// Magnitude -> count-rate law, log10(rate per m^2) = a + b m_V, fitted by
// unweighted least squares on background-subtracted rates.

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "arng/error.hpp"

namespace arng::calibration {

struct SourceObservation {
  std::string name;
  double v_magnitude = 0.0;
  std::optional<double> b_magnitude;
  std::optional<double> redshift;
  double blue_rate = 0.0;  // Hz, observed
  double red_rate = 0.0;
  double background_blue = 0.0;
  double background_red = 0.0;
  double airmass = 1.0;
  // Optional catalogue extras, carried through untouched.
  std::optional<double> light_travel_time_gyr;
  std::optional<double> reported_q;
  std::optional<double> reported_max_info_1e4;

  double net_rate() const { return blue_rate + red_rate - background_blue - background_red; }
};

struct RateFit {
  double intercept = 0.0;
  double intercept_error = 0.0;
  double slope = 0.0;
  double slope_error = 0.0;
  std::size_t points = 0;
  double residual_sd = 0.0;
  double collecting_area_m2 = 1.0;
  std::vector<std::string> excluded;  // non-positive net rate
};

// OLS of log10(net rate / area) on m_V with standard parameter errors.
inline RateFit fit_magnitude_rate(const std::vector<SourceObservation>& obs, double collecting_area_m2 = 1.0) {
  if (!(collecting_area_m2 > 0.0)) throw InvalidArgument("collecting area must be positive");
  RateFit fit;
  fit.collecting_area_m2 = collecting_area_m2;
  std::vector<double> x, y;
  for (const auto& o : obs) {
    if (!std::isfinite(o.v_magnitude)) throw InvalidArgument(o.name + ": V magnitude must be finite");
    const double net = o.net_rate();
    if (!(net > 0.0)) {
      fit.excluded.push_back(o.name);
      continue;
    }
    x.push_back(o.v_magnitude);
    y.push_back(std::log10(net / collecting_area_m2));
  }
  const std::size_t n = x.size();
  if (n < 3) throw InsufficientData("need at least 3 observations with positive net rate, have " + std::to_string(n));
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientData("all observations share one magnitude; slope undetermined");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    rss += r * r;
  }
  const double s2 = n > 2 ? rss / static_cast<double>(n - 2) : 0.0;
  fit.points = n;
  fit.residual_sd = std::sqrt(s2);
  fit.slope_error = std::sqrt(s2 / sxx);
  fit.intercept_error = std::sqrt(s2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));
  return fit;
}

// Hz per m^2.
inline double predict_rate(const RateFit& fit, double v_magnitude) {
  return std::pow(10.0, fit.intercept + fit.slope * v_magnitude);
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  for (auto& s : out) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    s = b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  }
  return out;
}

inline std::optional<double> optional_number(const std::string& s, const std::string& where) {
  if (s.empty() || s == "unknown" || s == "-") return std::nullopt;
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError(where + ": not a number: '" + s + "'");
  }
}

inline double required_number(const std::string& s, const std::string& where) {
  auto v = optional_number(s, where);
  if (!v) throw FormatError(where + ": missing value");
  return *v;
}

}  // namespace detail

// Comma-delimited catalogue:
//   name, v_mag, b_mag, z, blue_cps, red_cps, bg_blue, bg_red, airmass
//   [, tau_gyr, reported_q, reported_max_info_1e4]
// '#' lines are comments; a first row starting with "name" is a header.
inline std::vector<SourceObservation> parse_catalog(std::istream& in, const std::string& origin = "<catalog>") {
  std::vector<SourceObservation> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    auto f = detail::split_csv(line);
    if (f[0] == "name") continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    if (f.size() < 9 || f.size() > 12)
      throw FormatError(where + ": expected 9 to 12 fields, found " + std::to_string(f.size()));
    f.resize(12);
    SourceObservation o;
    o.name = f[0];
    o.v_magnitude = detail::required_number(f[1], where + " v_mag");
    o.b_magnitude = detail::optional_number(f[2], where + " b_mag");
    o.redshift = detail::optional_number(f[3], where + " z");
    o.blue_rate = detail::required_number(f[4], where + " blue_cps");
    o.red_rate = detail::required_number(f[5], where + " red_cps");
    o.background_blue = detail::required_number(f[6], where + " bg_blue");
    o.background_red = detail::required_number(f[7], where + " bg_red");
    o.airmass = detail::optional_number(f[8], where + " airmass").value_or(1.0);
    o.light_travel_time_gyr = detail::optional_number(f[9], where + " tau_gyr");
    o.reported_q = detail::optional_number(f[10], where + " reported_q");
    o.reported_max_info_1e4 = detail::optional_number(f[11], where + " reported_max_info_1e4");
    for (double r : {o.blue_rate, o.red_rate, o.background_blue, o.background_red})
      if (r < 0.0) throw FormatError(where + ": rates must be non-negative");
    out.push_back(std::move(o));
  }
  return out;
}

inline std::vector<SourceObservation> read_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open catalog " + path);
  return parse_catalog(in, path);
}

}  // namespace arng::calibration
