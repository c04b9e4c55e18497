#pragma once

// Source spectra, atmospheric attenuation and the instrument's per-arm
// spectral response, plus the wrong-way (crosstalk) fractions derived from
// them. All curves are tabulated on a wavelength grid in nanometres and
// integrated with the trapezoidal rule.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arng/error.hpp"

namespace arng::spectral {

// Observing bands: blue 350-700 nm, red 700-1150 nm.
inline constexpr double kBandLowNm = 350.0;
inline constexpr double kBandHighNm = 1150.0;
inline constexpr double kDefaultCutoffNm = 700.0;

class WavelengthGrid {
 public:
  explicit WavelengthGrid(std::vector<double> nm) : nm_(std::move(nm)) {
    if (nm_.size() < 2) throw InvalidArgument("wavelength grid needs at least 2 points");
    for (std::size_t i = 0; i < nm_.size(); ++i) {
      if (!(nm_[i] > 0.0) || !std::isfinite(nm_[i]))
        throw InvalidArgument("wavelength grid values must be finite and positive");
      if (i > 0 && !(nm_[i] > nm_[i - 1]))
        throw InvalidArgument("wavelength grid must be strictly increasing");
    }
  }

  // [lo, hi] inclusive in steps of `step`; the last point is clamped to hi.
  static WavelengthGrid uniform(double lo, double hi, double step) {
    if (!(step > 0.0) || !(hi > lo)) throw InvalidArgument("uniform grid needs hi > lo and step > 0");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9));
    std::vector<double> v;
    v.reserve(n + 2);
    for (std::size_t i = 0; i <= n; ++i) v.push_back(lo + static_cast<double>(i) * step);
    if (hi - v.back() > 1e-9 * step) v.push_back(hi);
    return WavelengthGrid(std::move(v));
  }

  // Standard analysis grid over both observing bands.
  static WavelengthGrid observing_bands(double step = 0.5) {
    return uniform(kBandLowNm, kBandHighNm, step);
  }

  std::size_t size() const noexcept { return nm_.size(); }
  double operator[](std::size_t i) const { return nm_[i]; }
  double front() const noexcept { return nm_.front(); }
  double back() const noexcept { return nm_.back(); }
  const std::vector<double>& values() const noexcept { return nm_; }

  bool covers(double lo, double hi) const noexcept { return front() <= lo && back() >= hi; }
  bool covers_observing_bands() const noexcept { return covers(kBandLowNm, kBandHighNm); }

  bool operator==(const WavelengthGrid&) const = default;

 private:
  std::vector<double> nm_;
};

// A real-valued function of wavelength sampled on a grid.
class TabulatedCurve {
 public:
  TabulatedCurve(WavelengthGrid grid, std::vector<double> values)
      : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size())
      throw InvalidArgument("curve has " + std::to_string(values_.size()) + " values for a grid of " +
                            std::to_string(grid_.size()));
    for (double v : values_)
      if (!std::isfinite(v)) throw InvalidArgument("curve values must be finite");
  }

  template <typename F>
  static TabulatedCurve from_function(const WavelengthGrid& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid[i]);
    return TabulatedCurve(grid, std::move(v));
  }

  static TabulatedCurve constant(const WavelengthGrid& grid, double value) {
    return TabulatedCurve(grid, std::vector<double>(grid.size(), value));
  }

  const WavelengthGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  // Linear interpolation; `fill` outside the tabulated range.
  double at(double nm, double fill = 0.0) const {
    const auto& x = grid_.values();
    if (nm < x.front() || nm > x.back()) return fill;
    auto it = std::upper_bound(x.begin(), x.end(), nm);
    if (it == x.end()) return values_.back();
    const auto hi = static_cast<std::size_t>(it - x.begin());
    const auto lo = hi - 1;
    const double t = (nm - x[lo]) / (x[hi] - x[lo]);
    return values_[lo] + t * (values_[hi] - values_[lo]);
  }

  TabulatedCurve resample(const WavelengthGrid& target, double fill = 0.0) const {
    if (target == grid_) return *this;
    return from_function(target, [&](double nm) { return at(nm, fill); });
  }

  bool all_within(double lo, double hi) const noexcept {
    return std::all_of(values_.begin(), values_.end(), [&](double v) { return v >= lo && v <= hi; });
  }

 private:
  WavelengthGrid grid_;
  std::vector<double> values_;
};

// Trapezoidal integral of the piecewise-linear interpolant of (x, y) over
// [lo, hi] intersected with the tabulated range. Splitting at an interior
// point reproduces the unsplit integral exactly.
inline double trapezoid(std::span<const double> x, std::span<const double> y, double lo, double hi) {
  if (x.size() != y.size()) throw InvalidArgument("trapezoid: size mismatch");
  if (x.size() < 2) return 0.0;
  lo = std::max(lo, x.front());
  hi = std::min(hi, x.back());
  if (!(hi > lo)) return 0.0;
  auto interp = [&](std::size_t i, double xv) {
    const double t = (xv - x[i]) / (x[i + 1] - x[i]);
    return y[i] + t * (y[i + 1] - y[i]);
  };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = std::max(lo, x[i]);
    const double b = std::min(hi, x[i + 1]);
    if (!(b > a)) continue;
    const double ya = (a == x[i]) ? y[i] : interp(i, a);
    const double yb = (b == x[i + 1]) ? y[i + 1] : interp(i, b);
    sum += 0.5 * (ya + yb) * (b - a);
  }
  return sum;
}

inline double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.empty()) return 0.0;
  return trapezoid(x, y, x.front(), x.back());
}

inline double integrate(const TabulatedCurve& c, double lo, double hi) {
  return trapezoid(c.grid().values(), c.values(), lo, hi);
}

inline double integrate(const TabulatedCurve& c) {
  return trapezoid(c.grid().values(), c.values());
}

inline TabulatedCurve multiply(const TabulatedCurve& a, const TabulatedCurve& b) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("curves are tabulated on different grids");
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] * b[i];
  return TabulatedCurve(a.grid(), std::move(v));
}

// Photon number per unit wavelength per unit time, arbitrary normalization.
class Spectrum {
 public:
  explicit Spectrum(TabulatedCurve density) : density_(std::move(density)) {
    for (double v : density_.values())
      if (v < 0.0) throw InvalidArgument("spectrum density must be non-negative");
  }
  Spectrum(WavelengthGrid grid, std::vector<double> density)
      : Spectrum(TabulatedCurve(std::move(grid), std::move(density))) {}

  const WavelengthGrid& grid() const noexcept { return density_.grid(); }
  const std::vector<double>& density() const noexcept { return density_.values(); }
  const TabulatedCurve& curve() const noexcept { return density_; }

  double total() const { return integrate(density_); }

  Spectrum resample(const WavelengthGrid& target) const { return Spectrum(density_.resample(target)); }

  // Peak normalised copy; an all-zero spectrum is returned unchanged.
  Spectrum normalized_to_peak() const {
    const auto& d = density();
    const double peak = *std::max_element(d.begin(), d.end());
    if (!(peak > 0.0)) return *this;
    std::vector<double> v(d);
    for (double& x : v) x /= peak;
    return Spectrum(grid(), std::move(v));
  }

 private:
  TabulatedCurve density_;
};

struct AtmosphereModel {
  TabulatedCurve zenith_transmission;     // rho_atm(lambda), in [0,1]
  TabulatedCurve rayleigh_optical_depth;  // tau(lambda) >= 0

  AtmosphereModel(TabulatedCurve transmission, TabulatedCurve tau)
      : zenith_transmission(std::move(transmission)), rayleigh_optical_depth(std::move(tau)) {
    if (!(zenith_transmission.grid() == rayleigh_optical_depth.grid()))
      throw InvalidArgument("atmosphere curves must share a grid");
    if (!zenith_transmission.all_within(0.0, 1.0))
      throw InvalidArgument("atmospheric transmission must lie in [0,1]");
    for (double t : rayleigh_optical_depth.values())
      if (t < 0.0) throw InvalidArgument("optical depth must be non-negative");
  }

  const WavelengthGrid& grid() const noexcept { return zenith_transmission.grid(); }

  AtmosphereModel resample(const WavelengthGrid& target) const {
    return AtmosphereModel(zenith_transmission.resample(target), rayleigh_optical_depth.resample(target));
  }
};

struct InstrumentResponse {
  TabulatedCurve lens_transmission;
  TabulatedCurve detector_efficiency;
  TabulatedCurve blue_path_probability;  // B(lambda)
  TabulatedCurve red_path_probability;   // R(lambda)
  double cutoff_nm;                      // lambda'

  InstrumentResponse(TabulatedCurve lens, TabulatedCurve det, TabulatedCurve blue, TabulatedCurve red,
                     double cutoff = kDefaultCutoffNm)
      : lens_transmission(std::move(lens)),
        detector_efficiency(std::move(det)),
        blue_path_probability(std::move(blue)),
        red_path_probability(std::move(red)),
        cutoff_nm(cutoff) {
    const auto& g = lens_transmission.grid();
    if (!(detector_efficiency.grid() == g) || !(blue_path_probability.grid() == g) ||
        !(red_path_probability.grid() == g))
      throw InvalidArgument("instrument curves must share a grid");
    for (const auto* c : {&lens_transmission, &detector_efficiency, &blue_path_probability, &red_path_probability})
      if (!c->all_within(0.0, 1.0)) throw InvalidArgument("instrument probabilities must lie in [0,1]");
    for (std::size_t i = 0; i < g.size(); ++i)
      if (blue_path_probability[i] + red_path_probability[i] > 1.0 + 1e-12)
        throw InvalidArgument("R + B exceeds 1 at " + std::to_string(g[i]) + " nm");
    if (!(cutoff_nm >= g.front() && cutoff_nm <= g.back()))
      throw InvalidArgument("cutoff wavelength outside the grid");
  }

  const WavelengthGrid& grid() const noexcept { return lens_transmission.grid(); }

  InstrumentResponse resample(const WavelengthGrid& target) const {
    return InstrumentResponse(lens_transmission.resample(target), detector_efficiency.resample(target),
                              blue_path_probability.resample(target), red_path_probability.resample(target),
                              cutoff_nm);
  }
};

struct CrosstalkFractions {
  double b_to_r = 0.0;
  double r_to_b = 0.0;

  void validate() const {
    if (!(b_to_r >= 0.0 && b_to_r <= 1.0) || !(r_to_b >= 0.0 && r_to_b <= 1.0))
      throw InvalidArgument("crosstalk fractions must lie in [0,1]");
  }
};

struct ArmResponse {
  TabulatedCurve blue;
  TabulatedCurve red;
};

struct ArmRates {
  double blue = 0.0;  // Hz
  double red = 0.0;   // Hz
};

// Planck photon-count radiance, lambda^-4 / (exp(hc / lambda k T) - 1),
// scaled to unit peak.
inline Spectrum blackbody_spectrum(double temperature_k, const WavelengthGrid& grid) {
  if (!(temperature_k > 0.0) || !std::isfinite(temperature_k))
    throw InvalidArgument("blackbody temperature must be positive");
  constexpr double kSecondRadiationNmK = 1.438776877e7;  // hc/k in nm K
  std::vector<double> d(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double lam = grid[i];
    const double x = kSecondRadiationNmK / (lam * temperature_k);
    // Photon counts: energy radiance lambda^-5/(e^x - 1) divided by hc/lambda.
    d[i] = x > 700.0 ? 0.0 : std::pow(lam, -4.0) / std::expm1(x);
  }
  return Spectrum(grid, std::move(d)).normalized_to_peak();
}

// Observed-frame spectrum: rest wavelength lambda maps to lambda (1+z). The
// density picks up the 1/(1+z) stretch of d(lambda) so photon number is
// conserved. Output is tabulated on `out_grid`; outside the source range the
// density is 0.
inline Spectrum redshift_spectrum(const Spectrum& s, double z, const WavelengthGrid& out_grid) {
  if (!(z >= 0.0) || !std::isfinite(z)) throw InvalidArgument("redshift must be non-negative");
  const double stretch = 1.0 + z;
  std::vector<double> d(out_grid.size());
  for (std::size_t i = 0; i < out_grid.size(); ++i)
    d[i] = std::max(0.0, s.curve().at(out_grid[i] / stretch, 0.0)) / stretch;
  return Spectrum(out_grid, std::move(d));
}

inline Spectrum redshift_spectrum(const Spectrum& s, double z) { return redshift_spectrum(s, z, s.grid()); }

// N_in = N_source * rho_atm * exp(-X tau).
inline Spectrum attenuate(const Spectrum& s, const AtmosphereModel& atm, double airmass) {
  if (!std::isfinite(airmass) || airmass < 0.0 || (airmass > 0.0 && airmass < 1.0))
    throw InvalidArgument("airmass must be >= 1 (or 0 for no Rayleigh term)");
  if (!(s.grid() == atm.grid())) throw InvalidArgument("spectrum and atmosphere are on different grids");
  std::vector<double> d(s.density());
  const auto& rho = atm.zenith_transmission.values();
  const auto& tau = atm.rayleigh_optical_depth.values();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] *= rho[i] * std::exp(-airmass * tau[i]);
  return Spectrum(s.grid(), std::move(d));
}

// rho_blue = B rho_lens^2 rho_det, rho_red = R rho_lens^2 rho_det (two lenses
// in each arm).
inline ArmResponse arm_spectral_response(const InstrumentResponse& resp) {
  const auto& g = resp.grid();
  std::vector<double> blue(g.size()), red(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double lens = resp.lens_transmission[i];
    const double common = lens * lens * resp.detector_efficiency[i];
    blue[i] = resp.blue_path_probability[i] * common;
    red[i] = resp.red_path_probability[i] * common;
  }
  return {TabulatedCurve(g, std::move(blue)), TabulatedCurve(g, std::move(red))};
}

// f_{b->r}: fraction of red-arm photons (weighted by N_in R) with lambda below
// the cutoff; f_{r->b}: fraction of blue-arm photons above it.
inline CrosstalkFractions crosstalk_fractions(const Spectrum& n_in, const InstrumentResponse& resp) {
  if (!(n_in.grid() == resp.grid())) throw InvalidArgument("spectrum and instrument are on different grids");
  const auto red_weighted = multiply(n_in.curve(), resp.red_path_probability);
  const auto blue_weighted = multiply(n_in.curve(), resp.blue_path_probability);
  const double red_total = integrate(red_weighted);
  const double blue_total = integrate(blue_weighted);
  if (!(red_total > 0.0)) throw InvalidArgument("no flux reaches the red arm; f_b->r undefined");
  if (!(blue_total > 0.0)) throw InvalidArgument("no flux reaches the blue arm; f_r->b undefined");
  const double lo = n_in.grid().front();
  const double hi = n_in.grid().back();
  CrosstalkFractions f;
  f.b_to_r = std::clamp(integrate(red_weighted, lo, resp.cutoff_nm) / red_total, 0.0, 1.0);
  f.r_to_b = std::clamp(integrate(blue_weighted, resp.cutoff_nm, hi) / blue_total, 0.0, 1.0);
  return f;
}

// s_j = scale * integral(rho_j N_in).
inline ArmRates expected_arm_rates(const Spectrum& n_in, const InstrumentResponse& resp, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidArgument("throughput scale must be positive");
  if (!(n_in.grid() == resp.grid())) throw InvalidArgument("spectrum and instrument are on different grids");
  const auto arms = arm_spectral_response(resp);
  return {scale * integrate(multiply(arms.blue, n_in.curve())),
          scale * integrate(multiply(arms.red, n_in.curve()))};
}

}  // namespace arng::spectral
