#pragma once

// Stand-in optical models for the instrument: logistic dichroic edges,
// lens and APD efficiency curves, Rayleigh optical depth. Every curve can
// be replaced by a tabulated file (see spectral_io.hpp).

#include <array>
#include <cmath>
#include <utility>

#include "arng/spectral_model.hpp"

namespace arng::spectral {

struct DichroicEdge {
  double center_nm;
  double width_nm = 5.0;
  double leakage = 1e-3;  // floor and ceiling leakage epsilon
};

// Short-pass transmission: eps + (1 - 2 eps) / (1 + exp((lambda - c) / w)).
inline double shortpass_transmission(const DichroicEdge& e, double nm) {
  return e.leakage + (1.0 - 2.0 * e.leakage) / (1.0 + std::exp((nm - e.center_nm) / e.width_nm));
}

// Long-pass transmission, mirror image of the short-pass edge.
inline double longpass_transmission(const DichroicEdge& e, double nm) {
  return e.leakage + (1.0 - 2.0 * e.leakage) / (1.0 + std::exp(-(nm - e.center_nm) / e.width_nm));
}

struct DichroicPair {
  DichroicEdge shortpass{697.0};
  DichroicEdge longpass{705.0};
};

// Short-pass first: its transmitted beam is the blue arm; its reflection hits
// the long-pass, whose transmitted beam is the red arm. The long-pass
// reflection is dumped, so R + B <= 1.
inline std::pair<TabulatedCurve, TabulatedCurve> dichroic_path_probabilities(const WavelengthGrid& grid,
                                                                            const DichroicPair& pair = {}) {
  auto blue = TabulatedCurve::from_function(grid, [&](double nm) { return shortpass_transmission(pair.shortpass, nm); });
  auto red = TabulatedCurve::from_function(grid, [&](double nm) {
    return (1.0 - shortpass_transmission(pair.shortpass, nm)) * longpass_transmission(pair.longpass, nm);
  });
  return {std::move(blue), std::move(red)};
}

namespace detail {

template <std::size_t N>
double knot_interp(const std::array<std::pair<double, double>, N>& knots, double nm) {
  if (nm <= knots.front().first) return knots.front().second;
  if (nm >= knots.back().first) return knots.back().second;
  for (std::size_t i = 1; i < N; ++i) {
    if (nm <= knots[i].first) {
      const auto [x0, y0] = knots[i - 1];
      const auto [x1, y1] = knots[i];
      return y0 + (nm - x0) / (x1 - x0) * (y1 - y0);
    }
  }
  return knots.back().second;
}

}  // namespace detail

// AR-coated achromat: ~97% with a roll-off toward the near UV.
inline TabulatedCurve standin_lens_transmission(const WavelengthGrid& grid) {
  return TabulatedCurve::from_function(grid, [](double nm) {
    return std::clamp(0.97 - 0.12 * std::exp(-(nm - 350.0) / 30.0), 0.0, 1.0);
  });
}

// Silicon APD quantum efficiency, peaking near 80% in the 600-800 nm range.
inline TabulatedCurve standin_detector_efficiency(const WavelengthGrid& grid) {
  static constexpr std::array<std::pair<double, double>, 9> kKnots{{{300.0, 0.20},
                                                                    {350.0, 0.35},
                                                                    {450.0, 0.60},
                                                                    {600.0, 0.78},
                                                                    {800.0, 0.80},
                                                                    {900.0, 0.70},
                                                                    {1000.0, 0.45},
                                                                    {1100.0, 0.15},
                                                                    {1150.0, 0.08}}};
  return TabulatedCurve::from_function(grid, [](double nm) { return detail::knot_interp(kKnots, nm); });
}

// tau(lambda) = tau0 (lambda0 / lambda)^4.
inline TabulatedCurve rayleigh_optical_depth(const WavelengthGrid& grid, double tau0 = 0.1,
                                             double reference_nm = 550.0) {
  if (tau0 < 0.0 || !(reference_nm > 0.0)) throw InvalidArgument("invalid Rayleigh parameters");
  return TabulatedCurve::from_function(grid, [&](double nm) { return tau0 * std::pow(reference_nm / nm, 4.0); });
}

inline InstrumentResponse standin_instrument(const WavelengthGrid& grid, double cutoff_nm = kDefaultCutoffNm,
                                             const DichroicPair& pair = {}) {
  auto [blue, red] = dichroic_path_probabilities(grid, pair);
  return InstrumentResponse(standin_lens_transmission(grid), standin_detector_efficiency(grid), std::move(blue),
                            std::move(red), cutoff_nm);
}

// Perfect dichroics: B = 1 strictly below the cutoff, R = 1 strictly above.
inline InstrumentResponse ideal_step_instrument(const WavelengthGrid& grid, double cutoff_nm = kDefaultCutoffNm) {
  auto blue = TabulatedCurve::from_function(grid, [&](double nm) { return nm < cutoff_nm ? 1.0 : 0.0; });
  auto red = TabulatedCurve::from_function(grid, [&](double nm) { return nm > cutoff_nm ? 1.0 : 0.0; });
  return InstrumentResponse(TabulatedCurve::constant(grid, 1.0), TabulatedCurve::constant(grid, 1.0),
                            std::move(blue), std::move(red), cutoff_nm);
}

}  // namespace arng::spectral
