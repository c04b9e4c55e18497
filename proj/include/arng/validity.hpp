#pragma once

// Freedom-of-choice budget: per-arm corruption probabilities from noise and
// dichroic crosstalk, per-detector valid fraction, and the relaxed CHSH bound
// for a pair of detectors.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "arng/error.hpp"
#include "arng/spectral_model.hpp"

namespace arng::validity {

using spectral::CrosstalkFractions;

// Minimum joint valid fraction for a quantum-mechanical CHSH value to beat
// the relaxed local-realist bound: 2 - sqrt(2).
inline constexpr double kJointThreshold = 2.0 - std::numbers::sqrt2;
// Minimum q_alice + q_bob: 3 - sqrt(2).
inline constexpr double kPairSumThreshold = 3.0 - std::numbers::sqrt2;
// Symmetric per-detector threshold (3 - sqrt(2)) / 2.
inline constexpr double kSymmetricThreshold = kPairSumThreshold / 2.0;

struct ArmObservation {
  double observed_rate = 0.0;  // r, Hz
  double noise_rate = 0.0;     // n = dark + skyglow, Hz

  void validate(const char* arm) const {
    if (!(observed_rate > 0.0) || !std::isfinite(observed_rate))
      throw InvalidArgument(std::string(arm) + " arm: observed rate must be positive");
    if (!(noise_rate >= 0.0) || noise_rate > observed_rate)
      throw InvalidArgument(std::string(arm) + " arm: noise rate must lie in [0, observed rate]");
  }
};

struct DetectorObservation {
  ArmObservation blue;
  ArmObservation red;
  CrosstalkFractions crosstalk;

  void validate() const {
    blue.validate("blue");
    red.validate("red");
    crosstalk.validate();
  }
};

struct UnmixedFluxes {
  double blue = 0.0;  // s_blue, Hz
  double red = 0.0;   // s_red, Hz
};

struct ValidityBudget {
  double p_blue = 0.0;
  double p_red = 0.0;
  double p_detector = 0.0;
  double q_detector = 1.0;
  UnmixedFluxes fluxes;
};

struct BellBudget {
  double q_alice = 1.0;
  double q_bob = 1.0;
  double q_joint = 1.0;
  double s_bound = 2.0;
  bool passes_threshold = true;
};

// Forward model: what each arm records given true fluxes, noise and crosstalk.
//   r_blue = (1 - f_br) s_blue + f_rb s_red + n_blue
//   r_red  = (1 - f_rb) s_red  + f_br s_blue + n_red
inline DetectorObservation mix_rates(const UnmixedFluxes& s, double noise_blue, double noise_red,
                                     const CrosstalkFractions& f) {
  DetectorObservation d;
  d.crosstalk = f;
  d.blue = {(1.0 - f.b_to_r) * s.blue + f.r_to_b * s.red + noise_blue, noise_blue};
  d.red = {(1.0 - f.r_to_b) * s.red + f.b_to_r * s.blue + noise_red, noise_red};
  return d;
}

inline UnmixedFluxes unmix_rates(const DetectorObservation& det) {
  det.validate();
  const auto& f = det.crosstalk;
  const double a11 = 1.0 - f.b_to_r, a12 = f.r_to_b;
  const double a21 = f.b_to_r, a22 = 1.0 - f.r_to_b;
  const double det2 = a11 * a22 - a12 * a21;  // = 1 - f_br - f_rb
  if (std::abs(det2) < 1e-12) throw InvalidArgument("mixing matrix is singular (f_b->r + f_r->b = 1)");
  const double yb = det.blue.observed_rate - det.blue.noise_rate;
  const double yr = det.red.observed_rate - det.red.noise_rate;
  UnmixedFluxes s{(a22 * yb - a12 * yr) / det2, (a11 * yr - a21 * yb) / det2};
  if (s.blue < 0.0 || s.red < 0.0)
    throw InconsistentInputs("unmixing produced a negative flux; noise or crosstalk estimates are inconsistent");
  return s;
}

// p_j = n_j / r_j + s_j' f_{j'->j} / r_j; p = max(p_blue, p_red); q = 1 - p.
inline ValidityBudget corruption_probability(const DetectorObservation& det, const UnmixedFluxes& s) {
  det.validate();
  ValidityBudget b;
  b.fluxes = s;
  b.p_blue = det.blue.noise_rate / det.blue.observed_rate + s.red * det.crosstalk.r_to_b / det.blue.observed_rate;
  b.p_red = det.red.noise_rate / det.red.observed_rate + s.blue * det.crosstalk.b_to_r / det.red.observed_rate;
  if (b.p_blue > 1.0 || b.p_red > 1.0)
    throw InconsistentInputs("corruption probability exceeds 1; inputs are inconsistent");
  b.p_detector = std::max(b.p_blue, b.p_red);
  b.q_detector = 1.0 - b.p_detector;
  return b;
}

inline ValidityBudget corruption_probability(const DetectorObservation& det) {
  return corruption_probability(det, unmix_rates(det));
}

inline BellBudget bell_budget(double q_alice, double q_bob) {
  if (!(q_alice >= 0.0 && q_alice <= 1.0) || !(q_bob >= 0.0 && q_bob <= 1.0))
    throw InvalidArgument("valid fractions must lie in [0,1]");
  BellBudget b;
  b.q_alice = q_alice;
  b.q_bob = q_bob;
  b.q_joint = std::max(0.0, q_alice + q_bob - 1.0);
  b.s_bound = 4.0 - 2.0 * b.q_joint;
  b.passes_threshold = b.q_joint >= kJointThreshold;
  return b;
}

// Coincidence tallies for one joint setting (a_k, b_l).
struct SettingTally {
  std::uint64_t agree = 0;     // A == B
  std::uint64_t disagree = 0;  // A != B
};

struct ChshResult {
  // E[k][l] for settings a_{k+1}, b_{l+1}.
  std::array<std::array<double, 2>, 2> correlation{};
  double s = 0.0;
};

// S = |E11 + E12 + E21 - E22| with E_kl = 2 p(A = B | a_k b_l) - 1.
inline ChshResult chsh_from_coincidences(const std::array<std::array<SettingTally, 2>, 2>& tallies) {
  ChshResult r;
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l) {
      const auto& t = tallies[k][l];
      const auto total = t.agree + t.disagree;
      if (total == 0) throw InsufficientData("no coincidences for a joint setting");
      r.correlation[k][l] = 2.0 * static_cast<double>(t.agree) / static_cast<double>(total) - 1.0;
    }
  const auto& e = r.correlation;
  r.s = std::abs(e[0][0] + e[0][1] + e[1][0] - e[1][1]);
  return r;
}

}  // namespace arng::validity
