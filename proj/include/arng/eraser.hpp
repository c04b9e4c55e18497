#pragma once

// Delayed-choice quantum eraser driven by generated bits. The environment
// photon is measured in the linear (H/V) basis for bit 0 and the circular
// (L/R) basis for bit 1. Coincidence probabilities:
//
//   linear:   P(env, sig) = 1/4
//   circular: P(u,u) = P(l,l) = (1 + sin phi)/4, P(u,l) = P(l,u) = (1 - sin phi)/4
//
// The signal marginal is 1/2 in either basis; fringes appear only after
// sorting by basis and environment outcome.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "arng/error.hpp"

namespace arng::eraser {

enum class Basis : std::uint8_t { linear_hv = 0, circular_lr = 1 };
enum class Outcome : std::uint8_t { upper = 0, lower = 1 };

inline const char* to_string(Basis b) { return b == Basis::linear_hv ? "linear_hv" : "circular_lr"; }
inline const char* to_string(Outcome o) { return o == Outcome::upper ? "upper" : "lower"; }

inline double coincidence_probability(Basis basis, Outcome env, Outcome signal, double phase) {
  if (!std::isfinite(phase)) throw InvalidArgument("phase must be finite");
  if (basis == Basis::linear_hv) return 0.25;
  const double s = std::sin(phase);
  return env == signal ? 0.25 * (1.0 + s) : 0.25 * (1.0 - s);
}

struct EraserTrial {
  Basis basis;
  Outcome env;
  Outcome signal;
  double phase;
};

struct SinusoidFit {
  double offset = 0.0;     // A
  double amplitude = 0.0;  // |B|
  double phase = 0.0;      // delta in A + B sin(phi + delta)
  double visibility = 0.0; // |B| / A, clamped to [0,1]
};

// Least-squares fit of y = A + c1 sin(phi) + c2 cos(phi).
inline SinusoidFit fit_sinusoid(std::span<const double> phases, std::span<const double> y) {
  if (phases.size() != y.size()) throw InvalidArgument("fit_sinusoid: size mismatch");
  std::array<std::array<double, 4>, 3> m{};  // augmented normal equations
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const std::array<double, 3> basis{1.0, std::sin(phases[i]), std::cos(phases[i])};
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m[r][c] += basis[r] * basis[c];
      m[r][3] += basis[r] * y[i];
    }
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[pivot][col])) pivot = r;
    if (std::abs(m[pivot][col]) < 1e-12) throw InsufficientData("phases do not determine a sinusoid (need 3 distinct)");
    std::swap(m[col], m[pivot]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double k = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= k * m[col][c];
    }
  }
  const double a = m[0][3] / m[0][0];
  const double c1 = m[1][3] / m[1][1];
  const double c2 = m[2][3] / m[2][2];
  SinusoidFit f;
  f.offset = a;
  f.amplitude = std::hypot(c1, c2);
  f.phase = std::atan2(c2, c1);
  f.visibility = a > 0.0 ? std::clamp(f.amplitude / a, 0.0, 1.0) : 0.0;
  return f;
}

struct FringeSeries {
  Basis basis;
  Outcome env;
  std::vector<std::uint64_t> trials;         // per phase
  std::vector<std::uint64_t> signal_upper;   // per phase
  std::vector<double> p_signal_upper;        // per phase, NaN if no trials
  SinusoidFit fit;
};

struct FringeReport {
  std::vector<double> phases;
  std::uint64_t trials_per_phase = 0;
  std::uint64_t bits_consumed = 0;
  std::array<FringeSeries, 4> conditioned;   // (linear,upper) (linear,lower) (circular,upper) (circular,lower)
  std::vector<double> signal_upper_marginal; // per phase, unconditioned
  std::vector<double> marginal_sigma;        // binomial sd at p = 1/2

  const FringeSeries& series(Basis b, Outcome env) const {
    return conditioned[static_cast<std::size_t>(b) * 2 + static_cast<std::size_t>(env)];
  }

  // Visibility of the better-populated environment outcome's fringe.
  double visibility(Basis b) const {
    const auto& u = series(b, Outcome::upper);
    const auto& l = series(b, Outcome::lower);
    double nu = 0, nl = 0;
    for (auto t : u.trials) nu += static_cast<double>(t);
    for (auto t : l.trials) nl += static_cast<double>(t);
    return nu >= nl ? u.fit.visibility : l.fit.visibility;
  }
};

using TrialLog = std::function<void(const EraserTrial&)>;

// One bit per trial picks the basis (0 linear, 1 circular); outcomes are
// drawn from coincidence_probability with an engine seeded by `seed`.
inline FringeReport simulate_eraser(std::span<const std::uint8_t> basis_bits, const std::vector<double>& phases,
                                    std::uint64_t trials_per_phase, std::uint64_t seed = 0,
                                    const TrialLog& log = {}) {
  if (phases.empty()) throw InvalidArgument("phase schedule is empty");
  if (trials_per_phase == 0) throw InvalidArgument("trials per phase must be positive");
  const std::uint64_t needed = trials_per_phase * phases.size();
  if (basis_bits.size() < needed)
    throw InsufficientData("bit exhaustion: need " + std::to_string(needed) + " basis bits, have " +
                           std::to_string(basis_bits.size()));

  FringeReport r;
  r.phases = phases;
  r.trials_per_phase = trials_per_phase;
  r.bits_consumed = needed;
  for (std::size_t k = 0; k < 4; ++k) {
    auto& s = r.conditioned[k];
    s.basis = static_cast<Basis>(k / 2);
    s.env = static_cast<Outcome>(k % 2);
    s.trials.assign(phases.size(), 0);
    s.signal_upper.assign(phases.size(), 0);
  }
  r.signal_upper_marginal.assign(phases.size(), 0.0);
  r.marginal_sigma.assign(phases.size(), 0.5 / std::sqrt(static_cast<double>(trials_per_phase)));

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0xE5u};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::size_t bit = 0;
  for (std::size_t p = 0; p < phases.size(); ++p) {
    const double phi = phases[p];
    std::uint64_t marginal_upper = 0;
    for (std::uint64_t t = 0; t < trials_per_phase; ++t) {
      const auto basis = basis_bits[bit++] ? Basis::circular_lr : Basis::linear_hv;
      double u = unif(rng);
      Outcome env = Outcome::lower, sig = Outcome::lower;
      for (int k = 0; k < 4; ++k) {
        const auto e = static_cast<Outcome>(k / 2), s = static_cast<Outcome>(k % 2);
        const double pk = coincidence_probability(basis, e, s, phi);
        if (u < pk || k == 3) {
          env = e;
          sig = s;
          break;
        }
        u -= pk;
      }
      auto& series = r.conditioned[static_cast<std::size_t>(basis) * 2 + static_cast<std::size_t>(env)];
      ++series.trials[p];
      if (sig == Outcome::upper) {
        ++series.signal_upper[p];
        ++marginal_upper;
      }
      if (log) log({basis, env, sig, phi});
    }
    r.signal_upper_marginal[p] = static_cast<double>(marginal_upper) / static_cast<double>(trials_per_phase);
  }

  for (auto& s : r.conditioned) {
    s.p_signal_upper.resize(phases.size());
    std::vector<double> xs, ys;
    for (std::size_t p = 0; p < phases.size(); ++p) {
      if (s.trials[p] == 0) {
        s.p_signal_upper[p] = std::nan("");
        continue;
      }
      s.p_signal_upper[p] = static_cast<double>(s.signal_upper[p]) / static_cast<double>(s.trials[p]);
      xs.push_back(phases[p]);
      ys.push_back(s.p_signal_upper[p]);
    }
    if (xs.size() >= 3) {
      try {
        s.fit = fit_sinusoid(xs, ys);
      } catch (const InsufficientData&) {
        s.fit = {};
      }
    }
  }
  return r;
}

inline std::vector<double> uniform_phases(std::size_t count) {
  std::vector<double> p(count);
  for (std::size_t i = 0; i < count; ++i) p[i] = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
  return p;
}

}  // namespace arng::eraser
