#pragma once

// Seeded time-tag simulator for a two-arm (blue/red) single-photon receiver.
//
// Pipeline per run:
//   1. independent Poisson components per arm: astronomical, wrong-way
//      (crosstalk from the other colour), skyglow, dark counts;
//   2. optional scintillation: astronomical + wrong-way components of each
//      arm are multiplied by a mean-one log-normal Ornstein-Uhlenbeck
//      process, partially decorrelated between arms;
//   3. per-channel non-paralyzable dead time;
//   4. Gaussian timing jitter;
//   5. quantisation to clock ticks and a final (tick, channel) sort.
//
// The intensity is piecewise constant over fixed chunks, so arrivals are
// drawn with exponential gaps restarted at each chunk boundary (exact by
// memorylessness).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "arng/error.hpp"
#include "arng/spectral_model.hpp"

namespace arng::stream {

using spectral::CrosstalkFractions;

enum class Channel : std::uint8_t { blue = 0, red = 1 };
enum class Origin : std::uint8_t { astronomical = 0, wrongway = 1, skyglow = 2, dark = 3, unknown = 4 };

inline constexpr std::size_t kChannels = 2;
inline constexpr std::size_t kOrigins = 4;

inline constexpr double kDefaultDeadTime = 420e-9;      // s
inline constexpr double kDefaultJitterSigma = 300e-12;  // s
inline constexpr double kDefaultClockTick = 80.955e-12; // s

inline const char* to_string(Channel c) { return c == Channel::blue ? "blue" : "red"; }

inline const char* to_string(Origin o) {
  switch (o) {
    case Origin::astronomical: return "astronomical";
    case Origin::wrongway: return "wrongway";
    case Origin::skyglow: return "skyglow";
    case Origin::dark: return "dark";
    default: return "unknown";
  }
}

struct ScintillationConfig {
  double modulation_depth = 0.0;    // standard deviation of the mean-one multiplier, in [0,1)
  double correlation_time = 2e-3;   // s
  double arm_coupling_mismatch = 0.0;  // 0: arms see the same pattern, 1: independent

  void validate() const {
    if (!(modulation_depth >= 0.0 && modulation_depth < 1.0))
      throw InvalidArgument("scintillation modulation_depth must lie in [0,1)");
    if (!(correlation_time > 0.0) || !std::isfinite(correlation_time))
      throw InvalidArgument("scintillation correlation_time must be positive");
    if (!(arm_coupling_mismatch >= 0.0 && arm_coupling_mismatch <= 1.0))
      throw InvalidArgument("scintillation arm_coupling_mismatch must lie in [0,1]");
  }
};

struct ScenarioConfig {
  double s_blue = 0.0;  // true astronomical rates, Hz
  double s_red = 0.0;
  double skyglow_blue = 0.0;
  double skyglow_red = 0.0;
  double dark_blue = 0.0;
  double dark_red = 0.0;
  CrosstalkFractions crosstalk;
  double dead_time = kDefaultDeadTime;
  double jitter_sigma = kDefaultJitterSigma;
  double clock_tick = kDefaultClockTick;
  double duration = 1.0;  // s
  std::uint64_t seed = 0;
  std::optional<ScintillationConfig> scintillation;

  void validate() const {
    for (double r : {s_blue, s_red, skyglow_blue, skyglow_red, dark_blue, dark_red})
      if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidArgument("rates must be finite and non-negative");
    crosstalk.validate();
    if (!(dead_time >= 0.0)) throw InvalidArgument("dead_time must be non-negative");
    if (!(jitter_sigma >= 0.0)) throw InvalidArgument("jitter_sigma must be non-negative");
    if (!(clock_tick > 0.0) || clock_tick_fs() == 0) throw InvalidArgument("clock_tick must be positive");
    if (!(duration > 0.0) || !std::isfinite(duration)) throw InvalidArgument("duration must be positive");
    if (scintillation) scintillation->validate();
  }

  std::uint64_t clock_tick_fs() const { return static_cast<std::uint64_t>(std::llround(clock_tick * 1e15)); }
};

struct TagEvent {
  Channel channel = Channel::blue;
  std::uint64_t tick = 0;
  Origin origin = Origin::unknown;  // ground truth, not exported

  bool operator==(const TagEvent&) const = default;
};

using OriginTable = std::array<std::array<std::uint64_t, kOrigins>, kChannels>;

struct TagStream {
  std::uint64_t clock_tick_fs = 80955;
  std::vector<TagEvent> events;
  std::optional<ScenarioConfig> config;
  OriginTable generated{};  // arrivals before the detector stage
  OriginTable recorded{};   // events present in `events`

  double clock_tick_seconds() const { return static_cast<double>(clock_tick_fs) * 1e-15; }
  double seconds(std::uint64_t tick) const { return static_cast<double>(tick) * clock_tick_seconds(); }

  // Configured duration, else the span of the recorded ticks.
  double duration_seconds() const {
    if (config) return config->duration;
    if (events.size() < 2) return clock_tick_seconds();
    return seconds(events.back().tick - events.front().tick + 1);
  }

  std::uint64_t count(Channel c) const {
    return static_cast<std::uint64_t>(
        std::count_if(events.begin(), events.end(), [c](const TagEvent& e) { return e.channel == c; }));
  }

  void recount_recorded() {
    recorded = {};
    for (const auto& e : events)
      if (e.origin != Origin::unknown)
        ++recorded[static_cast<std::size_t>(e.channel)][static_cast<std::size_t>(e.origin)];
  }
};

// Independent engines for each stage, derived from the scenario seed.
inline std::mt19937_64 stage_engine(std::uint64_t seed, std::uint32_t stage) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stage};
  return std::mt19937_64(seq);
}

struct ArmModulation {
  double blue = 1.0;
  double red = 1.0;
};

// Mean-one multiplicative seeing pattern for each arm.
//   Y_j = sqrt(1 - m) C + sqrt(m) D_j   (C, D_j unit-variance OU processes)
//   g_j = exp(sigma Y_j - sigma^2 / 2), sigma^2 = ln(1 + depth^2)
// so E[g_j] = 1, sd(g_j) = depth, and corr(Y_blue, Y_red) = 1 - m.
class ScintillationModulator {
 public:
  ScintillationModulator(const ScintillationConfig& cfg, std::uint64_t seed, double step = 0.0)
      : cfg_(cfg), rng_(stage_engine(seed, 1)) {
    cfg_.validate();
    step_ = step > 0.0 ? step : cfg_.correlation_time / 10.0;
    sigma_ = std::sqrt(std::log1p(cfg_.modulation_depth * cfg_.modulation_depth));
    decay_ = std::exp(-step_ / cfg_.correlation_time);
    kick_ = std::sqrt(1.0 - decay_ * decay_);
    std::normal_distribution<double> n01;
    common_ = n01(rng_);
    own_blue_ = n01(rng_);
    own_red_ = n01(rng_);
  }

  double step() const noexcept { return step_; }
  double log_sigma() const noexcept { return sigma_; }

  ArmModulation current() const {
    if (sigma_ == 0.0) return {};
    const double m = cfg_.arm_coupling_mismatch;
    const double a = std::sqrt(1.0 - m), b = std::sqrt(m);
    const double bias = 0.5 * sigma_ * sigma_;
    return {std::exp(sigma_ * (a * common_ + b * own_blue_) - bias),
            std::exp(sigma_ * (a * common_ + b * own_red_) - bias)};
  }

  // Value for the current interval, then advance one step.
  ArmModulation next() {
    const auto g = current();
    std::normal_distribution<double> n01;
    common_ = decay_ * common_ + kick_ * n01(rng_);
    own_blue_ = decay_ * own_blue_ + kick_ * n01(rng_);
    own_red_ = decay_ * own_red_ + kick_ * n01(rng_);
    return g;
  }

 private:
  ScintillationConfig cfg_;
  std::mt19937_64 rng_;
  double step_ = 0.0;
  double sigma_ = 0.0;
  double decay_ = 0.0;
  double kick_ = 0.0;
  double common_ = 0.0;
  double own_blue_ = 0.0;
  double own_red_ = 0.0;
};

inline std::vector<ArmModulation> scintillation_path(const ScintillationConfig& cfg, std::uint64_t seed,
                                                     std::size_t steps, double step = 0.0) {
  ScintillationModulator mod(cfg, seed, step);
  std::vector<ArmModulation> path(steps);
  for (auto& g : path) g = mod.next();
  return path;
}

namespace detail {

struct Arrival {
  double time;
  Channel channel;
  Origin origin;
};

struct Component {
  Channel channel;
  Origin origin;
  double rate;
  bool modulated;
};

inline constexpr double kUnmodulatedChunk = 1e-2;  // s

}  // namespace detail

inline TagStream simulate(const ScenarioConfig& cfg) {
  cfg.validate();
  using detail::Component;
  const auto& f = cfg.crosstalk;
  const std::array<Component, 8> components{{
      {Channel::blue, Origin::astronomical, cfg.s_blue * (1.0 - f.b_to_r), true},
      {Channel::blue, Origin::wrongway, cfg.s_red * f.r_to_b, true},
      {Channel::blue, Origin::skyglow, cfg.skyglow_blue, false},
      {Channel::blue, Origin::dark, cfg.dark_blue, false},
      {Channel::red, Origin::astronomical, cfg.s_red * (1.0 - f.r_to_b), true},
      {Channel::red, Origin::wrongway, cfg.s_blue * f.b_to_r, true},
      {Channel::red, Origin::skyglow, cfg.skyglow_red, false},
      {Channel::red, Origin::dark, cfg.dark_red, false},
  }};

  TagStream out;
  out.clock_tick_fs = cfg.clock_tick_fs();
  out.config = cfg;

  auto arrivals_rng = stage_engine(cfg.seed, 0);
  auto jitter_rng = stage_engine(cfg.seed, 2);

  std::optional<ScintillationModulator> modulator;
  if (cfg.scintillation && cfg.scintillation->modulation_depth > 0.0)
    modulator.emplace(*cfg.scintillation, cfg.seed);
  const double chunk = modulator ? modulator->step() : detail::kUnmodulatedChunk;

  std::vector<detail::Arrival> batch;
  std::vector<detail::Arrival> detected;
  std::array<double, kChannels> last_kept{-std::numeric_limits<double>::infinity(),
                                          -std::numeric_limits<double>::infinity()};

  for (std::uint64_t k = 0;; ++k) {
    const double t0 = static_cast<double>(k) * chunk;
    if (t0 >= cfg.duration) break;
    const double t1 = std::min(static_cast<double>(k + 1) * chunk, cfg.duration);
    const ArmModulation g = modulator ? modulator->next() : ArmModulation{};
    batch.clear();
    for (const auto& c : components) {
      double rate = c.rate;
      if (c.modulated) rate *= (c.channel == Channel::blue ? g.blue : g.red);
      if (!(rate > 0.0)) continue;
      std::exponential_distribution<double> gap(rate);
      for (double t = t0 + gap(arrivals_rng); t < t1; t += gap(arrivals_rng)) {
        batch.push_back({t, c.channel, c.origin});
        ++out.generated[static_cast<std::size_t>(c.channel)][static_cast<std::size_t>(c.origin)];
      }
    }
    std::sort(batch.begin(), batch.end(), [](const auto& a, const auto& b) {
      return a.time < b.time || (a.time == b.time && a.channel < b.channel);
    });
    for (const auto& a : batch) {
      auto& last = last_kept[static_cast<std::size_t>(a.channel)];
      if (a.time - last >= cfg.dead_time) {
        last = a.time;
        detected.push_back(a);
      }
    }
  }

  const double tick = out.clock_tick_seconds();
  std::normal_distribution<double> jitter(0.0, cfg.jitter_sigma > 0.0 ? cfg.jitter_sigma : 1.0);
  out.events.reserve(detected.size());
  for (const auto& a : detected) {
    double t = a.time;
    if (cfg.jitter_sigma > 0.0) t += jitter(jitter_rng);
    const double ticks = std::floor(t / tick);
    out.events.push_back({a.channel, ticks <= 0.0 ? 0 : static_cast<std::uint64_t>(ticks), a.origin});
  }
  std::stable_sort(out.events.begin(), out.events.end(), [](const TagEvent& a, const TagEvent& b) {
    return a.tick < b.tick || (a.tick == b.tick && a.channel < b.channel);
  });
  out.recount_recorded();
  return out;
}

// Greedy forward pass: keep an event iff it is more than `window` after the
// last kept event on either channel.
inline TagStream cross_channel_deadtime_filter(const TagStream& in, double window) {
  if (!(window >= 0.0) || !std::isfinite(window)) throw InvalidArgument("filter window must be non-negative");
  const auto window_fs = static_cast<unsigned __int128>(std::llround(window * 1e15));
  TagStream out;
  out.clock_tick_fs = in.clock_tick_fs;
  out.config = in.config;
  out.generated = in.generated;
  out.events.reserve(in.events.size());
  bool any = false;
  std::uint64_t last = 0;
  for (const auto& e : in.events) {
    if (any && e.tick < last) throw InvalidArgument("stream is not sorted by tick");
    if (!any || static_cast<unsigned __int128>(e.tick - last) * in.clock_tick_fs > window_fs) {
      out.events.push_back(e);
      last = e.tick;
      any = true;
    }
  }
  out.recount_recorded();
  return out;
}

}  // namespace arng::stream
