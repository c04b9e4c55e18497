#pragma once

// Statistical predictability of a bitstream.
//
// The mutual information between an m-bit history and the following bit is
// estimated by plugging empirical (m+1)-gram frequencies (overlapping
// windows) into
//
//   I(m; m+1) = sum_{x,y} p(x,y) log2( p(x,y) / (p(x) p(y)) ).
//
// The plug-in value is biased upward at finite N. Assuming
// I_N = I + a/N + b/N^2 and evaluating on the full stream (u), the mean of
// two contiguous halves (v) and the mean of four contiguous quarters (w)
// gives I = (8u - 6v + w) / 3. Significance is judged against surrogate
// streams with the same length and ones-fraction but no memory.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "arng/bit_extraction.hpp"
#include "arng/error.hpp"
#include "arng/photon_stream.hpp"

namespace arng::analysis {

using Bits = std::span<const std::uint8_t>;

inline constexpr int kMaxDepth = 24;
inline constexpr int kDefaultMaxDepth = 6;
inline constexpr std::size_t kDefaultSurrogates = 50;

inline std::size_t min_plugin_length(int m) { return std::size_t{1} << (m + 4); }
inline std::size_t min_corrected_length(int m) { return std::size_t{1} << (m + 6); }

inline void check_depth(int m) {
  if (m < 1 || m > kMaxDepth) throw InvalidArgument("lookback depth must lie in [1, " + std::to_string(kMaxDepth) + "]");
}

// Overlapping (m+1)-gram counts. Index = (history << 1) | next, history
// packed oldest bit first (most significant).
struct GramCounts {
  int m = 1;
  std::vector<std::uint64_t> joint;
  std::uint64_t windows = 0;
};

inline GramCounts count_grams(Bits bits, int m) {
  check_depth(m);
  GramCounts g;
  g.m = m;
  g.joint.assign(std::size_t{1} << (m + 1), 0);
  if (bits.size() <= static_cast<std::size_t>(m)) return g;
  const std::uint32_t mask = (std::uint32_t{1} << (m + 1)) - 1;
  std::uint32_t code = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    code = ((code << 1) | (bits[i] & 1u)) & mask;
    if (i >= static_cast<std::size_t>(m)) ++g.joint[code];
  }
  g.windows = bits.size() - static_cast<std::size_t>(m);
  return g;
}

inline double mutual_information(const GramCounts& g) {
  if (g.windows == 0) return 0.0;
  const std::size_t histories = g.joint.size() / 2;
  std::array<std::uint64_t, 2> next{};
  std::vector<std::uint64_t> hist(histories, 0);
  for (std::size_t x = 0; x < histories; ++x)
    for (std::size_t y = 0; y < 2; ++y) {
      hist[x] += g.joint[2 * x + y];
      next[y] += g.joint[2 * x + y];
    }
  const double w = static_cast<double>(g.windows);
  double info = 0.0;
  for (std::size_t x = 0; x < histories; ++x)
    for (std::size_t y = 0; y < 2; ++y) {
      const auto nxy = g.joint[2 * x + y];
      if (nxy == 0) continue;  // 0 log 0 = 0
      const double ratio = static_cast<double>(nxy) * w / (static_cast<double>(hist[x]) * static_cast<double>(next[y]));
      info += static_cast<double>(nxy) / w * std::log2(ratio);
    }
  return std::max(0.0, info);
}

inline double plugin_mutual_information(Bits bits, int m) {
  check_depth(m);
  if (bits.size() < min_plugin_length(m))
    throw InsufficientData("need at least " + std::to_string(min_plugin_length(m)) + " bits for m = " +
                           std::to_string(m) + ", have " + std::to_string(bits.size()));
  return mutual_information(count_grams(bits, m));
}

inline double plugin_mutual_information(const bits::BitStream& b, int m) { return plugin_mutual_information(Bits(b.bits), m); }

struct BiasFit {
  double info = 0.0;
  double a = 0.0;
  double b = 0.0;
};

// Solves u = I + a x + b x^2, v = I + 2a x + 4b x^2, w = I + 4a x + 16b x^2
// with x = 1/N.
inline BiasFit solve_bias_ansatz(double u, double v, double w, double n) {
  if (!(n > 0.0)) throw InvalidArgument("sample count must be positive");
  const double x = 1.0 / n;
  BiasFit f;
  f.info = (8.0 * u - 6.0 * v + w) / 3.0;
  f.b = (w - 3.0 * v + 2.0 * u) / (6.0 * x * x);
  f.a = ((v - u) - 3.0 * f.b * x * x) / x;
  return f;
}

// Mean plug-in estimate over `chunks` contiguous segments covering the data
// exactly once; boundaries at floor(k N / chunks).
inline double chunked_plugin(Bits bits, int m, std::size_t chunks) {
  double sum = 0.0;
  const std::size_t n = bits.size();
  for (std::size_t k = 0; k < chunks; ++k) {
    const std::size_t lo = k * n / chunks;
    const std::size_t hi = (k + 1) * n / chunks;
    sum += plugin_mutual_information(bits.subspan(lo, hi - lo), m);
  }
  return sum / static_cast<double>(chunks);
}

struct MIEstimate {
  int m = 1;
  double plugin = 0.0;     // u, full stream
  double half_mean = 0.0;  // v
  double quarter_mean = 0.0;  // w
  double corrected = 0.0;  // may be negative
  double a_hat = 0.0;
  double b_hat = 0.0;
  std::size_t n = 0;
};

inline MIEstimate corrected_mutual_information(Bits bits, int m) {
  check_depth(m);
  if (bits.size() < min_corrected_length(m))
    throw InsufficientData("need at least " + std::to_string(min_corrected_length(m)) +
                           " bits for a bias-corrected estimate at m = " + std::to_string(m) + ", have " +
                           std::to_string(bits.size()));
  MIEstimate e;
  e.m = m;
  e.n = bits.size();
  e.plugin = plugin_mutual_information(bits, m);
  e.half_mean = chunked_plugin(bits, m, 2);
  e.quarter_mean = chunked_plugin(bits, m, 4);
  const auto fit = solve_bias_ansatz(e.plugin, e.half_mean, e.quarter_mean, static_cast<double>(e.n));
  e.corrected = fit.info;
  e.a_hat = fit.a;
  e.b_hat = fit.b;
  return e;
}

inline MIEstimate corrected_mutual_information(const bits::BitStream& b, int m) {
  return corrected_mutual_information(Bits(b.bits), m);
}

inline double ones_fraction(Bits bits) {
  if (bits.empty()) return 0.0;
  const auto ones = std::count_if(bits.begin(), bits.end(), [](std::uint8_t b) { return b != 0; });
  return static_cast<double>(ones) / static_cast<double>(bits.size());
}

enum class SurrogateKind : std::uint8_t { bernoulli, permutation };

inline const char* to_string(SurrogateKind k) { return k == SurrogateKind::bernoulli ? "bernoulli" : "permutation"; }

// Surrogate `index` for a master seed; each index has its own engine so
// surrogates can be produced in any order or in parallel.
inline std::vector<std::uint8_t> surrogate_bits(Bits data, SurrogateKind kind, std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), 0x5u};
  std::mt19937_64 rng(seq);
  if (kind == SurrogateKind::permutation) {
    std::vector<std::uint8_t> out(data.begin(), data.end());
    std::shuffle(out.begin(), out.end(), rng);
    return out;
  }
  std::bernoulli_distribution coin(ones_fraction(data));
  std::vector<std::uint8_t> out(data.size());
  for (auto& b : out) b = coin(rng) ? 1 : 0;
  return out;
}

struct NullDistribution {
  int m = 1;
  SurrogateKind kind = SurrogateKind::bernoulli;
  std::uint64_t seed = 0;
  std::vector<double> samples;  // corrected MI per surrogate
  double data_value = 0.0;      // corrected MI of the data
  std::size_t rank = 0;         // surrogates strictly below the data value
  double mean = 0.0;
  double sd = 0.0;
  double z_score = 0.0;
  bool significant = false;  // above every surrogate and > 3 sd above their mean
};

inline void summarize_null(NullDistribution& nd) {
  const double n = static_cast<double>(nd.samples.size());
  nd.rank = static_cast<std::size_t>(
      std::count_if(nd.samples.begin(), nd.samples.end(), [&](double s) { return s < nd.data_value; }));
  if (nd.samples.empty()) return;
  nd.mean = std::accumulate(nd.samples.begin(), nd.samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double s : nd.samples) ss += (s - nd.mean) * (s - nd.mean);
  nd.sd = nd.samples.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  if (nd.sd > 0.0)
    nd.z_score = (nd.data_value - nd.mean) / nd.sd;
  else
    nd.z_score = nd.data_value > nd.mean ? std::numeric_limits<double>::infinity() : 0.0;
  nd.significant = nd.rank == nd.samples.size() && nd.z_score > 3.0;
}

namespace detail {

// Runs body(i) for i in [0, count) across worker threads; results must be
// written to per-index slots so the outcome is order independent.
template <typename Body>
void parallel_for(std::size_t count, Body&& body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) body(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace detail

inline NullDistribution surrogate_null(Bits data, int m, std::size_t count = kDefaultSurrogates, std::uint64_t seed = 0,
                                       SurrogateKind kind = SurrogateKind::bernoulli) {
  NullDistribution nd;
  nd.m = m;
  nd.kind = kind;
  nd.seed = seed;
  nd.data_value = corrected_mutual_information(data, m).corrected;
  nd.samples.resize(count);
  detail::parallel_for(count, [&](std::size_t i) {
    const auto s = surrogate_bits(data, kind, seed, i);
    nd.samples[i] = corrected_mutual_information(Bits(s), m).corrected;
  });
  summarize_null(nd);
  return nd;
}

struct ConditionalEntry {
  std::string history;  // oldest bit first
  std::uint64_t count = 0;
  std::uint64_t ones = 0;
  double p_one = 0.0;   // p(x -> 1)
  double excess = 0.0;  // p(x -> 1) - p(1)
  double z_score = 0.0; // excess in binomial standard errors
};

struct ConditionalTable {
  int m = 1;
  double p_one = 0.0;  // global ones fraction
  std::vector<ConditionalEntry> entries;
};

inline std::string history_string(std::size_t code, int m) {
  std::string s(static_cast<std::size_t>(m), '0');
  for (int i = 0; i < m; ++i)
    if ((code >> (m - 1 - i)) & 1u) s[static_cast<std::size_t>(i)] = '1';
  return s;
}

inline ConditionalTable conditional_probability_table(Bits bits, int m) {
  check_depth(m);
  if (bits.size() < min_plugin_length(m))
    throw InsufficientData("need at least " + std::to_string(min_plugin_length(m)) + " bits for m = " + std::to_string(m));
  const auto g = count_grams(bits, m);
  ConditionalTable t;
  t.m = m;
  t.p_one = ones_fraction(bits);
  const double sd1 = std::sqrt(t.p_one * (1.0 - t.p_one));
  const std::size_t histories = g.joint.size() / 2;
  t.entries.reserve(histories);
  for (std::size_t x = 0; x < histories; ++x) {
    ConditionalEntry e;
    e.history = history_string(x, m);
    e.ones = g.joint[2 * x + 1];
    e.count = g.joint[2 * x] + e.ones;
    if (e.count > 0) {
      e.p_one = static_cast<double>(e.ones) / static_cast<double>(e.count);
      e.excess = e.p_one - t.p_one;
      if (sd1 > 0.0) e.z_score = e.excess / (sd1 / std::sqrt(static_cast<double>(e.count)));
    }
    t.entries.push_back(std::move(e));
  }
  return t;
}

inline ConditionalTable conditional_probability_table(const bits::BitStream& b, int m) {
  return conditional_probability_table(Bits(b.bits), m);
}

struct FanoReport {
  double bin = 0.0;  // s
  std::size_t bins = 0;
  std::array<double, stream::kChannels> mean{};
  std::array<double, stream::kChannels> fano{};  // NaN for an empty channel
  double lower = 0.8;
  double upper = 1.2;
  bool pass = false;
};

// Variance-to-mean ratio of per-bin counts, per channel.
inline FanoReport poisson_variance_check(const stream::TagStream& s, double bin, double lower = 0.8,
                                         double upper = 1.2, std::size_t min_bins = 100) {
  if (!(bin > 0.0)) throw InvalidArgument("bin width must be positive");
  FanoReport r;
  r.bin = bin;
  r.lower = lower;
  r.upper = upper;
  const double duration = s.duration_seconds();
  r.bins = static_cast<std::size_t>(std::floor(duration / bin + 1e-9));
  if (r.bins < min_bins)
    throw InsufficientData("need at least " + std::to_string(min_bins) + " bins, have " + std::to_string(r.bins));
  const double origin = (s.config || s.events.empty()) ? 0.0 : s.seconds(s.events.front().tick);
  std::array<std::vector<std::uint64_t>, stream::kChannels> counts;
  for (auto& c : counts) c.assign(r.bins, 0);
  for (const auto& e : s.events) {
    const double t = s.seconds(e.tick) - origin;
    if (t < 0.0) continue;
    const auto k = static_cast<std::size_t>(std::floor(t / bin));
    if (k < r.bins) ++counts[static_cast<std::size_t>(e.channel)][k];
  }
  bool any = false;
  r.pass = true;
  for (std::size_t ch = 0; ch < stream::kChannels; ++ch) {
    const double n = static_cast<double>(r.bins);
    const double mean = std::accumulate(counts[ch].begin(), counts[ch].end(), 0.0) / n;
    r.mean[ch] = mean;
    if (mean == 0.0) {
      r.fano[ch] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double ss = 0.0;
    for (auto c : counts[ch]) ss += (static_cast<double>(c) - mean) * (static_cast<double>(c) - mean);
    r.fano[ch] = ss / (n - 1.0) / mean;
    any = true;
    r.pass = r.pass && r.fano[ch] >= lower && r.fano[ch] <= upper;
  }
  if (!any) throw InsufficientData("no events in any channel");
  return r;
}

struct MIReportOptions {
  int max_m = kDefaultMaxDepth;
  std::size_t surrogates = kDefaultSurrogates;
  std::uint64_t seed = 0;
  SurrogateKind kind = SurrogateKind::bernoulli;
};

struct MIReport {
  std::size_t n = 0;
  double ones_fraction = 0.0;
  MIReportOptions options;
  std::vector<MIEstimate> estimates;  // m = 1 .. largest estimable depth
  std::vector<NullDistribution> nulls;
  std::vector<ConditionalTable> tables;
  double max_corrected = 0.0;
  int argmax_m = 0;
  bool any_significant = false;
  int worst_m = 0;
  ConditionalEntry worst_excess;  // largest positive z-score over all tables
};

inline MIReport mi_report(Bits data, const MIReportOptions& opt = {}) {
  if (opt.max_m < 1 || opt.max_m > kMaxDepth) throw InvalidArgument("max_m out of range");
  MIReport r;
  r.n = data.size();
  r.options = opt;
  r.ones_fraction = ones_fraction(data);
  int depth = 0;
  while (depth < opt.max_m && data.size() >= min_corrected_length(depth + 1)) ++depth;
  if (depth == 0)
    throw InsufficientData("insufficient data: need at least " + std::to_string(min_corrected_length(1)) +
                           " bits, have " + std::to_string(data.size()));

  for (int m = 1; m <= depth; ++m) {
    r.estimates.push_back(corrected_mutual_information(data, m));
    r.tables.push_back(conditional_probability_table(data, m));
  }

  // One surrogate stream per index serves every depth.
  std::vector<std::vector<double>> per_surrogate(opt.surrogates);
  detail::parallel_for(opt.surrogates, [&](std::size_t i) {
    const auto s = surrogate_bits(data, opt.kind, opt.seed, i);
    per_surrogate[i].resize(static_cast<std::size_t>(depth));
    for (int m = 1; m <= depth; ++m)
      per_surrogate[i][static_cast<std::size_t>(m - 1)] = corrected_mutual_information(Bits(s), m).corrected;
  });

  r.max_corrected = -std::numeric_limits<double>::infinity();
  double worst_z = -std::numeric_limits<double>::infinity();
  for (int m = 1; m <= depth; ++m) {
    const auto& est = r.estimates[static_cast<std::size_t>(m - 1)];
    NullDistribution nd;
    nd.m = m;
    nd.kind = opt.kind;
    nd.seed = opt.seed;
    nd.data_value = est.corrected;
    for (const auto& s : per_surrogate) nd.samples.push_back(s[static_cast<std::size_t>(m - 1)]);
    summarize_null(nd);
    r.any_significant = r.any_significant || nd.significant;
    r.nulls.push_back(std::move(nd));
    if (est.corrected > r.max_corrected) {
      r.max_corrected = est.corrected;
      r.argmax_m = m;
    }
    for (const auto& e : r.tables[static_cast<std::size_t>(m - 1)].entries)
      if (e.count > 0 && e.z_score > worst_z) {
        worst_z = e.z_score;
        r.worst_excess = e;
        r.worst_m = m;
      }
  }
  return r;
}

inline MIReport mi_report(const bits::BitStream& b, const MIReportOptions& opt = {}) { return mi_report(Bits(b.bits), opt); }

}  // namespace arng::analysis
