#pragma once

// End-to-end analysis of a tag stream: optional cross-channel dead-time
// filter, bit extraction, imbalance, mutual information against surrogates,
// Poisson variance check, and the validity budget of the detector.

#include <optional>
#include <string>

#include "arng/bit_extraction.hpp"
#include "arng/photon_stream.hpp"
#include "arng/randomness_analysis.hpp"
#include "arng/validity.hpp"

namespace arng::pipeline {

struct NoiseModel {
  double noise_blue = 0.0;  // dark + skyglow, Hz
  double noise_red = 0.0;
  spectral::CrosstalkFractions crosstalk;
};

struct AnalyzeOptions {
  bits::Scheme scheme = bits::Scheme::color;
  double digit_period = bits::kDefaultDigitPeriod;
  std::optional<double> filter_window = stream::kDefaultDeadTime;  // nullopt: no filter
  analysis::MIReportOptions mi;
  std::optional<NoiseModel> noise;  // default: taken from the stream's scenario, if any
  double fano_bin = 1.0;            // s
  std::size_t imbalance_window = 10000;
};

struct AnalyzeResult {
  std::size_t raw_events = 0;
  std::size_t filtered_events = 0;
  double duration = 0.0;
  double observed_rate_blue = 0.0;  // raw stream, Hz
  double observed_rate_red = 0.0;
  bits::Scheme scheme = bits::Scheme::color;
  bits::ImbalanceReport imbalance;
  analysis::MIReport mi;
  std::optional<analysis::FanoReport> fano;
  std::string fano_skipped;  // reason when `fano` is empty
  std::optional<NoiseModel> noise;
  std::optional<validity::ValidityBudget> validity;
  std::string validity_skipped;
};

inline NoiseModel noise_from_scenario(const stream::ScenarioConfig& c) {
  return {c.skyglow_blue + c.dark_blue, c.skyglow_red + c.dark_red, c.crosstalk};
}

inline AnalyzeResult analyze(const stream::TagStream& s, const AnalyzeOptions& opt = {}) {
  AnalyzeResult r;
  r.raw_events = s.events.size();
  r.scheme = opt.scheme;
  if (s.events.empty()) throw InsufficientData("insufficient data: the stream has no events");
  r.duration = s.duration_seconds();
  r.observed_rate_blue = static_cast<double>(s.count(stream::Channel::blue)) / r.duration;
  r.observed_rate_red = static_cast<double>(s.count(stream::Channel::red)) / r.duration;

  const auto filtered = opt.filter_window ? stream::cross_channel_deadtime_filter(s, *opt.filter_window) : s;
  r.filtered_events = filtered.events.size();
  const auto b = opt.scheme == bits::Scheme::color ? bits::bits_from_color(filtered)
                                                   : bits::bits_from_time_parity(filtered, opt.digit_period);
  r.imbalance = bits::imbalance_report(b, opt.imbalance_window);
  r.mi = analysis::mi_report(b, opt.mi);

  try {
    r.fano = analysis::poisson_variance_check(s, opt.fano_bin);
  } catch (const InsufficientData& e) {
    r.fano_skipped = e.what();
  }

  r.noise = opt.noise;
  if (!r.noise && s.config) r.noise = noise_from_scenario(*s.config);
  if (!r.noise) {
    r.validity_skipped = "no noise/crosstalk model supplied";
  } else {
    validity::DetectorObservation det{{r.observed_rate_blue, r.noise->noise_blue},
                                      {r.observed_rate_red, r.noise->noise_red},
                                      r.noise->crosstalk};
    try {
      r.validity = validity::corruption_probability(det);
    } catch (const Error& e) {
      r.validity_skipped = e.what();
    }
  }
  return r;
}

}  // namespace arng::pipeline
