#pragma once

// JSON serialisation of every report type. Reports carry a schema version
// and, when produced by the CLI, the run manifest.

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

#include "arng/bit_extraction.hpp"
#include "arng/calibration.hpp"
#include "arng/config.hpp"
#include "arng/eraser.hpp"
#include "arng/photon_stream.hpp"
#include "arng/pipeline.hpp"
#include "arng/randomness_analysis.hpp"
#include "arng/spectral_model.hpp"
#include "arng/validity.hpp"

namespace arng::report {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json to_json(const spectral::CrosstalkFractions& f) { return {{"f_b_to_r", f.b_to_r}, {"f_r_to_b", f.r_to_b}}; }

inline json to_json(const validity::DetectorObservation& d) {
  return {{"blue", {{"observed_rate", d.blue.observed_rate}, {"noise_rate", d.blue.noise_rate}}},
          {"red", {{"observed_rate", d.red.observed_rate}, {"noise_rate", d.red.noise_rate}}},
          {"crosstalk", to_json(d.crosstalk)}};
}

inline json to_json(const validity::ValidityBudget& b) {
  return {{"unmixed_flux", {{"blue", b.fluxes.blue}, {"red", b.fluxes.red}}},
          {"p_blue", b.p_blue},
          {"p_red", b.p_red},
          {"p_detector", b.p_detector},
          {"q_detector", b.q_detector},
          {"symmetric_threshold", validity::kSymmetricThreshold},
          {"meets_symmetric_threshold", b.q_detector >= validity::kSymmetricThreshold}};
}

inline json to_json(const validity::BellBudget& b) {
  return {{"q_alice", b.q_alice},
          {"q_bob", b.q_bob},
          {"q_joint", b.q_joint},
          {"s_bound", b.s_bound},
          {"joint_threshold", validity::kJointThreshold},
          {"pair_sum_threshold", validity::kPairSumThreshold},
          {"passes_threshold", b.passes_threshold}};
}

inline json to_json(const stream::ScenarioConfig& c) {
  json j = {{"s_blue", c.s_blue},
            {"s_red", c.s_red},
            {"skyglow_blue", c.skyglow_blue},
            {"skyglow_red", c.skyglow_red},
            {"dark_blue", c.dark_blue},
            {"dark_red", c.dark_red},
            {"crosstalk", to_json(c.crosstalk)},
            {"dead_time", c.dead_time},
            {"jitter_sigma", c.jitter_sigma},
            {"clock_tick", c.clock_tick},
            {"clock_tick_fs", c.clock_tick_fs()},
            {"duration", c.duration},
            {"seed", c.seed}};
  if (c.scintillation)
    j["scintillation"] = {{"modulation_depth", c.scintillation->modulation_depth},
                          {"correlation_time", c.scintillation->correlation_time},
                          {"arm_coupling_mismatch", c.scintillation->arm_coupling_mismatch}};
  else
    j["scintillation"] = nullptr;
  return j;
}

inline json origin_table(const stream::OriginTable& t) {
  json j = json::object();
  for (std::size_t ch = 0; ch < stream::kChannels; ++ch) {
    json row = json::object();
    for (std::size_t o = 0; o < stream::kOrigins; ++o) row[stream::to_string(static_cast<stream::Origin>(o))] = t[ch][o];
    j[stream::to_string(static_cast<stream::Channel>(ch))] = row;
  }
  return j;
}

inline json stream_summary(const stream::TagStream& s) {
  json j = {{"events", s.events.size()},
            {"blue_events", s.count(stream::Channel::blue)},
            {"red_events", s.count(stream::Channel::red)},
            {"clock_tick_fs", s.clock_tick_fs},
            {"duration", s.duration_seconds()}};
  if (s.config) {
    j["generated"] = origin_table(s.generated);
    j["recorded"] = origin_table(s.recorded);
  }
  return j;
}

inline json to_json(const bits::ImbalanceReport& r) {
  return {{"zeros", r.zeros},
          {"ones", r.ones},
          {"ones_fraction", r.ones_fraction},
          {"window", r.window},
          {"window_ones_fraction", r.window_ones_fraction}};
}

inline json to_json(const analysis::MIEstimate& e) {
  return {{"m", e.m},
          {"n", e.n},
          {"plugin", e.plugin},
          {"half_mean", e.half_mean},
          {"quarter_mean", e.quarter_mean},
          {"corrected", e.corrected},
          {"a_hat", e.a_hat},
          {"b_hat", e.b_hat}};
}

inline json to_json(const analysis::NullDistribution& n) {
  return {{"m", n.m},
          {"kind", analysis::to_string(n.kind)},
          {"seed", n.seed},
          {"data_value", n.data_value},
          {"rank", n.rank},
          {"count", n.samples.size()},
          {"mean", n.mean},
          {"sd", n.sd},
          {"z_score", number(n.z_score)},
          {"significant", n.significant},
          {"samples", n.samples}};
}

inline json to_json(const analysis::ConditionalEntry& e) {
  return {{"history", e.history},
          {"count", e.count},
          {"ones", e.ones},
          {"p_one", e.p_one},
          {"excess", e.excess},
          {"z_score", e.z_score}};
}

inline json to_json(const analysis::ConditionalTable& t) {
  json entries = json::array();
  for (const auto& e : t.entries) entries.push_back(to_json(e));
  return {{"m", t.m}, {"p_one", t.p_one}, {"entries", entries}};
}

inline json to_json(const analysis::MIReport& r) {
  json per_m = json::array();
  for (std::size_t i = 0; i < r.estimates.size(); ++i) {
    json e = to_json(r.estimates[i]);
    e["null"] = to_json(r.nulls[i]);
    per_m.push_back(e);
  }
  json tables = json::array();
  for (const auto& t : r.tables) tables.push_back(to_json(t));
  json worst = to_json(r.worst_excess);
  worst["m"] = r.worst_m;
  return {{"n", r.n},
          {"ones_fraction", r.ones_fraction},
          {"max_m", r.options.max_m},
          {"surrogates", r.options.surrogates},
          {"surrogate_kind", analysis::to_string(r.options.kind)},
          {"seed", r.options.seed},
          {"per_m", per_m},
          {"max_corrected", r.max_corrected},
          {"argmax_m", r.argmax_m},
          {"any_significant", r.any_significant},
          {"worst_conditional_excess", worst},
          {"conditional_tables", tables}};
}

inline json to_json(const analysis::FanoReport& f) {
  return {{"bin", f.bin},
          {"bins", f.bins},
          {"mean", {{"blue", f.mean[0]}, {"red", f.mean[1]}}},
          {"fano", {{"blue", number(f.fano[0])}, {"red", number(f.fano[1])}}},
          {"band", {f.lower, f.upper}},
          {"pass", f.pass}};
}

inline json to_json(const pipeline::AnalyzeResult& r) {
  json j = {{"raw_events", r.raw_events},
            {"filtered_events", r.filtered_events},
            {"duration", r.duration},
            {"observed_rate", {{"blue", r.observed_rate_blue}, {"red", r.observed_rate_red}}},
            {"scheme", bits::to_string(r.scheme)},
            {"imbalance", to_json(r.imbalance)},
            {"mutual_information", to_json(r.mi)}};
  j["poisson_check"] = r.fano ? to_json(*r.fano) : json{{"skipped", r.fano_skipped}};
  if (r.validity) {
    j["validity"] = to_json(*r.validity);
    j["validity"]["noise"] = {{"blue", r.noise->noise_blue}, {"red", r.noise->noise_red}};
    j["validity"]["crosstalk"] = to_json(r.noise->crosstalk);
  } else {
    j["validity"] = {{"skipped", r.validity_skipped}};
  }
  return j;
}

inline json to_json(const calibration::RateFit& f) {
  return {{"model", "log10(rate / m^2) = intercept + slope * m_V"},
          {"intercept", f.intercept},
          {"intercept_error", f.intercept_error},
          {"slope", f.slope},
          {"slope_error", f.slope_error},
          {"points", f.points},
          {"residual_sd", f.residual_sd},
          {"collecting_area_m2", f.collecting_area_m2},
          {"excluded", f.excluded}};
}

inline json to_json(const eraser::FringeReport& r) {
  json series = json::array();
  for (const auto& s : r.conditioned) {
    json p = json::array();
    for (double v : s.p_signal_upper) p.push_back(number(v));
    series.push_back({{"basis", eraser::to_string(s.basis)},
                      {"env_outcome", eraser::to_string(s.env)},
                      {"trials", s.trials},
                      {"signal_upper", s.signal_upper},
                      {"p_signal_upper", p},
                      {"fit",
                       {{"offset", s.fit.offset},
                        {"amplitude", s.fit.amplitude},
                        {"phase", s.fit.phase},
                        {"visibility", s.fit.visibility}}}});
  }
  return {{"phases", r.phases},
          {"trials_per_phase", r.trials_per_phase},
          {"bits_consumed", r.bits_consumed},
          {"visibility", {{"linear_hv", r.visibility(eraser::Basis::linear_hv)},
                          {"circular_lr", r.visibility(eraser::Basis::circular_lr)}}},
          {"conditioned", series},
          {"signal_upper_marginal", r.signal_upper_marginal},
          {"marginal_sigma", r.marginal_sigma}};
}

struct RunManifest {
  std::string subcommand;
  std::string config_digest;  // sha256 of the canonical configuration text
  std::uint64_t seed = 0;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string tool_version;
  json parameters = json::object();  // everything needed to re-run
};

inline json to_json(const RunManifest& m) {
  return {{"subcommand", m.subcommand},
          {"config_digest", m.config_digest},
          {"seed", m.seed},
          {"inputs", m.inputs},
          {"outputs", m.outputs},
          {"tool_version", m.tool_version},
          {"parameters", m.parameters}};
}

inline json envelope(const std::string& kind, const RunManifest& m, json body) {
  return {{"schema", "arng-report"}, {"schema_version", kSchemaVersion}, {"kind", kind}, {"manifest", to_json(m)},
          {"report", std::move(body)}};
}

}  // namespace arng::report
