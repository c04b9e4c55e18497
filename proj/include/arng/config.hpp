#pragma once

// Scenario configuration files.
//
// Grammar (one item per line):
//   '#' or ';' starts a comment (anywhere on a line)
//   [section]
//   key = value [unit]
// Durations accept s, ms, us, ns, ps, fs; rates accept Hz, kHz, MHz, cps.
// Bare numbers are SI (seconds, hertz).
//
// Sections and keys:
//   [source]        s_blue, s_red                                 required
//   [noise]         skyglow_blue, skyglow_red, dark_blue, dark_red required
//   [crosstalk]     f_b_to_r, f_r_to_b                            default 0
//   [detector]      dead_time (420 ns), jitter_sigma (300 ps),
//                   clock_tick (80.955 ps)
//   [run]           duration, seed                                required
//   [scintillation] modulation_depth, correlation_time (2 ms),
//                   arm_coupling_mismatch (0); the section enables it

#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "arng/error.hpp"
#include "arng/photon_stream.hpp"

namespace arng::config {

struct Entry {
  std::string value;
  std::size_t line = 0;
};

// section -> key -> entry
using Document = std::map<std::string, std::map<std::string, Entry>>;

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace detail

inline Document parse_document(std::istream& in) {
  Document doc;
  std::string section;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where, "unterminated section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where, "empty section name");
      doc[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where, "expected 'key = value'");
    if (section.empty()) throw ConfigError(where, "key outside of any [section]");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where, "empty key");
    if (value.empty()) throw ConfigError(section + "." + key, "empty value");
    auto [it, inserted] = doc[section].emplace(key, Entry{value, lineno});
    if (!inserted) throw ConfigError(section + "." + key, "duplicate key");
  }
  return doc;
}

enum class Quantity { dimensionless, duration, rate };

// Parses "420 ns", "420ns", "4.2e-7", "2 kHz".
inline double parse_quantity(const std::string& field, const std::string& text, Quantity q) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError(field, "not a number: '" + text + "'");
  }
  const auto unit = detail::trim(text.substr(pos));
  if (!std::isfinite(v)) throw ConfigError(field, "value must be finite");
  if (unit.empty()) return v;
  static const std::map<std::string, double> kDuration{{"s", 1.0},    {"ms", 1e-3},  {"us", 1e-6},
                                                       {"ns", 1e-9},  {"ps", 1e-12}, {"fs", 1e-15}};
  static const std::map<std::string, double> kRate{{"Hz", 1.0}, {"cps", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}};
  const auto& table = q == Quantity::duration ? kDuration : kRate;
  if (q != Quantity::dimensionless) {
    if (auto it = table.find(unit); it != table.end()) return v * it->second;
  }
  throw ConfigError(field, "unexpected unit '" + unit + "'");
}

inline std::uint64_t parse_seed(const std::string& field, const std::string& text) {
  try {
    std::size_t pos = 0;
    if (!text.empty() && text.front() == '-') throw std::invalid_argument(text);
    const auto v = std::stoull(text, &pos, 0);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(field, "seed must be a non-negative integer: '" + text + "'");
  }
}

class Reader {
 public:
  explicit Reader(const Document& doc) : doc_(doc) {}

  bool has_section(const std::string& s) const { return doc_.count(s) != 0; }

  const Entry* find(const std::string& section, const std::string& key) {
    used_.insert(section + "." + key);
    auto s = doc_.find(section);
    if (s == doc_.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  double required(const std::string& section, const std::string& key, Quantity q) {
    const auto* e = find(section, key);
    if (!e) throw ConfigError(section + "." + key, "missing required field");
    return parse_quantity(section + "." + key, e->value, q);
  }

  double optional(const std::string& section, const std::string& key, Quantity q, double fallback) {
    const auto* e = find(section, key);
    return e ? parse_quantity(section + "." + key, e->value, q) : fallback;
  }

  std::uint64_t required_seed(const std::string& section, const std::string& key) {
    const auto* e = find(section, key);
    if (!e) throw ConfigError(section + "." + key, "missing required field");
    return parse_seed(section + "." + key, e->value);
  }

  void reject_unknown() const {
    for (const auto& [section, keys] : doc_)
      for (const auto& [key, entry] : keys)
        if (!used_.count(section + "." + key)) throw ConfigError(section + "." + key, "unknown field");
  }

 private:
  const Document& doc_;
  std::set<std::string> used_;
};

inline stream::ScenarioConfig scenario_from_document(const Document& doc) {
  using Q = Quantity;
  Reader r(doc);
  stream::ScenarioConfig c;
  c.s_blue = r.required("source", "s_blue", Q::rate);
  c.s_red = r.required("source", "s_red", Q::rate);
  c.skyglow_blue = r.required("noise", "skyglow_blue", Q::rate);
  c.skyglow_red = r.required("noise", "skyglow_red", Q::rate);
  c.dark_blue = r.required("noise", "dark_blue", Q::rate);
  c.dark_red = r.required("noise", "dark_red", Q::rate);
  c.crosstalk.b_to_r = r.optional("crosstalk", "f_b_to_r", Q::dimensionless, 0.0);
  c.crosstalk.r_to_b = r.optional("crosstalk", "f_r_to_b", Q::dimensionless, 0.0);
  c.dead_time = r.optional("detector", "dead_time", Q::duration, stream::kDefaultDeadTime);
  c.jitter_sigma = r.optional("detector", "jitter_sigma", Q::duration, stream::kDefaultJitterSigma);
  c.clock_tick = r.optional("detector", "clock_tick", Q::duration, stream::kDefaultClockTick);
  c.duration = r.required("run", "duration", Q::duration);
  c.seed = r.required_seed("run", "seed");
  if (r.has_section("scintillation")) {
    stream::ScintillationConfig s;
    s.modulation_depth = r.required("scintillation", "modulation_depth", Q::dimensionless);
    s.correlation_time = r.optional("scintillation", "correlation_time", Q::duration, s.correlation_time);
    s.arm_coupling_mismatch = r.optional("scintillation", "arm_coupling_mismatch", Q::dimensionless, 0.0);
    c.scintillation = s;
  }
  r.reject_unknown();

  // Field-level validation messages.
  const std::pair<const char*, double> rates[] = {
      {"source.s_blue", c.s_blue},           {"source.s_red", c.s_red},
      {"noise.skyglow_blue", c.skyglow_blue}, {"noise.skyglow_red", c.skyglow_red},
      {"noise.dark_blue", c.dark_blue},       {"noise.dark_red", c.dark_red}};
  for (const auto& [name, v] : rates)
    if (v < 0.0) throw ConfigError(name, "rate must be non-negative");
  if (c.crosstalk.b_to_r < 0.0 || c.crosstalk.b_to_r > 1.0) throw ConfigError("crosstalk.f_b_to_r", "must lie in [0,1]");
  if (c.crosstalk.r_to_b < 0.0 || c.crosstalk.r_to_b > 1.0) throw ConfigError("crosstalk.f_r_to_b", "must lie in [0,1]");
  if (c.dead_time < 0.0) throw ConfigError("detector.dead_time", "must be non-negative");
  if (c.jitter_sigma < 0.0) throw ConfigError("detector.jitter_sigma", "must be non-negative");
  if (!(c.clock_tick > 0.0) || c.clock_tick_fs() == 0) throw ConfigError("detector.clock_tick", "must be positive");
  if (!(c.duration > 0.0)) throw ConfigError("run.duration", "must be positive");
  if (c.scintillation) {
    const auto& s = *c.scintillation;
    if (!(s.modulation_depth >= 0.0 && s.modulation_depth < 1.0))
      throw ConfigError("scintillation.modulation_depth", "must lie in [0,1)");
    if (!(s.correlation_time > 0.0)) throw ConfigError("scintillation.correlation_time", "must be positive");
    if (!(s.arm_coupling_mismatch >= 0.0 && s.arm_coupling_mismatch <= 1.0))
      throw ConfigError("scintillation.arm_coupling_mismatch", "must lie in [0,1]");
  }
  return c;
}

inline stream::ScenarioConfig parse_scenario(std::istream& in) { return scenario_from_document(parse_document(in)); }

inline stream::ScenarioConfig parse_scenario(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

inline stream::ScenarioConfig read_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file " + path);
  return parse_scenario(in);
}

namespace detail {

inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

// Canonical text: every field, SI units, fixed order, round-trip precision.
// parse_scenario(canonical(c)) reproduces c exactly.
inline std::string canonical(const stream::ScenarioConfig& c) {
  using detail::num;
  std::ostringstream o;
  o << "[source]\ns_blue = " << num(c.s_blue) << "\ns_red = " << num(c.s_red) << "\n";
  o << "[noise]\nskyglow_blue = " << num(c.skyglow_blue) << "\nskyglow_red = " << num(c.skyglow_red)
    << "\ndark_blue = " << num(c.dark_blue) << "\ndark_red = " << num(c.dark_red) << "\n";
  o << "[crosstalk]\nf_b_to_r = " << num(c.crosstalk.b_to_r) << "\nf_r_to_b = " << num(c.crosstalk.r_to_b) << "\n";
  o << "[detector]\ndead_time = " << num(c.dead_time) << "\njitter_sigma = " << num(c.jitter_sigma)
    << "\nclock_tick = " << num(c.clock_tick) << "\n";
  o << "[run]\nduration = " << num(c.duration) << "\nseed = " << c.seed << "\n";
  if (c.scintillation) {
    const auto& s = *c.scintillation;
    o << "[scintillation]\nmodulation_depth = " << num(s.modulation_depth)
      << "\ncorrelation_time = " << num(s.correlation_time)
      << "\narm_coupling_mismatch = " << num(s.arm_coupling_mismatch) << "\n";
  }
  return o.str();
}

}  // namespace arng::config
