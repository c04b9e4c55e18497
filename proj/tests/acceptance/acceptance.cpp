// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "../oracles.hpp"
#include "arng/bit_extraction.hpp"
#include "arng/calibration.hpp"
#include "arng/config.hpp"
#include "arng/digest.hpp"
#include "arng/eraser.hpp"
#include "arng/instrument_models.hpp"
#include "arng/photon_stream.hpp"
#include "arng/pipeline.hpp"
#include "arng/randomness_analysis.hpp"
#include "arng/report.hpp"
#include "arng/spectral_io.hpp"
#include "arng/tag_stream_io.hpp"
#include "arng/validity.hpp"

using namespace arng;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Threshold algebra.
Result threshold_algebra() {
  const double qj = validity::kJointThreshold;
  const auto at = validity::bell_budget(1.0, qj);  // q_joint = 1 + qj - 1
  const double err = std::abs(at.s_bound - 2.0 * std::numbers::sqrt2);
  const double qs = validity::kSymmetricThreshold;
  const bool above = validity::bell_budget(qs + 1e-6, qs + 1e-6).passes_threshold;
  const bool below = validity::bell_budget(qs - 1e-6, qs - 1e-6).passes_threshold;
  return {err <= 1e-12 && std::abs(at.q_joint - (2.0 - std::numbers::sqrt2)) <= 1e-15 && above && !below &&
              std::abs(qs - 0.79289) < 1e-5,
          fmt("|s_bound - 2sqrt2| = %.2e, q_sym = %.6f, +1e-6 %s, -1e-6 %s", err, qs, above ? "passes" : "fails",
              below ? "passes" : "fails")};
}

// 2. Bias-correction identity.
Result bias_identity() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> info(0.0, 0.1), coef(-100.0, 100.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double I = info(rng), a = coef(rng), b = coef(rng) * 1e4;
    const double n = std::ldexp(1.0, 8 + i % 16);
    const double x = 1.0 / n;
    const double u = I + a * x + b * x * x;
    const double v = I + 2 * a * x + 4 * b * x * x;
    const double w = I + 4 * a * x + 16 * b * x * x;
    worst = std::max(worst, std::abs(analysis::solve_bias_ansatz(u, v, w, n).info - I));
  }
  return {worst <= 1e-12, fmt("max |I_hat - I| over 10000 triples = %.2e", worst)};
}

// 3. Estimator calibration on iid streams.
Result estimator_calibration() {
  constexpr int streams = 100;
  constexpr std::size_t n = std::size_t{1} << 16;
  std::vector<std::vector<double>> corrected(3), plugin(3);
  for (int k = 0; k < streams; ++k) {
    const auto v = oracle::bernoulli(0.74, n, 1000 + static_cast<std::uint64_t>(k));
    for (int m = 1; m <= 3; ++m) {
      const auto e = analysis::corrected_mutual_information(v, m);
      corrected[m - 1].push_back(e.corrected);
      plugin[m - 1].push_back(e.plugin);
    }
  }
  bool ok = true;
  std::string detail;
  for (int m = 1; m <= 3; ++m) {
    const auto& c = corrected[m - 1];
    double mean = 0.0, ss = 0.0, pmean = 0.0;
    for (double x : c) mean += x;
    mean /= streams;
    for (double x : c) ss += (x - mean) * (x - mean);
    const double se = std::sqrt(ss / (streams - 1) / streams);
    for (double x : plugin[m - 1]) pmean += x;
    pmean /= streams;
    ok = ok && std::abs(mean) <= 2.0 * se && pmean > 0.0;
    detail += fmt("%sm=%d corrected %.2e +/- %.2e, plugin %.2e", m > 1 ? "; " : "", m, mean, se, pmean);
  }
  return {ok, detail};
}

// 4. Markov-chain oracle.
Result markov_oracle() {
  const double exact = oracle::markov_mi(0.751, 0.726);
  const auto v = oracle::markov_chain(0.751, 0.726, 1000000, 4);
  const auto e = analysis::corrected_mutual_information(v, 1);
  const auto nd = analysis::surrogate_null(v, 1, 50, 4);
  const double rel = std::abs(e.corrected - exact) / exact;
  return {rel <= 0.15 && nd.rank == 50,
          fmt("corrected %.5f vs closed form %.5f (%.1f%%), above %zu/50 surrogates", e.corrected, exact, 100 * rel,
              nd.rank)};
}

// 5. Observation-scale MI from the scintillation scenario.
Result observation_scale_mi() {
  const auto c = config::read_scenario((spectral::default_data_dir() / "scenarios" / "scintillation.ini").string());
  const auto s = stream::simulate(c);
  const auto r = pipeline::analyze(s);
  const double rate = static_cast<double>(s.events.size()) / c.duration;
  return {r.mi.max_corrected >= 1e-3 && r.mi.max_corrected <= 3e-2,
          fmt("%.0f cps over %.0f s, max corrected MI %.2e bits at m=%d%s", rate, c.duration, r.mi.max_corrected,
              r.mi.argmax_m, r.mi.any_significant ? " (significant)" : "")};
}

// 6. Dead time and the cross-channel filter.
Result dead_time() {
  stream::ScenarioConfig c;
  c.dark_red = 1e6;
  c.duration = 1.0;
  c.seed = 6;
  const double expected = c.dark_red / (1.0 + c.dark_red * c.dead_time);
  const auto single = stream::simulate(c);
  const double observed = static_cast<double>(single.events.size()) / c.duration;
  const double rel = std::abs(observed - expected) / expected;

  stream::ScenarioConfig both;
  both.dark_blue = 5e5;
  both.dark_red = 5e5;
  both.duration = 0.5;
  both.seed = 66;
  const std::uint64_t window_fs = 420'000'000;
  std::uint64_t min_gap = std::numeric_limits<std::uint64_t>::max();
  std::size_t kept = 0;
  for (const auto& raw : {single, stream::simulate(both)}) {
    const auto f = stream::cross_channel_deadtime_filter(raw, 420e-9);
    kept += f.events.size();
    for (std::size_t i = 1; i < f.events.size(); ++i)
      min_gap = std::min(min_gap, (f.events[i].tick - f.events[i - 1].tick) * f.clock_tick_fs);
  }
  return {rel <= 0.01 && min_gap >= window_fs && kept > 0,
          fmt("observed %.0f Hz vs %.0f Hz (%.2f%%), min filtered gap %llu fs", observed, expected, 100 * rel,
              static_cast<unsigned long long>(min_gap))};
}

// 7. Validity budget for the bright quasar.
Result quasar_validity() {
  validity::DetectorObservation d;
  d.blue = {672.0, 41.0 + 20.0};
  d.red = {1900.0, 93.0 + 60.0};
  d.crosstalk = {0.002, 0.002};
  const auto b = validity::corruption_probability(d);
  const auto back = validity::mix_rates(b.fluxes, 61.0, 153.0, d.crosstalk);
  double worst = std::max(std::abs(back.blue.observed_rate - 672.0), std::abs(back.red.observed_rate - 1900.0));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> flux(1.0, 1e5), noise(0.0, 1e3), f(0.0, 0.25);
  for (int i = 0; i < 10000; ++i) {
    const validity::UnmixedFluxes s{flux(rng), flux(rng)};
    const spectral::CrosstalkFractions cf{f(rng), f(rng)};
    const auto r = validity::unmix_rates(validity::mix_rates(s, noise(rng), noise(rng), cf));
    worst = std::max({worst, std::abs(r.blue - s.blue) / s.blue, std::abs(r.red - s.red) / s.red});
  }
  return {b.q_detector >= 0.87 && b.q_detector <= 0.93 && worst <= 1e-9,
          fmt("q = %.4f (p_blue %.4f, p_red %.4f), round-trip error %.2e", b.q_detector, b.p_blue, b.p_red, worst)};
}

// 8. Magnitude-rate calibration.
Result calibration_recovery() {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> eps(0.0, 0.01);
  std::vector<calibration::SourceObservation> obs;
  for (int i = 0; i < 50; ++i) {
    calibration::SourceObservation o;
    o.name = "star" + std::to_string(i);
    o.v_magnitude = 2.0 + 14.0 * i / 49.0;
    const double net = std::pow(10.0, 8.22 - 0.3631 * o.v_magnitude) * (1.0 + eps(rng));
    o.blue_rate = 0.3 * net + 15.0;
    o.red_rate = 0.7 * net + 40.0;
    o.background_blue = 15.0;
    o.background_red = 40.0;
    obs.push_back(o);
  }
  const auto fit = calibration::fit_magnitude_rate(obs);
  return {std::abs(fit.slope + 0.3631) <= 0.005,
          fmt("slope %.5f +/- %.5f, intercept %.4f", fit.slope, fit.slope_error, fit.intercept)};
}

// 9. Quantum eraser.
Result eraser_fringes() {
  using namespace eraser;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> phase(-10.0, 10.0);
  double worst_norm = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double phi = phase(rng);
    for (auto b : {Basis::linear_hv, Basis::circular_lr}) {
      double total = 0.0;
      for (auto e : {Outcome::upper, Outcome::lower})
        for (auto g : {Outcome::upper, Outcome::lower}) total += coincidence_probability(b, e, g, phi);
      worst_norm = std::max(worst_norm, std::abs(total - 1.0));
    }
  }
  constexpr std::size_t trials = 100000;
  const auto phases = uniform_phases(16);
  const std::vector<std::uint8_t> ones(phases.size() * trials, 1), zeros(phases.size() * trials, 0);
  const auto circ = simulate_eraser(ones, phases, trials, 91);
  const auto lin = simulate_eraser(zeros, phases, trials, 92);
  double worst_marginal = 0.0;  // in units of sigma
  for (const auto* r : {&circ, &lin})
    for (std::size_t p = 0; p < phases.size(); ++p)
      worst_marginal = std::max(worst_marginal, std::abs(r->signal_upper_marginal[p] - 0.5) / r->marginal_sigma[p]);
  const double vc = circ.visibility(Basis::circular_lr), vl = lin.visibility(Basis::linear_hv);
  return {worst_norm <= 4 * std::numeric_limits<double>::epsilon() && std::abs(vc - 1.0) <= 0.02 && vl <= 0.02 &&
              worst_marginal <= 3.0,
          fmt("norm error %.1e, V_circular %.4f, V_linear %.4f, worst marginal %.2f sigma", worst_norm, vc, vl,
              worst_marginal)};
}

// 10. Crosstalk integrals.
Result crosstalk_integrals() {
  const auto g = spectral::WavelengthGrid::observing_bands();
  const auto n_in = spectral::attenuate(spectral::redshift_spectrum(spectral::standin_quasar_composite(), 1.0, g),
                                        spectral::standin_atmosphere(g), 1.1);
  const auto ideal = spectral::crosstalk_fractions(n_in, spectral::ideal_step_instrument(g));
  const auto f = spectral::crosstalk_fractions(n_in, spectral::standin_instrument(g));
  auto in_range = [](double x) { return x >= 1e-3 && x <= 1e-2; };
  return {ideal.b_to_r == 0.0 && ideal.r_to_b == 0.0 && in_range(f.b_to_r) && in_range(f.r_to_b),
          fmt("ideal %.1e/%.1e, logistic f_b->r %.3f%%, f_r->b %.3f%%", ideal.b_to_r, ideal.r_to_b, 100 * f.b_to_r,
              100 * f.r_to_b)};
}

// 11. Determinism of stream files and reports.
Result determinism() {
  auto c = config::read_scenario((spectral::default_data_dir() / "scenarios" / "3c273.ini").string());
  c.duration = 20.0;
  pipeline::AnalyzeOptions opt;
  opt.mi.surrogates = 10;
  std::string bytes[2], reports[2];
  for (int run = 0; run < 2; ++run) {
    const auto s = stream::simulate(c);
    bytes[run] = stream::encode_binary(s);
    report::RunManifest m;
    m.subcommand = "analyze-mi";
    m.config_digest = sha256_hex(config::canonical(c));
    m.seed = c.seed;
    reports[run] = report::envelope("analysis", m, report::to_json(pipeline::analyze(s, opt))).dump(2);
  }
  return {bytes[0] == bytes[1] && reports[0] == reports[1] && !bytes[0].empty(),
          fmt("stream sha256 %.16s... (%zu bytes), report sha256 %.16s...", sha256_hex(bytes[0]).c_str(),
              bytes[0].size(), sha256_hex(reports[0]).c_str())};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria{
      {"threshold algebra", threshold_algebra},
      {"bias-correction identity", bias_identity},
      {"estimator calibration", estimator_calibration},
      {"MI oracle", markov_oracle},
      {"observation-scale MI", observation_scale_mi},
      {"dead-time physics", dead_time},
      {"validity reproduction", quasar_validity},
      {"calibration recovery", calibration_recovery},
      {"eraser", eraser_fringes},
      {"crosstalk integrals", crosstalk_integrals},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Result o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failures;
    std::printf("%s  %2zu %-26s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
