// arng: command-line front end.
//
// Exit codes: 0 success, 2 configuration/usage error, 3 data error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "arng/bit_extraction.hpp"
#include "arng/calibration.hpp"
#include "arng/config.hpp"
#include "arng/digest.hpp"
#include "arng/eraser.hpp"
#include "arng/error.hpp"
#include "arng/instrument_models.hpp"
#include "arng/pipeline.hpp"
#include "arng/randomness_analysis.hpp"
#include "arng/report.hpp"
#include "arng/spectral_io.hpp"
#include "arng/spectral_model.hpp"
#include "arng/tag_stream_io.hpp"
#include "arng/validity.hpp"

#ifndef ARNG_VERSION
#define ARNG_VERSION "0.0.0"
#endif

namespace {

namespace fs = std::filesystem;
using arng::report::json;

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw arng::Error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw arng::Error("write failed: " + path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void emit(const json& j, const std::string& path) {
  if (path.empty() || path == "-")
    std::cout << dump(j);
  else
    write_text(path, dump(j));
}

arng::report::RunManifest manifest(const std::string& sub, const json& params, std::uint64_t seed = 0) {
  arng::report::RunManifest m;
  m.subcommand = sub;
  m.parameters = params;
  m.config_digest = arng::sha256_hex(params.dump());
  m.seed = seed;
  m.tool_version = ARNG_VERSION;
  return m;
}

double parse_duration(const std::string& flag, const std::string& text) {
  return arng::config::parse_quantity(flag, text, arng::config::Quantity::duration);
}

arng::bits::Scheme parse_scheme(const std::string& s) {
  if (s == "color" || s == "colour") return arng::bits::Scheme::color;
  if (s == "parity" || s == "time_parity") return arng::bits::Scheme::time_parity;
  throw arng::ConfigError("--scheme", "expected 'color' or 'parity', got '" + s + "'");
}

std::string sidecar_path(const std::string& stream_path) { return stream_path + ".json"; }

// Restores the generating scenario from a simulate sidecar, if one exists.
arng::stream::TagStream load_stream(const std::string& path, bool use_sidecar = true) {
  auto s = arng::stream::read_binary(path);
  const auto side = sidecar_path(path);
  if (use_sidecar && fs::exists(side)) {
    std::ifstream in(side);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw arng::FormatError(side + ": " + e.what());
    }
    const auto* cfg = j.contains("report") ? &j["report"] : nullptr;
    if (cfg && cfg->contains("canonical_config")) s.config = arng::config::parse_scenario((*cfg)["canonical_config"].get<std::string>());
  }
  return s;
}

arng::bits::BitStream load_bits(const std::string& path) {
  const auto bytes = arng::stream::read_file_bytes(path);
  if (bytes.compare(0, arng::bits::kBitMagic.size(), arng::bits::kBitMagic) == 0) return arng::bits::decode_packed(bytes);
  return arng::bits::from_ascii(bytes);
}

struct ExtractFlags {
  std::string scheme = "color";
  std::string digit_period = "10ns";
  std::string filter_window = "420ns";
  bool no_filter = false;

  void add(CLI::App* app) {
    app->add_option("--scheme", scheme, "Bit scheme: color or parity")->capture_default_str();
    app->add_option("--digit-period", digit_period, "Parity digit period (e.g. 10ns)")->capture_default_str();
    app->add_option("--filter-window", filter_window, "Cross-channel dead-time window")->capture_default_str();
    app->add_flag("--no-filter", no_filter, "Skip the cross-channel dead-time filter");
  }

  json to_json() const {
    return {{"scheme", scheme}, {"digit_period", digit_period}, {"filter_window", no_filter ? json(nullptr) : json(filter_window)}};
  }

  arng::bits::BitStream extract(const arng::stream::TagStream& s, const std::string& source) const {
    const auto filtered =
        no_filter ? s : arng::stream::cross_channel_deadtime_filter(s, parse_duration("--filter-window", filter_window));
    return parse_scheme(scheme) == arng::bits::Scheme::color
               ? arng::bits::bits_from_color(filtered, source)
               : arng::bits::bits_from_time_parity(filtered, parse_duration("--digit-period", digit_period), source);
  }
};

// ---------------------------------------------------------------- simulate

struct SimulateCmd {
  std::string config, out, text, report;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("simulate", "Simulate a tag stream from a scenario config");
    app->add_option("-c,--config", config, "Scenario config file")->required();
    app->add_option("-o,--out", out, "Binary tag-stream output")->required();
    app->add_option("--text", text, "Also write the plain-text export here");
    app->add_option("--report", report, "Summary report path (default stdout)");
    app->callback([this] { run(); });
  }

  void run() const {
    const auto cfg = arng::config::read_scenario(config);
    const auto s = arng::stream::simulate(cfg);
    arng::stream::write_binary(out, s);
    if (!text.empty()) write_text(text, arng::stream::encode_text(s));

    const auto canon = arng::config::canonical(cfg);
    arng::report::RunManifest m;
    m.subcommand = "simulate";
    m.config_digest = arng::sha256_hex(canon);
    m.seed = cfg.seed;
    m.inputs = {config};
    m.outputs = {out};
    if (!text.empty()) m.outputs.push_back(text);
    m.tool_version = ARNG_VERSION;
    m.parameters = {{"config", arng::report::to_json(cfg)}};
    json body = {{"canonical_config", canon}, {"stream", arng::report::stream_summary(s)}};
    const auto env = arng::report::envelope("stream", m, body);
    write_text(sidecar_path(out), dump(env));
    emit(env, report);
  }
};

// ---------------------------------------------------------------- extract

struct ExtractCmd {
  std::string stream, out, ascii, report;
  ExtractFlags flags;
  std::size_t window = 10000;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("extract", "Extract bits from a tag stream");
    app->add_option("-s,--stream", stream, "Binary tag-stream file")->required();
    app->add_option("-o,--out", out, "Packed bit file output");
    app->add_option("--ascii", ascii, "ASCII '0'/'1' output");
    app->add_option("--imbalance-window", window, "Rolling window for the imbalance report")->capture_default_str();
    app->add_option("--report", report, "Report path (default stdout)");
    flags.add(app);
    app->callback([this] { run(); });
  }

  void run() const {
    const auto s = load_stream(stream);
    const auto b = flags.extract(s, stream);
    if (!out.empty()) write_text(out, arng::bits::encode_packed(b));
    if (!ascii.empty()) write_text(ascii, arng::bits::to_nist_ascii(b));
    json params = flags.to_json();
    params["imbalance_window"] = window;
    auto m = manifest("extract", params);
    m.inputs = {stream};
    for (const auto& p : {out, ascii})
      if (!p.empty()) m.outputs.push_back(p);
    json body = {{"events", s.events.size()}, {"bits", b.size()}};
    if (!b.bits.empty()) body["imbalance"] = arng::report::to_json(arng::bits::imbalance_report(b, window));
    emit(arng::report::envelope("extract", m, body), report);
  }
};

// ---------------------------------------------------------------- analyze-mi

struct MIFlags {
  int max_m = arng::analysis::kDefaultMaxDepth;
  std::size_t surrogates = arng::analysis::kDefaultSurrogates;
  std::uint64_t seed = 0;
  std::string kind = "bernoulli";

  void add(CLI::App* app) {
    app->add_option("--max-m", max_m, "Largest history length")->capture_default_str();
    app->add_option("--surrogates", surrogates, "Surrogate streams per depth")->capture_default_str();
    app->add_option("--seed", seed, "Surrogate seed")->capture_default_str();
    app->add_option("--surrogate-kind", kind, "bernoulli or permutation")->capture_default_str();
  }

  arng::analysis::MIReportOptions options() const {
    arng::analysis::MIReportOptions o;
    o.max_m = max_m;
    o.surrogates = surrogates;
    o.seed = seed;
    if (kind == "bernoulli")
      o.kind = arng::analysis::SurrogateKind::bernoulli;
    else if (kind == "permutation")
      o.kind = arng::analysis::SurrogateKind::permutation;
    else
      throw arng::ConfigError("--surrogate-kind", "expected 'bernoulli' or 'permutation'");
    if (max_m < 1 || max_m > arng::analysis::kMaxDepth) throw arng::ConfigError("--max-m", "out of range");
    return o;
  }

  json to_json() const { return {{"max_m", max_m}, {"surrogates", surrogates}, {"seed", seed}, {"surrogate_kind", kind}}; }
};

struct AnalyzeCmd {
  std::string stream, bits, report;
  ExtractFlags flags;
  MIFlags mi;
  std::optional<double> noise_blue, noise_red;
  double f_br = 0.0, f_rb = 0.0;
  std::string fano_bin = "1s";
  bool ignore_sidecar = false;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("analyze-mi", "Mutual-information, surrogate and validity analysis");
    auto* g = app->add_option_group("input");
    g->add_option("-s,--stream", stream, "Binary tag-stream file");
    g->add_option("-b,--bits", bits, "Packed or ASCII bit file (MI only)");
    g->require_option(1);
    flags.add(app);
    mi.add(app);
    app->add_option("--noise-blue", noise_blue, "Blue-arm noise rate, Hz (overrides the stream's scenario)");
    app->add_option("--noise-red", noise_red, "Red-arm noise rate, Hz");
    app->add_option("--f-b-to-r", f_br, "Crosstalk blue->red")->capture_default_str();
    app->add_option("--f-r-to-b", f_rb, "Crosstalk red->blue")->capture_default_str();
    app->add_option("--fano-bin", fano_bin, "Bin width for the Poisson check")->capture_default_str();
    app->add_flag("--ignore-sidecar", ignore_sidecar, "Do not read <stream>.json");
    app->add_option("--report", report, "Report path (default stdout)");
    app->callback([this] { run(); });
  }

  void run() const {
    json params = flags.to_json();
    params["mi"] = mi.to_json();
    auto m = manifest("analyze-mi", params, mi.seed);
    if (!bits.empty()) {
      const auto b = load_bits(bits);
      m.inputs = {bits};
      m.parameters["bits"] = bits;
      json body = {{"bits", b.size()},
                   {"imbalance", arng::report::to_json(arng::bits::imbalance_report(b))},
                   {"mutual_information", arng::report::to_json(arng::analysis::mi_report(b, mi.options()))}};
      emit(arng::report::envelope("analysis", m, body), report);
      return;
    }
    const auto s = load_stream(stream, !ignore_sidecar);
    arng::pipeline::AnalyzeOptions opt;
    opt.scheme = parse_scheme(flags.scheme);
    opt.digit_period = parse_duration("--digit-period", flags.digit_period);
    opt.filter_window = flags.no_filter ? std::nullopt
                                        : std::optional<double>(parse_duration("--filter-window", flags.filter_window));
    opt.mi = mi.options();
    opt.fano_bin = parse_duration("--fano-bin", fano_bin);
    if (noise_blue || noise_red) {
      if (!(noise_blue && noise_red)) throw arng::ConfigError("--noise-blue/--noise-red", "give both or neither");
      opt.noise = arng::pipeline::NoiseModel{*noise_blue, *noise_red, {f_br, f_rb}};
      m.parameters["noise"] = {{"blue", *noise_blue}, {"red", *noise_red}, {"f_b_to_r", f_br}, {"f_r_to_b", f_rb}};
      m.config_digest = arng::sha256_hex(m.parameters.dump());
    }
    m.inputs = {stream};
    if (s.config) {
      m.inputs.push_back(sidecar_path(stream));
      m.seed = mi.seed;
    }
    const auto r = arng::pipeline::analyze(s, opt);
    emit(arng::report::envelope("analysis", m, arng::report::to_json(r)), report);
  }
};

// ---------------------------------------------------------------- validity

struct DetectorFlags {
  std::optional<double> rate_blue, rate_red;
  double noise_blue = 0.0, noise_red = 0.0;

  bool given() const { return rate_blue || rate_red; }
};

struct ValidityCmd {
  DetectorFlags alice, bob;
  std::optional<double> f, f_br, f_rb;
  std::string catalog, report;
  // spectral mode
  std::optional<double> redshift;
  double airmass = 1.0;
  double cutoff = arng::spectral::kDefaultCutoffNm;
  std::string spectrum_path, atmosphere_path;
  double grid_step = 0.5;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("validity", "Per-detector valid fraction q and the CHSH budget");
    app->add_option("--rate-blue", alice.rate_blue, "Observed blue-arm rate, Hz");
    app->add_option("--rate-red", alice.rate_red, "Observed red-arm rate, Hz");
    app->add_option("--noise-blue", alice.noise_blue, "Blue-arm noise (dark + skyglow), Hz");
    app->add_option("--noise-red", alice.noise_red, "Red-arm noise, Hz");
    app->add_option("--bob-rate-blue", bob.rate_blue, "Second detector: blue rate, Hz");
    app->add_option("--bob-rate-red", bob.rate_red, "Second detector: red rate, Hz");
    app->add_option("--bob-noise-blue", bob.noise_blue, "Second detector: blue noise, Hz");
    app->add_option("--bob-noise-red", bob.noise_red, "Second detector: red noise, Hz");
    app->add_option("-f,--crosstalk", f, "Symmetric crosstalk fraction");
    app->add_option("--f-b-to-r", f_br, "Crosstalk blue->red");
    app->add_option("--f-r-to-b", f_rb, "Crosstalk red->blue");
    app->add_option("--catalog", catalog, "Per-source catalogue (CSV); q for every row");
    app->add_option("-z,--redshift", redshift, "Compute crosstalk from the spectral model at this redshift");
    app->add_option("--airmass", airmass, "Airmass for the spectral model")->capture_default_str();
    app->add_option("--cutoff", cutoff, "Color cutoff wavelength, nm")->capture_default_str();
    app->add_option("--spectrum", spectrum_path, "Rest-frame source spectrum table (default: bundled composite)");
    app->add_option("--atmosphere", atmosphere_path, "Zenith transmission table (default: bundled stand-in)");
    app->add_option("--grid-step", grid_step, "Wavelength grid step, nm")->capture_default_str();
    app->add_option("--report", report, "Report path (default stdout)");
    app->callback([this] { run(); });
  }

  arng::spectral::CrosstalkFractions crosstalk(json& body) const {
    if (f && (f_br || f_rb)) throw arng::ConfigError("--crosstalk", "give either --crosstalk or --f-b-to-r/--f-r-to-b");
    if (redshift) {
      if (f || f_br || f_rb) throw arng::ConfigError("--redshift", "spectral mode computes the crosstalk itself");
      using namespace arng::spectral;
      const auto grid = WavelengthGrid::observing_bands(grid_step);
      const auto rest = spectrum_path.empty() ? arng::spectral::standin_quasar_composite()
                                              : arng::spectral::read_spectrum(spectrum_path);
      const auto atm = atmosphere_path.empty() ? arng::spectral::standin_atmosphere(grid)
                                               : arng::spectral::load_atmosphere(atmosphere_path, grid);
      const auto n_in = attenuate(redshift_spectrum(rest, *redshift, grid), atm, airmass);
      const auto cf = crosstalk_fractions(n_in, standin_instrument(grid, cutoff));
      body["spectral_model"] = {{"redshift", *redshift},
                                {"airmass", airmass},
                                {"cutoff_nm", cutoff},
                                {"spectrum", spectrum_path.empty() ? "bundled quasar composite (stand-in)" : spectrum_path},
                                {"atmosphere", atmosphere_path.empty() ? "bundled atmosphere (stand-in)" : atmosphere_path},
                                {"crosstalk", arng::report::to_json(cf)}};
      return cf;
    }
    if (f) return {*f, *f};
    return {f_br.value_or(0.0), f_rb.value_or(0.0)};
  }

  static arng::validity::DetectorObservation detector(const DetectorFlags& d, const arng::spectral::CrosstalkFractions& cf,
                                                      const char* who) {
    if (!(d.rate_blue && d.rate_red)) throw arng::ConfigError(who, "both blue and red rates are required");
    return {{*d.rate_blue, d.noise_blue}, {*d.rate_red, d.noise_red}, cf};
  }

  void run() const {
    json params = {{"alice", {{"rate_blue", alice.rate_blue.value_or(-1)}, {"rate_red", alice.rate_red.value_or(-1)},
                              {"noise_blue", alice.noise_blue}, {"noise_red", alice.noise_red}}},
                   {"catalog", catalog},
                   {"redshift", redshift ? json(*redshift) : json(nullptr)},
                   {"airmass", airmass},
                   {"cutoff_nm", cutoff}};
    if (bob.given())
      params["bob"] = {{"rate_blue", bob.rate_blue.value_or(-1)}, {"rate_red", bob.rate_red.value_or(-1)},
                       {"noise_blue", bob.noise_blue}, {"noise_red", bob.noise_red}};
    json body = json::object();
    const auto cf = crosstalk(body);
    cf.validate();
    params["crosstalk"] = arng::report::to_json(cf);
    auto m = manifest("validity", params);
    if (!catalog.empty()) m.inputs.push_back(catalog);
    if (!spectrum_path.empty()) m.inputs.push_back(spectrum_path);
    if (!atmosphere_path.empty()) m.inputs.push_back(atmosphere_path);

    if (!catalog.empty()) {
      json rows = json::array();
      for (const auto& o : arng::calibration::read_catalog(catalog)) {
        arng::validity::DetectorObservation det{{o.blue_rate, o.background_blue}, {o.red_rate, o.background_red}, cf};
        json row = {{"name", o.name}};
        try {
          row["budget"] = arng::report::to_json(arng::validity::corruption_probability(det));
        } catch (const arng::Error& e) {
          row["error"] = e.what();
        }
        if (o.reported_q) row["reported_q"] = *o.reported_q;
        rows.push_back(row);
      }
      body["catalog"] = rows;
    }
    if (alice.given()) {
      const auto a = arng::validity::corruption_probability(detector(alice, cf, "--rate-blue/--rate-red"));
      body["detector"] = arng::report::to_json(a);
      if (bob.given()) {
        const auto b = arng::validity::corruption_probability(detector(bob, cf, "--bob-rate-blue/--bob-rate-red"));
        body["bob_detector"] = arng::report::to_json(b);
        body["bell"] = arng::report::to_json(arng::validity::bell_budget(a.q_detector, b.q_detector));
      }
    } else if (bob.given()) {
      throw arng::ConfigError("--bob-rate-blue", "a second detector needs the first (--rate-blue/--rate-red)");
    }
    if (body.empty()) throw arng::ConfigError("validity", "nothing to do: give rates, --catalog, or --redshift");
    emit(arng::report::envelope("validity", m, body), report);
  }
};

// ---------------------------------------------------------------- calibrate

struct CalibrateCmd {
  std::string catalog, report;
  double area = 1.0;
  std::vector<double> predict;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("calibrate", "Fit log10(rate/area) = a + b m_V");
    app->add_option("--catalog", catalog, "Per-source catalogue (CSV)")->required();
    app->add_option("--area", area, "Collecting area, m^2")->capture_default_str();
    app->add_option("--predict", predict, "V magnitudes to predict rates for");
    app->add_option("--report", report, "Report path (default stdout)");
    app->callback([this] { run(); });
  }

  void run() const {
    const auto fit = arng::calibration::fit_magnitude_rate(arng::calibration::read_catalog(catalog), area);
    auto m = manifest("calibrate", {{"catalog", catalog}, {"area_m2", area}, {"predict", predict}});
    m.inputs = {catalog};
    json body = arng::report::to_json(fit);
    json pred = json::array();
    for (double v : predict) {
      const double per_m2 = arng::calibration::predict_rate(fit, v);
      pred.push_back({{"v_mag", v}, {"rate_per_m2", per_m2}, {"rate", per_m2 * area}});
    }
    body["predictions"] = pred;
    emit(arng::report::envelope("calibration", m, body), report);
  }
};

// ---------------------------------------------------------------- eraser

struct EraserCmd {
  std::string stream, bits, log, report;
  ExtractFlags flags;
  std::size_t phases = 16;
  std::uint64_t trials = 1000, seed = 0;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("eraser", "Delayed-choice eraser driven by generated bits");
    auto* g = app->add_option_group("input");
    g->add_option("-s,--stream", stream, "Binary tag-stream file");
    g->add_option("-b,--bits", bits, "Packed or ASCII bit file");
    g->require_option(1);
    flags.add(app);
    app->add_option("--phases", phases, "Number of equally spaced phases in [0, 2pi)")->capture_default_str();
    app->add_option("--trials", trials, "Trials per phase")->capture_default_str();
    app->add_option("--seed", seed, "Outcome-sampling seed")->capture_default_str();
    app->add_option("--log", log, "Per-trial CSV log");
    app->add_option("--report", report, "Report path (default stdout)");
    app->callback([this] { run(); });
  }

  void run() const {
    if (phases == 0) throw arng::ConfigError("--phases", "must be positive");
    const auto b = bits.empty() ? flags.extract(load_stream(stream), stream) : load_bits(bits);
    std::ofstream log_out;
    arng::eraser::TrialLog logger;
    if (!log.empty()) {
      log_out.open(log);
      if (!log_out) throw arng::Error("cannot open " + log);
      log_out << "basis,env,signal,phase\n";
      logger = [&log_out](const arng::eraser::EraserTrial& t) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", t.phase);
        log_out << arng::eraser::to_string(t.basis) << ',' << arng::eraser::to_string(t.env) << ','
                << arng::eraser::to_string(t.signal) << ',' << buf << '\n';
      };
    }
    const auto r = arng::eraser::simulate_eraser(b.bits, arng::eraser::uniform_phases(phases), trials, seed, logger);
    json params = {{"phases", phases}, {"trials", trials}, {"input", bits.empty() ? stream : bits}};
    if (bits.empty()) params["extract"] = flags.to_json();
    auto m = manifest("eraser", params, seed);
    m.inputs = {bits.empty() ? stream : bits};
    if (!log.empty()) m.outputs = {log};
    emit(arng::report::envelope("eraser", m, arng::report::to_json(r)), report);
  }
};

// ---------------------------------------------------------------- export-nist

struct ExportNistCmd {
  std::string stream, out, report;
  ExtractFlags flags;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("export-nist", "Write '0'/'1' ASCII bits for statistical test suites");
    app->add_option("-s,--stream", stream, "Binary tag-stream file")->required();
    app->add_option("-o,--out", out, "ASCII output")->required();
    app->add_option("--report", report, "Report path (default: none)");
    flags.add(app);
    app->callback([this] { run(); });
  }

  void run() const {
    const auto b = flags.extract(load_stream(stream), stream);
    write_text(out, arng::bits::to_nist_ascii(b));
    if (!report.empty()) {
      auto m = manifest("export-nist", flags.to_json());
      m.inputs = {stream};
      m.outputs = {out};
      emit(arng::report::envelope("export-nist", m, {{"bits", b.size()}}), report);
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Astronomical random number generator toolkit"};
  app.set_version_flag("--version", ARNG_VERSION);
  app.require_subcommand(1);

  SimulateCmd simulate;
  ExtractCmd extract;
  AnalyzeCmd analyze;
  ValidityCmd validity;
  CalibrateCmd calibrate;
  EraserCmd eraser;
  ExportNistCmd export_nist;
  simulate.add(app);
  extract.add(app);
  analyze.add(app);
  validity.add(app);
  calibrate.add(app);
  eraser.add(app);
  export_nist.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const arng::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const arng::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return 0;
}
