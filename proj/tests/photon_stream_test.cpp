#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "arng/bit_extraction.hpp"
#include "arng/photon_stream.hpp"
#include "arng/randomness_analysis.hpp"
#include "arng/tag_stream_io.hpp"

using namespace arng::stream;

namespace {

ScenarioConfig dark_only() {
  ScenarioConfig c;
  c.dark_blue = 41.0;
  c.dark_red = 93.0;
  c.duration = 500.0;
  c.seed = 99;
  return c;
}

ScenarioConfig scintillating(double depth, double mismatch, double duration, std::uint64_t seed) {
  ScenarioConfig c;
  c.s_blue = 650.0;
  c.s_red = 1850.0;
  c.duration = duration;
  c.seed = seed;
  c.scintillation = ScintillationConfig{depth, 2e-3, mismatch};
  return c;
}

TagStream from_times_ns(std::initializer_list<std::pair<Channel, double>> ev) {
  TagStream s;
  s.clock_tick_fs = 1000;  // 1 ps ticks keep the arithmetic exact
  for (auto [ch, ns] : ev) s.events.push_back({ch, static_cast<std::uint64_t>(std::llround(ns * 1000.0)), Origin::unknown});
  return s;
}

}  // namespace

TEST(Simulate, AllRatesZeroGiveEmptyStream) {
  ScenarioConfig c;
  c.duration = 10.0;
  EXPECT_TRUE(simulate(c).events.empty());
}

TEST(Simulate, DarkCountsMatchConfiguredRates) {
  const auto s = simulate(dark_only());
  const double nb = static_cast<double>(s.count(Channel::blue));
  const double nr = static_cast<double>(s.count(Channel::red));
  EXPECT_NEAR(nb, 20500.0, 4.0 * std::sqrt(20500.0));
  EXPECT_NEAR(nr, 46500.0, 4.0 * std::sqrt(46500.0));
  EXPECT_EQ(s.recorded[0][static_cast<int>(Origin::dark)], s.count(Channel::blue));
}

TEST(Simulate, DarkCountsArePoisson) {
  const auto f = arng::analysis::poisson_variance_check(simulate(dark_only()), 1.0);
  EXPECT_NEAR(f.fano[0], 1.0, 0.2);
  EXPECT_NEAR(f.fano[1], 1.0, 0.2);
  EXPECT_TRUE(f.pass);
}

TEST(Simulate, NonParalyzableDeadTimeThinsAMegahertzArm) {
  ScenarioConfig c;
  c.dark_red = 1e6;
  c.duration = 1.0;
  c.seed = 4;
  const double expected = 1e6 / (1.0 + 1e6 * 420e-9);
  EXPECT_NEAR(expected, 7.04e5, 1e3);
  const auto s = simulate(c);
  EXPECT_NEAR(static_cast<double>(s.events.size()), expected, 0.01 * expected);
}

TEST(Simulate, PerChannelGapsRespectDeadTime) {
  ScenarioConfig c;
  c.dark_blue = 3e5;
  c.dark_red = 3e5;
  c.jitter_sigma = 0.0;
  c.duration = 0.2;
  c.seed = 8;
  const auto s = simulate(c);
  const auto dead_fs = static_cast<std::uint64_t>(std::llround(c.dead_time * 1e15));
  std::array<std::optional<std::uint64_t>, 2> last;
  bool cross_channel_close = false;
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const auto& e = s.events[i];
    auto& l = last[static_cast<std::size_t>(e.channel)];
    // Floor quantisation can shorten a gap by at most one tick.
    if (l) {
      EXPECT_GE((e.tick - *l) * s.clock_tick_fs + s.clock_tick_fs, dead_fs);
    }
    l = e.tick;
    if (i > 0 && (e.tick - s.events[i - 1].tick) * s.clock_tick_fs < dead_fs) cross_channel_close = true;
  }
  EXPECT_TRUE(cross_channel_close);  // the detectors are independent
}

TEST(Simulate, SameSeedIsBitIdentical) {
  auto c = scintillating(0.5, 0.5, 5.0, 21);
  c.dark_blue = 41.0;
  c.crosstalk = {0.002, 0.002};
  const auto a = simulate(c), b = simulate(c);
  EXPECT_EQ(a.events, b.events);
  EXPECT_EQ(encode_binary(a), encode_binary(b));
  c.seed = 22;
  EXPECT_NE(encode_binary(simulate(c)), encode_binary(a));
}

TEST(Simulate, TicksAreSortedAndOriginsTallied) {
  auto c = scintillating(0.3, 0.5, 5.0, 2);
  c.skyglow_blue = 20.0;
  c.crosstalk = {0.01, 0.01};
  const auto s = simulate(c);
  std::uint64_t total = 0;
  for (const auto& row : s.recorded)
    for (auto n : row) total += n;
  EXPECT_EQ(total, s.events.size());
  for (std::size_t i = 1; i < s.events.size(); ++i) EXPECT_LE(s.events[i - 1].tick, s.events[i].tick);
  EXPECT_GT(s.recorded[1][static_cast<int>(Origin::wrongway)], 0u);
  EXPECT_GT(s.recorded[0][static_cast<int>(Origin::skyglow)], 0u);
}

TEST(Scintillation, ZeroDepthIsIdenticallyOne) {
  ScintillationModulator mod({0.0, 2e-3, 0.5}, 3);
  for (int i = 0; i < 100; ++i) {
    const auto g = mod.next();
    EXPECT_EQ(g.blue, 1.0);
    EXPECT_EQ(g.red, 1.0);
  }
  auto flat = scintillating(0.0, 0.5, 20.0, 5);
  auto plain = flat;
  plain.scintillation.reset();
  EXPECT_EQ(simulate(flat).events, simulate(plain).events);
}

TEST(Scintillation, MultiplierHasUnitMeanAndConfiguredDepth) {
  const ScintillationConfig cfg{0.5, 2e-3, 0.0};
  const auto path = scintillation_path(cfg, 17, 400000);
  double mean = 0.0, sq = 0.0;
  for (const auto& g : path) {
    EXPECT_EQ(g.blue, g.red);  // no mismatch: one shared pattern
    mean += g.blue;
    sq += g.blue * g.blue;
  }
  mean /= static_cast<double>(path.size());
  const double sd = std::sqrt(sq / static_cast<double>(path.size()) - mean * mean);
  // 400000 steps span 4000 correlation times.
  EXPECT_NEAR(mean, 1.0, 0.03);
  EXPECT_NEAR(sd, 0.5, 0.03);
}

TEST(Scintillation, MismatchDecorrelatesArms) {
  auto corr = [](double mismatch) {
    const auto path = scintillation_path({0.5, 2e-3, mismatch}, 4, 200000);
    double mb = 0, mr = 0;
    for (const auto& g : path) {
      mb += std::log(g.blue);
      mr += std::log(g.red);
    }
    mb /= static_cast<double>(path.size());
    mr /= static_cast<double>(path.size());
    double cbr = 0, vb = 0, vr = 0;
    for (const auto& g : path) {
      const double b = std::log(g.blue) - mb, r = std::log(g.red) - mr;
      cbr += b * r;
      vb += b * b;
      vr += r * r;
    }
    return cbr / std::sqrt(vb * vr);
  };
  EXPECT_NEAR(corr(0.5), 0.5, 0.05);
  EXPECT_NEAR(corr(1.0), 0.0, 0.05);
}

TEST(Scintillation, MatchedArmsLeaveColorBitsIndependent) {
  const auto s = simulate(scintillating(0.5, 0.0, 200.0, 31));
  const auto bits = arng::bits::bits_from_color(cross_channel_deadtime_filter(s, 420e-9));
  arng::analysis::MIReportOptions opt;
  opt.max_m = 4;
  opt.surrogates = 30;
  opt.seed = 1;
  const auto r = arng::analysis::mi_report(bits, opt);
  EXPECT_FALSE(r.any_significant);
  EXPECT_LT(r.max_corrected, 2e-4);
}

TEST(Scintillation, MismatchedArmsProduceSignificantColorCorrelation) {
  const auto s = simulate(scintillating(0.5, 0.5, 500.0, 32));
  const double rate = static_cast<double>(s.events.size()) / 500.0;
  EXPECT_NEAR(rate, 2500.0, 150.0);
  const auto bits = arng::bits::bits_from_color(cross_channel_deadtime_filter(s, 420e-9));
  arng::analysis::MIReportOptions opt;
  opt.surrogates = 50;
  opt.seed = 2;
  const auto r = arng::analysis::mi_report(bits, opt);
  EXPECT_TRUE(r.any_significant);
  EXPECT_GE(r.max_corrected, 1e-3);
  EXPECT_LE(r.max_corrected, 1e-2);
  // Same-color bursts: a run of reds predicts another red.
  const auto& t5 = r.tables[4];
  EXPECT_EQ(t5.entries.back().history, "11111");
  EXPECT_GT(t5.entries.back().p_one, t5.p_one);
}

TEST(Scintillation, ModulationIsOverdispersed) {
  const auto f = arng::analysis::poisson_variance_check(simulate(scintillating(0.6, 0.8, 300.0, 5)), 1.0);
  EXPECT_GT(f.fano[0], 1.2);
  EXPECT_GT(f.fano[1], 1.2);
  EXPECT_FALSE(f.pass);
}

TEST(CrossChannelFilter, DropsEventsInsideTheWindow) {
  const auto s = from_times_ns({{Channel::blue, 0.0}, {Channel::red, 100.0}});
  const auto f = cross_channel_deadtime_filter(s, 420e-9);
  ASSERT_EQ(f.events.size(), 1u);
  EXPECT_EQ(f.events[0].channel, Channel::blue);
}

TEST(CrossChannelFilter, KeepsWellSeparatedEvents) {
  const auto s = from_times_ns({{Channel::blue, 0.0}, {Channel::red, 1000.0}, {Channel::red, 2000.0}, {Channel::blue, 3000.0}});
  EXPECT_EQ(cross_channel_deadtime_filter(s, 420e-9).events, s.events);
}

TEST(CrossChannelFilter, IsIdempotentAndEnforcesTheWindow) {
  ScenarioConfig c;
  c.s_blue = 2e5;
  c.s_red = 3e5;
  c.duration = 0.5;
  c.seed = 12;
  const auto once = cross_channel_deadtime_filter(simulate(c), 420e-9);
  const auto twice = cross_channel_deadtime_filter(once, 420e-9);
  EXPECT_EQ(once.events, twice.events);
  const std::uint64_t window_fs = 420'000'000;
  for (std::size_t i = 1; i < once.events.size(); ++i)
    EXPECT_GE((once.events[i].tick - once.events[i - 1].tick) * once.clock_tick_fs, window_fs);
}

TEST(TagStreamIo, BinaryRoundTrip) {
  auto c = dark_only();
  c.duration = 20.0;
  const auto s = simulate(c);
  const auto bytes = encode_binary(s);
  EXPECT_EQ(bytes.size(), kTagHeaderBytes + kTagRecordBytes * s.events.size());
  const auto back = decode_binary(bytes);
  EXPECT_EQ(back.clock_tick_fs, 80955u);
  ASSERT_EQ(back.events.size(), s.events.size());
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    EXPECT_EQ(back.events[i].channel, s.events[i].channel);
    EXPECT_EQ(back.events[i].tick, s.events[i].tick);
  }
}

TEST(TagStreamIo, TextRoundTrip) {
  auto c = dark_only();
  c.duration = 5.0;
  const auto s = simulate(c);
  std::istringstream in(encode_text(s));
  const auto back = decode_text(in);
  EXPECT_EQ(back.clock_tick_fs, s.clock_tick_fs);
  EXPECT_EQ(encode_binary(back), encode_binary(s));
}

TEST(TagStreamIo, CorruptFilesAreRejected) {
  const auto s = from_times_ns({{Channel::blue, 1.0}, {Channel::red, 2.0}});
  const auto good = encode_binary(s);
  auto bad_magic = good;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_binary(bad_magic), arng::FormatError);
  auto bad_version = good;
  bad_version[7] = 9;
  EXPECT_THROW(decode_binary(bad_version), arng::FormatError);
  EXPECT_THROW(decode_binary(good.substr(0, good.size() - 1)), arng::FormatError);
  auto bad_channel = good;
  bad_channel[kTagHeaderBytes] = 7;
  EXPECT_THROW(decode_binary(bad_channel), arng::FormatError);
  EXPECT_THROW(decode_binary(good.substr(0, 4)), arng::FormatError);
  EXPECT_EQ(decode_binary(good.substr(0, kTagHeaderBytes)).events.size(), 0u);
}
