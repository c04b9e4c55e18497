#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "arng/calibration.hpp"
#include "arng/spectral_io.hpp"

using namespace arng::calibration;

namespace {

SourceObservation star(double v, double net_rate) {
  SourceObservation o;
  o.name = "m" + std::to_string(v);
  o.v_magnitude = v;
  o.blue_rate = 0.3 * net_rate + 10.0;
  o.red_rate = 0.7 * net_rate + 20.0;
  o.background_blue = 10.0;
  o.background_red = 20.0;
  return o;
}

std::vector<SourceObservation> synthetic(double a, double b, double noise, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> eps(0.0, noise);
  std::vector<SourceObservation> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = 2.0 + 14.0 * static_cast<double>(i) / static_cast<double>(n - 1);
    out.push_back(star(v, std::pow(10.0, a + b * v) * (1.0 + eps(rng))));
  }
  return out;
}

}  // namespace

TEST(Fit, RecoversReferenceLawFromNoisySynthetics) {
  const auto fit = fit_magnitude_rate(synthetic(8.22, -0.3631, 0.01, 50, 7));
  EXPECT_NEAR(fit.slope, -0.3631, 0.005);
  EXPECT_NEAR(fit.intercept, 8.22, 0.05);
  EXPECT_EQ(fit.points, 50u);
  EXPECT_GT(fit.slope_error, 0.0);
}

TEST(Fit, SlopeRecoveryHoldsAcrossSeeds) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto fit = fit_magnitude_rate(synthetic(8.22, -0.3631, 0.01, 50, seed));
    EXPECT_NEAR(fit.slope, -0.3631, 0.005) << "seed " << seed;
  }
}

TEST(Fit, IdealPogsonSlopeWithinError) {
  const auto fit = fit_magnitude_rate(synthetic(8.0, -0.4, 0.05, 40, 3));
  EXPECT_NEAR(fit.slope, -0.4, 3.0 * fit.slope_error);
}

TEST(Fit, StandardErrorsMatchMonteCarloScatter) {
  double sum = 0, sq = 0, reported = 0;
  const int trials = 400;
  for (int t = 0; t < trials; ++t) {
    const auto fit = fit_magnitude_rate(synthetic(8.22, -0.3631, 0.05, 30, 1000 + t));
    sum += fit.slope;
    sq += fit.slope * fit.slope;
    reported += fit.slope_error;
  }
  const double mean = sum / trials;
  const double sd = std::sqrt(sq / trials - mean * mean);
  EXPECT_NEAR(reported / trials, sd, 0.15 * sd);
}

TEST(Fit, DuplicatedPairIsExact) {
  std::vector<SourceObservation> obs;
  for (int i = 0; i < 10; ++i) {
    obs.push_back(star(10.0, 1000.0));
    obs.push_back(star(12.0, 100.0));
  }
  const auto fit = fit_magnitude_rate(obs);
  EXPECT_NEAR(fit.slope, -0.5, 1e-12);
  EXPECT_NEAR(fit.intercept, 8.0, 1e-11);
  EXPECT_NEAR(fit.residual_sd, 0.0, 1e-12);
}

TEST(Fit, NoiselessDataReproducesTheLaw) {
  const auto obs = synthetic(7.5, -0.38, 0.0, 12, 0);
  const auto fit = fit_magnitude_rate(obs);
  for (const auto& o : obs) EXPECT_NEAR(predict_rate(fit, o.v_magnitude), o.net_rate(), 1e-9 * o.net_rate());
}

TEST(Fit, MagnitudeShiftMovesOnlyTheIntercept) {
  auto obs = synthetic(8.22, -0.3631, 0.02, 25, 9);
  const auto base = fit_magnitude_rate(obs);
  const double delta = 1.75;
  for (auto& o : obs) o.v_magnitude += delta;
  const auto shifted = fit_magnitude_rate(obs);
  EXPECT_NEAR(shifted.slope, base.slope, 1e-12);
  EXPECT_NEAR(shifted.intercept, base.intercept - base.slope * delta, 1e-10);
}

TEST(Fit, AreaNormalisation) {
  const auto obs = synthetic(8.0, -0.4, 0.0, 10, 0);
  const auto unit = fit_magnitude_rate(obs, 1.0);
  const auto big = fit_magnitude_rate(obs, 10.0);
  EXPECT_NEAR(big.intercept, unit.intercept - 1.0, 1e-12);
}

TEST(Fit, TooFewUsablePoints) {
  std::vector<SourceObservation> obs{star(10.0, 100.0), star(11.0, 50.0), star(12.0, -5.0)};
  EXPECT_THROW(fit_magnitude_rate(obs), arng::InsufficientData);
  std::vector<SourceObservation> same{star(10.0, 100.0), star(10.0, 90.0), star(10.0, 110.0)};
  EXPECT_THROW(fit_magnitude_rate(same), arng::InsufficientData);
}

TEST(Predict, KnownValues) {
  RateFit fit;
  fit.intercept = 8.22;
  fit.slope = -0.3631;
  EXPECT_NEAR(predict_rate(fit, 12.85), 3.6e3, 0.1e3);
  EXPECT_DOUBLE_EQ(predict_rate(fit, 8.22 / 0.3631), 1.0);
  fit.slope = -0.4;
  EXPECT_NEAR(predict_rate(fit, 12.5) / predict_rate(fit, 10.0), 0.1, 1e-14);
}

TEST(Catalog, ParsesBundledTable) {
  const auto obs = read_catalog((arng::spectral::default_data_dir() / "table1_quasars.csv").string());
  ASSERT_EQ(obs.size(), 12u);
  EXPECT_EQ(obs[0].name, "3C 273");
  EXPECT_DOUBLE_EQ(obs[0].blue_rate, 672.0);
  EXPECT_DOUBLE_EQ(obs[0].red_rate, 1900.0);
  ASSERT_TRUE(obs[0].reported_q);
  EXPECT_DOUBLE_EQ(*obs[0].reported_q, 0.884);
  EXPECT_NO_THROW(fit_magnitude_rate(obs));
}

TEST(Catalog, RejectsMalformedRows) {
  std::istringstream few("a,1,2,3\n");
  EXPECT_THROW(parse_catalog(few), arng::FormatError);
  std::istringstream nan("a,x,,,1,1,0,0,1\n");
  EXPECT_THROW(parse_catalog(nan), arng::FormatError);
  std::istringstream neg("a,12,,,-1,1,0,0,1\n");
  EXPECT_THROW(parse_catalog(neg), arng::FormatError);
  std::istringstream ok("# comment\nname,v\nb,12,,0.5,10,20,1,2,\n");
  const auto o = parse_catalog(ok);
  ASSERT_EQ(o.size(), 1u);
  EXPECT_FALSE(o[0].b_magnitude);
  EXPECT_DOUBLE_EQ(o[0].airmass, 1.0);
}
