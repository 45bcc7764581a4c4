#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "skiptrack/diagnostics.hpp"
#include "skiptrack/error.hpp"
#include "skiptrack/random.hpp"

using namespace skiptrack;

TEST(Quantiles, LinearInterpolationConvention) {
  std::vector<double> x{0.3, -1.2, 2.5, 0.7, 0.7, 1.9, -0.4, 3.3};
  // numpy.quantile default method on the same sample
  const std::vector<std::pair<double, double>> expected{{0.0, -1.2},  {0.1, -0.64}, {0.25, 0.125}, {0.5, 0.7},
                                                        {0.9, 2.74}, {0.975, 3.16}, {1.0, 3.3}};
  for (const auto& [u, q] : expected) EXPECT_NEAR(quantile(x, u), q, 1e-12) << u;
  const auto iv = credible_interval({0.0, 1.0}, 0.5);
  EXPECT_DOUBLE_EQ(iv.lo, 0.25);
  EXPECT_DOUBLE_EQ(iv.hi, 0.75);
}

TEST(Quantiles, IntervalIsPermutationInvariant) {
  std::vector<double> x(501);
  Rng rng(1);
  for (auto& v : x) v = rng.standard_normal();
  const auto a = credible_interval(x, 0.9);
  std::shuffle(x.begin(), x.end(), rng.engine());
  const auto b = credible_interval(x, 0.9);
  EXPECT_EQ(a.lo, b.lo);
  EXPECT_EQ(a.hi, b.hi);
}

TEST(Quantiles, NormalInterval) {
  std::vector<double> x(1000000);
  Rng rng(2);
  for (auto& v : x) v = rng.standard_normal();
  const auto iv = credible_interval(std::move(x), 0.95);
  EXPECT_NEAR(iv.lo, -1.959964, 0.01);
  EXPECT_NEAR(iv.hi, 1.959964, 0.01);
}

TEST(Quantiles, Guards) {
  EXPECT_THROW(credible_interval({}, 0.95), Error);
  EXPECT_THROW(credible_interval({1.0}, 1.0), Error);
  EXPECT_TRUE((Interval{0.1, 0.3}).excludes_zero());
  EXPECT_FALSE((Interval{-0.1, 0.3}).excludes_zero());
}

TEST(GelmanRubin, IdenticalChainsGiveOne) {
  std::vector<double> c{0.3, 1.2, -0.4, 0.8, 0.3, 1.2, -0.4, 0.8};
  EXPECT_NEAR(gelman_rubin({c, c, c}), 1.0, 1e-9);
}

TEST(GelmanRubin, MatchesIndependentComputation) {
  const std::vector<std::vector<double>> chains{
      {1.0, 2.0, 0.5, 1.5, 3.0, 2.2}, {0.1, 0.4, 1.9, 2.5, 2.8, 0.9}, {1.2, 1.1, 1.3, 0.7, 2.0, 1.6}};
  EXPECT_NEAR(gelman_rubin(chains), 1.3349842080792176, 1e-12);
}

TEST(GelmanRubin, SeparatedChainsAndGuards) {
  Rng rng(3);
  std::vector<double> a(1000), b(1000);
  for (auto& v : a) v = rng.standard_normal();
  for (auto& v : b) v = 10 + rng.standard_normal();
  EXPECT_GT(gelman_rubin({a, b}), 1.1 * 3);
  try {
    gelman_rubin({a});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientChains);
  }
}

TEST(Ess, IidNormal) {
  std::vector<double> x(10000);
  Rng rng(4);
  for (auto& v : x) v = rng.standard_normal();
  EXPECT_NEAR(effective_sample_size(x) / 10000.0, 1.0, 0.10);
}

TEST(Ess, Ar1Process) {
  const std::size_t n = 100000;
  std::vector<double> x(n);
  Rng rng(5);
  x[0] = rng.standard_normal() / std::sqrt(1 - 0.81);
  for (std::size_t t = 1; t < n; ++t) x[t] = 0.9 * x[t - 1] + rng.standard_normal();
  const double analytic = static_cast<double>(n) * 0.1 / 1.9;
  EXPECT_NEAR(effective_sample_size(x) / analytic, 1.0, 0.20);
}

TEST(Ess, ConstantSequenceClampsToOne) {
  const std::vector<double> x(500, 2.5);
  EXPECT_DOUBLE_EQ(effective_sample_size(x), 1.0);
}

TEST(SkipSummary, DegenerateAndTwoPoint) {
  SkipTally t(2, 3);
  for (int r = 0; r < 4; ++r) t.record(0, 2);
  for (int c : {1, 2, 1, 2}) t.record(1, c);
  const auto s = skip_posterior_summary(t);
  EXPECT_EQ(s.map, (std::vector<int>{2, 1}));
  EXPECT_DOUBLE_EQ(s.mean[0], 2.0);
  EXPECT_DOUBLE_EQ(s.variance[0], 0.0);
  EXPECT_DOUBLE_EQ(s.mean[1], 1.5);
  EXPECT_DOUBLE_EQ(s.variance[1], 0.25);
}

TEST(SkipSummary, Accuracy) {
  const std::vector<int> a{1, 2, 1, 3}, b{2, 1, 2, 1};
  EXPECT_DOUBLE_EQ(skip_accuracy(a, a), 1.0);
  EXPECT_DOUBLE_EQ(skip_accuracy(a, b), 0.0);
  EXPECT_THROW(skip_accuracy(a, std::vector<int>{1}), Error);
}

TEST(Statistics, SpearmanWithTies) {
  const std::vector<double> a{0.2, 1.5, -0.3, 2.2, 0.9, 0.9, -1.1, 3.0};
  const std::vector<double> b{1.0, 0.4, 0.4, 2.0, 1.7, -0.5, 2.9, 0.1};
  EXPECT_NEAR(spearman(a, b), -0.34939759036144574, 1e-12);
  EXPECT_TRUE(std::isnan(spearman(std::vector<double>(4, 1.0), std::vector<double>(b.begin(), b.begin() + 4))));
}

TEST(Statistics, ChiSquareTail) {
  EXPECT_NEAR(chi_square_sf(12.3, 9), 0.19692022639855333, 1e-12);
  EXPECT_NEAR(chi_square_sf(0.5, 3), 0.9188914116546758, 1e-12);
}

TEST(Statistics, KolmogorovAsymptotics) {
  // evenly spaced points squeezed onto [0, 0.9] and [0, 0.97]; D is known
  // exactly, reference p-values from the limiting Kolmogorov distribution
  auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  std::vector<double> a(100), b(400);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = (i + 0.5) / 100.0 * 0.9;
  for (std::size_t i = 0; i < b.size(); ++i) b[i] = (i + 0.5) / 400.0 * 0.97;
  EXPECT_NEAR(ks_one_sample_p(a, uniform), 0.2123114388851839, 1e-9);
  EXPECT_NEAR(ks_one_sample_p(b, uniform), 0.8249386299775221, 1e-9);
}

TEST(Statistics, TwoSampleKs) {
  Rng rng(6);
  std::vector<double> a(5000), b(5000), c(5000);
  for (auto& v : a) v = rng.standard_normal();
  for (auto& v : b) v = rng.standard_normal();
  for (auto& v : c) v = 0.2 + rng.standard_normal();
  EXPECT_GT(ks_two_sample_p(a, b), 0.01);
  EXPECT_LT(ks_two_sample_p(a, c), 1e-6);
}

TEST(Statistics, BinomialBand) {
  // scipy.stats.binom.ppf(0.025, N, p) / N and isf(0.025, N, p) / N
  auto band = binomial_band(0.95, 50);
  EXPECT_DOUBLE_EQ(band.lo, 0.88);
  EXPECT_DOUBLE_EQ(band.hi, 1.0);
  band = binomial_band(0.05, 100);
  EXPECT_DOUBLE_EQ(band.lo, 0.01);
  EXPECT_DOUBLE_EQ(band.hi, 0.10);
  band = binomial_band(0.955, 50);
  EXPECT_DOUBLE_EQ(band.lo, 0.90);
  EXPECT_DOUBLE_EQ(band.hi, 1.0);
}

TEST(Statistics, RankUniformity) {
  std::vector<std::size_t> flat;
  for (std::size_t r = 0; r < 400; ++r) flat.push_back(r % 40);
  EXPECT_GT(rank_uniformity_p(flat, 39, 10), 0.99);
  std::vector<std::size_t> spike(400, 0);
  EXPECT_LT(rank_uniformity_p(spike, 39, 10), 1e-10);
}

TEST(Sbc, RanksBoundedByRetainedDraws) {
  auto settings = sbc_default_settings();
  const auto res = sbc_calibration(settings, 4, 10);
  EXPECT_EQ(res.max_rank, (settings.chain.n_iter - settings.chain.burn_in) / settings.chain.thin);
  EXPECT_EQ(res.names, settings.monitored);
  for (const auto& per_param : res.ranks) {
    ASSERT_EQ(per_param.size(), 4u);
    for (std::size_t r : per_param) EXPECT_LE(r, res.max_rank);
  }
}

namespace {

SimReport toy_report(const std::vector<std::vector<double>>& estimates) {
  SimReport r;
  r.n = 10;
  r.replicates = estimates.size();
  r.parameters = {{"beta_2", 0.1}, {"beta_3", 0.0, 0, 0, 0, 0, true}, {"gamma_2", 0.3}};
  for (std::size_t k = 0; k < estimates.size(); ++k) {
    ReplicateRecord rec;
    rec.replicate = k;
    rec.estimate = estimates[k];
    for (double e : estimates[k]) {
      rec.lo.push_back(e - 0.05);
      rec.hi.push_back(e + 0.05);
    }
    r.records.push_back(rec);
  }
  aggregate(r);
  return r;
}

}  // namespace

TEST(Harness, AggregatesFromRecords) {
  const auto r = toy_report({{0.12, 0.01, 0.3}, {0.06, 0.2, 0.1}});
  EXPECT_NEAR(r.parameters[0].bias, -0.01, 1e-12);
  EXPECT_NEAR(r.parameters[0].width, 0.1, 1e-12);
  EXPECT_NEAR(r.parameters[0].coverage, 1.0, 1e-12);
  EXPECT_NEAR(r.parameters[2].coverage, 0.5, 1e-12);
  EXPECT_NEAR(r.type_one("beta_"), 0.5, 1e-12);
  EXPECT_NEAR(r.type_two("beta_"), 0.0, 1e-12);
}

TEST(Harness, IdenticalEstimatesGiveUnitAttenuation) {
  const auto full = toy_report({{0.12, 0.01, 0.3}, {0.06, 0.2, 0.1}});
  const std::vector<CovariateGroup> groups{{"mean", {"beta_2", "beta_3"}}, {"precision", {"gamma_2"}}};
  for (const auto& row : attenuation_report(full, full, groups)) {
    EXPECT_DOUBLE_EQ(row.mean_ratio, 1.0);
    EXPECT_DOUBLE_EQ(row.ratio_of_means, 1.0);
  }
  const auto half = toy_report({{0.06, 0.005, 0.15}, {0.03, 0.1, 0.05}});
  EXPECT_NEAR(attenuation_report(full, half, groups)[0].mean_ratio, 0.5, 1e-12);
}

TEST(Harness, ModesAgreeWithoutSkips) {
  HarnessConfig cfg;
  cfg.sim.skiptrack.pi = {1.0, 0.0, 0.0};
  cfg.sim.cycles_per_individual = 8;
  cfg.chain.n_chains = 2;
  cfg.chain.n_iter = 4000;
  cfg.chain.burn_in = 750;
  const auto full = replicate_harness(Scenario::SkipTrack, 60, 2, FitMode::Full, 5, cfg);
  const auto fixed = replicate_harness(Scenario::SkipTrack, 60, 2, FitMode::FixedSkips, 5, cfg);
  ASSERT_EQ(full.failures + fixed.failures, 0u);
  EXPECT_GE(fixed.mean_comparator_accuracy, 0.99);
  EXPECT_GE(full.mean_skip_accuracy, 0.99);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t j = 0; j < full.parameters.size(); ++j) {
      const double width = full.records[r].hi[j] - full.records[r].lo[j];
      EXPECT_NEAR(full.records[r].estimate[j], fixed.records[r].estimate[j], 0.25 * width) << full.parameters[j].name;
    }
}

TEST(Harness, FitModeNames) {
  EXPECT_STREQ(to_string(FitMode::FixedSkips), "fixed");
  EXPECT_EQ(fit_mode_from_string("full"), FitMode::Full);
  EXPECT_THROW(fit_mode_from_string("bogus"), Error);
}
