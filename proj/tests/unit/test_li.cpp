#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "fixtures.hpp"
#include "skiptrack/diagnostics.hpp"
#include "skiptrack/error.hpp"
#include "skiptrack/li.hpp"
#include "skiptrack/simulate.hpp"

using namespace skiptrack;
using skiptrack::testing::plain;

TEST(Li, DegenerateCohortIsFlagged) {
  const auto data = validate_dataset({plain("a", {28, 28, 28}), plain("b", {28, 28, 28}), plain("c", {28, 28, 28})});
  const auto spec = li_fit_hyperparams(data);
  EXPECT_TRUE(spec.near_degenerate);
  EXPECT_TRUE(std::isfinite(spec.lambda_rate));
  EXPECT_NEAR(spec.lambda_shape / spec.lambda_rate, 28.0, 1e-9);
}

TEST(Li, EmptyCohortIsRejected) {
  try {
    li_fit_hyperparams(validate_dataset({}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientData);
  }
}

TEST(Li, OverflowingMomentsAreRejected) {
  const auto data = validate_dataset({plain("a", {28, 1e200}), plain("b", {28, 30}), plain("c", {27, 29})});
  try {
    li_fit_hyperparams(data);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DomainError);
  }
}

TEST(Li, MomentMatchingRecoversGammaHyperprior) {
  Rng rng(17);
  std::vector<IndividualRecord> recs;
  for (int i = 0; i < 5000; ++i) {
    const double lambda = rng.gamma(60.0, 2.0);
    std::vector<double> y;
    for (int j = 0; j < 13; ++j) y.push_back(static_cast<double>(std::max<std::int64_t>(1, rng.poisson(lambda))));
    recs.push_back(plain("i" + std::to_string(i), y));
  }
  const auto spec = li_fit_hyperparams(validate_dataset(recs));
  EXPECT_FALSE(spec.near_degenerate);
  EXPECT_NEAR(spec.lambda_shape / 60.0, 1.0, 0.10);
  EXPECT_NEAR(spec.lambda_rate / 2.0, 1.0, 0.10);
}

TEST(Li, SkipConditionalPeaksAtPoissonMode) {
  const std::vector<double> pi(3, 1.0 / 3.0);
  const auto p = li_c_conditional(56, 28, pi);
  EXPECT_GT(p[1], p[0]);
  EXPECT_GT(p[1], p[2]);
}

TEST(Li, SkipConditionalIsProportionalToJoint) {
  const std::vector<double> pi{0.7, 0.2, 0.1};
  const double y = 47, lambda = 26.5;
  const auto p = li_c_conditional(y, lambda, pi);
  std::vector<double> joint(3);
  double z = 0.0;
  for (int k = 1; k <= 3; ++k) {
    // Poisson(y | k lambda) pi_k
    joint[k - 1] = pi[k - 1] * std::exp(y * std::log(k * lambda) - k * lambda - std::lgamma(y + 1));
    z += joint[k - 1];
  }
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(p[k], joint[k] / z, 1e-8);
}

TEST(Li, LambdaConditionalWithFixedSkips) {
  const auto data = validate_dataset({plain("a", {28, 60}), plain("b", {30})});
  LiModelSpec spec;
  spec.lambda_shape = 50;
  spec.lambda_rate = 2;
  const std::vector<int> c{1, 2, 1};
  const auto g = li_lambda_conditional(data, spec, c, 0);
  EXPECT_DOUBLE_EQ(g.shape, 50 + 88);
  EXPECT_DOUBLE_EQ(g.rate, 2 + 3);
}

TEST(Li, MapTieBreaksLow) {
  SkipTally t(2, 3);
  for (int c : {1, 1, 1, 2}) t.record(0, c);
  for (int c : {1, 1, 2, 2}) t.record(1, c);
  EXPECT_EQ(li_map_c(t), (std::vector<int>{1, 1}));
}

TEST(Li, FixedSkipsUsesComparatorMap) {
  Rng rng(31);
  const auto sim = simulate_skiptrack(30, 8, skiptrack_defaults(), rng);
  ChainConfig cfg;
  cfg.n_chains = 2;
  cfg.n_iter = 200;
  cfg.burn_in = 50;
  cfg.seed = 9;
  const auto r = fixed_skips_fit(sim.data, Hyperparams{}, cfg);
  ASSERT_EQ(r.map_c.size(), sim.data.num_cycles());
  const auto summary = skip_posterior_summary(r.samples.c_draws);
  EXPECT_EQ(summary.map, r.map_c);
  for (double v : summary.variance) EXPECT_EQ(v, 0.0);
}

TEST(Li, FixingTheTruthEqualsFixedSkipsWhenMapIsExact) {
  Rng rng(32);
  const auto sim = simulate_skiptrack(20, 6, skiptrack_defaults(), rng);
  ChainConfig cfg;
  cfg.n_chains = 1;
  cfg.n_iter = 100;
  cfg.burn_in = 20;
  cfg.seed = 3;
  const auto fixed = fixed_skips_fit(sim.data, Hyperparams{}, cfg);
  const auto truth_fit = run_chains(sim.data, with_fixed_skips(Hyperparams{}, sim.data, fixed.map_c), cfg);
  EXPECT_EQ(fixed.samples.chains[0].values, truth_fit.chains[0].values);
}
