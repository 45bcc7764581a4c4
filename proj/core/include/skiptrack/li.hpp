#pragma once

#include <cstddef>
#include <vector>

#include "skiptrack/dataset.hpp"
#include "skiptrack/model.hpp"
#include "skiptrack/random.hpp"
#include "skiptrack/sampler.hpp"
#include "skiptrack/samples.hpp"

namespace skiptrack {

/// Poisson skip-identification model used as the comparator:
///   y_ij ~ Poisson(c_ij * lambda_i), lambda_i ~ Gamma(shape, rate),
///   c_ij ~ Categorical(pi), pi ~ Dirichlet(1, ..., 1).
/// A single subject-level parameter drives both mean and variance, so skip
/// inference cannot adapt to how regular an individual is.
struct LiModelSpec {
  double lambda_shape = 1.0;
  double lambda_rate = 1.0;
  std::vector<double> pi_li;  // starting skip probabilities over 1..K
  bool near_degenerate = false;
};

/// Moment-matches the Gamma hyperprior to per-individual mean lengths, after
/// removing the expected Poisson sampling variance of each mean. Throws
/// InsufficientData when fewer than two individuals are present, and
/// DomainError when the moments overflow.
LiModelSpec li_fit_hyperparams(const CycleDataset& data, int k_skip = 3);

/// Normalized P(c = k | lambda, pi) for one cycle.
std::vector<double> li_c_conditional(double y, double lambda, std::span<const double> pi);
/// Gamma(shape + sum_j y_ij, rate + sum_j c_ij).
GammaParams li_lambda_conditional(const CycleDataset& data, const LiModelSpec& spec, std::span<const int> c,
                                  std::size_t i);

struct LiDraws {
  std::vector<SkipTally> per_chain;
  SkipTally pooled;
  std::vector<double> lambda_mean;
};

/// Gibbs sampler over (c, pi, lambda); chains seeded from config.seed on a
/// stream distinct from the SkipTrack sampler's.
LiDraws li_sample_c(const CycleDataset& data, const LiModelSpec& spec, const ChainConfig& config);

/// Per-cycle mode of the tallied draws; ties go to the smaller multiplier.
std::vector<int> li_map_c(const SkipTally& draws);

struct FixedSkipsResult {
  LiModelSpec spec;
  std::vector<int> map_c;
  PosteriorSamples samples;
};

/// Estimate skips with the Poisson model, freeze them at their MAP values,
/// then fit SkipTrack with every c fixed.
FixedSkipsResult fixed_skips_fit(const CycleDataset& data, const Hyperparams& hyper, const ChainConfig& config);

/// Hyperparams copy with every cycle's skip fixed to `c` (global order).
Hyperparams with_fixed_skips(const Hyperparams& hyper, const CycleDataset& data, std::span<const int> c);

}  // namespace skiptrack
