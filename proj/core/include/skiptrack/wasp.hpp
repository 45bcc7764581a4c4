#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "skiptrack/dataset.hpp"
#include "skiptrack/model.hpp"
#include "skiptrack/sampler.hpp"
#include "skiptrack/samples.hpp"

namespace skiptrack {

/// Assignment of individuals (by dataset position) to subsets 0..k_part-1.
struct Partition {
  std::size_t k_part = 1;
  std::vector<std::size_t> assignment;

  std::vector<std::size_t> sizes() const;
  /// Individual positions of each subset, ascending.
  std::vector<std::vector<std::size_t>> members() const;
};

/// Shuffles individuals with a generator seeded from `seed`, then deals them
/// round-robin, so subset sizes differ by at most one. Throws
/// TooManyPartitions when k_part exceeds the number of individuals and
/// InvalidParameter when k_part is 0.
Partition partition_by_individual(const CycleDataset& data, std::size_t k_part, std::uint64_t seed);

/// Chain seed of subset k. Subset 0 keeps the base seed so a single subset
/// reproduces a plain fit.
std::uint64_t subset_seed(std::uint64_t seed, std::size_t subset);

struct SubsetFit {
  std::size_t index = 0;
  std::size_t individuals = 0;
  std::size_t cycles = 0;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;
  bool failed = false;
  std::string error;
  PosteriorSamples samples;  // beta and gamma columns only
};

struct SubPosteriorSet {
  std::vector<SubsetFit> subsets;

  std::size_t failures() const;
};

/// How each subset's likelihood enters its fit. Raised fits subset k with
/// every individual copied k_part times, so the subset posterior is
/// proportional to the prior times the subset likelihood to the power k_part
/// and has roughly the spread of the full posterior. Plain fits the subset
/// as is; its posterior is about sqrt(k_part) times wider.
enum class SubsetLikelihood { Raised, Plain };

const char* to_string(SubsetLikelihood mode);
SubsetLikelihood subset_likelihood_from_string(const std::string& text);

using SubsetFitter =
    std::function<PosteriorSamples(const CycleDataset&, const Hyperparams&, const ChainConfig&, std::size_t subset)>;

/// Fits every subset with run_chains (or `fitter` when given). Subsets run
/// on up to `threads` workers; a failing subset is recorded with its error
/// and the others are kept. With one subset both likelihood modes reduce to
/// a plain run_chains call.
SubPosteriorSet fit_subsets(const CycleDataset& data, const Partition& partition, const Hyperparams& hyper,
                            const ChainConfig& config, std::size_t threads = 1, const SubsetFitter& fitter = {},
                            SubsetLikelihood likelihood = SubsetLikelihood::Raised);

/// Keeps the beta_* and gamma_* columns of `samples`.
PosteriorSamples restrict_to_regression(const PosteriorSamples& samples);

/// One-dimensional W2 barycenter of the given samples: the value at level
/// u_t = (t + 1/2) / draws_out is the mean over subsets of each subset's
/// empirical u_t-quantile.
std::vector<double> wasp_marginal(const std::vector<std::vector<double>>& subset_draws, std::size_t draws_out);

inline constexpr std::size_t kDefaultWaspDraws = 10000;

/// Per-marginal barycenter of the successful subsets, packaged as a single
/// chain of draws_out rows. Throws InsufficientData when no subset
/// succeeded and DimensionMismatch when the subsets disagree on columns.
PosteriorSamples combine_wasp(const SubPosteriorSet& subs, std::size_t draws_out = kDefaultWaspDraws);

}  // namespace skiptrack
