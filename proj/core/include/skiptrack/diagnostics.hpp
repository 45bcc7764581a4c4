#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "skiptrack/dataset.hpp"
#include "skiptrack/model.hpp"
#include "skiptrack/sampler.hpp"
#include "skiptrack/samples.hpp"
#include "skiptrack/simulate.hpp"

namespace skiptrack {

// ---- quantiles and intervals ---------------------------------------------

/// Linear interpolation between order statistics: h = (n - 1) u, result
/// x[floor h] + (h - floor h) (x[floor h + 1] - x[floor h]). `sorted` must be
/// ascending and nonempty; u is clamped to [0, 1].
double quantile_sorted(std::span<const double> sorted, double u);
double quantile(std::vector<double> draws, double u);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return lo <= x && x <= hi; }
  bool excludes_zero() const noexcept { return lo > 0.0 || hi < 0.0; }
};

/// Equal-tailed interval at `level`. Throws InvalidParameter for an empty
/// sample or a level outside (0, 1).
Interval credible_interval(std::vector<double> draws, double level);

// ---- convergence ----------------------------------------------------------

/// Split-chain potential scale reduction. Each chain is cut into two halves
/// of n' draws. With W the mean within-half variance (divisor n') and B / n'
/// the variance of the half means (divisor 2m - 1), R = sqrt((W + B/n') / W).
/// Equals 1 exactly when every half has the same mean. Returns 1 when all
/// draws are equal. Throws InsufficientChains for fewer than 2 chains and
/// InsufficientData for fewer than 4 draws in any chain.
double gelman_rubin(const std::vector<std::vector<double>>& chains);

/// Geyer initial-positive-sequence ESS of one chain, clamped to [1, N].
double effective_sample_size(std::span<const double> draws);
/// Sum of per-chain ESS.
double effective_sample_size(const std::vector<std::vector<double>>& chains);

// ---- summaries ------------------------------------------------------------

struct SummaryRow {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double level = 0.95;
  double lo = 0.0;
  double hi = 0.0;
  double rhat = 1.0;  // NaN with a single chain
  double ess = 0.0;
};

using SummaryTable = std::vector<SummaryRow>;

SummaryTable summarize(const PosteriorSamples& samples, double level = 0.95);

struct SkipSummary {
  std::vector<int> map;  // mode, ties to the smaller multiplier
  std::vector<double> mean;
  std::vector<double> variance;
};

SkipSummary skip_posterior_summary(const SkipTally& draws);

/// Fraction of positions where map_c equals c_true. Throws LengthMismatch.
double skip_accuracy(std::span<const int> map_c, std::span<const int> c_true);

/// Mean of a per-cycle quantity over each individual's cycles.
std::vector<double> per_individual_mean(const CycleDataset& data, std::span<const double> per_cycle);

// ---- test statistics ------------------------------------------------------

/// Spearman rank correlation with average ranks for ties. NaN if either
/// input is constant. Throws LengthMismatch.
double spearman(std::span<const double> x, std::span<const double> y);

/// Upper tail of the chi-square distribution.
double chi_square_sf(double statistic, double df);

/// Pearson chi-square test that integer ranks are uniform on 0..max_rank,
/// using `bins` contiguous bins with exact expected counts.
double rank_uniformity_p(std::span<const std::size_t> ranks, std::size_t max_rank, std::size_t bins);

/// Asymptotic Kolmogorov-Smirnov p-values.
double ks_one_sample_p(std::vector<double> x, const std::function<double(double)>& cdf);
double ks_two_sample_p(std::vector<double> a, std::vector<double> b);

/// Exact equal-tailed binomial band for an observed proportion out of
/// `trials` when the true proportion is p: the smallest counts k with
/// P(X <= k) >= (1 - level) / 2 and >= (1 + level) / 2, divided by trials.
Interval binomial_band(double p, std::size_t trials, double level = 0.95);

// ---- simulation-based calibration -----------------------------------------

struct SbcDraw {
  CycleDataset data;
  std::vector<double> truth;  // ordered like SbcSettings::monitored
};

struct SbcSettings {
  std::size_t n = 20;
  std::size_t cycles = 5;
  std::size_t p = 2;
  std::size_t q = 2;
  std::size_t bins = 10;
  Hyperparams hyper;  // must carry surrogate priors
  ChainConfig chain;  // chain.thin sets how many draws the ranks are taken over
  std::vector<std::string> monitored;
};

/// Defaults for the calibration runs: n = 20 individuals with 5 cycles,
/// p = q = 2, one chain of 500 iterations of which the first 100 are burn-in,
/// every 10th draw kept, surrogate priors, and proposal scales matched to
/// the surrogate posterior.
SbcSettings sbc_default_settings();

/// Draws every parameter from the (surrogate) prior and simulates a dataset
/// with X and Z made of an intercept plus standard-normal columns.
SbcDraw sbc_prior_draw(const SbcSettings& settings, Rng& rng);

struct SbcResult {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> ranks;  // [parameter][replicate]
  std::size_t max_rank = 0;
  std::vector<double> p_values;
};

using SbcGenerator = std::function<SbcDraw(std::size_t replicate)>;

/// Fits every generated dataset and records the rank of the truth among the
/// retained draws of each monitored parameter. Replicates run on
/// `threads` workers; results are ordered by replicate index.
SbcResult sbc_calibration(const SbcGenerator& generator, const SbcSettings& settings, std::size_t replicates,
                          std::size_t threads = 1);

/// Convenience wrapper using sbc_prior_draw with replicate seeds derived
/// from `seed`.
SbcResult sbc_calibration(const SbcSettings& settings, std::size_t replicates, std::uint64_t seed,
                          std::size_t threads = 1);

// ---- replicated simulation harness ----------------------------------------

enum class FitMode { Full, FixedSkips };

const char* to_string(FitMode mode);
FitMode fit_mode_from_string(const std::string& text);

struct HarnessConfig {
  ScenarioParams sim;
  Hyperparams hyper;
  ChainConfig chain;
  double level = 0.95;
  std::size_t threads = 1;  // replicates in flight; chains inside run serially
};

/// Per-replicate outcome. Estimates are posterior means of the columns in
/// SimReport::parameters.
struct ReplicateRecord {
  std::size_t replicate = 0;
  bool failed = false;
  std::string error;
  std::vector<double> estimate;
  std::vector<double> lo;
  std::vector<double> hi;
  double skip_accuracy = 0.0;        // SkipTrack MAP c against the truth
  double comparator_accuracy = 0.0;  // Poisson MAP c (fixed-skips mode only)
};

struct ParameterReport {
  std::string name;
  double truth = 0.0;
  double bias = 0.0;
  double width = 0.0;
  double coverage = 0.0;
  double rejection_rate = 0.0;  // interval excludes zero
  bool null_effect = false;
};

struct SimReport {
  Scenario scenario = Scenario::SkipTrack;
  std::size_t n = 0;
  FitMode mode = FitMode::Full;
  std::size_t replicates = 0;
  std::size_t failures = 0;
  std::vector<ParameterReport> parameters;  // non-intercept beta then gamma
  std::vector<ReplicateRecord> records;
  double mean_skip_accuracy = 0.0;
  double mean_comparator_accuracy = 0.0;

  std::size_t succeeded() const noexcept { return replicates - failures; }
  /// Pooled rejection rate over null (Type I) or non-null (Type II
  /// non-rejection) parameters whose names start with `prefix`.
  double type_one(const std::string& prefix) const;
  double type_two(const std::string& prefix) const;
};

/// Simulates and fits `replicates` datasets. Replicate r uses data seed
/// replicate_seed(seed, scenario, n, r) and chain seed
/// derive_seed(seed, {0xF17, scenario, n, r}), so both fit modes see the same
/// data and the same chain streams. Failed replicates are recorded and
/// excluded from the aggregates.
SimReport replicate_harness(Scenario scenario, std::size_t n, std::size_t replicates, FitMode mode,
                            std::uint64_t seed, const HarnessConfig& config);

/// Recomputes the aggregates of `report` from its records.
void aggregate(SimReport& report);

struct CovariateGroup {
  std::string name;
  std::vector<std::string> parameters;
};

struct AttenuationRow {
  std::string group;
  double mean_ratio = 0.0;      // mean over replicates and members of fixed / full
  double ratio_of_means = 0.0;  // mean fixed / mean full
  std::size_t pairs = 0;
  std::size_t excluded = 0;     // |full estimate| < 1e-6
};

/// Matches replicates by index. Throws LengthMismatch when the reports do
/// not describe the same replicates and parameters.
std::vector<AttenuationRow> attenuation_report(const SimReport& full, const SimReport& fixed,
                                               const std::vector<CovariateGroup>& groups);

/// Mean-channel covariates 1-10, and regularity-channel covariates 1-5 and
/// 11-15, named as in SimReport::parameters.
std::vector<CovariateGroup> mixture_groups();

}  // namespace skiptrack
