#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace skiptrack {

/// Per-cycle counts of sampled skip values: counts[k * k_skip + (c - 1)].
struct SkipTally {
  std::size_t num_cycles = 0;
  int k_skip = 0;
  std::vector<std::uint64_t> counts;

  SkipTally() = default;
  SkipTally(std::size_t cycles, int k) : num_cycles(cycles), k_skip(k), counts(cycles * static_cast<std::size_t>(k), 0) {}

  void record(std::size_t cycle, int c) { ++counts[cycle * static_cast<std::size_t>(k_skip) + static_cast<std::size_t>(c - 1)]; }
  std::uint64_t count(std::size_t cycle, int c) const {
    return counts[cycle * static_cast<std::size_t>(k_skip) + static_cast<std::size_t>(c - 1)];
  }
  std::uint64_t total(std::size_t cycle) const;
  void merge(const SkipTally& other);
};

struct ChainDraws {
  std::size_t num_draws = 0;
  std::vector<double> values;  // row-major num_draws x dim
  double accept_gamma = 0.0;   // post burn-in acceptance rates
  double accept_phi = 0.0;
};

/// Retained draws of the global parameters for every chain, plus pooled
/// skip tallies and per-individual posterior means of tau and b.
struct PosteriorSamples {
  std::vector<std::string> names;  // column names, e.g. beta_1, gamma_2, rho
  std::vector<ChainDraws> chains;
  std::size_t n_iter = 0;
  std::size_t burn_in = 0;
  std::size_t thin = 1;
  std::uint64_t seed = 0;
  SkipTally c_draws;
  std::vector<double> tau_mean;
  std::vector<double> b_mean;

  std::size_t dim() const noexcept { return names.size(); }
  std::size_t num_chains() const noexcept { return chains.size(); }
  std::size_t total_draws() const;
  /// Column index of `name`; throws InvalidParameter if absent.
  std::size_t column(const std::string& name) const;
  std::vector<double> pooled(std::size_t column) const;
  std::vector<std::vector<double>> by_chain(std::size_t column) const;
  std::vector<double> posterior_means() const;
};

/// Column names used by the sampler: beta_1..beta_p, gamma_1..gamma_q, rho,
/// phi, pi_1..pi_K.
std::vector<std::string> parameter_names(std::size_t p, std::size_t q, int k_skip);

}  // namespace skiptrack
