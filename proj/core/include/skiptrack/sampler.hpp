#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "skiptrack/dataset.hpp"
#include "skiptrack/model.hpp"
#include "skiptrack/random.hpp"
#include "skiptrack/samples.hpp"

namespace skiptrack {

struct ChainConfig {
  std::size_t n_chains = 5;
  std::size_t n_iter = 10000;
  std::size_t burn_in = 750;
  std::size_t thin = 1;
  std::uint64_t seed = 0;
  /// Worker threads for run_chains; 0 means hardware concurrency. Output does
  /// not depend on this value.
  std::size_t threads = 0;
  /// Also record tau_i and b_i draws for the first `trace_individuals`
  /// individuals, as columns tau_1, b_1, tau_2, ...
  std::size_t trace_individuals = 0;

  void validate() const;
};

struct MhTuning {
  double rho_gamma_prop = 1000;
  double rho_phi_prop = 1000;
  std::uint64_t gamma_proposed = 0;
  std::uint64_t gamma_accepted = 0;
  std::uint64_t phi_proposed = 0;
  std::uint64_t phi_accepted = 0;

  static MhTuning from(const Hyperparams& hyper) {
    MhTuning t;
    t.rho_gamma_prop = hyper.rho_gamma_prop;
    t.rho_phi_prop = hyper.rho_phi_prop;
    return t;
  }
};

struct GammaParams {
  double shape = 1.0;
  double rate = 1.0;
};

struct NormalParams {
  double mean = 0.0;
  double precision = 1.0;
};

struct MvNormalParams {
  std::vector<double> mean;
  std::vector<double> precision;  // row-major p x p
};

// Full conditionals of the Gibbs blocks. Each returns the exact
// distribution the corresponding update_* draws from.

/// Normalized probabilities of c = 1..k_skip for global cycle index k.
std::vector<double> c_conditional(const ModelState& state, const CycleDataset& data,
                                  const Hyperparams& hyper, std::size_t k);
/// Dirichlet concentration alpha + N_k.
std::vector<double> pi_conditional(const ModelState& state, const Hyperparams& hyper);
/// Gamma(theta_i phi + n_i / 2, phi + SS_i / 2).
GammaParams tau_conditional(const ModelState& state, const CycleDataset& data,
                            const Hyperparams& hyper, std::size_t i);
NormalParams b_conditional(const ModelState& state, const CycleDataset& data, std::size_t i);
MvNormalParams beta_conditional(const ModelState& state, const CycleDataset& data,
                                const Hyperparams& hyper);
/// Gamma((n - 1) / 2, sum b_i^2 / 2) under the improper prior; throws
/// ImproperConditional when n < 2 or every b_i is zero.
GammaParams rho_conditional(const ModelState& state, const Hyperparams& hyper);

void update_c(ModelState& state, const CycleDataset& data, const Hyperparams& hyper,
              std::span<const int> fixed_mask, Rng& rng);
void update_pi(ModelState& state, const Hyperparams& hyper, Rng& rng);
void update_tau(ModelState& state, const CycleDataset& data, const Hyperparams& hyper, Rng& rng);
void update_b(ModelState& state, const CycleDataset& data, Rng& rng);
void update_beta(ModelState& state, const CycleDataset& data, const Hyperparams& hyper, Rng& rng);
void update_rho(ModelState& state, const Hyperparams& hyper, Rng& rng);

/// Log target of the Metropolis blocks: sum_i log Gamma(tau_i | theta_i phi,
/// phi) plus the (flat or surrogate) priors on gamma and phi.
double precision_log_target(const ModelState& state, const CycleDataset& data,
                            const Hyperparams& hyper, std::span<const double> gamma, double phi);

/// log q(to | from) for the Gamma(mean from, rate rho_phi) proposal.
double phi_proposal_log_density(double to, double from, double rho_phi);

/// Acceptance probability of moving gamma to `proposal` (phi fixed).
double gamma_acceptance_probability(const ModelState& state, const CycleDataset& data,
                                    const Hyperparams& hyper, std::span<const double> proposal);
/// Acceptance probability of moving phi to `proposal` (gamma fixed),
/// including the Hastings correction.
double phi_acceptance_probability(const ModelState& state, const CycleDataset& data,
                                  const Hyperparams& hyper, double rho_phi_prop, double proposal);

struct MhOutcome {
  bool gamma_accepted = false;
  bool phi_accepted = false;
};

MhOutcome update_gamma_phi(ModelState& state, const CycleDataset& data, const Hyperparams& hyper,
                           MhTuning& tuning, Rng& rng);

/// One full scan: c, pi, tau, b, beta, rho, then the gamma and phi blocks.
void sweep(ModelState& state, const CycleDataset& data, const Hyperparams& hyper,
           std::span<const int> fixed_mask, MhTuning& tuning, Rng& rng);

/// Deterministic method-of-moments starting point.
ModelState initial_state(const CycleDataset& data, const Hyperparams& hyper);

/// Seed of chain `chain_index` under base seed `seed`.
std::uint64_t chain_seed(std::uint64_t seed, std::size_t chain_index);

PosteriorSamples run_chain(const CycleDataset& data, const Hyperparams& hyper,
                           const ChainConfig& config, std::size_t chain_index);

/// Runs config.n_chains independent chains and pools them in chain order.
PosteriorSamples run_chains(const CycleDataset& data, const Hyperparams& hyper,
                            const ChainConfig& config);

/// Runs `jobs` tasks on up to `threads` workers (0 = hardware concurrency).
/// Tasks are claimed in index order; callers store results by index.
void parallel_for(std::size_t jobs, std::size_t threads, const std::function<void(std::size_t)>& task);

}  // namespace skiptrack
