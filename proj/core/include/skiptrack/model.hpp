#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "skiptrack/dataset.hpp"

namespace skiptrack {

/// One joint draw of every model parameter.
///
/// `c` is indexed by global cycle index and holds skip multipliers in
/// 1..k_skip. `tau` and `b` are per individual. The mean parameter of the
/// precision distribution, theta_i = exp(z_i . gamma), is derived.
struct ModelState {
  std::vector<int> c;
  std::vector<double> pi;
  std::vector<double> tau;
  std::vector<double> b;
  std::vector<double> beta;
  double rho = 1.0;
  std::vector<double> gamma;
  double phi = 1.0;
};

struct CycleRef {
  std::size_t individual = 0;
  std::size_t cycle = 0;
  auto operator<=>(const CycleRef&) const = default;
};

/// Proper priors that replace the improper ones on rho, gamma and phi. Only
/// meant for calibration runs, which need a proper joint distribution.
struct SurrogatePriors {
  double rho_shape = 10.0;
  double rho_rate = 0.4;
  std::vector<double> gamma_mean;  // length q
  double gamma_precision = 4.0;
  double phi_shape = 10.0;
  double phi_rate = 200.0;
  /// Dirichlet concentration for pi; empty keeps the symmetric prior.
  std::vector<double> pi_alpha;
};

struct Hyperparams {
  int k_skip = 3;
  double rho_beta = 0.01;        // prior precision of beta
  double rho_gamma_prop = 1000;  // precision of the random-walk proposal on gamma
  double rho_phi_prop = 1000;    // rate of the Gamma(mean phi, rate) proposal on phi
  double dirichlet_alpha = 1.0;
  std::map<CycleRef, int> fixed_c;
  std::optional<SurrogatePriors> surrogate;
  /// Multiplies the rate of the tau full conditional. Anything other than 1
  /// yields a wrong sampler; used to check that calibration detects it.
  double tau_rate_mutation = 1.0;

  /// Throws InvalidParameter when a field is out of range.
  void validate() const;
  /// Dirichlet concentration of the prior on pi, length k_skip.
  std::vector<double> pi_prior() const;
};

/// Flattened fixed-skip mask: 0 where c is free, otherwise the fixed value.
std::vector<int> resolve_fixed_c(const Hyperparams& hyper, const CycleDataset& data);

/// x_ij . beta + b_i
double mu_of(const ModelState& state, const CycleDataset& data, std::size_t i, std::size_t j);

/// exp(z_i . gamma); throws DivergentLinkValue if the exponential overflows.
double theta_of(const ModelState& state, const CycleDataset& data, std::size_t i);
double theta_from_linear(double linear);

/// Log density of y under LogNormal(mu + log c, precision tau).
double loglik_obs(double y, double mu, int c, double tau);

/// Log of the Gamma(shape, rate) density at x.
double log_gamma_density(double x, double shape, double rate);
/// Log of the Normal density with the given precision.
double log_normal_density(double x, double mean, double precision);

/// Checks the ModelState invariants against the dataset dimensions.
/// Throws InvalidParameter.
void check_state(const ModelState& state, const CycleDataset& data, const Hyperparams& hyper);

/// Joint log density (up to the normalizing constant of the data) of the
/// state and the observed cycles. The improper prior on rho contributes
/// -1.5 log rho; gamma and phi have flat priors unless surrogates are set.
/// Throws NonFiniteLogDensity when any term is not finite.
double log_joint(const ModelState& state, const CycleDataset& data, const Hyperparams& hyper);

}  // namespace skiptrack
