#include "skiptrack/model.hpp"

#include <cfloat>
#include <cmath>
#include <numbers>
#include <string>

#include "skiptrack/error.hpp"

namespace skiptrack {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * log(2 pi)

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::InvalidParameter, what);
}

}  // namespace

void Hyperparams::validate() const {
  require(k_skip >= 1, "k_skip must be >= 1");
  require(rho_beta > 0.0 && std::isfinite(rho_beta), "rho_beta must be positive");
  require(rho_gamma_prop > 0.0 && std::isfinite(rho_gamma_prop), "rho_gamma_prop must be positive");
  require(rho_phi_prop > 0.0 && std::isfinite(rho_phi_prop), "rho_phi_prop must be positive");
  require(dirichlet_alpha > 0.0 && std::isfinite(dirichlet_alpha), "dirichlet_alpha must be positive");
  require(tau_rate_mutation > 0.0, "tau_rate_mutation must be positive");
  for (const auto& [ref, c] : fixed_c)
    require(c >= 1 && c <= k_skip, "fixed skip value out of range");
  if (surrogate) {
    require(surrogate->rho_shape > 0 && surrogate->rho_rate > 0, "surrogate rho prior");
    require(surrogate->gamma_precision > 0, "surrogate gamma prior");
    require(surrogate->phi_shape > 0 && surrogate->phi_rate > 0, "surrogate phi prior");
    require(surrogate->pi_alpha.empty() || surrogate->pi_alpha.size() == static_cast<std::size_t>(k_skip),
            "surrogate pi_alpha must have k_skip entries");
    for (double a : surrogate->pi_alpha) require(a > 0.0 && std::isfinite(a), "surrogate pi_alpha must be positive");
  }
}

std::vector<double> Hyperparams::pi_prior() const {
  if (surrogate && !surrogate->pi_alpha.empty()) return surrogate->pi_alpha;
  return std::vector<double>(static_cast<std::size_t>(k_skip), dirichlet_alpha);
}

std::vector<int> resolve_fixed_c(const Hyperparams& hyper, const CycleDataset& data) {
  std::vector<int> mask(data.num_cycles(), 0);
  for (const auto& [ref, c] : hyper.fixed_c) {
    if (ref.individual >= data.num_individuals() || ref.cycle >= data.cycle_count(ref.individual))
      throw Error(ErrorCode::InvalidParameter,
                  "fixed skip refers to missing cycle (" + std::to_string(ref.individual) + ", " +
                      std::to_string(ref.cycle) + ")");
    mask[data.cycle_index(ref.individual, ref.cycle)] = c;
  }
  return mask;
}

double mu_of(const ModelState& state, const CycleDataset& data, std::size_t i, std::size_t j) {
  if (i >= data.num_individuals() || j >= data.cycle_count(i))
    throw Error(ErrorCode::InvalidParameter, "cycle index out of range");
  return dot(data.x_row(data.cycle_index(i, j)), state.beta) + state.b[i];
}

double theta_from_linear(double linear) {
  static const double kMaxLog = std::log(DBL_MAX);
  if (!(linear <= kMaxLog))
    throw Error(ErrorCode::DivergentLinkValue, "z . gamma = " + std::to_string(linear));
  return std::exp(linear);
}

double theta_of(const ModelState& state, const CycleDataset& data, std::size_t i) {
  if (i >= data.num_individuals()) throw Error(ErrorCode::InvalidParameter, "individual out of range");
  return theta_from_linear(dot(data.z_row(i), state.gamma));
}

double loglik_obs(double y, double mu, int c, double tau) {
  if (!(y > 0.0) || c < 1 || !(tau > 0.0))
    throw Error(ErrorCode::DomainError, "loglik_obs requires y > 0, c >= 1, tau > 0");
  const double r = std::log(y) - mu - std::log(static_cast<double>(c));
  return 0.5 * std::log(tau) - kHalfLog2Pi - std::log(y) - 0.5 * tau * r * r;
}

double log_gamma_density(double x, double shape, double rate) {
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double log_normal_density(double x, double mean, double precision) {
  const double d = x - mean;
  return 0.5 * std::log(precision) - kHalfLog2Pi - 0.5 * precision * d * d;
}

void check_state(const ModelState& s, const CycleDataset& data, const Hyperparams& hyper) {
  const auto K = static_cast<std::size_t>(hyper.k_skip);
  require(s.c.size() == data.num_cycles(), "c has wrong length");
  require(s.pi.size() == K, "pi has wrong length");
  require(s.tau.size() == data.num_individuals(), "tau has wrong length");
  require(s.b.size() == data.num_individuals(), "b has wrong length");
  require(s.beta.size() == data.mean_dim(), "beta has wrong length");
  require(s.gamma.size() == data.regularity_dim(), "gamma has wrong length");
  double sum = 0.0;
  for (double v : s.pi) {
    require(v >= 0.0, "pi entries must be nonnegative");
    sum += v;
  }
  require(std::abs(sum - 1.0) <= 1e-12, "pi must sum to 1");
  for (int c : s.c) require(c >= 1 && c <= hyper.k_skip, "c out of range");
  for (double t : s.tau) require(t > 0.0, "tau must be positive");
  require(s.rho > 0.0, "rho must be positive");
  require(s.phi > 0.0, "phi must be positive");
}

double log_joint(const ModelState& s, const CycleDataset& data, const Hyperparams& hyper) {
  const std::size_t n = data.num_individuals();
  double total = 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    const double tau = s.tau[i];
    const double half_log_tau = 0.5 * std::log(tau);
    for (std::size_t k = data.first_cycle(i); k < data.first_cycle(i + 1); ++k) {
      const double log_y = data.log_length(k);
      const int c = s.c[k];
      const double r = log_y - dot(data.x_row(k), s.beta) - s.b[i] - std::log(static_cast<double>(c));
      total += half_log_tau - kHalfLog2Pi - log_y - 0.5 * tau * r * r;
      total += std::log(s.pi[static_cast<std::size_t>(c - 1)]);
    }
  }

  const auto alpha = hyper.pi_prior();
  double alpha_sum = 0.0;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    alpha_sum += alpha[k];
    total += (alpha[k] - 1.0) * std::log(s.pi[k]) - std::lgamma(alpha[k]);
  }
  total += std::lgamma(alpha_sum);

  for (std::size_t i = 0; i < n; ++i) {
    const double theta = theta_from_linear(dot(data.z_row(i), s.gamma));
    total += log_gamma_density(s.tau[i], theta * s.phi, s.phi);
    total += log_normal_density(s.b[i], 0.0, s.rho);
  }
  for (double v : s.beta) total += log_normal_density(v, 0.0, hyper.rho_beta);

  if (hyper.surrogate) {
    const SurrogatePriors& sp = *hyper.surrogate;
    total += log_gamma_density(s.rho, sp.rho_shape, sp.rho_rate);
    for (std::size_t k = 0; k < s.gamma.size(); ++k) {
      const double m = k < sp.gamma_mean.size() ? sp.gamma_mean[k] : 0.0;
      total += log_normal_density(s.gamma[k], m, sp.gamma_precision);
    }
    total += log_gamma_density(s.phi, sp.phi_shape, sp.phi_rate);
  } else {
    total += -1.5 * std::log(s.rho);
  }

  if (!std::isfinite(total)) throw Error(ErrorCode::NonFiniteLogDensity, "log_joint is not finite");
  return total;
}

}  // namespace skiptrack
