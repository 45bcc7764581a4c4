#include "skiptrack/sampler.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <atomic>
#include <cfloat>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>

#include "skiptrack/error.hpp"

namespace skiptrack {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

const double kMaxLog = std::log(DBL_MAX);

// log(1), ..., log(K)
std::vector<double> log_multipliers(int k_skip) {
  std::vector<double> out(static_cast<std::size_t>(k_skip));
  for (int k = 1; k <= k_skip; ++k) out[static_cast<std::size_t>(k - 1)] = std::log(static_cast<double>(k));
  return out;
}

// Writes normalized probabilities into `weights` given unnormalized logs.
void normalize_log_weights(std::span<double> weights) {
  const double m = *std::max_element(weights.begin(), weights.end());
  double sum = 0.0;
  for (double& w : weights) {
    w = std::exp(w - m);
    sum += w;
  }
  for (double& w : weights) w /= sum;
}

double sum_sq_residual(const ModelState& s, const CycleDataset& data, std::span<const double> log_c,
                       std::size_t i) {
  double ss = 0.0;
  const double b = s.b[i];
  for (std::size_t k = data.first_cycle(i); k < data.first_cycle(i + 1); ++k) {
    const double r = data.log_length(k) - dot(data.x_row(k), s.beta) - b -
                     log_c[static_cast<std::size_t>(s.c[k] - 1)];
    ss += r * r;
  }
  return ss;
}

// Sum over individuals of log Gamma(tau_i | theta_i phi, phi) given log tau.
double tau_log_likelihood(const ModelState& s, const CycleDataset& data, std::span<const double> log_tau,
                          std::span<const double> gamma, double phi) {
  const double log_phi = std::log(phi);
  double total = 0.0;
  for (std::size_t i = 0; i < data.num_individuals(); ++i) {
    const double linear = dot(data.z_row(i), gamma);
    if (!(linear <= kMaxLog)) return -std::numeric_limits<double>::infinity();
    const double shape = std::exp(linear) * phi;
    if (!(shape > 0.0) || !std::isfinite(shape)) return -std::numeric_limits<double>::infinity();
    total += shape * log_phi - std::lgamma(shape) + (shape - 1.0) * log_tau[i] - phi * s.tau[i];
  }
  return std::isnan(total) ? -std::numeric_limits<double>::infinity() : total;
}

double precision_prior(const Hyperparams& hyper, std::span<const double> gamma, double phi) {
  if (!hyper.surrogate) return 0.0;
  const SurrogatePriors& sp = *hyper.surrogate;
  double lp = log_gamma_density(phi, sp.phi_shape, sp.phi_rate);
  for (std::size_t k = 0; k < gamma.size(); ++k) {
    const double m = k < sp.gamma_mean.size() ? sp.gamma_mean[k] : 0.0;
    lp += log_normal_density(gamma[k], m, sp.gamma_precision);
  }
  return lp;
}

std::vector<double> log_of(std::span<const double> v) {
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = std::log(v[k]);
  return out;
}

}  // namespace

void ChainConfig::validate() const {
  if (n_chains < 1) throw Error(ErrorCode::InvalidParameter, "n_chains must be >= 1");
  if (thin < 1) throw Error(ErrorCode::InvalidParameter, "thin must be >= 1");
  if (burn_in >= n_iter) throw Error(ErrorCode::InvalidParameter, "burn_in must be < n_iter");
}

std::vector<double> c_conditional(const ModelState& s, const CycleDataset& data, const Hyperparams& hyper,
                                  std::size_t k) {
  const std::size_t i = data.individual_of(k);
  const double mu = dot(data.x_row(k), s.beta) + s.b[i];
  const double tau = s.tau[i];
  const double log_y = data.log_length(k);
  std::vector<double> w(static_cast<std::size_t>(hyper.k_skip));
  for (int c = 1; c <= hyper.k_skip; ++c) {
    const double r = log_y - mu - std::log(static_cast<double>(c));
    w[static_cast<std::size_t>(c - 1)] = std::log(s.pi[static_cast<std::size_t>(c - 1)]) - 0.5 * tau * r * r;
  }
  normalize_log_weights(w);
  return w;
}

std::vector<double> pi_conditional(const ModelState& s, const Hyperparams& hyper) {
  std::vector<double> alpha = hyper.pi_prior();
  for (int c : s.c) alpha[static_cast<std::size_t>(c - 1)] += 1.0;
  return alpha;
}

GammaParams tau_conditional(const ModelState& s, const CycleDataset& data, const Hyperparams& hyper,
                            std::size_t i) {
  const auto log_c = log_multipliers(hyper.k_skip);
  const double theta = theta_from_linear(dot(data.z_row(i), s.gamma));
  GammaParams g;
  g.shape = theta * s.phi + 0.5 * static_cast<double>(data.cycle_count(i));
  g.rate = (s.phi + 0.5 * sum_sq_residual(s, data, log_c, i)) * hyper.tau_rate_mutation;
  if (!(g.rate > 0.0) || !std::isfinite(g.rate))
    throw Error(ErrorCode::DegenerateRate, "tau conditional rate for individual " + std::to_string(i));
  return g;
}

NormalParams b_conditional(const ModelState& s, const CycleDataset& data, std::size_t i) {
  const double tau = s.tau[i];
  double sum = 0.0;
  for (std::size_t k = data.first_cycle(i); k < data.first_cycle(i + 1); ++k)
    sum += data.log_length(k) - dot(data.x_row(k), s.beta) - std::log(static_cast<double>(s.c[k]));
  NormalParams np;
  np.precision = s.rho + tau * static_cast<double>(data.cycle_count(i));
  np.mean = tau * sum / np.precision;
  return np;
}

MvNormalParams beta_conditional(const ModelState& s, const CycleDataset& data, const Hyperparams& hyper) {
  const std::size_t p = data.mean_dim();
  MvNormalParams out;
  out.precision.assign(p * p, 0.0);
  std::vector<double> h(p, 0.0);
  for (std::size_t a = 0; a < p; ++a) out.precision[a * p + a] = hyper.rho_beta;
  for (std::size_t i = 0; i < data.num_individuals(); ++i) {
    const double tau = s.tau[i];
    const auto g = data.gram(i);
    for (std::size_t e = 0; e < p * p; ++e) out.precision[e] += tau * g[e];
    for (std::size_t k = data.first_cycle(i); k < data.first_cycle(i + 1); ++k) {
      const double r = data.log_length(k) - s.b[i] - std::log(static_cast<double>(s.c[k]));
      const auto x = data.x_row(k);
      for (std::size_t a = 0; a < p; ++a) h[a] += tau * x[a] * r;
    }
  }
  Eigen::Map<const Eigen::MatrixXd> prec(out.precision.data(), static_cast<Eigen::Index>(p),
                                          static_cast<Eigen::Index>(p));
  Eigen::LLT<Eigen::MatrixXd> llt(prec);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::SingularPrecision, "beta conditional precision is not positive definite");
  Eigen::Map<const Eigen::VectorXd> hv(h.data(), static_cast<Eigen::Index>(p));
  Eigen::VectorXd m = llt.solve(hv);
  out.mean.assign(m.data(), m.data() + p);
  return out;
}

GammaParams rho_conditional(const ModelState& s, const Hyperparams& hyper) {
  const double n = static_cast<double>(s.b.size());
  double ss = 0.0;
  for (double v : s.b) ss += v * v;
  if (hyper.surrogate) return {hyper.surrogate->rho_shape + 0.5 * n, hyper.surrogate->rho_rate + 0.5 * ss};
  if (s.b.size() < 2 || !(ss > 0.0))
    throw Error(ErrorCode::ImproperConditional, "rho conditional needs n >= 2 and nonzero random intercepts");
  return {0.5 * (n - 1.0), 0.5 * ss};
}

void update_c(ModelState& s, const CycleDataset& data, const Hyperparams& hyper, std::span<const int> fixed_mask,
              Rng& rng) {
  const auto K = static_cast<std::size_t>(hyper.k_skip);
  const auto log_c = log_multipliers(hyper.k_skip);
  const auto log_pi = log_of(s.pi);
  std::vector<double> w(K);
  for (std::size_t i = 0; i < data.num_individuals(); ++i) {
    const double tau = s.tau[i];
    const double b = s.b[i];
    for (std::size_t k = data.first_cycle(i); k < data.first_cycle(i + 1); ++k) {
      if (!fixed_mask.empty() && fixed_mask[k] != 0) {
        s.c[k] = fixed_mask[k];
        continue;
      }
      const double d = data.log_length(k) - dot(data.x_row(k), s.beta) - b;
      for (std::size_t c = 0; c < K; ++c) {
        const double r = d - log_c[c];
        w[c] = log_pi[c] - 0.5 * tau * r * r;
      }
      normalize_log_weights(w);
      s.c[k] = static_cast<int>(rng.categorical(w)) + 1;
    }
  }
}

void update_pi(ModelState& s, const Hyperparams& hyper, Rng& rng) {
  const auto alpha = pi_conditional(s, hyper);
  rng.dirichlet(alpha, s.pi);
}

void update_tau(ModelState& s, const CycleDataset& data, const Hyperparams& hyper, Rng& rng) {
  const auto log_c = log_multipliers(hyper.k_skip);
  for (std::size_t i = 0; i < data.num_individuals(); ++i) {
    const double theta = theta_from_linear(dot(data.z_row(i), s.gamma));
    const double shape = theta * s.phi + 0.5 * static_cast<double>(data.cycle_count(i));
    const double rate = (s.phi + 0.5 * sum_sq_residual(s, data, log_c, i)) * hyper.tau_rate_mutation;
    if (!(rate > 0.0) || !std::isfinite(rate))
      throw Error(ErrorCode::DegenerateRate, "tau conditional rate for individual " + std::to_string(i));
    s.tau[i] = rng.gamma(shape, rate);
  }
}

void update_b(ModelState& s, const CycleDataset& data, Rng& rng) {
  for (std::size_t i = 0; i < data.num_individuals(); ++i) {
    const NormalParams np = b_conditional(s, data, i);
    s.b[i] = rng.normal(np.mean, 1.0 / std::sqrt(np.precision));
  }
}

void update_beta(ModelState& s, const CycleDataset& data, const Hyperparams& hyper, Rng& rng) {
  const std::size_t p = data.mean_dim();
  if (p == 0) return;
  const MvNormalParams mv = beta_conditional(s, data, hyper);
  Eigen::Map<const Eigen::MatrixXd> prec(mv.precision.data(), static_cast<Eigen::Index>(p),
                                          static_cast<Eigen::Index>(p));
  Eigen::LLT<Eigen::MatrixXd> llt(prec);
  Eigen::VectorXd z(static_cast<Eigen::Index>(p));
  for (Eigen::Index a = 0; a < z.size(); ++a) z[a] = rng.standard_normal();
  // P = L L^T, so L^T v = z gives v ~ N(0, P^-1).
  const Eigen::VectorXd v = llt.matrixU().solve(z);
  for (std::size_t a = 0; a < p; ++a) s.beta[a] = mv.mean[a] + v[static_cast<Eigen::Index>(a)];
}

void update_rho(ModelState& s, const Hyperparams& hyper, Rng& rng) {
  const GammaParams g = rho_conditional(s, hyper);
  s.rho = rng.gamma(g.shape, g.rate);
}

double precision_log_target(const ModelState& s, const CycleDataset& data, const Hyperparams& hyper,
                            std::span<const double> gamma, double phi) {
  if (!(phi > 0.0)) return -std::numeric_limits<double>::infinity();
  const auto log_tau = log_of(s.tau);
  return tau_log_likelihood(s, data, log_tau, gamma, phi) + precision_prior(hyper, gamma, phi);
}

double phi_proposal_log_density(double to, double from, double rho_phi) {
  return log_gamma_density(to, from * rho_phi, rho_phi);
}

double gamma_acceptance_probability(const ModelState& s, const CycleDataset& data, const Hyperparams& hyper,
                                    std::span<const double> proposal) {
  const double cur = precision_log_target(s, data, hyper, s.gamma, s.phi);
  const double prop = precision_log_target(s, data, hyper, proposal, s.phi);
  return std::min(1.0, std::exp(prop - cur));
}

double phi_acceptance_probability(const ModelState& s, const CycleDataset& data, const Hyperparams& hyper,
                                  double rho_phi_prop, double proposal) {
  const double cur = precision_log_target(s, data, hyper, s.gamma, s.phi);
  const double prop = precision_log_target(s, data, hyper, s.gamma, proposal);
  const double log_ratio = prop - cur + phi_proposal_log_density(s.phi, proposal, rho_phi_prop) -
                           phi_proposal_log_density(proposal, s.phi, rho_phi_prop);
  return std::min(1.0, std::exp(log_ratio));
}

MhOutcome update_gamma_phi(ModelState& s, const CycleDataset& data, const Hyperparams& hyper, MhTuning& tuning,
                           Rng& rng) {
  MhOutcome out;
  const auto log_tau = log_of(s.tau);
  double current = tau_log_likelihood(s, data, log_tau, s.gamma, s.phi) + precision_prior(hyper, s.gamma, s.phi);

  if (!s.gamma.empty()) {
    const double step = 1.0 / std::sqrt(tuning.rho_gamma_prop);
    std::vector<double> proposal(s.gamma.size());
    for (std::size_t k = 0; k < proposal.size(); ++k) proposal[k] = rng.normal(s.gamma[k], step);
    const double prop =
        tau_log_likelihood(s, data, log_tau, proposal, s.phi) + precision_prior(hyper, proposal, s.phi);
    ++tuning.gamma_proposed;
    if (std::log(rng.uniform()) < prop - current) {
      s.gamma = std::move(proposal);
      current = prop;
      ++tuning.gamma_accepted;
      out.gamma_accepted = true;
    }
  }

  const double rp = tuning.rho_phi_prop;
  const double phi_star = rng.gamma(s.phi * rp, rp);
  ++tuning.phi_proposed;
  if (phi_star > 0.0) {
    const double prop =
        tau_log_likelihood(s, data, log_tau, s.gamma, phi_star) + precision_prior(hyper, s.gamma, phi_star);
    const double log_ratio = prop - current + phi_proposal_log_density(s.phi, phi_star, rp) -
                             phi_proposal_log_density(phi_star, s.phi, rp);
    if (std::log(rng.uniform()) < log_ratio) {
      s.phi = phi_star;
      ++tuning.phi_accepted;
      out.phi_accepted = true;
    }
  }
  return out;
}

void sweep(ModelState& s, const CycleDataset& data, const Hyperparams& hyper, std::span<const int> fixed_mask,
           MhTuning& tuning, Rng& rng) {
  update_c(s, data, hyper, fixed_mask, rng);
  update_pi(s, hyper, rng);
  update_tau(s, data, hyper, rng);
  update_b(s, data, rng);
  update_beta(s, data, hyper, rng);
  update_rho(s, hyper, rng);
  update_gamma_phi(s, data, hyper, tuning, rng);
}

ModelState initial_state(const CycleDataset& data, const Hyperparams& hyper) {
  const std::size_t n = data.num_individuals();
  const auto K = static_cast<std::size_t>(hyper.k_skip);
  ModelState s;
  s.c.assign(data.num_cycles(), 1);
  const auto mask = resolve_fixed_c(hyper, data);
  for (std::size_t k = 0; k < mask.size(); ++k)
    if (mask[k] != 0) s.c[k] = mask[k];
  s.pi.assign(K, 1.0 / static_cast<double>(K));
  s.b.assign(n, 0.0);
  s.beta.assign(data.mean_dim(), 0.0);
  s.gamma.assign(data.regularity_dim(), 0.0);
  s.rho = 1.0;
  s.phi = 1.0;

  double sum_log = 0.0;
  for (std::size_t k = 0; k < data.num_cycles(); ++k) sum_log += data.log_length(k);
  if (data.x_intercept_column() != CycleDataset::npos && data.num_cycles() > 0)
    s.beta[data.x_intercept_column()] = sum_log / static_cast<double>(data.num_cycles());

  s.tau.assign(n, 1.0);
  double tau_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ni = data.cycle_count(i);
    if (ni >= 2) {
      double mean = 0.0;
      for (std::size_t k = data.first_cycle(i); k < data.first_cycle(i + 1); ++k) mean += data.log_length(k);
      mean /= static_cast<double>(ni);
      double var = 0.0;
      for (std::size_t k = data.first_cycle(i); k < data.first_cycle(i + 1); ++k) {
        const double d = data.log_length(k) - mean;
        var += d * d;
      }
      var /= static_cast<double>(ni - 1);
      const double t = var > 0.0 ? 1.0 / var : 1e3;
      s.tau[i] = std::clamp(t, 1e-3, 1e3);
    }
    tau_sum += s.tau[i];
  }
  if (data.z_intercept_column() != CycleDataset::npos && n > 0)
    s.gamma[data.z_intercept_column()] = std::log(tau_sum / static_cast<double>(n));
  return s;
}

std::uint64_t chain_seed(std::uint64_t seed, std::size_t chain_index) {
  return derive_seed(seed, {0xC4A1ULL, static_cast<std::uint64_t>(chain_index)});
}

PosteriorSamples run_chain(const CycleDataset& data, const Hyperparams& hyper, const ChainConfig& config,
                           std::size_t chain_index) {
  hyper.validate();
  config.validate();
  if (hyper.surrogate == std::nullopt && data.num_individuals() < 2)
    throw Error(ErrorCode::InsufficientData, "at least two individuals are required");

  const std::size_t p = data.mean_dim();
  const std::size_t q = data.regularity_dim();
  const std::size_t n = data.num_individuals();
  PosteriorSamples out;
  out.names = parameter_names(p, q, hyper.k_skip);
  const std::size_t traced = std::min(config.trace_individuals, n);
  for (std::size_t i = 0; i < traced; ++i) {
    out.names.push_back("tau_" + std::to_string(i + 1));
    out.names.push_back("b_" + std::to_string(i + 1));
  }
  out.n_iter = config.n_iter;
  out.burn_in = config.burn_in;
  out.thin = config.thin;
  out.seed = config.seed;
  out.c_draws = SkipTally(data.num_cycles(), hyper.k_skip);
  out.tau_mean.assign(n, 0.0);
  out.b_mean.assign(n, 0.0);

  const std::size_t dim = out.names.size();
  const std::size_t retained = (config.n_iter - config.burn_in + config.thin - 1) / config.thin;
  ChainDraws chain;
  chain.values.reserve(retained * dim);

  ModelState s = initial_state(data, hyper);
  const auto mask = resolve_fixed_c(hyper, data);
  MhTuning tuning = MhTuning::from(hyper);
  MhTuning at_burn_in = tuning;
  Rng rng(chain_seed(config.seed, chain_index));

  for (std::size_t t = 0; t < config.n_iter; ++t) {
    try {
      sweep(s, data, hyper, mask, tuning, rng);
    } catch (const Error& e) {
      throw Error(ErrorCode::ChainFailure, "chain " + std::to_string(chain_index) + " iteration " +
                                               std::to_string(t) + ": " + e.what());
    }
    if (t + 1 == config.burn_in) at_burn_in = tuning;
    if (t < config.burn_in || (t - config.burn_in) % config.thin != 0) continue;

    chain.values.insert(chain.values.end(), s.beta.begin(), s.beta.end());
    chain.values.insert(chain.values.end(), s.gamma.begin(), s.gamma.end());
    chain.values.push_back(s.rho);
    chain.values.push_back(s.phi);
    chain.values.insert(chain.values.end(), s.pi.begin(), s.pi.end());
    for (std::size_t i = 0; i < traced; ++i) {
      chain.values.push_back(s.tau[i]);
      chain.values.push_back(s.b[i]);
    }
    ++chain.num_draws;
    for (std::size_t k = 0; k < s.c.size(); ++k) out.c_draws.record(k, s.c[k]);
    for (std::size_t i = 0; i < n; ++i) {
      out.tau_mean[i] += s.tau[i];
      out.b_mean[i] += s.b[i];
    }
  }

  const double draws = static_cast<double>(chain.num_draws);
  for (std::size_t i = 0; i < n; ++i) {
    out.tau_mean[i] /= draws;
    out.b_mean[i] /= draws;
  }
  const auto rate = [](std::uint64_t acc, std::uint64_t prop) {
    return prop == 0 ? 0.0 : static_cast<double>(acc) / static_cast<double>(prop);
  };
  chain.accept_gamma = rate(tuning.gamma_accepted - at_burn_in.gamma_accepted,
                            tuning.gamma_proposed - at_burn_in.gamma_proposed);
  chain.accept_phi =
      rate(tuning.phi_accepted - at_burn_in.phi_accepted, tuning.phi_proposed - at_burn_in.phi_proposed);
  out.chains.push_back(std::move(chain));
  return out;
}

void parallel_for(std::size_t jobs, std::size_t threads, const std::function<void(std::size_t)>& task) {
  if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs);
  std::vector<std::exception_ptr> errors(jobs);
  if (threads <= 1) {
    for (std::size_t j = 0; j < jobs; ++j) {
      try {
        task(j);
      } catch (...) {
        errors[j] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) {
      workers.emplace_back([&] {
        for (std::size_t j = next.fetch_add(1); j < jobs; j = next.fetch_add(1)) {
          try {
            task(j);
          } catch (...) {
            errors[j] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

PosteriorSamples run_chains(const CycleDataset& data, const Hyperparams& hyper, const ChainConfig& config) {
  config.validate();
  std::vector<std::optional<PosteriorSamples>> results(config.n_chains);
  std::vector<std::string> failures(config.n_chains);
  parallel_for(config.n_chains, config.threads, [&](std::size_t k) {
    try {
      results[k] = run_chain(data, hyper, config, k);
    } catch (const std::exception& e) {
      failures[k] = e.what();
    }
  });

  std::string message;
  for (std::size_t k = 0; k < failures.size(); ++k)
    if (!failures[k].empty()) message += (message.empty() ? "" : "; ") + failures[k];
  if (!message.empty()) throw Error(ErrorCode::ChainFailure, message);

  PosteriorSamples pooled = std::move(*results[0]);
  const std::size_t n = pooled.tau_mean.size();
  std::vector<double> tau_sum(n), b_sum(n);
  auto accumulate_means = [&](const PosteriorSamples& ps) {
    const double w = static_cast<double>(ps.chains.front().num_draws);
    for (std::size_t i = 0; i < n; ++i) {
      tau_sum[i] += ps.tau_mean[i] * w;
      b_sum[i] += ps.b_mean[i] * w;
    }
  };
  accumulate_means(pooled);
  for (std::size_t k = 1; k < results.size(); ++k) {
    accumulate_means(*results[k]);
    pooled.chains.push_back(std::move(results[k]->chains.front()));
    pooled.c_draws.merge(results[k]->c_draws);
  }
  const double total = static_cast<double>(pooled.total_draws());
  for (std::size_t i = 0; i < n; ++i) {
    pooled.tau_mean[i] = tau_sum[i] / total;
    pooled.b_mean[i] = b_sum[i] / total;
  }
  return pooled;
}

}  // namespace skiptrack
