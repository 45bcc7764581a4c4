#include "skiptrack/li.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "skiptrack/error.hpp"

namespace skiptrack {

LiModelSpec li_fit_hyperparams(const CycleDataset& data, int k_skip) {
  const std::size_t n = data.num_individuals();
  if (n < 2) throw Error(ErrorCode::InsufficientData, "Poisson hyperparameters need at least two individuals");
  if (k_skip < 1) throw Error(ErrorCode::InvalidParameter, "k_skip must be >= 1");

  std::vector<double> means(n);
  double noise = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = data.first_cycle(i); k < data.first_cycle(i + 1); ++k) s += data.length(k);
    means[i] = s / static_cast<double>(data.cycle_count(i));
    noise += means[i] / static_cast<double>(data.cycle_count(i));
  }
  noise /= static_cast<double>(n);
  double m = 0.0;
  for (double v : means) m += v;
  m /= static_cast<double>(n);
  double var = 0.0;
  for (double v : means) var += (v - m) * (v - m);
  var /= static_cast<double>(n - 1);
  if (!std::isfinite(var) || !std::isfinite(noise))
    throw Error(ErrorCode::DomainError, "cycle lengths are too large for the Poisson comparator");

  LiModelSpec spec;
  double between = var - noise;
  // Floor at a 1% coefficient of variation.
  const double floor = 1e-4 * m * m;
  if (!(between > floor)) {
    between = floor;
    spec.near_degenerate = true;
  }
  spec.lambda_shape = m * m / between;
  spec.lambda_rate = m / between;
  spec.pi_li.assign(static_cast<std::size_t>(k_skip), 1.0 / k_skip);
  return spec;
}

std::vector<double> li_c_conditional(double y, double lambda, std::span<const double> pi) {
  std::vector<double> w(pi.size());
  for (std::size_t k = 0; k < pi.size(); ++k) {
    const double mult = static_cast<double>(k + 1);
    w[k] = std::log(pi[k]) + y * std::log(mult) - mult * lambda;
  }
  const double mx = *std::max_element(w.begin(), w.end());
  double sum = 0.0;
  for (double& v : w) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : w) v /= sum;
  return w;
}

GammaParams li_lambda_conditional(const CycleDataset& data, const LiModelSpec& spec, std::span<const int> c,
                                  std::size_t i) {
  GammaParams g{spec.lambda_shape, spec.lambda_rate};
  for (std::size_t k = data.first_cycle(i); k < data.first_cycle(i + 1); ++k) {
    g.shape += data.length(k);
    g.rate += static_cast<double>(c[k]);
  }
  return g;
}

namespace {

SkipTally li_chain(const CycleDataset& data, const LiModelSpec& spec, const ChainConfig& config,
                   std::size_t chain_index, std::vector<double>& lambda_sum) {
  const std::size_t K = spec.pi_li.size();
  const std::size_t n = data.num_individuals();
  Rng rng(derive_seed(config.seed, {0x11F1ULL, static_cast<std::uint64_t>(chain_index)}));

  std::vector<int> c(data.num_cycles(), 1);
  std::vector<double> pi = spec.pi_li;
  std::vector<double> lambda(n);
  for (std::size_t i = 0; i < n; ++i) {
    const GammaParams g = li_lambda_conditional(data, spec, c, i);
    lambda[i] = g.shape / g.rate;
  }
  lambda_sum.assign(n, 0.0);
  SkipTally tally(data.num_cycles(), static_cast<int>(K));
  std::vector<double> log_mult(K), log_pi(K), w(K), alpha(K);
  for (std::size_t k = 0; k < K; ++k) log_mult[k] = std::log(static_cast<double>(k + 1));

  for (std::size_t t = 0; t < config.n_iter; ++t) {
    for (std::size_t k = 0; k < K; ++k) log_pi[k] = std::log(pi[k]);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = data.first_cycle(i); k < data.first_cycle(i + 1); ++k) {
        const double y = data.length(k);
        double mx = -INFINITY;
        for (std::size_t m = 0; m < K; ++m) {
          w[m] = log_pi[m] + y * log_mult[m] - static_cast<double>(m + 1) * lambda[i];
          mx = std::max(mx, w[m]);
        }
        for (double& v : w) v = std::exp(v - mx);
        c[k] = static_cast<int>(rng.categorical(w)) + 1;
      }
    }
    std::fill(alpha.begin(), alpha.end(), 1.0);
    for (int v : c) alpha[static_cast<std::size_t>(v - 1)] += 1.0;
    rng.dirichlet(alpha, pi);
    for (std::size_t i = 0; i < n; ++i) {
      const GammaParams g = li_lambda_conditional(data, spec, c, i);
      lambda[i] = rng.gamma(g.shape, g.rate);
    }
    if (t < config.burn_in || (t - config.burn_in) % config.thin != 0) continue;
    for (std::size_t k = 0; k < c.size(); ++k) tally.record(k, c[k]);
    for (std::size_t i = 0; i < n; ++i) lambda_sum[i] += lambda[i];
  }
  return tally;
}

}  // namespace

LiDraws li_sample_c(const CycleDataset& data, const LiModelSpec& spec, const ChainConfig& config) {
  config.validate();
  LiDraws out;
  out.per_chain.resize(config.n_chains);
  std::vector<std::vector<double>> lambda_sums(config.n_chains);
  parallel_for(config.n_chains, config.threads, [&](std::size_t k) {
    out.per_chain[k] = li_chain(data, spec, config, k, lambda_sums[k]);
  });
  out.lambda_mean.assign(data.num_individuals(), 0.0);
  for (std::size_t k = 0; k < config.n_chains; ++k) {
    out.pooled.merge(out.per_chain[k]);
    for (std::size_t i = 0; i < out.lambda_mean.size(); ++i) out.lambda_mean[i] += lambda_sums[k][i];
  }
  const double draws = static_cast<double>(out.pooled.total(0));
  if (draws > 0)
    for (double& v : out.lambda_mean) v /= draws;
  return out;
}

std::vector<int> li_map_c(const SkipTally& draws) {
  std::vector<int> map(draws.num_cycles, 1);
  for (std::size_t k = 0; k < draws.num_cycles; ++k) {
    std::uint64_t best = 0;
    for (int c = 1; c <= draws.k_skip; ++c) {
      if (draws.count(k, c) > best) {
        best = draws.count(k, c);
        map[k] = c;
      }
    }
  }
  return map;
}

Hyperparams with_fixed_skips(const Hyperparams& hyper, const CycleDataset& data, std::span<const int> c) {
  if (c.size() != data.num_cycles()) throw Error(ErrorCode::LengthMismatch, "one fixed skip per cycle required");
  Hyperparams h = hyper;
  h.fixed_c.clear();
  for (std::size_t i = 0; i < data.num_individuals(); ++i)
    for (std::size_t j = 0; j < data.cycle_count(i); ++j) h.fixed_c[{i, j}] = c[data.cycle_index(i, j)];
  return h;
}

FixedSkipsResult fixed_skips_fit(const CycleDataset& data, const Hyperparams& hyper, const ChainConfig& config) {
  FixedSkipsResult out;
  out.spec = li_fit_hyperparams(data, hyper.k_skip);
  const LiDraws draws = li_sample_c(data, out.spec, config);
  out.map_c = li_map_c(draws.pooled);
  const Hyperparams fixed = with_fixed_skips(hyper, data, out.map_c);
  out.samples = run_chains(data, fixed, config);
  return out;
}

}  // namespace skiptrack
