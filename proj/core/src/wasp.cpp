#include "skiptrack/wasp.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

#include "skiptrack/diagnostics.hpp"
#include "skiptrack/error.hpp"
#include "skiptrack/random.hpp"

namespace skiptrack {

std::vector<std::size_t> Partition::sizes() const {
  std::vector<std::size_t> s(k_part, 0);
  for (std::size_t a : assignment) ++s[a];
  return s;
}

std::vector<std::vector<std::size_t>> Partition::members() const {
  std::vector<std::vector<std::size_t>> m(k_part);
  for (std::size_t i = 0; i < assignment.size(); ++i) m[assignment[i]].push_back(i);
  return m;
}

Partition partition_by_individual(const CycleDataset& data, std::size_t k_part, std::uint64_t seed) {
  const std::size_t n = data.num_individuals();
  if (k_part == 0) throw Error(ErrorCode::InvalidParameter, "k_part must be >= 1");
  if (k_part > n)
    throw Error(ErrorCode::TooManyPartitions,
                std::to_string(k_part) + " subsets requested for " + std::to_string(n) + " individuals");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(derive_seed(seed, {0xA55160ULL}));
  std::shuffle(order.begin(), order.end(), rng.engine());
  Partition p;
  p.k_part = k_part;
  p.assignment.resize(n);
  for (std::size_t t = 0; t < n; ++t) p.assignment[order[t]] = t % k_part;
  return p;
}

std::uint64_t subset_seed(std::uint64_t seed, std::size_t subset) {
  return subset == 0 ? seed : derive_seed(seed, {0x5A5BULL, static_cast<std::uint64_t>(subset)});
}

std::size_t SubPosteriorSet::failures() const {
  return static_cast<std::size_t>(std::count_if(subsets.begin(), subsets.end(), [](const auto& s) { return s.failed; }));
}

PosteriorSamples restrict_to_regression(const PosteriorSamples& samples) {
  std::vector<std::size_t> keep;
  for (std::size_t k = 0; k < samples.names.size(); ++k) {
    const auto& nm = samples.names[k];
    if (nm.rfind("beta_", 0) == 0 || nm.rfind("gamma_", 0) == 0) keep.push_back(k);
  }
  PosteriorSamples out;
  out.n_iter = samples.n_iter;
  out.burn_in = samples.burn_in;
  out.thin = samples.thin;
  out.seed = samples.seed;
  for (std::size_t k : keep) out.names.push_back(samples.names[k]);
  const std::size_t d = samples.dim();
  for (const auto& ch : samples.chains) {
    ChainDraws c;
    c.num_draws = ch.num_draws;
    c.accept_gamma = ch.accept_gamma;
    c.accept_phi = ch.accept_phi;
    c.values.reserve(ch.num_draws * keep.size());
    for (std::size_t t = 0; t < ch.num_draws; ++t)
      for (std::size_t k : keep) c.values.push_back(ch.values[t * d + k]);
    out.chains.push_back(std::move(c));
  }
  return out;
}

const char* to_string(SubsetLikelihood mode) { return mode == SubsetLikelihood::Raised ? "raised" : "plain"; }

SubsetLikelihood subset_likelihood_from_string(const std::string& text) {
  if (text == "raised") return SubsetLikelihood::Raised;
  if (text == "plain") return SubsetLikelihood::Plain;
  throw Error(ErrorCode::InvalidParameter, "subset likelihood must be 'raised' or 'plain', got '" + text + "'");
}

SubPosteriorSet fit_subsets(const CycleDataset& data, const Partition& partition, const Hyperparams& hyper,
                            const ChainConfig& config, std::size_t threads, const SubsetFitter& fitter,
                            SubsetLikelihood likelihood) {
  if (partition.assignment.size() != data.num_individuals())
    throw Error(ErrorCode::LengthMismatch, "partition does not match the dataset");
  const auto members = partition.members();
  SubPosteriorSet out;
  out.subsets.resize(partition.k_part);
  parallel_for(partition.k_part, threads, [&](std::size_t k) {
    SubsetFit& fit = out.subsets[k];
    fit.index = k;
    fit.individuals = members[k].size();
    fit.seed = subset_seed(config.seed, k);
    const auto start = std::chrono::steady_clock::now();
    try {
      CycleDataset sub = subset_individuals(data, members[k]);
      fit.cycles = sub.num_cycles();
      if (likelihood == SubsetLikelihood::Raised && partition.k_part > 1)
        sub = replicate_individuals(sub, partition.k_part);
      ChainConfig cc = config;
      cc.seed = fit.seed;
      if (threads != 1) cc.threads = 1;
      PosteriorSamples ps = fitter ? fitter(sub, hyper, cc, k) : run_chains(sub, hyper, cc);
      fit.samples = restrict_to_regression(ps);
    } catch (const std::exception& e) {
      fit.failed = true;
      fit.error = e.what();
    }
    fit.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return out;
}

std::vector<double> wasp_marginal(const std::vector<std::vector<double>>& subset_draws, std::size_t draws_out) {
  if (subset_draws.empty()) throw Error(ErrorCode::InsufficientData, "no subset draws to combine");
  if (draws_out == 0) throw Error(ErrorCode::InvalidParameter, "draws_out must be > 0");
  std::vector<std::vector<double>> sorted = subset_draws;
  for (auto& s : sorted) {
    if (s.empty()) throw Error(ErrorCode::InsufficientData, "a subset has no draws");
    std::sort(s.begin(), s.end());
  }
  std::vector<double> out(draws_out, 0.0);
  const double m = static_cast<double>(sorted.size());
  for (std::size_t t = 0; t < draws_out; ++t) {
    const double u = (static_cast<double>(t) + 0.5) / static_cast<double>(draws_out);
    double s = 0.0;
    for (const auto& v : sorted) s += quantile_sorted(v, u);
    out[t] = s / m;
  }
  return out;
}

PosteriorSamples combine_wasp(const SubPosteriorSet& subs, std::size_t draws_out) {
  std::vector<const PosteriorSamples*> ok;
  for (const auto& s : subs.subsets)
    if (!s.failed) ok.push_back(&s.samples);
  if (ok.empty()) throw Error(ErrorCode::InsufficientData, "every subset failed");
  const auto& names = ok.front()->names;
  for (const auto* ps : ok)
    if (ps->names != names) throw Error(ErrorCode::DimensionMismatch, "subsets expose different parameters");

  const std::size_t d = names.size();
  std::vector<std::vector<double>> columns(d);
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<std::vector<double>> per_subset;
    per_subset.reserve(ok.size());
    for (const auto* ps : ok) per_subset.push_back(ps->pooled(k));
    columns[k] = wasp_marginal(per_subset, draws_out);
  }

  PosteriorSamples out;
  out.names = names;
  out.n_iter = ok.front()->n_iter;
  out.burn_in = ok.front()->burn_in;
  out.thin = ok.front()->thin;
  out.seed = ok.front()->seed;
  ChainDraws chain;
  chain.num_draws = draws_out;
  chain.values.resize(draws_out * d);
  for (std::size_t t = 0; t < draws_out; ++t)
    for (std::size_t k = 0; k < d; ++k) chain.values[t * d + k] = columns[k][t];
  out.chains.push_back(std::move(chain));
  return out;
}

}  // namespace skiptrack
