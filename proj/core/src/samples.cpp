#include "skiptrack/samples.hpp"

#include <numeric>

#include "skiptrack/error.hpp"

namespace skiptrack {

std::uint64_t SkipTally::total(std::size_t cycle) const {
  std::uint64_t t = 0;
  for (int c = 1; c <= k_skip; ++c) t += count(cycle, c);
  return t;
}

void SkipTally::merge(const SkipTally& other) {
  if (counts.empty()) {
    *this = other;
    return;
  }
  if (other.num_cycles != num_cycles || other.k_skip != k_skip)
    throw Error(ErrorCode::DimensionMismatch, "cannot merge skip tallies of different shape");
  for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += other.counts[k];
}

std::size_t PosteriorSamples::total_draws() const {
  std::size_t t = 0;
  for (const auto& ch : chains) t += ch.num_draws;
  return t;
}

std::size_t PosteriorSamples::column(const std::string& name) const {
  for (std::size_t k = 0; k < names.size(); ++k)
    if (names[k] == name) return k;
  throw Error(ErrorCode::InvalidParameter, "no parameter named '" + name + "'");
}

std::vector<double> PosteriorSamples::pooled(std::size_t col) const {
  std::vector<double> out;
  out.reserve(total_draws());
  const std::size_t d = dim();
  for (const auto& ch : chains)
    for (std::size_t t = 0; t < ch.num_draws; ++t) out.push_back(ch.values[t * d + col]);
  return out;
}

std::vector<std::vector<double>> PosteriorSamples::by_chain(std::size_t col) const {
  std::vector<std::vector<double>> out;
  out.reserve(chains.size());
  const std::size_t d = dim();
  for (const auto& ch : chains) {
    std::vector<double> v(ch.num_draws);
    for (std::size_t t = 0; t < ch.num_draws; ++t) v[t] = ch.values[t * d + col];
    out.push_back(std::move(v));
  }
  return out;
}

std::vector<double> PosteriorSamples::posterior_means() const {
  std::vector<double> m(dim(), 0.0);
  const std::size_t total = total_draws();
  if (total == 0) return m;
  const std::size_t d = dim();
  for (const auto& ch : chains)
    for (std::size_t t = 0; t < ch.num_draws; ++t)
      for (std::size_t k = 0; k < d; ++k) m[k] += ch.values[t * d + k];
  for (double& v : m) v /= static_cast<double>(total);
  return m;
}

std::vector<std::string> parameter_names(std::size_t p, std::size_t q, int k_skip) {
  std::vector<std::string> names;
  for (std::size_t k = 1; k <= p; ++k) names.push_back("beta_" + std::to_string(k));
  for (std::size_t k = 1; k <= q; ++k) names.push_back("gamma_" + std::to_string(k));
  names.emplace_back("rho");
  names.emplace_back("phi");
  for (int k = 1; k <= k_skip; ++k) names.push_back("pi_" + std::to_string(k));
  return names;
}

}  // namespace skiptrack
