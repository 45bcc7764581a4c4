#include "skiptrack/random.hpp"

#include <cmath>
#include <numeric>

#include "skiptrack/error.hpp"

namespace skiptrack {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t s = splitmix64(base);
  for (std::uint64_t step : path) s = splitmix64(s ^ splitmix64(step + 0x632BE59BD9B4E019ULL));
  return s;
}

double Rng::uniform() {
  // 53 random bits, shifted off zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::gamma(double shape, double rate) {
  if (!(shape > 0.0) || !(rate > 0.0) || !std::isfinite(shape) || !std::isfinite(rate)) {
    throw Error(ErrorCode::DomainError, "gamma draw with shape " + std::to_string(shape) +
                                            " rate " + std::to_string(rate));
  }
  std::gamma_distribution<double> dist(shape, 1.0 / rate);
  return dist(engine_);
}

std::int64_t Rng::poisson(double mean) {
  std::poisson_distribution<std::int64_t> dist(mean);
  return dist(engine_);
}

std::size_t Rng::categorical(std::span<const double> weights) {
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  double u = uniform() * total;
  for (std::size_t k = 0; k + 1 < weights.size(); ++k) {
    if (u < weights[k]) return k;
    u -= weights[k];
  }
  // Guard against rounding: return the last index with positive weight.
  for (std::size_t k = weights.size(); k-- > 0;) {
    if (weights[k] > 0.0) return k;
  }
  return weights.size() - 1;
}

void Rng::dirichlet(std::span<const double> alpha, std::span<double> out) {
  double sum = 0.0;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    out[k] = gamma(alpha[k], 1.0);
    sum += out[k];
  }
  for (std::size_t k = 0; k < alpha.size(); ++k) out[k] /= sum;
}

}  // namespace skiptrack
