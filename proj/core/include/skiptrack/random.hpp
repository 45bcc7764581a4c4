#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>

namespace skiptrack {

/// Name recorded in every output that carries draws. Changing the engine or
/// the seed-splitting function below must change this string.
inline constexpr std::string_view kGeneratorName = "mt19937_64/splitmix64";

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Child seed for a path of stream indices below `base`, e.g.
/// derive_seed(seed, {scenario, n, replicate}). Each step mixes the running
/// value with the next index through splitmix64, so streams at different
/// paths are decorrelated and any single stream can be rebuilt in isolation.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path) noexcept;

/// Random source used by every sampler and simulator. Draws only depend on
/// the seed and the call sequence.
class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the open interval (0, 1).
  double uniform();
  double standard_normal() { return std_normal_(engine_); }
  double normal(double mean, double sd) { return mean + sd * std_normal_(engine_); }
  /// Gamma with shape/rate parameterization.
  double gamma(double shape, double rate);
  std::int64_t poisson(double mean);
  /// Index drawn with probability proportional to `weights` (nonnegative,
  /// positive sum).
  std::size_t categorical(std::span<const double> weights);
  void dirichlet(std::span<const double> alpha, std::span<double> out);

  engine_type& engine() noexcept { return engine_; }

 private:
  engine_type engine_;
  std::normal_distribution<double> std_normal_{0.0, 1.0};
};

}  // namespace skiptrack
