#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "skiptrack/dataset.hpp"
#include "skiptrack/random.hpp"

namespace skiptrack {

/// Generating values kept for scoring. Coefficient vectors include the
/// intercept as their first entry, matching column 1 of X and Z.
struct SimTruth {
  std::vector<double> beta;
  std::vector<double> gamma;  // empty for the Poisson scenario
  std::vector<double> b;
  std::vector<double> tau;    // empty for the Poisson scenario
  std::vector<int> c;         // global cycle order
  std::vector<double> pi;
  double rho = 0.0;
  double phi = 0.0;
};

struct SimulatedData {
  CycleDataset data;
  SimTruth truth;
};

/// Scenario 1 (SkipTrack hierarchy) and scenario 2 (Poisson) settings.
/// Three standard-normal baseline covariates; X = Z = (1, z1, z2, z3).
struct SimParams {
  std::vector<double> beta;
  std::vector<double> gamma;
  std::vector<double> pi;
  double rho = 0.0;
  double phi = 0.0;
};

SimParams skiptrack_defaults();
SimParams li_defaults();

/// Scenario 3: twenty baseline covariates, non-linear mean and regularity
/// channels, and a two-class mixture of skipping behaviour.
struct MixtureParams {
  double beta_intercept = 0.0;
  std::vector<double> beta;   // 20 effects on log median, covariates 1-10 nonzero
  double sin_amplitude = 0.0; // adds amplitude * sin(z1) to the log median
  double gamma_intercept = 0.0;
  std::vector<double> gamma;  // 20 effects on log theta, covariates 1-5 and 11-15 nonzero
  double quadratic = 0.0;     // adds quadratic * sum_{k<=5} (z_k^2 - 1) to log theta
  double rho = 0.0;
  double phi = 0.0;
  double sporadic_fraction = 0.0;
  std::vector<double> pi_consistent;
  std::vector<double> pi_sporadic;
};

MixtureParams mixture_defaults();

inline constexpr std::size_t kDefaultCyclesPerIndividual = 13;

SimulatedData simulate_skiptrack(std::size_t n, std::size_t cycles_per_individual, const SimParams& params, Rng& rng);
SimulatedData simulate_li(std::size_t n, std::size_t cycles_per_individual, const SimParams& params, Rng& rng);
SimulatedData simulate_mixture(std::size_t n, std::size_t cycles_per_individual, const MixtureParams& params,
                               Rng& rng);

enum class Scenario { SkipTrack = 1, Li = 2, Mixture = 3 };

/// Parses 1, 2 or 3; throws InvalidParameter otherwise.
Scenario scenario_from_int(int value);

struct ScenarioParams {
  SimParams skiptrack = skiptrack_defaults();
  SimParams li = li_defaults();
  MixtureParams mixture = mixture_defaults();
  std::size_t cycles_per_individual = kDefaultCyclesPerIndividual;
};

/// Seed of replicate r for (scenario, n) under `seed`.
std::uint64_t replicate_seed(std::uint64_t seed, Scenario scenario, std::size_t n, std::size_t replicate);

/// Replicate r of a battery, reproducible in isolation.
SimulatedData simulate_replicate(Scenario scenario, std::size_t n, std::size_t replicate, std::uint64_t seed,
                                 const ScenarioParams& params = {});

struct BatteryItem {
  std::size_t n = 0;
  std::size_t replicate = 0;
  SimulatedData sim;
};

inline const std::vector<std::size_t> kFullSampleSizes{100, 500, 1000, 5000};
inline constexpr std::size_t kFullReplicates = 200;
inline const std::vector<std::size_t> kDeskSampleSizes{100, 500};
inline constexpr std::size_t kDeskReplicates = 50;

/// Streams every (n, replicate) pair in order to `sink`.
void simulation_battery(Scenario scenario, const std::vector<std::size_t>& n_values, std::size_t replicates,
                        std::uint64_t seed, const ScenarioParams& params,
                        const std::function<void(BatteryItem&&)>& sink);

}  // namespace skiptrack
