#include "skiptrack/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "skiptrack/error.hpp"

namespace skiptrack {

namespace {

const double kLog28 = std::log(28.0);

void check_simplex(const std::vector<double>& pi, const char* what) {
  double sum = 0.0;
  for (double v : pi) {
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidParameter, std::string(what) + " has a negative entry");
    sum += v;
  }
  if (pi.empty() || std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorCode::InvalidParameter, std::string(what) + " must sum to 1");
}

void check_common(std::size_t n, std::size_t cycles) {
  if (n < 2) throw Error(ErrorCode::InvalidParameter, "simulation needs n >= 2");
  if (cycles < 1) throw Error(ErrorCode::InvalidParameter, "cycles_per_individual must be >= 1");
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

std::vector<double> baseline_row(std::size_t covariates, Rng& rng) {
  std::vector<double> row(covariates + 1);
  row[0] = 1.0;
  for (std::size_t k = 1; k <= covariates; ++k) row[k] = rng.standard_normal();
  return row;
}

std::string individual_id(std::size_t i) { return "id" + std::to_string(i + 1); }

// A tiny tau makes sd huge and exp() can leave the double range. Clamp the
// log length so such cycles stay finite and positive.
double lognormal_length(double mu, int c, double sd, Rng& rng) {
  static const double lo = std::log(std::numeric_limits<double>::min());
  static const double hi = std::log(std::numeric_limits<double>::max());
  const double log_y = mu + std::log(static_cast<double>(c)) + rng.normal(0.0, sd);
  return std::exp(std::clamp(log_y, lo, hi));
}

}  // namespace

SimParams skiptrack_defaults() {
  SimParams p;
  p.beta = {kLog28, -0.02, 0.0, 0.06};
  p.gamma = {std::log(100.0), 0.0, -0.1, 0.3};
  p.pi = {0.90, 0.08, 0.02};
  // tau_i has Gamma shape theta_i * phi, about 2 at the intercept.
  p.rho = 50.0;
  p.phi = 0.02;
  return p;
}

SimParams li_defaults() {
  SimParams p = skiptrack_defaults();
  p.gamma.clear();
  p.phi = 0.0;
  return p;
}

MixtureParams mixture_defaults() {
  MixtureParams m;
  m.beta_intercept = kLog28;
  m.beta = {0.06, -0.05, 0.04, -0.03, 0.02, 0.06, -0.05, 0.04, -0.03, 0.02,
            0.0,  0.0,   0.0,  0.0,   0.0,  0.0,  0.0,   0.0,  0.0,   0.0};
  m.sin_amplitude = 0.05;
  m.gamma_intercept = std::log(100.0);
  m.gamma = {0.3, -0.25, 0.2, -0.15, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0,
             0.3, -0.25, 0.2, -0.15, 0.1, 0.0, 0.0, 0.0, 0.0, 0.0};
  m.quadratic = 0.05;
  m.rho = 50.0;
  m.phi = 0.02;
  m.sporadic_fraction = 0.3;
  m.pi_consistent = {0.96, 0.03, 0.01};
  m.pi_sporadic = {0.75, 0.18, 0.07};
  return m;
}

SimulatedData simulate_skiptrack(std::size_t n, std::size_t cycles, const SimParams& params, Rng& rng) {
  check_common(n, cycles);
  check_simplex(params.pi, "pi");
  if (params.beta.size() != params.gamma.size() || params.beta.empty())
    throw Error(ErrorCode::InvalidParameter, "beta and gamma must have the same nonzero length");
  if (!(params.rho > 0.0) || !(params.phi > 0.0))
    throw Error(ErrorCode::InvalidParameter, "rho and phi must be positive");

  const std::size_t covariates = params.beta.size() - 1;
  SimulatedData out;
  SimTruth& t = out.truth;
  t.beta = params.beta;
  t.gamma = params.gamma;
  t.pi = params.pi;
  t.rho = params.rho;
  t.phi = params.phi;

  std::vector<IndividualRecord> records(n);
  const double b_sd = 1.0 / std::sqrt(params.rho);
  for (std::size_t i = 0; i < n; ++i) {
    IndividualRecord& r = records[i];
    r.id = individual_id(i);
    r.z = baseline_row(covariates, rng);
    const double b = rng.normal(0.0, b_sd);
    const double theta = std::exp(dot(r.z, params.gamma));
    const double tau = rng.gamma(theta * params.phi, params.phi);
    const double mu = dot(r.z, params.beta) + b;
    const double sd = 1.0 / std::sqrt(tau);
    t.b.push_back(b);
    t.tau.push_back(tau);
    r.cycles.resize(cycles);
    for (auto& cyc : r.cycles) {
      const int c = static_cast<int>(rng.categorical(params.pi)) + 1;
      t.c.push_back(c);
      cyc.x = r.z;
      cyc.length = lognormal_length(mu, c, sd, rng);
    }
  }
  out.data = validate_dataset(std::move(records));
  return out;
}

SimulatedData simulate_li(std::size_t n, std::size_t cycles, const SimParams& params, Rng& rng) {
  check_common(n, cycles);
  check_simplex(params.pi, "pi");
  if (params.beta.empty()) throw Error(ErrorCode::InvalidParameter, "beta must be nonempty");
  if (!(params.rho > 0.0)) throw Error(ErrorCode::InvalidParameter, "rho must be positive");

  const std::size_t covariates = params.beta.size() - 1;
  SimulatedData out;
  SimTruth& t = out.truth;
  t.beta = params.beta;
  t.pi = params.pi;
  t.rho = params.rho;

  std::vector<IndividualRecord> records(n);
  const double b_sd = 1.0 / std::sqrt(params.rho);
  for (std::size_t i = 0; i < n; ++i) {
    IndividualRecord& r = records[i];
    r.id = individual_id(i);
    r.z = baseline_row(covariates, rng);
    const double b = rng.normal(0.0, b_sd);
    const double lambda = std::exp(dot(r.z, params.beta) + b);
    t.b.push_back(b);
    r.cycles.resize(cycles);
    for (auto& cyc : r.cycles) {
      const int c = static_cast<int>(rng.categorical(params.pi)) + 1;
      t.c.push_back(c);
      cyc.x = r.z;
      std::int64_t y = 0;
      while (y < 1) y = rng.poisson(static_cast<double>(c) * lambda);
      cyc.length = static_cast<double>(y);
    }
  }
  out.data = validate_dataset(std::move(records));
  return out;
}

SimulatedData simulate_mixture(std::size_t n, std::size_t cycles, const MixtureParams& params, Rng& rng) {
  check_common(n, cycles);
  check_simplex(params.pi_consistent, "pi_consistent");
  check_simplex(params.pi_sporadic, "pi_sporadic");
  if (params.pi_consistent.size() != params.pi_sporadic.size())
    throw Error(ErrorCode::InvalidParameter, "mixture skip distributions differ in length");
  if (params.beta.size() != params.gamma.size() || params.beta.size() < 5)
    throw Error(ErrorCode::InvalidParameter, "mixture effects must have equal length >= 5");
  if (!(params.rho > 0.0) || !(params.phi > 0.0))
    throw Error(ErrorCode::InvalidParameter, "rho and phi must be positive");
  if (params.sporadic_fraction < 0.0 || params.sporadic_fraction > 1.0)
    throw Error(ErrorCode::InvalidParameter, "sporadic_fraction must lie in [0, 1]");

  const std::size_t covariates = params.beta.size();
  SimulatedData out;
  SimTruth& t = out.truth;
  t.beta.push_back(params.beta_intercept);
  t.beta.insert(t.beta.end(), params.beta.begin(), params.beta.end());
  t.gamma.push_back(params.gamma_intercept);
  t.gamma.insert(t.gamma.end(), params.gamma.begin(), params.gamma.end());
  t.rho = params.rho;
  t.phi = params.phi;
  t.pi.resize(params.pi_consistent.size());
  for (std::size_t k = 0; k < t.pi.size(); ++k)
    t.pi[k] = (1.0 - params.sporadic_fraction) * params.pi_consistent[k] +
              params.sporadic_fraction * params.pi_sporadic[k];

  std::vector<IndividualRecord> records(n);
  const double b_sd = 1.0 / std::sqrt(params.rho);
  for (std::size_t i = 0; i < n; ++i) {
    IndividualRecord& r = records[i];
    r.id = individual_id(i);
    r.z = baseline_row(covariates, rng);
    const double b = rng.normal(0.0, b_sd);
    double quad = 0.0;
    for (std::size_t k = 1; k <= 5; ++k) quad += r.z[k] * r.z[k] - 1.0;
    const double log_theta = dot(r.z, t.gamma) + params.quadratic * quad;
    const double theta = std::exp(log_theta);
    const double tau = rng.gamma(theta * params.phi, params.phi);
    const double mu = dot(r.z, t.beta) + params.sin_amplitude * std::sin(r.z[1]) + b;
    const double sd = 1.0 / std::sqrt(tau);
    const bool sporadic = rng.uniform() < params.sporadic_fraction;
    const auto& pi = sporadic ? params.pi_sporadic : params.pi_consistent;
    t.b.push_back(b);
    t.tau.push_back(tau);
    r.cycles.resize(cycles);
    for (auto& cyc : r.cycles) {
      const int c = static_cast<int>(rng.categorical(pi)) + 1;
      t.c.push_back(c);
      cyc.x = r.z;
      cyc.length = lognormal_length(mu, c, sd, rng);
    }
  }
  out.data = validate_dataset(std::move(records));
  return out;
}

Scenario scenario_from_int(int value) {
  switch (value) {
    case 1: return Scenario::SkipTrack;
    case 2: return Scenario::Li;
    case 3: return Scenario::Mixture;
    default: throw Error(ErrorCode::InvalidParameter, "scenario must be 1, 2 or 3, got " + std::to_string(value));
  }
}

std::uint64_t replicate_seed(std::uint64_t seed, Scenario scenario, std::size_t n, std::size_t replicate) {
  return derive_seed(seed, {static_cast<std::uint64_t>(scenario), static_cast<std::uint64_t>(n),
                            static_cast<std::uint64_t>(replicate)});
}

SimulatedData simulate_replicate(Scenario scenario, std::size_t n, std::size_t replicate, std::uint64_t seed,
                                 const ScenarioParams& params) {
  Rng rng(replicate_seed(seed, scenario, n, replicate));
  switch (scenario) {
    case Scenario::SkipTrack: return simulate_skiptrack(n, params.cycles_per_individual, params.skiptrack, rng);
    case Scenario::Li: return simulate_li(n, params.cycles_per_individual, params.li, rng);
    case Scenario::Mixture: return simulate_mixture(n, params.cycles_per_individual, params.mixture, rng);
  }
  throw Error(ErrorCode::InvalidParameter, "unknown scenario");
}

void simulation_battery(Scenario scenario, const std::vector<std::size_t>& n_values, std::size_t replicates,
                        std::uint64_t seed, const ScenarioParams& params,
                        const std::function<void(BatteryItem&&)>& sink) {
  for (std::size_t n : n_values) {
    for (std::size_t r = 0; r < replicates; ++r) {
      BatteryItem item;
      item.n = n;
      item.replicate = r;
      item.sim = simulate_replicate(scenario, n, r, seed, params);
      sink(std::move(item));
    }
  }
}

}  // namespace skiptrack
