#include "skiptrack/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/chi_squared.hpp>

#include "skiptrack/error.hpp"
#include "skiptrack/li.hpp"

namespace skiptrack {

double quantile_sorted(std::span<const double> sorted, double u) {
  if (sorted.empty()) throw Error(ErrorCode::InvalidParameter, "quantile of an empty sample");
  u = std::clamp(u, 0.0, 1.0);
  const double h = static_cast<double>(sorted.size() - 1) * u;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double quantile(std::vector<double> draws, double u) {
  std::sort(draws.begin(), draws.end());
  return quantile_sorted(draws, u);
}

Interval credible_interval(std::vector<double> draws, double level) {
  if (draws.empty()) throw Error(ErrorCode::InvalidParameter, "credible interval of an empty sample");
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::InvalidParameter, "level must lie in (0, 1)");
  std::sort(draws.begin(), draws.end());
  const double tail = 0.5 * (1.0 - level);
  return {quantile_sorted(draws, tail), quantile_sorted(draws, 1.0 - tail)};
}

double gelman_rubin(const std::vector<std::vector<double>>& chains) {
  if (chains.size() < 2) throw Error(ErrorCode::InsufficientChains, "R-hat needs at least two chains");
  std::size_t len = chains.front().size();
  for (const auto& c : chains) len = std::min(len, c.size());
  if (len < 4) throw Error(ErrorCode::InsufficientData, "R-hat needs at least four draws per chain");

  const std::size_t half = len / 2;
  std::vector<double> means;
  double within = 0.0;
  for (const auto& c : chains) {
    // Odd lengths drop the first draw so both halves have `half` draws.
    const std::size_t start = len - 2 * half;
    for (int h = 0; h < 2; ++h) {
      const auto first = c.begin() + static_cast<std::ptrdiff_t>(start + static_cast<std::size_t>(h) * half);
      const double m = std::accumulate(first, first + static_cast<std::ptrdiff_t>(half), 0.0) /
                       static_cast<double>(half);
      double ss = 0.0;
      for (auto it = first; it != first + static_cast<std::ptrdiff_t>(half); ++it) ss += (*it - m) * (*it - m);
      within += ss / static_cast<double>(half);
      means.push_back(m);
    }
  }
  within /= static_cast<double>(means.size());
  const double grand = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(means.size());
  double between = 0.0;
  for (double m : means) between += (m - grand) * (m - grand);
  between /= static_cast<double>(means.size() - 1);

  if (within <= 0.0) return between <= 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return std::sqrt((within + between) / within);
}

double effective_sample_size(std::span<const double> draws) {
  const std::size_t n = draws.size();
  if (n < 2) return static_cast<double>(n);
  const double mean = std::accumulate(draws.begin(), draws.end(), 0.0) / static_cast<double>(n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = draws[i] - mean;
  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t i = 0; i + lag < n; ++i) s += x[i] * x[i + lag];
    return s / static_cast<double>(n);
  };
  const double c0 = autocov(0);
  if (!(c0 > 0.0)) return 1.0;

  double sum = 0.0;
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    const double pair = autocov(2 * k) / c0 + autocov(2 * k + 1) / c0;
    if (pair <= 0.0) break;
    sum += pair;
  }
  const double tau = -1.0 + 2.0 * sum;
  const double ess = tau > 0.0 ? static_cast<double>(n) / tau : static_cast<double>(n);
  return std::clamp(ess, 1.0, static_cast<double>(n));
}

double effective_sample_size(const std::vector<std::vector<double>>& chains) {
  double total = 0.0;
  for (const auto& c : chains) total += effective_sample_size(c);
  return total;
}

SummaryTable summarize(const PosteriorSamples& samples, double level) {
  SummaryTable table;
  table.reserve(samples.dim());
  for (std::size_t col = 0; col < samples.dim(); ++col) {
    SummaryRow row;
    row.name = samples.names[col];
    row.level = level;
    auto chains = samples.by_chain(col);
    std::vector<double> all = samples.pooled(col);
    if (all.empty()) throw Error(ErrorCode::InsufficientData, "no retained draws to summarize");
    const double n = static_cast<double>(all.size());
    row.mean = std::accumulate(all.begin(), all.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : all) ss += (v - row.mean) * (v - row.mean);
    row.sd = all.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    const Interval ci = credible_interval(std::move(all), level);
    row.lo = ci.lo;
    row.hi = ci.hi;
    bool rhat_ok = chains.size() >= 2;
    for (const auto& c : chains) rhat_ok = rhat_ok && c.size() >= 4;
    row.rhat = rhat_ok ? gelman_rubin(chains) : std::numeric_limits<double>::quiet_NaN();
    row.ess = effective_sample_size(chains);
    table.push_back(std::move(row));
  }
  return table;
}

SkipSummary skip_posterior_summary(const SkipTally& draws) {
  SkipSummary out;
  out.map.resize(draws.num_cycles);
  out.mean.resize(draws.num_cycles);
  out.variance.resize(draws.num_cycles);
  for (std::size_t k = 0; k < draws.num_cycles; ++k) {
    const std::uint64_t total = draws.total(k);
    if (total == 0) throw Error(ErrorCode::InvalidParameter, "no skip draws recorded");
    std::uint64_t best = 0;
    double m = 0.0;
    for (int c = 1; c <= draws.k_skip; ++c) {
      const std::uint64_t cnt = draws.count(k, c);
      if (cnt > best) {
        best = cnt;
        out.map[k] = c;
      }
      m += static_cast<double>(c) * static_cast<double>(cnt);
    }
    m /= static_cast<double>(total);
    double v = 0.0;
    for (int c = 1; c <= draws.k_skip; ++c) v += (c - m) * (c - m) * static_cast<double>(draws.count(k, c));
    out.mean[k] = m;
    out.variance[k] = v / static_cast<double>(total);
  }
  return out;
}

double skip_accuracy(std::span<const int> map_c, std::span<const int> c_true) {
  if (map_c.size() != c_true.size()) throw Error(ErrorCode::LengthMismatch, "skip vectors differ in length");
  if (map_c.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t k = 0; k < map_c.size(); ++k) hits += map_c[k] == c_true[k];
  return static_cast<double>(hits) / static_cast<double>(map_c.size());
}

std::vector<double> per_individual_mean(const CycleDataset& data, std::span<const double> per_cycle) {
  if (per_cycle.size() != data.num_cycles()) throw Error(ErrorCode::LengthMismatch, "one value per cycle required");
  std::vector<double> out(data.num_individuals());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double s = 0.0;
    for (std::size_t k = data.first_cycle(i); k < data.first_cycle(i + 1); ++k) s += per_cycle[k];
    out[i] = s / static_cast<double>(data.cycle_count(i));
  }
  return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> rank(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    const double pi2 = M_PI * M_PI;
    double s = 0.0;
    for (int j = 1; j <= 50; ++j) {
      const double k = 2.0 * j - 1.0;
      s += std::exp(-k * k * pi2 / (8.0 * lambda * lambda));
    }
    return std::clamp(1.0 - std::sqrt(2.0 * M_PI) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double term = std::exp(-2.0 * j * j * lambda * lambda);
    s += (j % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-300) break;
  }
  return std::clamp(s, 0.0, 1.0);
}

double ks_p_from_d(double d, double effective_n) {
  const double rn = std::sqrt(effective_n);
  return kolmogorov_sf((rn + 0.12 + 0.11 / rn) * d);
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "spearman inputs differ in length");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

double chi_square_sf(double statistic, double df) {
  if (statistic <= 0.0) return 1.0;
  boost::math::chi_squared_distribution<double> dist(df);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

double rank_uniformity_p(std::span<const std::size_t> ranks, std::size_t max_rank, std::size_t bins) {
  const std::size_t levels = max_rank + 1;
  if (bins < 2 || bins > levels) throw Error(ErrorCode::InvalidParameter, "bins must lie in 2..max_rank + 1");
  if (ranks.empty()) throw Error(ErrorCode::InsufficientData, "no ranks");
  std::vector<double> observed(bins, 0.0), width(bins, 0.0);
  auto bin_of = [&](std::size_t r) { return r * bins / levels; };
  for (std::size_t r = 0; r < levels; ++r) width[bin_of(r)] += 1.0;
  for (std::size_t r : ranks) {
    if (r > max_rank) throw Error(ErrorCode::InvalidParameter, "rank exceeds max_rank");
    observed[bin_of(r)] += 1.0;
  }
  const double total = static_cast<double>(ranks.size());
  double stat = 0.0;
  for (std::size_t b = 0; b < bins; ++b) {
    const double expected = total * width[b] / static_cast<double>(levels);
    stat += (observed[b] - expected) * (observed[b] - expected) / expected;
  }
  return chi_square_sf(stat, static_cast<double>(bins - 1));
}

double ks_one_sample_p(std::vector<double> x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw Error(ErrorCode::InsufficientData, "KS test of an empty sample");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return ks_p_from_d(d, n);
}

double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::InsufficientData, "KS test of an empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return ks_p_from_d(d, na * nb / (na + nb));
}

Interval binomial_band(double p, std::size_t trials, double level) {
  if (trials == 0) throw Error(ErrorCode::InvalidParameter, "binomial band needs trials > 0");
  if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidParameter, "p must lie in [0, 1]");
  const double tail = 0.5 * (1.0 - level);
  const double n = static_cast<double>(trials);
  boost::math::binomial_distribution<double> dist(n, p);
  // smallest k with P(X <= k) >= u
  auto lowest = [&](double u) {
    std::size_t k = 0;
    while (k < trials && boost::math::cdf(dist, static_cast<double>(k)) < u) ++k;
    return static_cast<double>(k);
  };
  return {lowest(tail) / n, lowest(1.0 - tail) / n};
}

// ---- SBC ------------------------------------------------------------------

SbcSettings sbc_default_settings() {
  SbcSettings s;
  SurrogatePriors prior;
  prior.gamma_mean = {std::log(50.0), 0.0};
  prior.gamma_precision = 16.0;
  prior.phi_shape = 10.0;
  prior.phi_rate = 100.0;
  prior.pi_alpha = {18.0, 1.5, 0.5};
  s.hyper.surrogate = prior;
  s.hyper.rho_beta = 4.0;
  s.hyper.rho_gamma_prop = 50.0;
  s.hyper.rho_phi_prop = 100.0;
  s.chain.n_chains = 1;
  s.chain.n_iter = 500;
  s.chain.burn_in = 100;
  s.chain.thin = 10;
  s.chain.trace_individuals = 1;
  s.monitored = {"beta_1", "beta_2", "gamma_1", "gamma_2", "rho", "phi", "pi_1", "pi_2", "pi_3", "tau_1", "b_1"};
  return s;
}

SbcDraw sbc_prior_draw(const SbcSettings& s, Rng& rng) {
  if (!s.hyper.surrogate) throw Error(ErrorCode::InvalidParameter, "calibration needs surrogate priors");
  const SurrogatePriors& sp = *s.hyper.surrogate;
  if (sp.gamma_mean.size() != s.q) throw Error(ErrorCode::DimensionMismatch, "surrogate gamma_mean must have length q");
  if (s.p < 1 || s.q < 1) throw Error(ErrorCode::InvalidParameter, "p and q must be >= 1");

  const std::size_t K = static_cast<std::size_t>(s.hyper.k_skip);
  std::vector<double> beta(s.p), gamma(s.q), pi(K);
  const double beta_sd = 1.0 / std::sqrt(s.hyper.rho_beta);
  for (double& v : beta) v = rng.normal(0.0, beta_sd);
  for (std::size_t k = 0; k < s.q; ++k) gamma[k] = rng.normal(sp.gamma_mean[k], 1.0 / std::sqrt(sp.gamma_precision));
  const double rho = rng.gamma(sp.rho_shape, sp.rho_rate);
  const double phi = rng.gamma(sp.phi_shape, sp.phi_rate);
  const std::vector<double> alpha = s.hyper.pi_prior();
  rng.dirichlet(alpha, pi);

  std::vector<IndividualRecord> records(s.n);
  double tau_first = 0.0, b_first = 0.0;
  for (std::size_t i = 0; i < s.n; ++i) {
    IndividualRecord& r = records[i];
    r.id = "s" + std::to_string(i + 1);
    r.z.assign(s.q, 1.0);
    for (std::size_t k = 1; k < s.q; ++k) r.z[k] = rng.standard_normal();
    double lin = 0.0;
    for (std::size_t k = 0; k < s.q; ++k) lin += r.z[k] * gamma[k];
    const double theta = theta_from_linear(lin);
    const double tau = rng.gamma(theta * phi, phi);
    const double b = rng.normal(0.0, 1.0 / std::sqrt(rho));
    if (i == 0) {
      tau_first = tau;
      b_first = b;
    }
    r.cycles.resize(s.cycles);
    for (auto& cyc : r.cycles) {
      cyc.x.assign(s.p, 1.0);
      for (std::size_t k = 1; k < s.p; ++k) cyc.x[k] = rng.standard_normal();
      double mu = b;
      for (std::size_t k = 0; k < s.p; ++k) mu += cyc.x[k] * beta[k];
      const int c = static_cast<int>(rng.categorical(pi)) + 1;
      cyc.length = std::exp(mu + std::log(static_cast<double>(c)) + rng.normal(0.0, 1.0 / std::sqrt(tau)));
    }
  }

  SbcDraw out;
  out.data = validate_dataset(std::move(records));
  const auto names = parameter_names(s.p, s.q, s.hyper.k_skip);
  std::vector<double> all;
  all.insert(all.end(), beta.begin(), beta.end());
  all.insert(all.end(), gamma.begin(), gamma.end());
  all.push_back(rho);
  all.push_back(phi);
  all.insert(all.end(), pi.begin(), pi.end());
  for (const auto& m : s.monitored) {
    if (m == "tau_1") {
      out.truth.push_back(tau_first);
    } else if (m == "b_1") {
      out.truth.push_back(b_first);
    } else {
      const auto it = std::find(names.begin(), names.end(), m);
      if (it == names.end()) throw Error(ErrorCode::InvalidParameter, "cannot monitor '" + m + "'");
      out.truth.push_back(all[static_cast<std::size_t>(it - names.begin())]);
    }
  }
  return out;
}

SbcResult sbc_calibration(const SbcGenerator& generator, const SbcSettings& settings, std::size_t replicates,
                          std::size_t threads) {
  settings.chain.validate();
  const std::size_t M = settings.monitored.size();
  SbcResult out;
  out.names = settings.monitored;
  out.max_rank = (settings.chain.n_iter - settings.chain.burn_in + settings.chain.thin - 1) / settings.chain.thin *
                 settings.chain.n_chains;
  std::vector<std::vector<std::size_t>> by_rep(replicates);
  parallel_for(replicates, threads, [&](std::size_t r) {
    SbcDraw draw = generator(r);
    if (draw.truth.size() != M) throw Error(ErrorCode::DimensionMismatch, "truth does not match monitored list");
    ChainConfig cc = settings.chain;
    cc.seed = derive_seed(settings.chain.seed, {0x5BC1ULL, static_cast<std::uint64_t>(r)});
    cc.threads = 1;
    const PosteriorSamples ps = run_chains(draw.data, settings.hyper, cc);
    std::vector<std::size_t> ranks(M);
    for (std::size_t m = 0; m < M; ++m) {
      const auto draws = ps.pooled(ps.column(settings.monitored[m]));
      ranks[m] = static_cast<std::size_t>(
          std::count_if(draws.begin(), draws.end(), [&](double v) { return v < draw.truth[m]; }));
    }
    by_rep[r] = std::move(ranks);
  });
  out.ranks.assign(M, std::vector<std::size_t>(replicates));
  for (std::size_t r = 0; r < replicates; ++r)
    for (std::size_t m = 0; m < M; ++m) out.ranks[m][r] = by_rep[r][m];
  for (std::size_t m = 0; m < M; ++m) out.p_values.push_back(rank_uniformity_p(out.ranks[m], out.max_rank, settings.bins));
  return out;
}

SbcResult sbc_calibration(const SbcSettings& settings, std::size_t replicates, std::uint64_t seed,
                          std::size_t threads) {
  SbcSettings s = settings;
  s.chain.seed = seed;
  return sbc_calibration(
      [&](std::size_t r) {
        Rng rng(derive_seed(seed, {0x5BC0ULL, static_cast<std::uint64_t>(r)}));
        return sbc_prior_draw(s, rng);
      },
      s, replicates, threads);
}

// ---- harness --------------------------------------------------------------

const char* to_string(FitMode mode) { return mode == FitMode::Full ? "full" : "fixed"; }

FitMode fit_mode_from_string(const std::string& text) {
  if (text == "full") return FitMode::Full;
  if (text == "fixed" || text == "fixed_skips") return FitMode::FixedSkips;
  throw Error(ErrorCode::InvalidParameter, "fit mode must be 'full' or 'fixed', got '" + text + "'");
}

namespace {

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::vector<ParameterReport> report_layout(const SimTruth& truth) {
  std::vector<ParameterReport> out;
  for (std::size_t k = 1; k < truth.beta.size(); ++k) {
    ParameterReport r;
    r.name = "beta_" + std::to_string(k + 1);
    r.truth = truth.beta[k];
    r.null_effect = truth.beta[k] == 0.0;
    out.push_back(r);
  }
  for (std::size_t k = 1; k < truth.gamma.size(); ++k) {
    ParameterReport r;
    r.name = "gamma_" + std::to_string(k + 1);
    r.truth = truth.gamma[k];
    r.null_effect = truth.gamma[k] == 0.0;
    out.push_back(r);
  }
  return out;
}

}  // namespace

double SimReport::type_one(const std::string& prefix) const {
  double s = 0.0;
  std::size_t m = 0;
  for (const auto& p : parameters)
    if (p.null_effect && starts_with(p.name, prefix)) {
      s += p.rejection_rate;
      ++m;
    }
  return m ? s / static_cast<double>(m) : std::numeric_limits<double>::quiet_NaN();
}

double SimReport::type_two(const std::string& prefix) const {
  double s = 0.0;
  std::size_t m = 0;
  for (const auto& p : parameters)
    if (!p.null_effect && starts_with(p.name, prefix)) {
      s += 1.0 - p.rejection_rate;
      ++m;
    }
  return m ? s / static_cast<double>(m) : std::numeric_limits<double>::quiet_NaN();
}

void aggregate(SimReport& report) {
  report.failures = 0;
  for (auto& p : report.parameters) p.bias = p.width = p.coverage = p.rejection_rate = 0.0;
  double acc = 0.0, comp = 0.0;
  for (const auto& rec : report.records) {
    if (rec.failed) {
      ++report.failures;
      continue;
    }
    acc += rec.skip_accuracy;
    comp += rec.comparator_accuracy;
    for (std::size_t j = 0; j < report.parameters.size(); ++j) {
      auto& p = report.parameters[j];
      const Interval ci{rec.lo[j], rec.hi[j]};
      p.bias += rec.estimate[j] - p.truth;
      p.width += ci.width();
      p.coverage += ci.contains(p.truth) ? 1.0 : 0.0;
      p.rejection_rate += ci.excludes_zero() ? 1.0 : 0.0;
    }
  }
  report.replicates = report.records.size();
  const double ok = static_cast<double>(report.succeeded());
  if (ok == 0.0) return;
  for (auto& p : report.parameters) {
    p.bias /= ok;
    p.width /= ok;
    p.coverage /= ok;
    p.rejection_rate /= ok;
  }
  report.mean_skip_accuracy = acc / ok;
  report.mean_comparator_accuracy = comp / ok;
}

SimReport replicate_harness(Scenario scenario, std::size_t n, std::size_t replicates, FitMode mode,
                            std::uint64_t seed, const HarnessConfig& config) {
  if (replicates == 0) throw Error(ErrorCode::InvalidParameter, "replicates must be > 0");
  SimReport report;
  report.scenario = scenario;
  report.n = n;
  report.mode = mode;
  report.parameters = report_layout(simulate_replicate(scenario, n, 0, seed, config.sim).truth);
  report.records.resize(replicates);

  parallel_for(replicates, config.threads, [&](std::size_t r) {
    ReplicateRecord& rec = report.records[r];
    rec.replicate = r;
    try {
      const SimulatedData sim = simulate_replicate(scenario, n, r, seed, config.sim);
      ChainConfig cc = config.chain;
      cc.seed = derive_seed(seed, {0xF17ULL, static_cast<std::uint64_t>(scenario), static_cast<std::uint64_t>(n),
                                   static_cast<std::uint64_t>(r)});
      cc.threads = 1;
      PosteriorSamples ps;
      if (mode == FitMode::Full) {
        ps = run_chains(sim.data, config.hyper, cc);
        rec.skip_accuracy = skip_accuracy(skip_posterior_summary(ps.c_draws).map, sim.truth.c);
      } else {
        FixedSkipsResult fx = fixed_skips_fit(sim.data, config.hyper, cc);
        rec.comparator_accuracy = skip_accuracy(fx.map_c, sim.truth.c);
        rec.skip_accuracy = rec.comparator_accuracy;
        ps = std::move(fx.samples);
      }
      for (const auto& p : report.parameters) {
        auto draws = ps.pooled(ps.column(p.name));
        rec.estimate.push_back(std::accumulate(draws.begin(), draws.end(), 0.0) / static_cast<double>(draws.size()));
        const Interval ci = credible_interval(std::move(draws), config.level);
        rec.lo.push_back(ci.lo);
        rec.hi.push_back(ci.hi);
      }
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.error = e.what();
      rec.estimate.clear();
      rec.lo.clear();
      rec.hi.clear();
    }
  });
  aggregate(report);
  return report;
}

std::vector<AttenuationRow> attenuation_report(const SimReport& full, const SimReport& fixed,
                                               const std::vector<CovariateGroup>& groups) {
  if (full.records.size() != fixed.records.size() || full.parameters.size() != fixed.parameters.size())
    throw Error(ErrorCode::LengthMismatch, "attenuation needs matched reports");
  for (std::size_t j = 0; j < full.parameters.size(); ++j)
    if (full.parameters[j].name != fixed.parameters[j].name)
      throw Error(ErrorCode::LengthMismatch, "attenuation reports list different parameters");

  std::vector<AttenuationRow> rows;
  for (const auto& g : groups) {
    AttenuationRow row;
    row.group = g.name;
    double ratio_sum = 0.0, full_sum = 0.0, fixed_sum = 0.0;
    for (const auto& name : g.parameters) {
      std::size_t j = full.parameters.size();
      for (std::size_t k = 0; k < full.parameters.size(); ++k)
        if (full.parameters[k].name == name) j = k;
      if (j == full.parameters.size()) throw Error(ErrorCode::InvalidParameter, "unknown parameter '" + name + "'");
      for (std::size_t r = 0; r < full.records.size(); ++r) {
        const auto& a = full.records[r];
        const auto& b = fixed.records[r];
        if (a.failed || b.failed) continue;
        if (std::abs(a.estimate[j]) < 1e-6) {
          ++row.excluded;
          continue;
        }
        ratio_sum += b.estimate[j] / a.estimate[j];
        full_sum += a.estimate[j];
        fixed_sum += b.estimate[j];
        ++row.pairs;
      }
    }
    if (row.pairs > 0) {
      row.mean_ratio = ratio_sum / static_cast<double>(row.pairs);
      row.ratio_of_means = fixed_sum / full_sum;
    } else {
      row.mean_ratio = row.ratio_of_means = std::numeric_limits<double>::quiet_NaN();
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<CovariateGroup> mixture_groups() {
  CovariateGroup mean{"mean_1_10", {}}, prec_a{"precision_1_5", {}}, prec_b{"precision_11_15", {}};
  for (int k = 1; k <= 10; ++k) mean.parameters.push_back("beta_" + std::to_string(k + 1));
  for (int k = 1; k <= 5; ++k) prec_a.parameters.push_back("gamma_" + std::to_string(k + 1));
  for (int k = 11; k <= 15; ++k) prec_b.parameters.push_back("gamma_" + std::to_string(k + 1));
  return {mean, prec_a, prec_b};
}

}  // namespace skiptrack
