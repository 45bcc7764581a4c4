#include "cli.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>

#include "skiptrack/dataset.hpp"
#include "skiptrack/diagnostics.hpp"
#include "skiptrack/error.hpp"
#include "skiptrack/io.hpp"
#include "skiptrack/li.hpp"
#include "skiptrack/sampler.hpp"
#include "skiptrack/simulate.hpp"
#include "skiptrack/wasp.hpp"

namespace skiptrack::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Kind { UInt, Double, Bool, String, UIntList };

struct OptionSpec {
  std::string key;
  Kind kind;
  json fallback;  // null when the value is required
  std::string help;
};

const std::vector<std::string> kCommands{"simulate", "fit", "wasp", "replicate", "diagnose"};

void append(std::vector<OptionSpec>& to, const std::vector<OptionSpec>& from) {
  to.insert(to.end(), from.begin(), from.end());
}

std::vector<OptionSpec> specs_for(const std::string& cmd) {
  std::vector<OptionSpec> s{{"out", Kind::String, nullptr, "output directory"}};
  if (cmd != "diagnose") s.push_back({"seed", Kind::UInt, nullptr, "base seed"});

  const std::vector<OptionSpec> data{
      {"cycles_file", Kind::String, nullptr, "cycles CSV"},
      {"baseline_file", Kind::String, nullptr, "baseline CSV"},
      {"filter", Kind::Bool, true, "drop cycles outside [min_days, max_days]"},
      {"min_days", Kind::Double, 10.0, "shortest cycle kept by the filter"},
      {"max_days", Kind::Double, 90.0, "longest cycle kept by the filter"},
      {"allow_fractional", Kind::Bool, false, "accept non-integer cycle lengths"},
  };
  const std::vector<OptionSpec> chain{
      {"chains", Kind::UInt, 5, "independent chains"},
      {"iter", Kind::UInt, 10000, "iterations per chain, burn-in included"},
      {"burn_in", Kind::UInt, 750, "discarded iterations"},
      {"thin", Kind::UInt, 1, "keep every thin-th draw after burn-in"},
      {"threads", Kind::UInt, 0, "worker threads, 0 for all cores; outputs do not depend on it"},
      {"k_skip", Kind::UInt, 3, "largest skip multiplier"},
      {"rho_beta", Kind::Double, 0.01, "prior precision of beta"},
      {"rho_gamma_prop", Kind::Double, 1000.0, "precision of the gamma proposal"},
      {"rho_phi_prop", Kind::Double, 1000.0, "rate of the phi proposal"},
      {"level", Kind::Double, 0.95, "credible interval level"},
  };

  if (cmd == "simulate") {
    append(s, {{"scenario", Kind::UInt, 1, "1 lognormal hierarchy, 2 Poisson, 3 mixture"},
               {"n", Kind::UInt, 100, "individuals"},
               {"cycles", Kind::UInt, kDefaultCyclesPerIndividual, "cycles per individual"},
               {"replicate", Kind::UInt, 0, "replicate index within the battery"},
               {"round_days", Kind::Bool, true, "round cycle lengths to whole days"}});
  } else if (cmd == "fit") {
    append(s, data);
    append(s, chain);
    s.push_back({"mode", Kind::String, "full", "full or fixed (Poisson skips frozen before fitting)"});
  } else if (cmd == "wasp") {
    append(s, data);
    append(s, chain);
    append(s, {{"k_part", Kind::UInt, 20, "number of subsets"},
               {"draws_out", Kind::UInt, kDefaultWaspDraws, "draws of the combined posterior"},
               {"allow_partial", Kind::Bool, false, "combine the surviving subsets when some fail"},
               {"subset_likelihood", Kind::String, "raised",
                "raised (each subset's likelihood to the power k_part) or plain"}});
  } else if (cmd == "replicate") {
    append(s, chain);
    append(s, {{"scenario", Kind::UInt, 1, "1 lognormal hierarchy, 2 Poisson, 3 mixture"},
               {"n", Kind::UIntList, json::array({100, 500}), "sample sizes, comma separated"},
               {"cycles", Kind::UInt, kDefaultCyclesPerIndividual, "cycles per individual"},
               {"replicates", Kind::UInt, kDeskReplicates, "datasets per sample size"},
               {"modes", Kind::String, "both", "full, fixed or both"},
               {"preset", Kind::String, "", "desk or full; explicit settings win"}});
  } else if (cmd == "diagnose") {
    append(s, {{"draws_file", Kind::String, nullptr, "draws CSV written by fit or wasp"},
               {"level", Kind::Double, 0.95, "credible interval level"}});
  }
  return s;
}

json preset_values(const std::string& name) {
  if (name.empty()) return json::object();
  if (name == "desk")
    return {{"chains", 2}, {"iter", 2000}, {"burn_in", 500}, {"n", json::array({100, 500})}, {"replicates", 50}};
  if (name == "full")
    return {{"chains", 5},
            {"iter", 10000},
            {"burn_in", 750},
            {"n", json::array({100, 500, 1000, 5000})},
            {"replicates", kFullReplicates}};
  throw UsageError("unknown preset '" + name + "' (expected desk or full)");
}

std::string flag_name(const std::string& key) {
  std::string f = key;
  std::replace(f.begin(), f.end(), '_', '-');
  return "--" + f;
}

std::uint64_t parse_uint(const std::string& text, const std::string& key) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size())
    throw UsageError(key + ": '" + text + "' is not a nonnegative integer");
  return v;
}

json from_text(const OptionSpec& spec, const std::string& text) {
  switch (spec.kind) {
    case Kind::UInt:
      return parse_uint(text, spec.key);
    case Kind::Double: {
      double v = 0.0;
      const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
      if (text.empty() || res.ec != std::errc() || res.ptr != text.data() + text.size() || !std::isfinite(v))
        throw UsageError(spec.key + ": '" + text + "' is not a number");
      return v;
    }
    case Kind::Bool:
      if (text == "true" || text == "1" || text == "on" || text == "yes") return true;
      if (text == "false" || text == "0" || text == "off" || text == "no") return false;
      throw UsageError(spec.key + ": '" + text + "' is not a boolean");
    case Kind::String:
      return text;
    case Kind::UIntList: {
      json arr = json::array();
      std::size_t start = 0;
      for (;;) {
        const auto comma = text.find(',', start);
        arr.push_back(parse_uint(text.substr(start, comma - start), spec.key));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
      return arr;
    }
  }
  return nullptr;
}

json coerce(const OptionSpec& spec, const json& v) {
  const std::string where = spec.key;
  switch (spec.kind) {
    case Kind::UInt:
      if (v.is_number_unsigned()) return v.get<std::uint64_t>();
      if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
      throw UsageError(where + " must be a nonnegative integer");
    case Kind::Double:
      if (v.is_number()) return v.get<double>();
      throw UsageError(where + " must be a number");
    case Kind::Bool:
      if (v.is_boolean()) return v;
      throw UsageError(where + " must be true or false");
    case Kind::String:
      if (v.is_string()) return v;
      throw UsageError(where + " must be a string");
    case Kind::UIntList: {
      if (!v.is_array() || v.empty()) throw UsageError(where + " must be a nonempty array of integers");
      json arr = json::array();
      for (const auto& e : v) arr.push_back(coerce({spec.key, Kind::UInt, nullptr, ""}, e));
      return arr;
    }
  }
  return nullptr;
}

/// Layers defaults, preset, config file and command-line overrides.
json resolve(const std::string& cmd, const std::string& config_path, const std::map<std::string, std::string>& cli) {
  const auto specs = specs_for(cmd);
  auto spec_of = [&](const std::string& key) -> const OptionSpec* {
    for (const auto& s : specs)
      if (s.key == key) return &s;
    return nullptr;
  };

  json file = json::object();
  if (!config_path.empty()) {
    try {
      file = json::parse(read_text(config_path));
    } catch (const json::parse_error& e) {
      throw UsageError("config " + config_path + ": " + e.what());
    }
    if (!file.is_object()) throw UsageError("config " + config_path + " must hold a JSON object");
    if (file.contains("command")) {
      if (file["command"] != cmd)
        throw UsageError("config " + config_path + " was written for '" + file["command"].dump() + "'");
      file.erase("command");
    }
    for (const auto& [key, value] : file.items())
      if (!spec_of(key)) throw UsageError("config " + config_path + ": unknown setting '" + key + "' for " + cmd);
  }

  json out = json::object();
  for (const auto& s : specs)
    if (!s.fallback.is_null()) out[s.key] = coerce(s, s.fallback);

  if (spec_of("preset")) {
    std::string preset;
    if (const auto it = cli.find("preset"); it != cli.end())
      preset = it->second;
    else if (file.contains("preset"))
      preset = coerce(*spec_of("preset"), file["preset"]).get<std::string>();
    for (const auto& [key, value] : preset_values(preset).items()) out[key] = coerce(*spec_of(key), value);
  }
  for (const auto& [key, value] : file.items()) out[key] = coerce(*spec_of(key), value);
  for (const auto& [key, text] : cli) out[key] = from_text(*spec_of(key), text);

  for (const auto& s : specs)
    if (!out.contains(s.key)) throw UsageError(flag_name(s.key) + " is required");
  out["command"] = cmd;
  return out;
}

// ---- helpers shared by the commands ---------------------------------------

struct Context {
  json cfg;
  fs::path out;
  std::ostream& log;

  void write(const fs::path& relative, const std::string& content) const { atomic_write(out / relative, content); }
  std::uint64_t u(const char* key) const { return cfg.at(key).get<std::uint64_t>(); }
  double d(const char* key) const { return cfg.at(key).get<double>(); }
  bool b(const char* key) const { return cfg.at(key).get<bool>(); }
  std::string s(const char* key) const { return cfg.at(key).get<std::string>(); }
};

Hyperparams hyper_from(const Context& ctx) {
  Hyperparams h;
  h.k_skip = static_cast<int>(ctx.u("k_skip"));
  h.rho_beta = ctx.d("rho_beta");
  h.rho_gamma_prop = ctx.d("rho_gamma_prop");
  h.rho_phi_prop = ctx.d("rho_phi_prop");
  h.validate();
  return h;
}

ChainConfig chain_from(const Context& ctx) {
  ChainConfig c;
  c.n_chains = ctx.u("chains");
  c.n_iter = ctx.u("iter");
  c.burn_in = ctx.u("burn_in");
  c.thin = ctx.u("thin");
  c.threads = ctx.u("threads");
  c.seed = ctx.u("seed");
  c.validate();
  return c;
}

CycleDataset load_dataset(const Context& ctx) {
  auto records = read_dataset(ctx.s("cycles_file"), ctx.s("baseline_file"), IngestOptions{ctx.b("allow_fractional")});
  if (ctx.b("filter")) {
    auto f = filter_cycle_range(std::move(records), ctx.d("min_days"), ctx.d("max_days"));
    ctx.log << "filter: dropped " << f.dropped_cycles << " cycles outside [" << format_double(ctx.d("min_days"))
            << ", " << format_double(ctx.d("max_days")) << "] days and " << f.dropped_individuals
            << " individuals left without cycles\n";
    records = std::move(f.records);
  }
  CycleDataset data = validate_dataset(std::move(records));
  ctx.log << "data: " << data.num_individuals() << " individuals, " << data.num_cycles() << " cycles, p = "
          << data.mean_dim() << ", q = " << data.regularity_dim() << "\n";
  return data;
}

std::string individuals_csv(const CycleDataset& data, const PosteriorSamples& s) {
  std::string out = "individual_id,tau_mean,b_mean\n";
  for (std::size_t i = 0; i < data.num_individuals(); ++i) {
    out += data.individual(i).id + ",";
    out += (i < s.tau_mean.size() ? format_double(s.tau_mean[i]) : "") + ",";
    out += (i < s.b_mean.size() ? format_double(s.b_mean[i]) : "") + "\n";
  }
  return out;
}

void report_convergence(const Context& ctx, const SummaryTable& table) {
  double worst = 1.0;
  std::string name;
  for (const auto& r : table)
    if (std::isfinite(r.rhat) && r.rhat > worst) {
      worst = r.rhat;
      name = r.name;
    }
  if (worst > 1.1) ctx.log << "convergence: largest R-hat " << format_double(worst) << " (" << name << ")\n";
}

// ---- commands ---------------------------------------------------------------

int cmd_simulate(const Context& ctx) {
  const Scenario scenario = scenario_from_int(static_cast<int>(ctx.u("scenario")));
  ScenarioParams params;
  params.cycles_per_individual = ctx.u("cycles");
  SimulatedData sim = simulate_replicate(scenario, ctx.u("n"), ctx.u("replicate"), ctx.u("seed"), params);
  CycleDataset data = std::move(sim.data);
  if (ctx.b("round_days")) {
    std::vector<IndividualRecord> records(data.individuals().begin(), data.individuals().end());
    for (auto& r : records)
      for (auto& c : r.cycles) c.length = std::max(1.0, std::round(c.length));
    data = validate_dataset(std::move(records));
  }
  ctx.write("cycles.csv", cycles_csv(data));
  ctx.write("baseline.csv", baseline_csv(data));
  ctx.write("truth.csv", truth_csv(sim.truth));
  ctx.log << "simulate: wrote " << data.num_individuals() << " individuals, " << data.num_cycles() << " cycles\n";
  return kExitOk;
}

int cmd_fit(const Context& ctx) {
  const CycleDataset data = load_dataset(ctx);
  const Hyperparams hyper = hyper_from(ctx);
  const ChainConfig chain = chain_from(ctx);
  const FitMode mode = fit_mode_from_string(ctx.s("mode"));
  PosteriorSamples samples;
  if (mode == FitMode::Full) {
    samples = run_chains(data, hyper, chain);
  } else {
    FixedSkipsResult r = fixed_skips_fit(data, hyper, chain);
    if (r.spec.near_degenerate) ctx.log << "fit: Poisson hyperprior is near degenerate\n";
    samples = std::move(r.samples);
  }
  const SummaryTable table = summarize(samples, ctx.d("level"));
  report_convergence(ctx, table);
  ctx.write("draws.csv", draws_csv(samples, {{"command", "fit"}, {"mode", to_string(mode)}}));
  ctx.write("summary.csv", summary_csv(table));
  ctx.write("chains.csv", chains_csv(samples));
  ctx.write("skips.csv", skips_csv(data, skip_posterior_summary(samples.c_draws)));
  ctx.write("individuals.csv", individuals_csv(data, samples));
  ctx.write("histogram.csv", histogram_csv(data));
  return kExitOk;
}

std::string join_sizes(const std::vector<std::size_t>& sizes) {
  std::string out;
  for (std::size_t k = 0; k < sizes.size(); ++k) out += (k ? ":" : "") + std::to_string(sizes[k]);
  return out;
}

int cmd_wasp(const Context& ctx) {
  const CycleDataset data = load_dataset(ctx);
  const Hyperparams hyper = hyper_from(ctx);
  ChainConfig chain = chain_from(ctx);
  const std::size_t k_part = ctx.u("k_part");
  const SubsetLikelihood likelihood = subset_likelihood_from_string(ctx.s("subset_likelihood"));
  const Partition partition = partition_by_individual(data, k_part, chain.seed);
  const std::string sizes = join_sizes(partition.sizes());

  std::string part = "individual_id,subset\n";
  for (std::size_t i = 0; i < data.num_individuals(); ++i)
    part += data.individual(i).id + "," + std::to_string(partition.assignment[i] + 1) + "\n";
  ctx.write("partition.csv", part);

  const SubPosteriorSet subs = fit_subsets(data, partition, hyper, chain, chain.threads, {}, likelihood);

  const int width = static_cast<int>(std::to_string(k_part).size());
  std::string table = "subset,individuals,cycles,seed,status,error\n";
  for (const auto& s : subs.subsets) {
    std::string label = std::to_string(s.index + 1);
    label.insert(0, static_cast<std::size_t>(width) - label.size(), '0');
    table += std::to_string(s.index + 1) + "," + std::to_string(s.individuals) + "," + std::to_string(s.cycles) + "," +
             std::to_string(s.seed) + "," + (s.failed ? "failed" : "ok") + ",";
    if (s.failed) {
      std::string msg = s.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      table += msg;
      ctx.log << "wasp: subset " << s.index + 1 << " failed: " << s.error << "\n";
    } else {
      ctx.write(fs::path("subsets") / ("subset_" + label + ".csv"),
                draws_csv(s.samples, {{"command", "wasp"},
                                      {"subset", std::to_string(s.index + 1)},
                                      {"k_part", std::to_string(k_part)},
                                      {"subset_likelihood", to_string(likelihood)},
                                      {"individuals", std::to_string(s.individuals)},
                                      {"cycles", std::to_string(s.cycles)},
                                      {"subset_sizes", sizes}}));
    }
    table += "\n";
  }
  ctx.write("subsets.csv", table);

  const std::size_t failed = subs.failures();
  if (failed > 0 && !ctx.b("allow_partial")) {
    ctx.log << "wasp: " << failed << " of " << k_part << " subsets failed; rerun with --allow-partial to combine the rest\n";
    return kExitFailure;
  }
  const PosteriorSamples combined = combine_wasp(subs, ctx.u("draws_out"));
  ctx.write("draws.csv", draws_csv(combined, {{"command", "wasp"},
                                              {"k_part", std::to_string(k_part)},
                                              {"subset_likelihood", to_string(likelihood)},
                                              {"subsets_used", std::to_string(k_part - failed)},
                                              {"subset_sizes", sizes}}));
  ctx.write("summary.csv", summary_csv(summarize(combined, ctx.d("level"))));
  return kExitOk;
}

std::vector<CovariateGroup> default_groups(const SimReport& report) {
  CovariateGroup mean{"mean", {}};
  CovariateGroup precision{"precision", {}};
  for (const auto& p : report.parameters) (p.name.rfind("beta_", 0) == 0 ? mean : precision).parameters.push_back(p.name);
  std::vector<CovariateGroup> out;
  for (auto* g : {&mean, &precision})
    if (!g->parameters.empty()) out.push_back(*g);
  return out;
}

int cmd_replicate(const Context& ctx) {
  const Scenario scenario = scenario_from_int(static_cast<int>(ctx.u("scenario")));
  const std::string modes = ctx.s("modes");
  if (modes != "full" && modes != "fixed" && modes != "both") throw UsageError("modes must be full, fixed or both");
  HarnessConfig hc;
  hc.sim.cycles_per_individual = ctx.u("cycles");
  hc.hyper = hyper_from(ctx);
  hc.chain = chain_from(ctx);
  hc.level = ctx.d("level");
  hc.threads = hc.chain.threads;
  const std::size_t replicates = ctx.u("replicates");
  const std::uint64_t seed = ctx.u("seed");

  std::vector<SimReport> full, fixed;
  bool too_many_failures = false;
  for (const auto& nv : ctx.cfg.at("n")) {
    const std::size_t n = nv.get<std::size_t>();
    for (FitMode mode : {FitMode::Full, FitMode::FixedSkips}) {
      if ((mode == FitMode::Full && modes == "fixed") || (mode == FitMode::FixedSkips && modes == "full")) continue;
      ctx.log << "replicate: scenario " << static_cast<int>(scenario) << ", n = " << n << ", " << to_string(mode)
              << ", " << replicates << " replicates\n";
      SimReport r = replicate_harness(scenario, n, replicates, mode, seed, hc);
      if (r.failures * 10 > r.replicates) {
        too_many_failures = true;
        ctx.log << "replicate: " << r.failures << " of " << r.replicates << " replicates failed\n";
      }
      ctx.write(fs::path("records") / (std::string(to_string(mode)) + "_n" + std::to_string(n) + ".csv"),
                replicate_records_csv(r));
      (mode == FitMode::Full ? full : fixed).push_back(std::move(r));
    }
  }
  std::vector<SimReport> all = full;
  all.insert(all.end(), fixed.begin(), fixed.end());
  ctx.write("report.csv", report_rows_csv(all));
  ctx.write("bias_table.csv", bias_table_csv(full, fixed));
  ctx.write("error_table.csv", error_table_csv(full, fixed));
  if (!full.empty() && !fixed.empty()) {
    std::vector<std::pair<std::size_t, std::vector<AttenuationRow>>> rows;
    for (std::size_t k = 0; k < full.size(); ++k) {
      const auto groups = scenario == Scenario::Mixture ? mixture_groups() : default_groups(full[k]);
      rows.emplace_back(full[k].n, attenuation_report(full[k], fixed[k], groups));
    }
    ctx.write("attenuation.csv", attenuation_csv(rows));
  }
  return too_many_failures ? kExitFailure : kExitOk;
}

int cmd_diagnose(const Context& ctx) {
  const DrawsFile f = read_draws(ctx.s("draws_file"));
  const SummaryTable table = summarize(f.samples, ctx.d("level"));
  report_convergence(ctx, table);
  ctx.write("summary.csv", summary_csv(table));
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& log) {
  CLI::App app{"Skip-aware Bayesian model of self-tracked cycle lengths", "skiptrack"};
  app.require_subcommand(1);

  struct Parsed {
    std::string config;
    std::map<std::string, std::string> text;
    std::map<std::string, bool> flags;
  };
  std::map<std::string, Parsed> parsed;
  std::map<std::string, std::vector<CLI::Option*>> options;
  for (const auto& cmd : kCommands) {
    const char* what = cmd == "simulate"    ? "generate a synthetic dataset"
                       : cmd == "fit"       ? "fit the model to a dataset"
                       : cmd == "wasp"      ? "fit disjoint subsets and combine them"
                       : cmd == "replicate" ? "run a replicated simulation study"
                                            : "re-summarize a draws file";
    CLI::App* sub = app.add_subcommand(cmd, what);
    Parsed& p = parsed[cmd];
    sub->add_option("--config", p.config, "JSON config; command-line flags override it");
    for (const auto& s : specs_for(cmd)) {
      if (s.kind == Kind::Bool)
        options[cmd].push_back(sub->add_flag(flag_name(s.key), p.flags[s.key], s.help));
      else
        options[cmd].push_back(sub->add_option(flag_name(s.key), p.text[s.key], s.help));
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    log << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    log << "skiptrack: " << e.what() << "\n";
    if (app.get_subcommands().empty()) log << app.help();
    return kExitUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  const Parsed& p = parsed[cmd];
  std::map<std::string, std::string> given;
  const auto specs = specs_for(cmd);
  for (std::size_t k = 0; k < specs.size(); ++k) {
    if (options[cmd][k]->count() == 0) continue;
    const auto& s = specs[k];
    given[s.key] = s.kind == Kind::Bool ? (p.flags.at(s.key) ? "true" : "false") : p.text.at(s.key);
  }

  json cfg;
  try {
    cfg = resolve(cmd, p.config, given);
  } catch (const UsageError& e) {
    log << "skiptrack " << cmd << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    log << "skiptrack " << cmd << ": " << e.what() << "\n";
    return kExitUsage;
  }

  Context ctx{cfg, fs::path(cfg.at("out").get<std::string>()), log};
  try {
    ctx.write(kSnapshotName, cfg.dump(2) + "\n");
    if (cmd == "simulate") return cmd_simulate(ctx);
    if (cmd == "fit") return cmd_fit(ctx);
    if (cmd == "wasp") return cmd_wasp(ctx);
    if (cmd == "replicate") return cmd_replicate(ctx);
    return cmd_diagnose(ctx);
  } catch (const UsageError& e) {
    log << "skiptrack " << cmd << ": " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    log << "skiptrack " << cmd << ": " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidParameter ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    log << "skiptrack " << cmd << ": " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace skiptrack::cli
