#include "skiptrack/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "skiptrack/error.hpp"
#include "skiptrack/random.hpp"

namespace skiptrack {

namespace fs = std::filesystem;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void atomic_write(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  fs::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "failed writing " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::Io, "cannot move " + tmp.string() + " to " + path.string());
  }
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  std::istringstream in(text);
  while (std::getline(in, cur)) {
    if (!cur.empty() && cur.back() == '\r') cur.pop_back();
    lines.push_back(cur);
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

[[noreturn]] void parse_fail(const std::string& what, std::size_t line, const std::string& detail) {
  throw Error(ErrorCode::Parse, what + " line " + std::to_string(line) + ": " + detail);
}

double parse_number(const std::string& field, const std::string& what, std::size_t line) {
  if (field.empty()) parse_fail(what, line, "missing value");
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    parse_fail(what, line, "'" + field + "' is not a number");
  return v;
}

long long parse_integer(const std::string& field, const std::string& what, std::size_t line) {
  if (field.empty()) parse_fail(what, line, "missing value");
  long long v = 0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size())
    parse_fail(what, line, "'" + field + "' is not an integer");
  return v;
}

std::size_t check_header(const std::string& line, const std::vector<std::string>& fixed, const std::string& prefix,
                         const std::string& what) {
  const auto fields = split_fields(line);
  if (fields.size() < fixed.size() + 1) parse_fail(what, 1, "expected at least one " + prefix + "column");
  for (std::size_t k = 0; k < fixed.size(); ++k)
    if (fields[k] != fixed[k]) parse_fail(what, 1, "expected column '" + fixed[k] + "', found '" + fields[k] + "'");
  for (std::size_t k = fixed.size(); k < fields.size(); ++k) {
    const std::string want = prefix + std::to_string(k - fixed.size() + 1);
    if (fields[k] != want) parse_fail(what, 1, "expected column '" + want + "', found '" + fields[k] + "'");
  }
  return fields.size() - fixed.size();
}

void append_row(std::string& out, const std::vector<std::string>& fields) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) out += ',';
    out += fields[k];
  }
  out += '\n';
}

std::string manifest_value(const Manifest& m, const std::string& key) {
  for (const auto& [k, v] : m)
    if (k == key) return v;
  throw Error(ErrorCode::Parse, "draws manifest lacks '" + key + "'");
}

}  // namespace

std::vector<IndividualRecord> parse_dataset(const std::string& cycles_text, const std::string& baseline_text,
                                            const IngestOptions& options) {
  const auto base_lines = split_lines(baseline_text);
  if (base_lines.empty()) throw Error(ErrorCode::Parse, "baseline file is empty");
  const std::size_t q = check_header(base_lines[0], {"individual_id"}, "z_", "baseline");

  std::vector<IndividualRecord> records;
  std::map<std::string, std::size_t> index;
  for (std::size_t l = 1; l < base_lines.size(); ++l) {
    const auto f = split_fields(base_lines[l]);
    if (f.size() != q + 1) parse_fail("baseline", l + 1, "expected " + std::to_string(q + 1) + " fields");
    if (f[0].empty()) parse_fail("baseline", l + 1, "empty individual_id");
    if (!index.emplace(f[0], records.size()).second) parse_fail("baseline", l + 1, "duplicate id '" + f[0] + "'");
    IndividualRecord r;
    r.id = f[0];
    for (std::size_t k = 1; k <= q; ++k) r.z.push_back(parse_number(f[k], "baseline", l + 1));
    records.push_back(std::move(r));
  }

  const auto cyc_lines = split_lines(cycles_text);
  if (cyc_lines.empty()) throw Error(ErrorCode::Parse, "cycles file is empty");
  const std::size_t p = check_header(cyc_lines[0], {"individual_id", "cycle_index", "cycle_length"}, "x_", "cycles");
  std::vector<std::vector<std::pair<long long, Cycle>>> cycles(records.size());
  for (std::size_t l = 1; l < cyc_lines.size(); ++l) {
    const auto f = split_fields(cyc_lines[l]);
    if (f.size() != p + 3) parse_fail("cycles", l + 1, "expected " + std::to_string(p + 3) + " fields");
    const auto it = index.find(f[0]);
    if (it == index.end()) parse_fail("cycles", l + 1, "id '" + f[0] + "' missing from baseline file");
    const long long j = parse_integer(f[1], "cycles", l + 1);
    if (j < 1) parse_fail("cycles", l + 1, "cycle_index must be >= 1");
    Cycle c;
    c.length = parse_number(f[2], "cycles", l + 1);
    if (!options.allow_fractional && c.length != std::floor(c.length))
      parse_fail("cycles", l + 1, "cycle_length '" + f[2] + "' is not a whole number of days");
    for (std::size_t k = 0; k < p; ++k) c.x.push_back(parse_number(f[3 + k], "cycles", l + 1));
    cycles[it->second].emplace_back(j, std::move(c));
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto& v = cycles[i];
    std::stable_sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 1; k < v.size(); ++k)
      if (v[k].first == v[k - 1].first)
        throw Error(ErrorCode::Parse, "individual '" + records[i].id + "' repeats cycle_index " +
                                          std::to_string(v[k].first));
    for (auto& [j, c] : v) records[i].cycles.push_back(std::move(c));
  }
  return records;
}

std::vector<IndividualRecord> read_dataset(const fs::path& cycles, const fs::path& baseline,
                                           const IngestOptions& options) {
  return parse_dataset(read_text(cycles), read_text(baseline), options);
}

std::string cycles_csv(const CycleDataset& data) {
  std::string out = "individual_id,cycle_index,cycle_length";
  for (std::size_t k = 1; k <= data.mean_dim(); ++k) out += ",x_" + std::to_string(k);
  out += '\n';
  for (std::size_t i = 0; i < data.num_individuals(); ++i) {
    const auto& r = data.individual(i);
    for (std::size_t j = 0; j < r.cycles.size(); ++j) {
      std::vector<std::string> f{r.id, std::to_string(j + 1), format_double(r.cycles[j].length)};
      for (double v : r.cycles[j].x) f.push_back(format_double(v));
      append_row(out, f);
    }
  }
  return out;
}

std::string baseline_csv(const CycleDataset& data) {
  std::string out = "individual_id";
  for (std::size_t k = 1; k <= data.regularity_dim(); ++k) out += ",z_" + std::to_string(k);
  out += '\n';
  for (std::size_t i = 0; i < data.num_individuals(); ++i) {
    const auto& r = data.individual(i);
    std::vector<std::string> f{r.id};
    for (double v : r.z) f.push_back(format_double(v));
    append_row(out, f);
  }
  return out;
}

std::string truth_csv(const SimTruth& t) {
  std::string out = "parameter,index,value\n";
  auto vec = [&](const char* name, const auto& values) {
    for (std::size_t k = 0; k < values.size(); ++k)
      append_row(out, {name, std::to_string(k + 1), format_double(static_cast<double>(values[k]))});
  };
  vec("beta", t.beta);
  vec("gamma", t.gamma);
  vec("pi", t.pi);
  append_row(out, {"rho", "1", format_double(t.rho)});
  if (!t.gamma.empty()) append_row(out, {"phi", "1", format_double(t.phi)});
  vec("b", t.b);
  vec("tau", t.tau);
  vec("c", t.c);
  return out;
}

std::string draws_csv(const PosteriorSamples& s, const Manifest& extra) {
  std::string per_chain;
  for (std::size_t k = 0; k < s.chains.size(); ++k) {
    if (k) per_chain += ':';
    per_chain += std::to_string(s.chains[k].num_draws);
  }
  Manifest m{{"seed", std::to_string(s.seed)},
             {"chains", std::to_string(s.num_chains())},
             {"draws", per_chain},
             {"dim", std::to_string(s.dim())},
             {"n_iter", std::to_string(s.n_iter)},
             {"burn_in", std::to_string(s.burn_in)},
             {"thin", std::to_string(s.thin)},
             {"generator", std::string(kGeneratorName)}};
  m.insert(m.end(), extra.begin(), extra.end());
  std::string out = "# skiptrack-draws";
  for (const auto& [k, v] : m) out += " " + k + "=" + v;
  out += "\nchain,iteration";
  for (const auto& n : s.names) out += "," + n;
  out += '\n';
  const std::size_t d = s.dim();
  for (std::size_t c = 0; c < s.chains.size(); ++c) {
    const auto& ch = s.chains[c];
    for (std::size_t t = 0; t < ch.num_draws; ++t) {
      out += std::to_string(c + 1);
      out += ',';
      out += std::to_string(s.burn_in + t * s.thin + 1);
      for (std::size_t k = 0; k < d; ++k) {
        out += ',';
        out += format_double(ch.values[t * d + k]);
      }
      out += '\n';
    }
  }
  return out;
}

DrawsFile parse_draws(const std::string& text) {
  const auto lines = split_lines(text);
  const std::string tag = "# skiptrack-draws";
  if (lines.size() < 2 || lines[0].rfind(tag, 0) != 0) throw Error(ErrorCode::Parse, "missing draws manifest line");
  DrawsFile out;
  std::istringstream manifest(lines[0].substr(tag.size()));
  std::string token;
  while (manifest >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::Parse, "bad manifest entry '" + token + "'");
    out.manifest.emplace_back(token.substr(0, eq), token.substr(eq + 1));
  }
  const auto header = split_fields(lines[1]);
  if (header.size() < 3 || header[0] != "chain" || header[1] != "iteration")
    throw Error(ErrorCode::Parse, "draws header must start with chain,iteration");
  PosteriorSamples& s = out.samples;
  s.names.assign(header.begin() + 2, header.end());
  s.seed = std::stoull(manifest_value(out.manifest, "seed"));
  s.n_iter = std::stoull(manifest_value(out.manifest, "n_iter"));
  s.burn_in = std::stoull(manifest_value(out.manifest, "burn_in"));
  s.thin = std::stoull(manifest_value(out.manifest, "thin"));
  const std::size_t chains = std::stoull(manifest_value(out.manifest, "chains"));
  if (std::stoull(manifest_value(out.manifest, "dim")) != s.names.size())
    throw Error(ErrorCode::Parse, "manifest dim does not match the header");
  s.chains.resize(chains);
  const std::size_t d = s.names.size();
  for (std::size_t l = 2; l < lines.size(); ++l) {
    const auto f = split_fields(lines[l]);
    if (f.size() != d + 2) parse_fail("draws", l + 1, "expected " + std::to_string(d + 2) + " fields");
    const long long c = parse_integer(f[0], "draws", l + 1);
    if (c < 1 || static_cast<std::size_t>(c) > chains) parse_fail("draws", l + 1, "chain out of range");
    auto& ch = s.chains[static_cast<std::size_t>(c - 1)];
    for (std::size_t k = 0; k < d; ++k) ch.values.push_back(parse_number(f[k + 2], "draws", l + 1));
    ++ch.num_draws;
  }
  return out;
}

DrawsFile read_draws(const fs::path& path) { return parse_draws(read_text(path)); }

std::string summary_csv(const SummaryTable& table) {
  std::string out = "parameter,mean,sd,level,lo,hi,rhat,ess\n";
  for (const auto& r : table)
    append_row(out, {r.name, format_double(r.mean), format_double(r.sd), format_double(r.level), format_double(r.lo),
                     format_double(r.hi), format_double(r.rhat), format_double(r.ess)});
  return out;
}

std::string chains_csv(const PosteriorSamples& s) {
  std::string out = "chain,draws,accept_gamma,accept_phi\n";
  for (std::size_t c = 0; c < s.chains.size(); ++c)
    append_row(out, {std::to_string(c + 1), std::to_string(s.chains[c].num_draws),
                     format_double(s.chains[c].accept_gamma), format_double(s.chains[c].accept_phi)});
  return out;
}

std::string skips_csv(const CycleDataset& data, const SkipSummary& skips) {
  if (skips.map.size() != data.num_cycles()) throw Error(ErrorCode::LengthMismatch, "one skip summary per cycle");
  std::string out = "individual_id,cycle_index,cycle_length,map_c,mean_c,var_c\n";
  for (std::size_t i = 0; i < data.num_individuals(); ++i)
    for (std::size_t j = 0; j < data.cycle_count(i); ++j) {
      const std::size_t k = data.cycle_index(i, j);
      append_row(out, {data.individual(i).id, std::to_string(j + 1), format_double(data.length(k)),
                       std::to_string(skips.map[k]), format_double(skips.mean[k]), format_double(skips.variance[k])});
    }
  return out;
}

std::string histogram_csv(const CycleDataset& data) {
  std::string out = "day,count\n";
  if (data.num_cycles() == 0) return out;
  std::map<long long, std::size_t> bins;
  for (std::size_t k = 0; k < data.num_cycles(); ++k) ++bins[static_cast<long long>(std::floor(data.length(k)))];
  const long long lo = bins.begin()->first;
  const long long hi = bins.rbegin()->first;
  for (long long d = lo; d <= hi; ++d) {
    const auto it = bins.find(d);
    append_row(out, {std::to_string(d), std::to_string(it == bins.end() ? 0 : it->second)});
  }
  return out;
}

std::string report_rows_csv(const std::vector<SimReport>& reports) {
  std::string out = "parameter,truth,n,mode,bias,width,coverage,rejection_rate,replicates,failures\n";
  for (const auto& r : reports)
    for (const auto& p : r.parameters)
      append_row(out, {p.name, format_double(p.truth), std::to_string(r.n), to_string(r.mode), format_double(p.bias),
                       format_double(p.width), format_double(p.coverage), format_double(p.rejection_rate),
                       std::to_string(r.replicates), std::to_string(r.failures)});
  return out;
}

namespace {

const SimReport* find_n(const std::vector<SimReport>& reports, std::size_t n) {
  for (const auto& r : reports)
    if (r.n == n) return &r;
  return nullptr;
}

std::vector<std::size_t> all_n(const std::vector<SimReport>& a, const std::vector<SimReport>& b) {
  std::vector<std::size_t> ns;
  for (const auto* v : {&a, &b})
    for (const auto& r : *v)
      if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
  std::sort(ns.begin(), ns.end());
  return ns;
}

}  // namespace

std::string bias_table_csv(const std::vector<SimReport>& full, const std::vector<SimReport>& fixed) {
  std::string out = "parameter,n,full_bias,full_width,full_coverage,fixed_bias,fixed_width,fixed_coverage\n";
  const auto ns = all_n(full, fixed);
  std::vector<std::string> names;
  for (const auto* v : {&full, &fixed})
    for (const auto& r : *v)
      for (const auto& p : r.parameters)
        if (std::find(names.begin(), names.end(), p.name) == names.end()) names.push_back(p.name);
  auto cells = [](const SimReport* r, const std::string& name) -> std::vector<std::string> {
    if (r)
      for (const auto& p : r->parameters)
        if (p.name == name) return {format_double(p.bias), format_double(p.width), format_double(p.coverage)};
    return {"", "", ""};
  };
  for (const auto& name : names)
    for (std::size_t n : ns) {
      std::vector<std::string> f{name, std::to_string(n)};
      for (auto& c : cells(find_n(full, n), name)) f.push_back(c);
      for (auto& c : cells(find_n(fixed, n), name)) f.push_back(c);
      append_row(out, f);
    }
  return out;
}

std::string error_table_csv(const std::vector<SimReport>& full, const std::vector<SimReport>& fixed) {
  std::string out = "block,n,full_type1,full_type2,fixed_type1,fixed_type2\n";
  const auto ns = all_n(full, fixed);
  const std::vector<std::pair<std::string, std::string>> blocks{{"mean", "beta_"}, {"precision", "gamma_"}};
  for (const auto& [block, prefix] : blocks)
    for (std::size_t n : ns) {
      std::vector<std::string> f{block, std::to_string(n)};
      for (const SimReport* r : {find_n(full, n), find_n(fixed, n)}) {
        f.push_back(r ? format_double(r->type_one(prefix)) : "");
        f.push_back(r ? format_double(r->type_two(prefix)) : "");
      }
      append_row(out, f);
    }
  return out;
}

std::string attenuation_csv(const std::vector<std::pair<std::size_t, std::vector<AttenuationRow>>>& rows) {
  std::string out = "group,n,mean_ratio,ratio_of_means,pairs,excluded\n";
  for (const auto& [n, list] : rows)
    for (const auto& r : list)
      append_row(out, {r.group, std::to_string(n), format_double(r.mean_ratio), format_double(r.ratio_of_means),
                       std::to_string(r.pairs), std::to_string(r.excluded)});
  return out;
}

std::string replicate_records_csv(const SimReport& report) {
  std::string out = "replicate,n,mode,failed,skip_accuracy,comparator_accuracy";
  for (const auto& p : report.parameters) out += "," + p.name + "," + p.name + "_lo," + p.name + "_hi";
  out += '\n';
  for (const auto& rec : report.records) {
    std::vector<std::string> f{std::to_string(rec.replicate), std::to_string(report.n), to_string(report.mode),
                               rec.failed ? "1" : "0", format_double(rec.skip_accuracy),
                               format_double(rec.comparator_accuracy)};
    for (std::size_t j = 0; j < report.parameters.size(); ++j) {
      if (rec.failed) {
        f.insert(f.end(), {"", "", ""});
      } else {
        f.push_back(format_double(rec.estimate[j]));
        f.push_back(format_double(rec.lo[j]));
        f.push_back(format_double(rec.hi[j]));
      }
    }
    append_row(out, f);
  }
  return out;
}

}  // namespace skiptrack
