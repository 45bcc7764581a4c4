#include "skiptrack/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "skiptrack/error.hpp"

namespace skiptrack {

namespace {

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

std::string where(const IndividualRecord& r, std::size_t j) {
  return "individual '" + r.id + "' cycle " + std::to_string(j);
}

}  // namespace

CycleDataset validate_dataset(std::vector<IndividualRecord> records) {
  CycleDataset d;
  if (!records.empty()) {
    if (records.front().cycles.empty())
      throw Error(ErrorCode::EmptyIndividual, "individual '" + records.front().id + "' has no cycles");
    d.p_ = records.front().cycles.front().x.size();
    d.q_ = records.front().z.size();
  }
  const std::size_t p = d.p_;
  const std::size_t q = d.q_;

  std::size_t total = 0;
  for (const auto& r : records) {
    if (r.cycles.empty())
      throw Error(ErrorCode::EmptyIndividual, "individual '" + r.id + "' has no cycles");
    if (r.z.size() != q)
      throw Error(ErrorCode::DimensionMismatch, "individual '" + r.id + "' has " +
                                                    std::to_string(r.z.size()) +
                                                    " regularity covariates, expected " +
                                                    std::to_string(q));
    if (!all_finite(r.z))
      throw Error(ErrorCode::NonFiniteCovariate, "individual '" + r.id + "' regularity covariates");
    for (std::size_t j = 0; j < r.cycles.size(); ++j) {
      const Cycle& c = r.cycles[j];
      if (!std::isfinite(c.length) || !(c.length > 0.0))
        throw Error(ErrorCode::NonPositiveCycle, where(r, j) + " has length " + std::to_string(c.length));
      if (c.x.size() != p)
        throw Error(ErrorCode::DimensionMismatch, where(r, j) + " has " + std::to_string(c.x.size()) +
                                                      " mean covariates, expected " + std::to_string(p));
      if (!all_finite(c.x)) throw Error(ErrorCode::NonFiniteCovariate, where(r, j) + " mean covariates");
    }
    total += r.cycles.size();
  }

  d.offsets_.reserve(records.size() + 1);
  d.owner_.reserve(total);
  d.length_.reserve(total);
  d.log_length_.reserve(total);
  d.x_.reserve(total * p);
  d.z_.reserve(records.size() * q);
  d.gram_.assign(records.size() * p * p, 0.0);

  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    double* g = d.gram_.data() + i * p * p;
    for (const Cycle& c : r.cycles) {
      d.owner_.push_back(i);
      d.length_.push_back(c.length);
      d.log_length_.push_back(std::log(c.length));
      d.x_.insert(d.x_.end(), c.x.begin(), c.x.end());
      for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < p; ++b) g[a * p + b] += c.x[a] * c.x[b];
    }
    d.offsets_.push_back(d.log_length_.size());
    d.z_.insert(d.z_.end(), r.z.begin(), r.z.end());
  }

  auto find_intercept = [](const std::vector<double>& m, std::size_t rows, std::size_t cols) {
    for (std::size_t col = 0; col < cols; ++col) {
      bool ones = rows > 0;
      for (std::size_t row = 0; row < rows && ones; ++row) ones = m[row * cols + col] == 1.0;
      if (ones) return col;
    }
    return CycleDataset::npos;
  };
  d.x_intercept_ = find_intercept(d.x_, total, p);
  d.z_intercept_ = find_intercept(d.z_, records.size(), q);

  d.records_ = std::move(records);
  return d;
}

CycleDataset subset_individuals(const CycleDataset& data, std::span<const std::size_t> indices) {
  std::vector<std::size_t> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<IndividualRecord> records;
  records.reserve(sorted.size());
  for (std::size_t i : sorted) records.push_back(data.individual(i));
  return validate_dataset(std::move(records));
}

CycleDataset replicate_individuals(const CycleDataset& data, std::size_t copies) {
  if (copies == 0) throw Error(ErrorCode::InvalidParameter, "copies must be >= 1");
  std::vector<IndividualRecord> records;
  records.reserve(data.num_individuals() * copies);
  for (const auto& r : data.individuals())
    for (std::size_t m = 0; m < copies; ++m) {
      records.push_back(r);
      if (m) records.back().id += "#" + std::to_string(m);
    }
  return validate_dataset(std::move(records));
}

RangeFilterResult filter_cycle_range(std::vector<IndividualRecord> records, double min_days,
                                     double max_days) {
  RangeFilterResult out;
  out.records.reserve(records.size());
  for (auto& r : records) {
    std::vector<Cycle> kept;
    kept.reserve(r.cycles.size());
    for (auto& c : r.cycles) {
      if (c.length >= min_days && c.length <= max_days)
        kept.push_back(std::move(c));
      else
        ++out.dropped_cycles;
    }
    if (kept.empty()) {
      ++out.dropped_individuals;
      continue;
    }
    r.cycles = std::move(kept);
    out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace skiptrack
