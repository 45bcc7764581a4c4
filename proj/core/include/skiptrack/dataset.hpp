#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace skiptrack {

struct Cycle {
  double length = 0.0;     // observed cycle length in days, > 0
  std::vector<double> x;   // mean covariates, length p
};

struct IndividualRecord {
  std::string id;
  std::vector<Cycle> cycles;
  std::vector<double> z;   // baseline regularity covariates, length q
};

/// Validated cohort of self-tracked cycles.
///
/// Besides the records, holds flattened per-cycle arrays (log length, X row)
/// indexed by a global cycle index k in [0, N), individuals' cycles being
/// contiguous in input order, plus per-individual Gram matrices
/// sum_j x_ij x_ij^T used by the coefficient update.
class CycleDataset {
 public:
  CycleDataset() = default;

  std::size_t num_individuals() const noexcept { return records_.size(); }
  std::size_t num_cycles() const noexcept { return log_length_.size(); }
  std::size_t mean_dim() const noexcept { return p_; }
  std::size_t regularity_dim() const noexcept { return q_; }

  std::span<const IndividualRecord> individuals() const noexcept { return records_; }
  const IndividualRecord& individual(std::size_t i) const { return records_.at(i); }

  std::size_t first_cycle(std::size_t i) const noexcept { return offsets_[i]; }
  std::size_t cycle_count(std::size_t i) const noexcept { return offsets_[i + 1] - offsets_[i]; }
  std::size_t cycle_index(std::size_t i, std::size_t j) const { return offsets_[i] + j; }
  std::size_t individual_of(std::size_t k) const noexcept { return owner_[k]; }

  double length(std::size_t k) const noexcept { return length_[k]; }
  double log_length(std::size_t k) const noexcept { return log_length_[k]; }
  std::span<const double> x_row(std::size_t k) const noexcept {
    return {x_.data() + k * p_, p_};
  }
  std::span<const double> z_row(std::size_t i) const noexcept {
    return {z_.data() + i * q_, q_};
  }
  /// Row-major p x p matrix sum_j x_ij x_ij^T for individual i.
  std::span<const double> gram(std::size_t i) const noexcept {
    return {gram_.data() + i * p_ * p_, p_ * p_};
  }

  /// Index of a column of X that is identically 1, or npos.
  std::size_t x_intercept_column() const noexcept { return x_intercept_; }
  std::size_t z_intercept_column() const noexcept { return z_intercept_; }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  friend CycleDataset validate_dataset(std::vector<IndividualRecord> records);

  std::vector<IndividualRecord> records_;
  std::size_t p_ = 0;
  std::size_t q_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> owner_;
  std::vector<double> length_;
  std::vector<double> log_length_;
  std::vector<double> x_;
  std::vector<double> z_;
  std::vector<double> gram_;
  std::size_t x_intercept_ = npos;
  std::size_t z_intercept_ = npos;
};

/// Checks every record and builds the dataset. Dimensions p and q are taken
/// from the first individual. Throws Error with EmptyIndividual,
/// NonPositiveCycle, DimensionMismatch or NonFiniteCovariate.
CycleDataset validate_dataset(std::vector<IndividualRecord> records);

/// Dataset restricted to the given individuals, kept in ascending index order.
CycleDataset subset_individuals(const CycleDataset& data, std::span<const std::size_t> indices);

/// Dataset in which every individual appears `copies` times in a row; copy
/// m > 0 of individual "id" is named "id#m". Throws InvalidParameter for 0.
CycleDataset replicate_individuals(const CycleDataset& data, std::size_t copies);

struct RangeFilterResult {
  std::vector<IndividualRecord> records;
  std::size_t dropped_cycles = 0;
  std::size_t dropped_individuals = 0;
};

/// Removes cycles outside [min_days, max_days]; individuals left without any
/// cycle are removed too.
RangeFilterResult filter_cycle_range(std::vector<IndividualRecord> records, double min_days,
                                     double max_days);

}  // namespace skiptrack
