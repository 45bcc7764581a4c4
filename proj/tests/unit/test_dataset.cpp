#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "fixtures.hpp"
#include "skiptrack/dataset.hpp"
#include "skiptrack/error.hpp"

using namespace skiptrack;
using skiptrack::testing::person;
using skiptrack::testing::plain;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no skiptrack::Error thrown";
  return ErrorCode::Io;
}

}  // namespace

TEST(Dataset, AcceptsWellFormedInput) {
  const auto data = validate_dataset({plain("a", {28, 30, 27}), plain("b", {31, 29, 33})});
  EXPECT_EQ(data.num_individuals(), 2u);
  EXPECT_EQ(data.num_cycles(), 6u);
  EXPECT_EQ(data.mean_dim(), 1u);
  EXPECT_EQ(data.regularity_dim(), 1u);
  EXPECT_EQ(data.first_cycle(1), 3u);
  EXPECT_EQ(data.individual_of(4), 1u);
  EXPECT_DOUBLE_EQ(data.log_length(0), std::log(28.0));
  EXPECT_EQ(data.x_intercept_column(), 0u);
}

TEST(Dataset, RejectsZeroLength) {
  EXPECT_EQ(code_of([] { validate_dataset({plain("a", {28, 0})}); }), ErrorCode::NonPositiveCycle);
}

TEST(Dataset, RejectsShortCovariateRow) {
  auto bad = person("b", {28}, {{1.0, 0.5}}, {1.0});
  auto good = person("a", {28}, {{1.0, 0.5, 0.2}}, {1.0});
  EXPECT_EQ(code_of([&] { validate_dataset({good, bad}); }), ErrorCode::DimensionMismatch);
}

TEST(Dataset, RejectsEmptyIndividualAndNonFinite) {
  EXPECT_EQ(code_of([] { validate_dataset({plain("a", {28}), plain("b", {})}); }), ErrorCode::EmptyIndividual);
  auto nan = person("a", {28}, {{1.0, std::nan("")}}, {1.0});
  EXPECT_EQ(code_of([&] { validate_dataset({nan}); }), ErrorCode::NonFiniteCovariate);
}

TEST(Dataset, GramMatrixSumsOuterProducts) {
  const auto data = validate_dataset({person("a", {28, 30}, {{1.0, 2.0}, {1.0, -1.0}}, {1.0})});
  const auto g = data.gram(0);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_DOUBLE_EQ(g[0], 2.0);
  EXPECT_DOUBLE_EQ(g[1], 1.0);
  EXPECT_DOUBLE_EQ(g[2], 1.0);
  EXPECT_DOUBLE_EQ(g[3], 5.0);
}

TEST(Dataset, SubsetKeepsAscendingOrder) {
  const auto data = validate_dataset({plain("a", {28}), plain("b", {29, 30}), plain("c", {31})});
  const std::vector<std::size_t> pick{2, 0};
  const auto sub = subset_individuals(data, pick);
  ASSERT_EQ(sub.num_individuals(), 2u);
  EXPECT_EQ(sub.individual(0).id, "a");
  EXPECT_EQ(sub.individual(1).id, "c");
}

TEST(Dataset, RangeFilterCountsDrops) {
  auto r = filter_cycle_range({plain("a", {28, 95, 9}), plain("b", {5, 120})}, 10, 90);
  EXPECT_EQ(r.dropped_cycles, 4u);
  EXPECT_EQ(r.dropped_individuals, 1u);
  ASSERT_EQ(r.records.size(), 1u);
  EXPECT_EQ(r.records[0].cycles.size(), 1u);
  const auto kept = filter_cycle_range({plain("a", {10, 90})}, 10, 90);
  EXPECT_EQ(kept.dropped_cycles, 0u);
}
