#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "fixtures.hpp"
#include "skiptrack/error.hpp"
#include "skiptrack/io.hpp"
#include "skiptrack/sampler.hpp"

using namespace skiptrack;
using skiptrack::testing::person;

namespace fs = std::filesystem;

namespace {

ErrorCode parse_code(const std::string& cycles, const std::string& baseline, IngestOptions opt = {}) {
  try {
    parse_dataset(cycles, baseline, opt);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "parsed without error";
  return ErrorCode::Io;
}

const std::string kBaseline = "individual_id,z_1,z_2\nA,1,0.5\nB,1,-0.25\n";

}  // namespace

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 28.0, 1e21}) EXPECT_EQ(std::stod(format_double(v)), v);
  EXPECT_EQ(format_double(28.0), "28");
}

TEST(Io, ParsesTwoFileLayout) {
  const std::string cycles =
      "individual_id,cycle_index,cycle_length,x_1,x_2\r\n"
      "B,2,31,1,0.2\r\nA,1,28,1,0\r\nB,1,29,1,0.1\r\n";
  const auto recs = parse_dataset(cycles, kBaseline);
  ASSERT_EQ(recs.size(), 2u);
  EXPECT_EQ(recs[0].id, "A");
  EXPECT_EQ(recs[1].cycles.size(), 2u);
  EXPECT_EQ(recs[1].cycles[0].length, 29.0);
  EXPECT_EQ(recs[1].cycles[1].x, (std::vector<double>{1, 0.2}));
  EXPECT_EQ(recs[1].z, (std::vector<double>{1, -0.25}));
}

TEST(Io, RejectsMalformedInput) {
  const std::string head = "individual_id,cycle_index,cycle_length,x_1\n";
  EXPECT_EQ(parse_code(head + "A,1,28,\nB,1,30,1\n", kBaseline), ErrorCode::Parse);   // missing cell
  EXPECT_EQ(parse_code(head + "A,1,28.5,1\nB,1,30,1\n", kBaseline), ErrorCode::Parse);  // fractional day
  EXPECT_EQ(parse_code(head + "A,1,28,1\nA,1,30,1\n", kBaseline), ErrorCode::Parse);    // repeated index
  EXPECT_EQ(parse_code(head + "C,1,28,1\n", kBaseline), ErrorCode::Parse);              // unknown id
  EXPECT_EQ(parse_code("id,cycle_index,cycle_length,x_1\n", kBaseline), ErrorCode::Parse);
  EXPECT_EQ(parse_code(head, "individual_id,z_2\n"), ErrorCode::Parse);
  EXPECT_NO_THROW(parse_dataset(head + "A,1,28.5,1\nB,1,30,1\n", kBaseline, IngestOptions{true}));
}

TEST(Io, DatasetRoundTrip) {
  const auto data = validate_dataset({person("p1", {28, 57}, {{1, 0.25}, {1, -1.5}}, {1, 0.1}),
                                      person("p2", {31}, {{1, 0.0}}, {1, -0.3})});
  const auto back = validate_dataset(parse_dataset(cycles_csv(data), baseline_csv(data)));
  EXPECT_EQ(cycles_csv(back), cycles_csv(data));
  EXPECT_EQ(baseline_csv(back), baseline_csv(data));
}

TEST(Io, DrawsRoundTripWithManifest) {
  const auto data = validate_dataset({person("a", {28, 30, 29}, {{1}, {1}, {1}}, {1}),
                                      person("b", {31, 56, 30}, {{1}, {1}, {1}}, {1})});
  ChainConfig cfg;
  cfg.n_chains = 2;
  cfg.n_iter = 30;
  cfg.burn_in = 10;
  cfg.thin = 2;
  cfg.seed = 12345678901234567ULL;
  const auto s = run_chains(data, Hyperparams{}, cfg);
  const std::string text = draws_csv(s, {{"mode", "full"}});
  EXPECT_EQ(text.rfind("# skiptrack-draws seed=12345678901234567 chains=2 draws=10:10 dim=", 0), 0u);
  const auto back = parse_draws(text);
  EXPECT_EQ(back.samples.names, s.names);
  EXPECT_EQ(back.samples.seed, cfg.seed);
  EXPECT_EQ(back.samples.thin, 2u);
  for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(back.samples.chains[c].values, s.chains[c].values);
  bool has_mode = false;
  for (const auto& [k, v] : back.manifest) has_mode |= (k == "mode" && v == "full");
  EXPECT_TRUE(has_mode);
  EXPECT_EQ(draws_csv(back.samples, {{"mode", "full"}}), text);
  EXPECT_THROW(parse_draws("chain,iteration,beta_1\n1,1,0.5\n"), Error);
}

TEST(Io, HistogramUsesIntegerDayBins) {
  const auto data = validate_dataset({person("a", {28, 28, 30}, {{1}, {1}, {1}}, {1})});
  EXPECT_EQ(histogram_csv(data), "day,count\n28,2\n29,0\n30,1\n");
}

TEST(Io, AtomicWriteReplacesWholeFile) {
  const fs::path dir = fs::temp_directory_path() / "skiptrack_io_test";
  fs::remove_all(dir);
  const fs::path f = dir / "nested" / "out.csv";
  atomic_write(f, "first\n");
  atomic_write(f, "second\n");
  EXPECT_EQ(read_text(f), "second\n");
  EXPECT_FALSE(fs::exists(f.string() + ".partial"));
  EXPECT_THROW(read_text(dir / "missing.csv"), Error);
  fs::remove_all(dir);
}
