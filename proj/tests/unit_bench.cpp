#include "bijshuf/bench.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "json.hpp"

using namespace bijshuf;

namespace {

void expect_sane(const BenchRecord& r, const std::string& name,
                 std::uint64_t size, int trials) {
  EXPECT_EQ(r.algorithm, name);
  EXPECT_EQ(r.input_size, size);
  EXPECT_EQ(r.trials, trials);
  EXPECT_GT(r.runtime_s, 0.0);
  EXPECT_TRUE(std::isfinite(r.runtime_s));
  EXPECT_NEAR(r.throughput_mitems_s,
              static_cast<double>(size) / r.runtime_s / 1e6,
              1e-9 * r.throughput_mitems_s);
}

}  // namespace

TEST(BenchGather, ProducesSaneRecord) {
  expect_sane(bench_gather(1 << 12, 3, 42), "gather", 1 << 12, 3);
}

TEST(BenchBijective, ProducesSaneRecord) {
  expect_sane(bench_bijective((1 << 12) + 1, 3, 42), "bijective", (1 << 12) + 1, 3);
}

TEST(BenchBijective, HonorsShuffleConfig) {
  ShuffleConfig cfg;
  cfg.workers = 1;
  cfg.num_rounds = 12;
  expect_sane(bench_bijective(5000, 2, 7, cfg), "bijective", 5000, 2);
}

TEST(BenchSortShuffle, ProducesSaneRecord) {
  expect_sane(bench_sort_shuffle(5000, 2, 7), "sort_shuffle", 5000, 2);
}

TEST(BenchFisherYates, ProducesSaneRecord) {
  expect_sane(bench_fisher_yates(5000, 2, 7), "fisher_yates", 5000, 2);
}

TEST(BenchArguments, Rejected) {
  EXPECT_THROW(bench_gather(0, 1, 0), std::invalid_argument);
  EXPECT_THROW(bench_bijective(0, 1, 0), std::invalid_argument);
  EXPECT_THROW(bench_sort_shuffle(0, 1, 0), std::invalid_argument);
  EXPECT_THROW(bench_fisher_yates(0, 1, 0), std::invalid_argument);
  EXPECT_THROW(bench_gather(100, 0, 0), std::invalid_argument);
  EXPECT_THROW(bench_bijective(100, 0, 0), std::invalid_argument);
  EXPECT_THROW(bench_sort_shuffle(100, 0, 0), std::invalid_argument);
  EXPECT_THROW(bench_fisher_yates(100, 0, 0), std::invalid_argument);
}

TEST(RunSuite, CartesianSizeMajor) {
  const auto records =
      run_suite({257, 1025}, {"fisher_yates", "gather"}, 1, 3);
  ASSERT_EQ(records.size(), 4u);
  EXPECT_EQ(records[0].algorithm, "fisher_yates");
  EXPECT_EQ(records[0].input_size, 257u);
  EXPECT_EQ(records[1].algorithm, "gather");
  EXPECT_EQ(records[1].input_size, 257u);
  EXPECT_EQ(records[2].algorithm, "fisher_yates");
  EXPECT_EQ(records[2].input_size, 1025u);
  EXPECT_EQ(records[3].algorithm, "gather");
  EXPECT_EQ(records[3].input_size, 1025u);
}

TEST(RunSuite, UnknownAlgorithmRejected) {
  EXPECT_THROW(run_suite({100}, {"quantum"}, 1, 0), std::invalid_argument);
}

TEST(AlgorithmNames, CanonicalOrder) {
  const auto& names = bench_algorithm_names();
  ASSERT_EQ(names.size(), 4u);
  EXPECT_EQ(names[0], "bijective");
  EXPECT_EQ(names[1], "gather");
  EXPECT_EQ(names[2], "sort_shuffle");
  EXPECT_EQ(names[3], "fisher_yates");
}

TEST(DefaultSizes, OnePastEachPowerOfTwo) {
  const auto sizes = default_bench_sizes();
  ASSERT_EQ(sizes.size(), 19u);
  EXPECT_EQ(sizes.front(), (1u << 8) + 1);
  EXPECT_EQ(sizes.back(), (std::uint64_t{1} << 26) + 1);
  for (std::size_t i = 0; i < sizes.size(); ++i)
    ASSERT_EQ(sizes[i], (std::uint64_t{1} << (8 + i)) + 1);
}

TEST(CsvRoundTrip, ExactDoubles) {
  std::vector<BenchRecord> records;
  records.push_back({"bijective", 12345, 5, 1.0 / 3.0, 12345.0 / (1.0 / 3.0) / 1e6});
  records.push_back({"gather", 1, 1, 1e-9, 1e-3});
  records.push_back({"sort_shuffle", 1ull << 40, 2, 123.456789012345, 0.1});
  std::stringstream ss;
  write_csv(ss, records);
  const auto parsed = parse_csv(ss);
  ASSERT_EQ(parsed.size(), records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    EXPECT_EQ(parsed[i].algorithm, records[i].algorithm);
    EXPECT_EQ(parsed[i].input_size, records[i].input_size);
    EXPECT_EQ(parsed[i].trials, records[i].trials);
    EXPECT_EQ(parsed[i].runtime_s, records[i].runtime_s);
    EXPECT_EQ(parsed[i].throughput_mitems_s, records[i].throughput_mitems_s);
  }
}

TEST(CsvFormat, HeaderFirstLine) {
  std::stringstream ss;
  write_csv(ss, {});
  std::string line;
  ASSERT_TRUE(std::getline(ss, line));
  EXPECT_EQ(line, "algorithm,input_size,trials,runtime_s,throughput_mitems_s");
}

TEST(CsvParse, RejectsWrongHeader) {
  std::stringstream ss("algo,n\nx,1\n");
  EXPECT_THROW(parse_csv(ss), std::runtime_error);
}

TEST(CsvWrite, ReportsStreamFailure) {
  std::ostringstream os;
  os.setstate(std::ios::failbit);
  EXPECT_THROW(write_csv(os, {}), std::runtime_error);
}

TEST(JsonOutput, ParsesWithFullPrecision) {
  std::vector<BenchRecord> records;
  records.push_back({"bijective", 1025, 5, 0.125, 8.2});
  records.push_back({"gather", 65537, 3, 1.0 / 7.0, 0.4587});
  std::stringstream ss;
  write_json(ss, records);
  const auto parsed = nlohmann::json::parse(ss.str());
  ASSERT_TRUE(parsed.is_array());
  ASSERT_EQ(parsed.size(), 2u);
  EXPECT_EQ(parsed[0]["algorithm"], "bijective");
  EXPECT_EQ(parsed[0]["input_size"], 1025);
  EXPECT_EQ(parsed[0]["trials"], 5);
  EXPECT_EQ(parsed[0]["runtime_s"].get<double>(), 0.125);
  EXPECT_EQ(parsed[1]["algorithm"], "gather");
  EXPECT_EQ(parsed[1]["runtime_s"].get<double>(), 1.0 / 7.0);
  EXPECT_EQ(parsed[1]["throughput_mitems_s"].get<double>(), 0.4587);
}

TEST(JsonOutput, EmptyIsValidArray) {
  std::stringstream ss;
  write_json(ss, {});
  const auto parsed = nlohmann::json::parse(ss.str());
  EXPECT_TRUE(parsed.is_array());
  EXPECT_TRUE(parsed.empty());
}
