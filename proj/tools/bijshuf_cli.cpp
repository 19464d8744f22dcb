// Command-line front end: deterministic shuffling, uniformity testing, and
// benchmarking. Exit codes: 0 success or statistical pass, 1 statistical
// fail, 2 usage or input error.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bijshuf/bijshuf.hpp"
#include "json.hpp"

namespace {

struct CommonFlags {
  std::uint64_t seed = 0;
  int rounds = 24;
  int workers = 0;
  bool entropy = false;
};

void add_common_flags(CLI::App* cmd, CommonFlags& c) {
  auto* seed_opt =
      cmd->add_option("--seed", c.seed, "Seed; identical seeds reproduce identical output (default 0)");
  cmd->add_option("--rounds", c.rounds, "Cipher rounds (default 24)");
  cmd->add_option("--workers", c.workers,
                  "Worker threads; 0 means one per hardware thread (default 0)");
  cmd->add_flag("--entropy", c.entropy, "Draw the seed from OS entropy instead")
      ->excludes(seed_opt);
}

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void resolve_seed(CommonFlags& c) {
  if (c.entropy) c.seed = entropy_seed();
}

bijshuf::ShuffleConfig to_shuffle_config(const CommonFlags& c,
                                         bijshuf::BijectionVariant variant) {
  bijshuf::ShuffleConfig cfg;
  cfg.seed = c.seed;
  cfg.variant = variant;
  cfg.num_rounds = c.rounds;
  cfg.workers = c.workers;
  return cfg;
}

int run_shuffle(const CommonFlags& common, bool have_indices, std::uint64_t m,
                const std::string& input_path) {
  const auto cfg =
      to_shuffle_config(common, bijshuf::BijectionVariant::VariablePhilox);
  if (have_indices) {
    const bijshuf::Permutation perm = bijshuf::shuffle_indices(m, cfg);
    std::string out;
    out.reserve(perm.size() * 8);
    char buf[24];
    for (std::uint64_t v : perm) {
      const auto res = std::to_chars(buf, buf + sizeof buf, v);
      out.append(buf, res.ptr);
      out.push_back('\n');
      if (out.size() > (1u << 20)) {
        std::cout << out;
        out.clear();
      }
    }
    std::cout << out;
    return 0;
  }

  std::vector<std::string> lines;
  if (input_path == "-") {
    for (std::string line; std::getline(std::cin, line);)
      lines.push_back(std::move(line));
  } else {
    std::ifstream file(input_path);
    if (!file) {
      std::cerr << "shuffle: cannot read " << input_path << "\n";
      return 2;
    }
    for (std::string line; std::getline(file, line);)
      lines.push_back(std::move(line));
  }
  for (const std::string& line : bijshuf::shuffle_values(lines, cfg))
    std::cout << line << '\n';
  return 0;
}

const char* kind_name(bijshuf::TestKind kind) {
  switch (kind) {
    case bijshuf::TestKind::ChiSquared:
      return "chi2";
    case bijshuf::TestKind::MmdHoeffding:
      return "mmd-hoeffding";
    case bijshuf::TestKind::MmdNormal:
      return "mmd-normal";
  }
  return "unknown";
}

int run_test(const CommonFlags& common, const std::string& kind,
             const std::string& gen, std::uint64_t n, bool n_given,
             std::uint64_t samples, double alpha, double lambda) {
  using bijshuf::TestKind;
  if (kind == "chi2") {
    if (n_given && n != 5) {
      std::cerr << "test: --kind chi2 is defined over permutations of 5 elements\n";
      return 2;
    }
    n = 5;
  }

  const TestKind tk = kind == "chi2"            ? TestKind::ChiSquared
                      : kind == "mmd-hoeffding" ? TestKind::MmdHoeffding
                                                : TestKind::MmdNormal;
  auto run_with = [&](auto&& sampler) {
    return tk == TestKind::ChiSquared
               ? bijshuf::chi_squared_test(sampler, samples, alpha)
               : bijshuf::mmd_test(sampler, static_cast<int>(n), samples,
                                   alpha, tk, lambda);
  };

  bijshuf::TestReport report;
  if (gen == "fisher-yates") {
    bijshuf::FisherYatesSampler sampler(n, common.seed);
    report = run_with(sampler);
  } else {
    const auto variant = gen == "lcg" ? bijshuf::BijectionVariant::Lcg
                                      : bijshuf::BijectionVariant::VariablePhilox;
    bijshuf::BijectiveShuffleSampler sampler{n, to_shuffle_config(common, variant)};
    report = run_with(sampler);
  }

  const nlohmann::json j = {
      {"test_kind", kind_name(report.test_kind)},
      {"statistic", report.statistic},
      {"threshold", report.threshold},
      {"alpha", report.alpha},
      {"sample_size", report.sample_size},
      {"pass", report.pass},
  };
  std::cout << j.dump(2) << "\n";
  return report.pass ? 0 : 1;
}

int run_bench(const CommonFlags& common, const std::vector<std::uint64_t>& sizes,
              const std::vector<std::string>& algos, int trials,
              const std::string& format, const std::string& output_path) {
  const auto cfg =
      to_shuffle_config(common, bijshuf::BijectionVariant::VariablePhilox);
  const auto records =
      bijshuf::run_suite(sizes, algos, trials, common.seed, cfg);

  std::ofstream file;
  if (!output_path.empty()) {
    file.open(output_path);
    if (!file) {
      std::cerr << "bench: cannot write " << output_path << "\n";
      return 2;
    }
  }
  std::ostream& os = output_path.empty() ? std::cout : file;
  if (format == "json")
    bijshuf::write_json(os, records);
  else
    bijshuf::write_csv(os, records);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic pseudo-random shuffling, uniformity tests, and benchmarks"};
  app.require_subcommand(1);

  // shuffle
  auto* shuffle_cmd = app.add_subcommand(
      "shuffle", "Print a shuffled index range or shuffle input lines");
  CommonFlags shuffle_common;
  std::uint64_t indices_m = 0;
  std::string input_path;
  auto* indices_opt = shuffle_cmd->add_option(
      "--indices", indices_m, "Shuffle 0..m-1 and print one index per line");
  auto* input_opt = shuffle_cmd->add_option(
      "input", input_path, "File whose lines are shuffled (- for stdin)");
  indices_opt->excludes(input_opt);
  input_opt->excludes(indices_opt);
  add_common_flags(shuffle_cmd, shuffle_common);

  // test
  auto* test_cmd =
      app.add_subcommand("test", "Run a uniformity test and print a JSON report");
  CommonFlags test_common;
  std::string test_kind;
  std::string test_gen = "philox";
  std::uint64_t test_n = 5;
  std::uint64_t test_samples = 100000;
  double test_alpha = 0.05;
  double test_lambda = 5.0;
  test_cmd
      ->add_option("--kind", test_kind,
                   "Test to run: chi2, mmd-hoeffding, or mmd-normal")
      ->required()
      ->check(CLI::IsMember({"chi2", "mmd-hoeffding", "mmd-normal"}));
  test_cmd
      ->add_option("--gen", test_gen,
                   "Permutation source: philox, lcg, or fisher-yates (default philox)")
      ->check(CLI::IsMember({"philox", "lcg", "fisher-yates"}));
  auto* n_opt = test_cmd->add_option(
      "--n", test_n, "Permutation length for MMD tests (default 5; chi2 is fixed at 5)");
  test_cmd->add_option("--samples", test_samples,
                       "Number of sampled permutations (default 100000)");
  test_cmd->add_option("--alpha", test_alpha, "Significance level (default 0.05)");
  test_cmd->add_option("--lambda", test_lambda,
                       "Kernel decay parameter (default 5)");
  add_common_flags(test_cmd, test_common);

  // bench
  auto* bench_cmd = app.add_subcommand(
      "bench", "Time shuffle algorithms and print CSV or JSON records");
  CommonFlags bench_common;
  std::vector<std::uint64_t> bench_sizes = bijshuf::default_bench_sizes();
  std::vector<std::string> bench_algos = bijshuf::bench_algorithm_names();
  int bench_trials = 5;
  std::string bench_format = "csv";
  std::string bench_output;
  bench_cmd
      ->add_option("--sizes", bench_sizes,
                   "Comma-separated input sizes (default 2^w+1 for w in 8..26)")
      ->delimiter(',');
  bench_cmd
      ->add_option("--algos", bench_algos,
                   "Comma-separated algorithms: bijective, gather, sort_shuffle, fisher_yates")
      ->delimiter(',');
  bench_cmd->add_option("--trials", bench_trials,
                        "Timed repetitions per measurement (default 5)");
  bench_cmd->add_option("--format", bench_format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  bench_cmd->add_option("--output", bench_output,
                        "Write records to a file instead of stdout");
  add_common_flags(bench_cmd, bench_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (shuffle_cmd->parsed()) {
      resolve_seed(shuffle_common);
      const bool have_indices = indices_opt->count() > 0;
      if (!have_indices && input_opt->count() == 0) {
        std::cerr << "shuffle: pass --indices m or an input file\n";
        return 2;
      }
      return run_shuffle(shuffle_common, have_indices, indices_m, input_path);
    }
    if (test_cmd->parsed()) {
      resolve_seed(test_common);
      return run_test(test_common, test_kind, test_gen, test_n,
                      n_opt->count() > 0, test_samples, test_alpha, test_lambda);
    }
    resolve_seed(bench_common);
    return run_bench(bench_common, bench_sizes, bench_algos, bench_trials,
                     bench_format, bench_output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
