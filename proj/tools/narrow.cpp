// narrow: synthesize instance suites that tell candidate formulas apart.
//
//   narrow check PROBLEM
//   narrow synth PROBLEM [--algorithm greedy|optimal] [--seed S] [--verify] [--timeout SECS] [--out FILE]
//   narrow classify PROBLEM SUITE CLASSIFICATION
//   narrow bench [--min-n A --max-n B --step S --vars V --families K --seed S] [--out FILE] [--plot FILE]
//
// Exit codes: 0 success, 1 usage or input error, 2 equivalent candidates, 3 timeout.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "narrow/bench.hpp"
#include "narrow/classify.hpp"
#include "narrow/io.hpp"
#include "narrow/sat.hpp"
#include "narrow/synthesis.hpp"

namespace {

using namespace narrow;

enum Exit { kOk = 0, kInputError = 1, kEquivalent = 2, kTimedOut = 3 };

template <class T, class Read>
T load(const std::string& path, Read read) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  try {
    return read(in);
  } catch (const ParseError& e) {
    throw Error(path + ":" + e.what());
  } catch (const FormatError& e) {
    throw Error(path + ": " + e.what());
  }
}

CandidateSet load_problem(const std::string& path) {
  return load<CandidateSet>(path, [](std::istream& in) { return io::read_problem(in); });
}

// Writes to `path`, or stdout when it is empty or "-".
template <class Body>
void emit(const std::string& path, Body body) {
  if (path.empty() || path == "-") {
    body(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  body(out);
  if (!out) throw Error("error writing '" + path + "'");
}

SolveOptions with_timeout(double seconds) {
  SolveOptions o;
  if (seconds > 0)
    o.deadline = Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds));
  return o;
}

int cmd_check(const std::string& problem) {
  auto f = load_problem(problem);
  auto pairs = check_nonequivalent(f);
  if (pairs.empty()) {
    std::cout << "OK: " << f.size() << " pairwise non-equivalent candidates over " << f.vocabulary().size()
              << " variables\n";
    return kOk;
  }
  for (auto [i, j] : pairs) std::cout << "equivalent: " << f[i].name << ' ' << f[j].name << '\n';
  return kEquivalent;
}

struct SynthArgs {
  std::string problem;
  std::string algorithm = "greedy";
  std::uint64_t seed = 0;
  bool verify = false;
  double timeout = 60;
  std::string out;
  std::string classification_template;
};

int cmd_synth(const SynthArgs& a) {
  auto f = load_problem(a.problem);
  const auto opts = with_timeout(a.timeout);
  const auto start = Clock::now();
  std::optional<TestSuite> suite;
  std::size_t calls = 0;
  if (a.algorithm == "greedy") {
    std::unique_ptr<ChoicePolicy> policy;
    if (a.seed == 0)
      policy = std::make_unique<DefaultPolicy>();
    else
      policy = std::make_unique<SeededPolicy>(a.seed);
    auto r = synth_greedy(f, *policy, opts);
    suite.emplace(std::move(r.suite));
    calls = r.solver_calls;
  } else {
    auto r = synth_optimal(f, opts);
    suite.emplace(std::move(r.suite));
    calls = r.sat_calls;
  }
  const double millis = std::chrono::duration<double, std::milli>(Clock::now() - start).count();

  if (a.verify) {
    if (!verify_narrowing(f, *suite)) throw InvalidSuite("verification failed: suite does not narrow the candidates");
    if (suite->size() < ceil_log2(f.size()) || suite->size() > f.size() - 1)
      throw InvalidSuite("verification failed: |T| = " + std::to_string(suite->size()) + " outside [" +
                         std::to_string(ceil_log2(f.size())) + ", " + std::to_string(f.size() - 1) + "]");
  }

  io::SuiteMeta meta;
  meta.algorithm = a.algorithm;
  meta.seed = a.seed;
  emit(a.out, [&](std::ostream& out) { io::write_suite(out, f, *suite, meta); });
  if (!a.classification_template.empty())
    emit(a.classification_template, [&](std::ostream& out) { io::write_classification_template(out, *suite); });

  // The report goes to stderr when the suite itself is on stdout.
  auto& report = a.out.empty() || a.out == "-" ? std::cerr : std::cout;
  report << "|T| = " << suite->size() << "  solver calls = " << calls << "  time = " << std::fixed
         << std::setprecision(1) << millis << " ms" << (a.verify ? "  verified" : "") << '\n';
  return kOk;
}

int cmd_classify(const std::string& problem, const std::string& suite_path, const std::string& verdicts) {
  auto f = load_problem(problem);
  auto s = load<io::SuiteFile>(suite_path, [&](std::istream& in) { return io::read_suite(in, f); });
  auto c = load<Classification>(verdicts, [](std::istream& in) { return io::read_classification(in); });
  auto w = winner(f, s.suite, c);
  std::cout << (w ? *w : std::string("no candidate matches")) << '\n';
  return kOk;
}

struct BenchArgs {
  bench::BenchConfig config;
  double timeout = 60;
  std::string out;
  std::string plot;
};

int cmd_bench(BenchArgs a) {
  if (a.config.min_n < 2) throw Error("--min-n must be at least 2");
  if (a.config.max_n < a.config.min_n) throw Error("--max-n must not be below --min-n");
  if (a.config.step == 0) throw Error("--step must be positive");
  a.config.timeout = std::chrono::milliseconds(static_cast<long long>(a.timeout * 1000));
  auto rows = bench::run_bench(a.config);
  emit(a.out, [&](std::ostream& out) { bench::write_csv(out, rows); });
  if (!a.plot.empty())
    emit(a.plot, [&](std::ostream& out) { bench::write_plot_script(out, a.out.empty() ? "bench.csv" : a.out); });
  for (const auto& [key, s] : bench::summarize(rows))
    std::cerr << "N=" << key.first << ' ' << key.second << ": completed " << s.completed << '/' << s.runs
              << "  mean |T| " << std::fixed << std::setprecision(2) << s.mean_size << "  mean ms "
              << s.mean_millis << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesize instance suites that narrow candidate formulas down to one."};
  app.set_version_flag("--version", std::string("narrow ") + NARROW_VERSION);
  app.require_subcommand(1);

  std::string problem, suite_path, verdicts;

  auto* check = app.add_subcommand("check", "Report pairs of equivalent candidates");
  check->add_option("problem", problem, "Problem file")->required();

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Synthesize a narrowing suite");
  synth->add_option("problem", synth_args.problem, "Problem file")->required();
  synth->add_option("-a,--algorithm", synth_args.algorithm, "greedy or optimal")
      ->check(CLI::IsMember({"greedy", "optimal"}))
      ->capture_default_str();
  synth->add_option("-s,--seed", synth_args.seed, "Greedy choice seed; 0 keeps the deterministic default")
      ->capture_default_str();
  synth->add_flag("--verify", synth_args.verify, "Re-check the suite before writing it");
  synth->add_option("-t,--timeout", synth_args.timeout, "Seconds; 0 disables")->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  synth->add_option("-o,--out", synth_args.out, "Suite file (default stdout)");
  synth->add_option("--template", synth_args.classification_template, "Also write a classification template");

  auto* classify = app.add_subcommand("classify", "Resolve the winner from a classified suite");
  classify->add_option("problem", problem, "Problem file")->required();
  classify->add_option("suite", suite_path, "Suite file")->required();
  classify->add_option("classification", verdicts, "Classification file")->required();

  BenchArgs bench_args;
  auto& bc = bench_args.config;
  auto* benchmark = app.add_subcommand("bench", "Time both algorithms on random candidate families");
  benchmark->add_option("--min-n", bc.min_n, "Smallest N")->capture_default_str();
  benchmark->add_option("--max-n", bc.max_n, "Largest N")->capture_default_str();
  benchmark->add_option("--step", bc.step, "N increment")->capture_default_str();
  benchmark->add_option("--vars", bc.vars, "Variables per family")->check(CLI::Range(1, 20))->capture_default_str();
  benchmark->add_option("--families", bc.families, "Families per N")->capture_default_str();
  benchmark->add_option("--seed", bc.seed, "Generator seed")->capture_default_str();
  benchmark->add_option("--depth", bc.depth, "Maximum formula depth")->check(CLI::Range(0, 12))->capture_default_str();
  benchmark->add_option("--jobs", bc.jobs, "Worker threads")->check(CLI::Range(1, 256))->capture_default_str();
  benchmark->add_option("-t,--timeout", bench_args.timeout, "Seconds per synthesis run")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  benchmark->add_option("-o,--out", bench_args.out, "CSV file (default stdout)");
  benchmark->add_option("--plot", bench_args.plot, "Also write a gnuplot script for the CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (*check) return cmd_check(problem);
    if (*synth) return cmd_synth(synth_args);
    if (*classify) return cmd_classify(problem, suite_path, verdicts);
    if (*benchmark) return cmd_bench(bench_args);
  } catch (const EquivalentCandidates& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEquivalent;
  } catch (const Timeout& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kTimedOut;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
