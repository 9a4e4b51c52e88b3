#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "narrow/candidates.hpp"
#include "narrow/error.hpp"
#include "narrow/formula.hpp"
#include "narrow/synthesis.hpp"

namespace narrow::bench {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Random AST of at most `depth` connective levels over `vars`.
inline Formula random_formula(std::mt19937_64& rng, const std::vector<VariableId>& vars, int depth) {
  auto roll = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };
  auto leaf = [&] { return Formula::variable(vars[static_cast<std::size_t>(roll(static_cast<int>(vars.size())))]); };
  if (depth <= 0) return leaf();
  int r = roll(10);
  switch (r) {
    case 0: return leaf();
    case 1: return roll(8) == 0 ? lit(roll(2) == 1) : leaf();
    case 2:
    case 3: return lnot(random_formula(rng, vars, depth - 1));
    case 4:
    case 5: return land(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1));
    case 6:
    case 7: return lor(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1));
    case 8: return implies(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1));
    default: return iff(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1));
  }
}

inline std::vector<VariableId> numbered_vars(std::size_t n) {
  std::vector<VariableId> v;
  for (std::size_t i = 0; i < n; ++i) v.emplace_back("x" + std::to_string(i));
  return v;
}

// N pairwise non-equivalent random candidates named c1..cN, by rejection
// sampling on full truth tables over `vars` variables.
inline CandidateSet random_family(std::mt19937_64& rng, std::size_t n, std::size_t vars, int depth = 3,
                                  std::size_t max_attempts = 100000) {
  if (vars == 0 || vars > 20) throw Error("random families need between 1 and 20 variables");
  const auto pool = numbered_vars(vars);
  const Vocabulary vocab(pool);
  const std::uint64_t rows = std::uint64_t{1} << vars;
  std::vector<std::vector<bool>> tables;
  std::vector<Candidate> out;
  for (std::size_t attempt = 0; out.size() < n; ++attempt) {
    if (attempt >= max_attempts) throw Error("could not sample enough non-equivalent candidates");
    auto f = random_formula(rng, pool, depth);
    CompiledFormula cf(f, vocab);
    std::vector<bool> table(rows);
    for (std::uint64_t r = 0; r < rows; ++r) table[r] = cf(r);
    if (std::find(tables.begin(), tables.end(), table) != tables.end()) continue;
    tables.push_back(std::move(table));
    out.push_back({"c" + std::to_string(out.size() + 1), std::move(f)});
  }
  return CandidateSet(std::move(out));
}

struct BenchConfig {
  std::size_t min_n = 4;
  std::size_t max_n = 16;
  std::size_t step = 4;
  std::size_t vars = 4;
  std::size_t families = 20;
  std::uint64_t seed = 1;
  int depth = 3;
  std::chrono::milliseconds timeout{60000};
  std::size_t jobs = 1;
};

struct BenchRow {
  std::size_t family = 0;
  std::size_t n = 0;
  std::size_t vars = 0;  // vocabulary actually used by the family
  std::string algorithm;
  std::size_t suite_size = 0;
  std::size_t solver_calls = 0;
  double millis = 0.0;
  bool timed_out = false;
};

inline std::vector<std::size_t> n_values(const BenchConfig& c) {
  std::vector<std::size_t> ns;
  for (std::size_t n = c.min_n; n <= c.max_n; n += std::max<std::size_t>(c.step, 1)) ns.push_back(n);
  return ns;
}

// Seeded per (N, family) so results do not depend on worker scheduling.
inline CandidateSet family_for(const BenchConfig& c, std::size_t n, std::size_t family) {
  std::mt19937_64 rng(splitmix64(c.seed ^ splitmix64(n * 1000003ULL + family)));
  return random_family(rng, n, c.vars, c.depth);
}

inline std::vector<BenchRow> run_family(const BenchConfig& c, std::size_t n, std::size_t family) {
  auto candidates = family_for(c, n, family);
  std::vector<BenchRow> rows;
  auto run = [&](const std::string& algorithm, auto&& body) {
    BenchRow row{family, n, candidates.vocabulary().size(), algorithm, 0, 0, 0.0, false};
    auto start = Clock::now();
    SolveOptions opts;
    opts.deadline = start + c.timeout;
    try {
      auto [size, calls] = body(opts);
      row.suite_size = size;
      row.solver_calls = calls;
    } catch (const Timeout&) {
      row.timed_out = true;
    }
    row.millis = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    rows.push_back(row);
  };
  run("greedy", [&](const SolveOptions& o) {
    auto r = synth_greedy(candidates, o);
    return std::pair{r.suite.size(), r.solver_calls};
  });
  run("optimal", [&](const SolveOptions& o) {
    auto r = synth_optimal(candidates, o);
    return std::pair{r.suite.size(), r.sat_calls};
  });
  return rows;
}

inline std::vector<BenchRow> run_bench(const BenchConfig& c) {
  std::vector<std::pair<std::size_t, std::size_t>> jobs;
  for (auto n : n_values(c))
    for (std::size_t f = 0; f < c.families; ++f) jobs.emplace_back(n, f);
  std::vector<std::vector<BenchRow>> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j; (j = next++) < jobs.size();) results[j] = run_family(c, jobs[j].first, jobs[j].second);
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < std::max<std::size_t>(c.jobs, 1); ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::vector<BenchRow> rows;
  for (auto& r : results) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

inline void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "family,n,vars,algorithm,suite_size,solver_calls,millis,timed_out\n";
  for (const auto& r : rows) {
    out << r.family << ',' << r.n << ',' << r.vars << ',' << r.algorithm << ',';
    if (!r.timed_out) out << r.suite_size;
    out << ',';
    if (!r.timed_out) out << r.solver_calls;
    out << ',' << std::fixed << std::setprecision(3) << r.millis << std::defaultfloat << ','
        << (r.timed_out ? 1 : 0) << '\n';
  }
}

struct Summary {
  std::size_t runs = 0;
  std::size_t completed = 0;
  double mean_size = 0.0;    // over completed runs
  double mean_millis = 0.0;  // over all runs; a timed-out run counts its elapsed time
};

// Keyed by (N, algorithm).
inline std::map<std::pair<std::size_t, std::string>, Summary> summarize(const std::vector<BenchRow>& rows) {
  std::map<std::pair<std::size_t, std::string>, Summary> out;
  for (const auto& r : rows) {
    auto& s = out[{r.n, r.algorithm}];
    ++s.runs;
    s.mean_millis += r.millis;
    if (!r.timed_out) {
      ++s.completed;
      s.mean_size += static_cast<double>(r.suite_size);
    }
  }
  for (auto& [key, s] : out) {
    if (s.completed) s.mean_size /= static_cast<double>(s.completed);
    if (s.runs) s.mean_millis /= static_cast<double>(s.runs);
  }
  return out;
}

// gnuplot script charting mean time and mean suite size against N.
inline void write_plot_script(std::ostream& out, const std::string& csv_path) {
  out << "# usage: gnuplot -p <this script>\n"
      << "set datafile separator ','\n"
      << "set key left top\n"
      << "set multiplot layout 1,2\n"
      << "set xlabel 'N'\n"
      << "set ylabel 'mean millis'\n"
      << "plot '" << csv_path << "' using 2:($8==0 && strcol(4) eq 'greedy' ? $7 : 1/0) smooth unique title 'greedy', \\\n"
      << "     '" << csv_path << "' using 2:($8==0 && strcol(4) eq 'optimal' ? $7 : 1/0) smooth unique title 'optimal'\n"
      << "set ylabel 'mean |T|'\n"
      << "plot '" << csv_path << "' using 2:($8==0 && strcol(4) eq 'greedy' ? $5 : 1/0) smooth unique title 'greedy', \\\n"
      << "     '" << csv_path << "' using 2:($8==0 && strcol(4) eq 'optimal' ? $5 : 1/0) smooth unique title 'optimal'\n"
      << "unset multiplot\n";
}

}  // namespace narrow::bench
