#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

#include "narrow/bench.hpp"
#include "narrow/oracle.hpp"

using namespace narrow;

TEST(RandomFamily, PairwiseNonEquivalent) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 20; ++round) {
    auto f = bench::random_family(rng, 2 + rng() % 10, 4);
    EXPECT_TRUE(oracle::SignatureMatrix(f).columns_distinct());
    EXPECT_LE(f.vocabulary().size(), 4u);
  }
}

TEST(RandomFamily, Reproducible) {
  bench::BenchConfig c;
  for (std::size_t fam = 0; fam < 5; ++fam) {
    auto a = bench::family_for(c, 8, fam), b = bench::family_for(c, 8, fam);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].formula, b[i].formula);
  }
}

TEST(RandomFamily, TooFewFunctions) {
  std::mt19937_64 rng(1);
  EXPECT_THROW(bench::random_family(rng, 5, 1, 3, 2000), Error);
}

TEST(Bench, RowsAndTrends) {
  bench::BenchConfig c;
  c.min_n = 4;
  c.max_n = 16;
  c.step = 4;
  c.vars = 4;
  c.families = 12;
  c.jobs = 2;
  auto rows = bench::run_bench(c);
  ASSERT_EQ(rows.size(), 4u * 12u * 2u);
  std::map<std::pair<std::size_t, std::size_t>, std::map<std::string, bench::BenchRow>> pairs;
  for (const auto& r : rows) pairs[{r.n, r.family}][r.algorithm] = r;
  for (auto& [key, algs] : pairs) {
    const auto& g = algs["greedy"];
    const auto& o = algs["optimal"];
    if (!g.timed_out && !o.timed_out) EXPECT_LE(o.suite_size, g.suite_size);
  }
  auto s = bench::summarize(rows);
  for (std::string alg : {"greedy", "optimal"})
    for (std::size_t n = 8; n <= 16; n += 4) {
      auto now = s[std::pair{n, alg}].mean_size, before = s[std::pair{n - 4, alg}].mean_size;
      EXPECT_GE(now, before) << alg << " at N = " << n;
    }
}

TEST(Bench, TimedOutRowsAreKept) {
  bench::BenchConfig c;
  c.min_n = c.max_n = 12;
  c.families = 2;
  c.timeout = std::chrono::milliseconds(0);
  auto rows = bench::run_bench(c);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) EXPECT_TRUE(r.timed_out);
  std::ostringstream out;
  bench::write_csv(out, rows);
  EXPECT_NE(out.str().find(",12,4,optimal,,,"), std::string::npos);
}
