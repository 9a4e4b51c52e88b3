#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "narrow/bench.hpp"
#include "narrow/oracle.hpp"
#include "narrow/synthesis.hpp"

using namespace narrow;
using narrow::testing::toy_candidates;

TEST(Enumerate, Orders) {
  auto ab = make_vocabulary({VariableId("a"), VariableId("b")});
  auto rows = oracle::enumerate(ab);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].to_string(), "{}");
  EXPECT_EQ(rows[1].to_string(), "{b}");
  EXPECT_EQ(rows[2].to_string(), "{a}");
  EXPECT_EQ(rows[3].to_string(), "{a, b}");

  auto none = oracle::enumerate(make_vocabulary({}));
  ASSERT_EQ(none.size(), 1u);
  EXPECT_EQ(none[0].cardinality(), 0u);

  auto x = oracle::enumerate(make_vocabulary({VariableId("x")}));
  ASSERT_EQ(x.size(), 2u);
  EXPECT_EQ(x[1].to_string(), "{x}");
}

TEST(Enumerate, Cap) {
  EXPECT_THROW(oracle::enumerate(make_vocabulary(bench::numbered_vars(5)), 4), CapExceeded);
}

TEST(SignatureMatrix, Toy) {
  oracle::SignatureMatrix m(toy_candidates());
  EXPECT_EQ(m.row_count(), 4u);
  EXPECT_EQ(m.column_count(), 4u);
  EXPECT_EQ(m.row_mask(0), 0b1010u);  // phi2, phi4
  EXPECT_EQ(m.row_mask(1), 0b1001u);  // phi1, phi4
  EXPECT_EQ(m.row_mask(2), 0b0111u);  // phi1, phi2, phi3
  EXPECT_EQ(m.row_mask(3), 0b1101u);  // phi1, phi3, phi4
  EXPECT_TRUE(m.columns_distinct());
}

TEST(SignatureMatrix, DetectsEquivalence) {
  oracle::SignatureMatrix m(CandidateSet({{"p", parse("a -> b")}, {"q", parse("!a | b")}, {"r", parse("a")}}));
  EXPECT_TRUE(m.equivalent(0, 1));
  EXPECT_FALSE(m.columns_distinct());
}

TEST(MinSuite, Toy) {
  auto f = toy_candidates();
  auto m = oracle::min_suite_bruteforce(f);
  EXPECT_EQ(m.size, 2u);
  EXPECT_TRUE(verify_narrowing(f, m.witness));
}

TEST(MinSuite, TwoCandidates) {
  EXPECT_EQ(oracle::min_suite_bruteforce(CandidateSet({{"p", var("a")}, {"q", lnot(var("a"))}})).size, 1u);
}

TEST(MinSuite, Equivalent) {
  EXPECT_THROW(oracle::min_suite_bruteforce(CandidateSet({{"p", var("a")}, {"q", parse("a & a")}})), NoNarrowingSet);
}

TEST(MinSuite, NeedsMoreThanLogN) {
  // Each instance satisfies at most one candidate, so it splits off at most one.
  CandidateSet f({{"p", parse("a & !b & !c")}, {"q", parse("!a & b & !c")}, {"r", parse("!a & !b & c")},
                  {"s", parse("!a & !b & !c")}});
  auto m = oracle::min_suite_bruteforce(f);
  EXPECT_EQ(m.size, 3u);
  EXPECT_EQ(synth_optimal(f).suite.size(), 3u);
}

TEST(CrossCheck, OptimalMatchesBruteForce) {
  std::mt19937_64 rng(31337);
  for (int round = 0; round < 200; ++round) {
    auto f = bench::random_family(rng, 6, 4);
    auto m = oracle::min_suite_bruteforce(f);
    auto o = synth_optimal(f);
    ASSERT_EQ(o.suite.size(), m.size) << "round " << round;
    EXPECT_TRUE(verify_narrowing(f, m.witness));
    EXPECT_GE(m.size, ceil_log2(f.size()));
    EXPECT_LE(m.size, f.size() - 1);
  }
}

TEST(CrossCheck, SymmetryBreakingKeepsTheOptimum) {
  std::mt19937_64 rng(404);
  for (int round = 0; round < 40; ++round) {
    auto f = bench::random_family(rng, 2 + rng() % 4, 3);
    auto m = oracle::min_suite_bruteforce(f);
    auto plain = build_encoding(f, false);
    EXPECT_TRUE(plain.symmetry.empty());
    EXPECT_EQ(plain.slots - pmaxsolve(plain.problem()).satisfied_soft, m.size);
  }
}
