#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "narrow/bench.hpp"
#include "narrow/synthesis.hpp"

using namespace narrow;
using narrow::testing::key_policy_candidates;
using narrow::testing::toy_candidates;

namespace {

Instance inst(const CandidateSet& f, std::initializer_list<std::string_view> true_vars) {
  return Instance(f.vocabulary_ptr(), true_vars);
}

std::set<std::string> names_true(const Instance& i) {
  std::set<std::string> out;
  for (const auto& v : i.true_vars()) out.insert(v.name());
  return out;
}

bool is_ancestor(const std::vector<GreedyStep>& trace, std::size_t anc, std::size_t s) {
  for (auto p = trace[s].parent; p; p = trace[*p].parent)
    if (*p == anc) return true;
  return false;
}

}  // namespace

TEST(Signature, ToyTable) {
  auto f = toy_candidates();
  std::vector<Instance> rows{inst(f, {}), inst(f, {"b"}), inst(f, {"a"}), inst(f, {"a", "b"})};
  EXPECT_EQ(signature_of(f[0].formula, rows), (Signature{false, true, true, true}));
  EXPECT_EQ(signature_of(f[1].formula, rows), (Signature{true, false, true, false}));
  EXPECT_EQ(signature_of(f[2].formula, rows), (Signature{false, false, true, true}));
  EXPECT_EQ(signature_of(f[3].formula, rows), (Signature{true, true, false, true}));
}

TEST(Verify, ToySuites) {
  auto f = toy_candidates();
  std::vector<Instance> good{inst(f, {}), inst(f, {"b"})};
  std::vector<Instance> bad{inst(f, {}), inst(f, {"a", "b"})};
  EXPECT_TRUE(verify_narrowing(f, good));
  EXPECT_FALSE(verify_narrowing(f, bad));  // phi1 and phi4 agree on both
  EXPECT_FALSE(verify_narrowing(f, std::vector<Instance>{}));
}

TEST(TestSuiteOrder, CanonicalAndDeduplicated) {
  auto f = toy_candidates();
  TestSuite s(f, {inst(f, {"a", "b"}), inst(f, {"b"}), inst(f, {}), inst(f, {"b"}), inst(f, {"a"})});
  ASSERT_EQ(s.size(), 4u);
  EXPECT_EQ(s[0].to_string(), "{}");
  EXPECT_EQ(s[1].to_string(), "{a}");
  EXPECT_EQ(s[2].to_string(), "{b}");
  EXPECT_EQ(s[3].to_string(), "{a, b}");
}

TEST(Greedy, ReplaysScriptedTrace) {
  auto f = toy_candidates();
  ScriptedPolicy policy({inst(f, {})}, {{0, 2}, {1, 3}});
  auto r = synth_greedy(f, policy);
  EXPECT_EQ(r.solver_calls, 2u);
  ASSERT_EQ(r.generated.size(), 2u);
  EXPECT_TRUE(names_true(r.generated[0]).empty());
  EXPECT_EQ(names_true(r.generated[1]), std::set<std::string>{"b"});
  ASSERT_EQ(r.trace.size(), 3u);
  EXPECT_EQ(r.trace[0].positive, (CandidateSubset{1, 3}));
  EXPECT_EQ(r.trace[0].negative, (CandidateSubset{0, 2}));
  EXPECT_EQ(r.trace[1].subset, (CandidateSubset{0, 2}));
  EXPECT_FALSE(r.trace[1].reused);
  EXPECT_EQ(r.trace[2].subset, (CandidateSubset{1, 3}));
  EXPECT_TRUE(r.trace[2].reused);
  EXPECT_EQ(r.trace[2].instance, 1u);
  EXPECT_EQ(r.suite.size(), 2u);
  EXPECT_TRUE(verify_narrowing(f, r.suite));
}

TEST(Greedy, DefaultPolicyOnToy) {
  auto f = toy_candidates();
  auto r = synth_greedy(f);
  EXPECT_EQ(r.solver_calls, 2u);
  EXPECT_EQ(r.suite.size(), 2u);
  EXPECT_TRUE(verify_narrowing(f, r.suite));
}

TEST(Greedy, BadFirstInstanceGivesThree) {
  auto f = toy_candidates();
  ScriptedPolicy policy({inst(f, {"a"})});
  auto r = synth_greedy(f, policy);
  EXPECT_EQ(names_true(r.generated[0]), std::set<std::string>{"a"});
  EXPECT_EQ(r.suite.size(), 3u);
  EXPECT_TRUE(verify_narrowing(f, r.suite));
}

TEST(Greedy, TwoCandidates) {
  CandidateSet f({{"p", var("a")}, {"q", lnot(var("a"))}});
  auto r = synth_greedy(f);
  EXPECT_EQ(r.suite.size(), 1u);
  EXPECT_EQ(r.solver_calls, 1u);
}

TEST(Greedy, EquivalentCandidatesAreReported) {
  CandidateSet f({{"p", var("a")}, {"q", land(var("a"), var("a"))}, {"r", var("b")}});
  try {
    synth_greedy(f);
    FAIL() << "expected EquivalentCandidates";
  } catch (const EquivalentCandidates& e) {
    std::set<std::string> names(e.names().begin(), e.names().end());
    EXPECT_TRUE(names.count("p") && names.count("q"));
  }
}

TEST(Greedy, ExpiredDeadline) {
  SolveOptions o;
  o.deadline = Clock::now() - std::chrono::seconds(1);
  EXPECT_THROW(synth_greedy(toy_candidates(), o), Timeout);
}

TEST(Greedy, SeededRunsAreReproducible) {
  auto f = key_policy_candidates();
  for (std::uint64_t seed : {1u, 7u, 99u}) {
    SeededPolicy p1(seed), p2(seed);
    auto a = synth_greedy(f, p1), b = synth_greedy(f, p2);
    EXPECT_EQ(a.generated, b.generated);
    EXPECT_TRUE(verify_narrowing(f, a.suite));
  }
}

TEST(Encoding, ToySizes) {
  auto e = build_encoding(toy_candidates());
  EXPECT_EQ(e.slots, 3u);
  EXPECT_EQ(e.universe->size(), 21u);
  EXPECT_EQ(e.roles.size(), 21u);
  EXPECT_EQ(e.definitions.size(), 12u);
  EXPECT_EQ(e.distinctions.size(), 6u);
  EXPECT_EQ(e.soft.size(), 3u);
}

TEST(Encoding, TwoCandidateSizes) {
  auto e = build_encoding(CandidateSet({{"p", var("a")}, {"q", lnot(var("a"))}}));
  EXPECT_EQ(e.universe->size(), 4u);
  EXPECT_EQ(e.definitions.size(), 2u);
  EXPECT_EQ(e.distinctions.size(), 1u);
  EXPECT_EQ(e.soft.size(), 1u);
}

TEST(Encoding, HandBuiltModelIsOptimal) {
  auto e = build_encoding(toy_candidates());
  Instance m(e.universe);
  for (auto k : {1, 2}) m.set(PmSatEncoding::selector(k), true);
  for (auto [k, i] : {std::pair{1, 2}, {1, 4}, {2, 1}, {2, 4}, {3, 2}, {3, 4}})
    m.set(PmSatEncoding::validity(k, i), true);
  m.set(copy_of(VariableId("b"), 2), true);
  EXPECT_TRUE(eval(e.hard(), m));
  std::size_t sat = 0;
  for (const auto& s : e.soft) sat += eval(s, m) ? 1 : 0;
  EXPECT_EQ(sat, 1u);
  EXPECT_EQ(pmaxsolve(e.problem()).satisfied_soft, 1u);
}

TEST(Optimal, Toy) {
  auto f = toy_candidates();
  auto r = synth_optimal(f);
  EXPECT_EQ(r.suite.size(), 2u);
  EXPECT_EQ(r.suite.size(), ceil_log2(f.size()));
  EXPECT_TRUE(verify_narrowing(f, r.suite));
}

TEST(Optimal, KeyPolicy) {
  auto f = key_policy_candidates();
  auto r = synth_optimal(f);
  EXPECT_EQ(r.suite.size(), 2u);
  EXPECT_TRUE(verify_narrowing(f, r.suite));
}

TEST(Optimal, TwoCandidates) {
  EXPECT_EQ(synth_optimal(CandidateSet({{"p", var("a")}, {"q", lnot(var("a"))}})).suite.size(), 1u);
}

TEST(Optimal, EquivalentCandidates) {
  CandidateSet f({{"p", var("a")}, {"q", lnot(lnot(var("a")))}, {"r", var("b")}});
  try {
    synth_optimal(f);
    FAIL() << "expected EquivalentCandidates";
  } catch (const EquivalentCandidates& e) {
    EXPECT_EQ(e.names(), (std::vector<std::string>{"p", "q"}));
  }
}

TEST(Properties, BoundsAndNarrowing) {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 60; ++round) {
    std::size_t n = 2 + rng() % 6, vars = 2 + rng() % 3;
    auto f = bench::random_family(rng, n, vars);
    auto g = synth_greedy(f);
    auto o = synth_optimal(f);
    for (const auto* s : {&g.suite, &o.suite}) {
      EXPECT_TRUE(verify_narrowing(f, *s));
      EXPECT_GE(s->size(), ceil_log2(n));
      EXPECT_LE(s->size(), n - 1);
    }
    EXPECT_LE(o.suite.size(), g.suite.size());
  }
}

TEST(Properties, ReuseNeverTakesAnAncestorsInstance) {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 40; ++round) {
    auto f = bench::random_family(rng, 3 + rng() % 6, 4);
    SeededPolicy policy(rng());
    auto r = synth_greedy(f, policy);
    for (std::size_t s = 0; s < r.trace.size(); ++s) {
      const auto& step = r.trace[s];
      EXPECT_FALSE(step.positive.empty());
      EXPECT_FALSE(step.negative.empty());
      if (!step.reused) continue;
      for (std::size_t a = 0; a < s; ++a)
        if (is_ancestor(r.trace, a, s)) EXPECT_NE(r.trace[a].instance, step.instance);
    }
    EXPECT_EQ(r.trace.size(), f.size() - 1);
  }
}
