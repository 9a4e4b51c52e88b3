#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "narrow/bench.hpp"
#include "narrow/io.hpp"

using namespace narrow;
using narrow::testing::toy_candidates;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CandidateSet read_problem_text(const std::string& s) {
  std::istringstream in(s);
  return io::read_problem(in);
}

std::string suite_text(const CandidateSet& f, const TestSuite& t, const std::string& algorithm) {
  std::ostringstream out;
  io::SuiteMeta meta;
  meta.algorithm = algorithm;
  io::write_suite(out, f, t, meta);
  return out.str();
}

const std::string kSamples = NARROW_SAMPLES_DIR;
const std::string kGolden = NARROW_GOLDEN_DIR;

}  // namespace

TEST(Problem, ReadsSample) {
  std::ifstream in(kSamples + "/toy.problem");
  auto f = io::read_problem(in);
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[3].name, "phi4");
  EXPECT_EQ(f[3].formula, parse("a -> b"));
  EXPECT_EQ(io::problem_hash(f), io::problem_hash(toy_candidates()));
}

TEST(Problem, OrderLine) {
  auto f = read_problem_text("narrow-problem 1\norder b a\ncandidate p = a\ncandidate q = b\n");
  EXPECT_EQ(f.vocabulary()[0].name(), "b");
  EXPECT_THROW(read_problem_text("narrow-problem 1\norder a\ncandidate p = a\ncandidate q = b\n"), VocabularyError);
}

TEST(Problem, Errors) {
  EXPECT_THROW(read_problem_text(""), FormatError);
  EXPECT_THROW(read_problem_text("narrow-problem 2\n"), FormatError);
  EXPECT_THROW(read_problem_text("narrow-problem 1\nformula p = a\n"), FormatError);
  EXPECT_THROW(read_problem_text("narrow-problem 1\ncandidate p a\n"), FormatError);
  EXPECT_THROW(read_problem_text("narrow-problem 1\ncandidate p = a\n"), Error);
  EXPECT_THROW(read_problem_text("narrow-problem 1\ncandidate p = a\ncandidate p = b\n"), Error);
  try {
    read_problem_text("narrow-problem 1\n# note\ncandidate p = a | (b\ncandidate q = b\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.column(), 21u);
  }
}

TEST(Problem, WriteReadRoundTrip) {
  auto f = narrow::testing::key_policy_candidates();
  std::ostringstream out;
  io::write_problem(out, f);
  auto g = read_problem_text(out.str());
  EXPECT_EQ(io::problem_hash(f), io::problem_hash(g));
}

TEST(Suite, MatchesGoldenFiles) {
  auto f = toy_candidates();
  EXPECT_EQ(suite_text(f, synth_optimal(f).suite, "optimal"), slurp(kGolden + "/toy_optimal.suite"));
  EXPECT_EQ(suite_text(f, synth_greedy(f).suite, "greedy"), slurp(kGolden + "/toy_greedy.suite"));
  auto k = narrow::testing::key_policy_candidates();
  EXPECT_EQ(suite_text(k, synth_optimal(k).suite, "optimal"), slurp(kGolden + "/key_policy_optimal.suite"));
}

TEST(Suite, TemplateGolden) {
  auto f = toy_candidates();
  std::ostringstream out;
  io::write_classification_template(out, synth_optimal(f).suite);
  EXPECT_EQ(out.str(), slurp(kGolden + "/toy.template"));
}

TEST(Suite, RoundTripReproducesSignatures) {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 30; ++round) {
    auto f = bench::random_family(rng, 2 + rng() % 7, 3 + rng() % 3);
    auto t = synth_greedy(f).suite;
    std::istringstream in(suite_text(f, t, "greedy"));
    auto back = io::read_suite(in, f);
    EXPECT_EQ(back.suite.instances(), t.instances());
    EXPECT_EQ(back.signatures, t.signatures());
    EXPECT_EQ(back.meta.algorithm, "greedy");
    EXPECT_TRUE(verify_narrowing(f, back.suite));
  }
}

TEST(Suite, DetectsStaleness) {
  auto f = toy_candidates();
  auto text = slurp(kGolden + "/toy_optimal.suite");
  auto read = [&](const CandidateSet& c, const std::string& s) {
    std::istringstream in(s);
    return io::read_suite(in, c);
  };
  EXPECT_NO_THROW(read(f, text));
  auto other = CandidateSet({{"phi1", parse("a | b")}, {"phi2", parse("!b")}, {"phi3", parse("a")}, {"phi4", parse("b")}});
  EXPECT_THROW(read(other, text), StaleInput);

  auto edit = [&](const std::string& from, const std::string& to) {
    auto s = text;
    s.replace(s.find(from), from.size(), to);
    return s;
  };
  EXPECT_THROW(read(f, edit("signature phi1 01", "signature phi1 11")), StaleInput);
  EXPECT_THROW(read(f, edit("12c60ce84f74e427 b", "12c60ce84f74e427 a")), StaleInput);
  EXPECT_THROW(read(f, edit("end\n", "")), FormatError);
  EXPECT_THROW(read(f, edit("signature phi4 11\n", "")), FormatError);
}

TEST(Classification, ParsesVerdicts) {
  std::istringstream in(
      "narrow-classification 1\n"
      "verdict 1 12c904e84f770c66 yes\n"
      "verdict 2 12c60ce84f74e427 Undesirable\n");
  auto c = io::read_classification(in);
  ASSERT_EQ(c.verdicts.size(), 2u);
  EXPECT_TRUE(c.verdicts[0].desirable);
  EXPECT_FALSE(c.verdicts[1].desirable);
  auto f = toy_candidates();
  EXPECT_EQ(winner(f, synth_optimal(f).suite, c), "phi2");
}

TEST(Classification, Errors) {
  auto read = [](const std::string& s) {
    std::istringstream in(s);
    return io::read_classification(in);
  };
  EXPECT_THROW(read("narrow-classification 1\nverdict 1 00 maybe\n"), FormatError);
  EXPECT_THROW(read("narrow-classification 1\nverdict 1 00 yes\nverdict 1 00 no\n"), FormatError);
  EXPECT_THROW(read("narrow-classification 1\nverdict 0 00 yes\n"), FormatError);
  EXPECT_THROW(read("narrow-classification 1\nverdict 1 zz yes\n"), FormatError);
  EXPECT_TRUE(read("narrow-classification 1\nverdict 1 00 ?\n").verdicts.empty());
}

TEST(Classification, WrittenVerdictsResolve) {
  auto f = toy_candidates();
  auto t = synth_optimal(f).suite;
  for (const auto& c : f) {
    std::stringstream io_buf;
    io::write_classification(io_buf, t, signature(c.formula, t));
    EXPECT_EQ(winner(f, t, io::read_classification(io_buf)), c.name);
  }
}

TEST(Table, RendersTruthTable) {
  auto f = toy_candidates();
  auto table = io::render_table(f, synth_optimal(f).suite);
  EXPECT_EQ(table,
            "      I1  I2\n"
            "a      0   0\n"
            "b      0   1\n"
            "----\n"
            "phi1   0   1\n"
            "phi2   1   0\n"
            "phi3   0   0\n"
            "phi4   1   1\n");
}
