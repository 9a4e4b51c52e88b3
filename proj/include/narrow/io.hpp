#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "narrow/candidates.hpp"
#include "narrow/classify.hpp"
#include "narrow/error.hpp"
#include "narrow/formula.hpp"
#include "narrow/hash.hpp"
#include "narrow/parser.hpp"
#include "narrow/synthesis.hpp"

#ifndef NARROW_VERSION
#define NARROW_VERSION "0.0.0"
#endif

// Line-oriented file formats. Every file starts with "<kind> <version>";
// blank lines and lines starting with '#' are ignored. See docs/formats.md.
namespace narrow::io {

inline constexpr int kFormatVersion = 1;

namespace detail {

struct Line {
  std::size_t number = 0;
  std::string text;
  std::vector<std::string> words;
};

inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> out;
  std::string text;
  for (std::size_t n = 1; std::getline(in, text); ++n) {
    auto words = split_words(text);
    if (words.empty() || words[0][0] == '#') continue;
    out.push_back({n, text, std::move(words)});
  }
  return out;
}

inline void expect_header(const std::vector<Line>& lines, std::string_view kind) {
  if (lines.empty()) throw FormatError(1, "empty file, expected '" + std::string(kind) + " 1'");
  const auto& h = lines.front();
  if (h.words[0] != kind) throw FormatError(h.number, "expected header '" + std::string(kind) + " 1'");
  if (h.words.size() != 2 || h.words[1] != std::to_string(kFormatVersion))
    throw FormatError(h.number, "unsupported " + std::string(kind) + " version");
}

inline void arity(const Line& l, std::size_t n) {
  if (l.words.size() != n) throw FormatError(l.number, "'" + l.words[0] + "' expects " + std::to_string(n - 1) + " field(s)");
}

inline std::uint64_t parse_u64(const Line& l, const std::string& s, int base = 10) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (ec != std::errc() || p != s.data() + s.size()) throw FormatError(l.number, "bad number '" + s + "'");
  return v;
}

inline VariableId parse_var(const Line& l, const std::string& s) {
  if (!is_identifier(s)) throw FormatError(l.number, "bad variable name '" + s + "'");
  return VariableId(s);
}

}  // namespace detail

// Content hash of a problem: variable order plus every named candidate.
inline std::uint64_t problem_hash(const CandidateSet& f) {
  Fnv1a h;
  h.add("vocabulary");
  for (const auto& v : f.vocabulary()) h.add(" ").add(v.name());
  for (const auto& c : f) h.add("\ncandidate ").add(c.name).add(" = ").add(to_string(c.formula, PrintStyle::FullyParenthesized));
  return h.value();
}

// ---- problem files ----

inline CandidateSet read_problem(std::istream& in) {
  auto lines = detail::read_lines(in);
  detail::expect_header(lines, "narrow-problem");
  std::optional<std::vector<VariableId>> order;
  std::vector<Candidate> candidates;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& l = lines[k];
    if (l.words[0] == "order") {
      if (order) throw FormatError(l.number, "duplicate 'order' line");
      order.emplace();
      for (std::size_t w = 1; w < l.words.size(); ++w) order->push_back(detail::parse_var(l, l.words[w]));
    } else if (l.words[0] == "candidate") {
      auto eq = l.text.find('=');
      if (eq == std::string::npos) throw FormatError(l.number, "expected 'candidate NAME = FORMULA'");
      auto head = detail::split_words(std::string_view(l.text).substr(0, eq));
      if (head.size() != 2 || !is_identifier(head[1])) throw FormatError(l.number, "expected 'candidate NAME = FORMULA'");
      auto f = FormulaParser(std::string_view(l.text).substr(eq + 1), l.number, eq + 2).parse();
      candidates.push_back({head[1], std::move(f)});
    } else {
      throw FormatError(l.number, "unknown directive '" + l.words[0] + "'");
    }
  }
  return CandidateSet(std::move(candidates), std::move(order));
}

inline void write_problem(std::ostream& out, const CandidateSet& f) {
  out << "narrow-problem " << kFormatVersion << "\norder";
  for (const auto& v : f.vocabulary()) out << ' ' << v.name();
  out << '\n';
  for (const auto& c : f) out << "candidate " << c.name << " = " << to_string(c.formula) << '\n';
}

// ---- suite files ----

struct SuiteMeta {
  std::string tool = std::string("narrow ") + NARROW_VERSION;
  std::string algorithm;
  std::uint64_t seed = 0;
};

struct SuiteFile {
  SuiteMeta meta;
  TestSuite suite;
  // As stored, in candidate order; read_suite has already checked them
  // against re-evaluation.
  std::vector<Signature> signatures;
};

inline std::string bits(const Signature& s) {
  std::string out;
  for (bool b : s) out += b ? '1' : '0';
  return out;
}

// Variables and candidates against instances, one column per instance.
inline std::string render_table(const CandidateSet& f, const TestSuite& suite) {
  std::size_t width = 0;
  for (const auto& v : f.vocabulary()) width = std::max(width, v.name().size());
  for (const auto& c : f) width = std::max(width, c.name.size());
  std::vector<std::string> heads;
  std::size_t cell = 1;
  for (std::size_t k = 0; k < suite.size(); ++k) {
    heads.push_back("I" + std::to_string(k + 1));
    cell = std::max(cell, heads.back().size());
  }
  std::ostringstream out;
  auto row = [&](const std::string& label, auto&& value) {
    out << label << std::string(width - label.size(), ' ');
    for (std::size_t k = 0; k < suite.size(); ++k) {
      std::string v = value(k);
      out << "  " << std::string(cell - v.size(), ' ') << v;
    }
    out << '\n';
  };
  row("", [&](std::size_t k) { return heads[k]; });
  for (std::size_t a = 0; a < f.vocabulary().size(); ++a)
    row(f.vocabulary()[a].name(), [&](std::size_t k) { return std::string(suite[k].value(a) ? "1" : "0"); });
  out << std::string(width, '-') << '\n';
  for (std::size_t i = 0; i < f.size(); ++i)
    row(f[i].name, [&](std::size_t k) { return std::string(suite.signatures()[i][k] ? "1" : "0"); });
  return out.str();
}

inline void write_suite(std::ostream& out, const CandidateSet& f, const TestSuite& suite, const SuiteMeta& meta) {
  out << "narrow-suite " << kFormatVersion << '\n'
      << "tool " << meta.tool << '\n'
      << "algorithm " << meta.algorithm << '\n'
      << "seed " << meta.seed << '\n'
      << "problem " << to_hex(problem_hash(f)) << '\n'
      << "vocabulary";
  for (const auto& v : f.vocabulary()) out << ' ' << v.name();
  out << '\n';
  for (std::size_t k = 0; k < suite.size(); ++k) {
    out << "instance " << k + 1 << ' ' << to_hex(instance_hash(suite[k]));
    auto vars = suite[k].true_vars();
    if (vars.empty()) out << " -";
    for (const auto& v : vars) out << ' ' << v.name();
    out << '\n';
  }
  for (std::size_t i = 0; i < f.size(); ++i) out << "signature " << f[i].name << ' ' << bits(suite.signatures()[i]) << '\n';
  std::istringstream table(render_table(f, suite));
  for (std::string line; std::getline(table, line);) out << "# " << line << '\n';
  out << "end\n";
}

// Reads a suite written for `f`. Throws StaleInput when the file was made
// for another problem or its stored contents disagree with re-evaluation.
inline SuiteFile read_suite(std::istream& in, const CandidateSet& f) {
  auto lines = detail::read_lines(in);
  detail::expect_header(lines, "narrow-suite");
  SuiteMeta meta;
  meta.tool.clear();
  std::optional<std::uint64_t> problem;
  std::optional<std::vector<VariableId>> vocab;
  std::vector<Instance> instances;
  std::vector<std::optional<Signature>> sigs(f.size());
  bool ended = false;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& l = lines[k];
    const auto& w = l.words;
    if (ended) throw FormatError(l.number, "content after 'end'");
    if (w[0] == "tool") {
      meta.tool = std::string_view(l.text).substr(l.text.find("tool") + 5);
    } else if (w[0] == "algorithm") {
      detail::arity(l, 2);
      meta.algorithm = w[1];
    } else if (w[0] == "seed") {
      detail::arity(l, 2);
      meta.seed = detail::parse_u64(l, w[1]);
    } else if (w[0] == "problem") {
      detail::arity(l, 2);
      problem = detail::parse_u64(l, w[1], 16);
      if (*problem != problem_hash(f)) throw StaleInput("suite was generated for a different problem");
    } else if (w[0] == "vocabulary") {
      vocab.emplace();
      for (std::size_t j = 1; j < w.size(); ++j) vocab->push_back(detail::parse_var(l, w[j]));
      if (*vocab != f.vocabulary().vars()) throw StaleInput("suite vocabulary differs from the problem's");
    } else if (w[0] == "instance") {
      if (!vocab) throw FormatError(l.number, "'instance' before 'vocabulary'");
      if (w.size() < 4) throw FormatError(l.number, "expected 'instance ID HASH VARS|-'");
      if (detail::parse_u64(l, w[1]) != instances.size() + 1) throw FormatError(l.number, "instance ids must count up from 1");
      Instance inst(f.vocabulary_ptr());
      if (!(w.size() == 4 && w[3] == "-"))
        for (std::size_t j = 3; j < w.size(); ++j) {
          auto v = detail::parse_var(l, w[j]);
          if (!f.vocabulary().contains(v)) throw FormatError(l.number, "unknown variable '" + w[j] + "'");
          inst.set(v, true);
        }
      if (detail::parse_u64(l, w[2], 16) != instance_hash(inst))
        throw StaleInput("instance " + w[1] + " does not match its content hash");
      instances.push_back(std::move(inst));
    } else if (w[0] == "signature") {
      detail::arity(l, 3);
      auto i = f.find(w[1]);
      if (!i) throw StaleInput("signature for unknown candidate '" + w[1] + "'");
      if (sigs[*i]) throw FormatError(l.number, "duplicate signature for '" + w[1] + "'");
      Signature s;
      for (char c : w[2]) {
        if (c != '0' && c != '1') throw FormatError(l.number, "signature bits must be 0 or 1");
        s.push_back(c == '1');
      }
      sigs[*i] = std::move(s);
    } else if (w[0] == "end") {
      detail::arity(l, 1);
      ended = true;
    } else {
      throw FormatError(l.number, "unknown directive '" + w[0] + "'");
    }
  }
  const std::size_t last = lines.back().number;
  if (!ended) throw FormatError(last, "missing 'end'");
  if (!problem) throw FormatError(last, "missing 'problem' line");
  if (!vocab) throw FormatError(last, "missing 'vocabulary' line");

  const std::size_t count = instances.size();
  TestSuite suite(f, instances);
  if (suite.size() != count) throw InvalidSuite("suite lists the same instance twice");
  if (suite.instances() != instances) throw InvalidSuite("suite instances are not in canonical order");
  std::vector<Signature> stored;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!sigs[i]) throw FormatError(last, "missing signature for '" + f[i].name + "'");
    if (*sigs[i] != suite.signatures()[i])
      throw StaleInput("stored signature of '" + f[i].name + "' disagrees with re-evaluation");
    stored.push_back(*sigs[i]);
  }
  return SuiteFile{std::move(meta), std::move(suite), std::move(stored)};
}

// ---- classification files ----

inline std::optional<bool> parse_verdict(std::string_view s) {
  std::string t(s);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "yes" || t == "1" || t == "true" || t == "desirable") return true;
  if (t == "no" || t == "0" || t == "false" || t == "undesirable") return false;
  return std::nullopt;
}

// A '?' verdict leaves the instance unclassified.
inline Classification read_classification(std::istream& in) {
  auto lines = detail::read_lines(in);
  detail::expect_header(lines, "narrow-classification");
  Classification c;
  std::set<std::size_t> seen;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& l = lines[k];
    if (l.words[0] != "verdict") throw FormatError(l.number, "unknown directive '" + l.words[0] + "'");
    detail::arity(l, 4);
    auto id = detail::parse_u64(l, l.words[1]);
    if (id == 0) throw FormatError(l.number, "instance ids start at 1");
    if (!seen.insert(id).second) throw FormatError(l.number, "duplicate verdict for instance " + l.words[1]);
    auto hash = detail::parse_u64(l, l.words[2], 16);
    if (l.words[3] == "?") continue;
    auto v = parse_verdict(l.words[3]);
    if (!v) throw FormatError(l.number, "verdict must be yes or no, got '" + l.words[3] + "'");
    c.verdicts[id - 1] = Verdict{*v, hash};
  }
  return c;
}

// Every verdict left as '?', with the instance spelled out above it.
inline void write_classification_template(std::ostream& out, const TestSuite& suite) {
  out << "narrow-classification " << kFormatVersion << '\n';
  for (std::size_t k = 0; k < suite.size(); ++k)
    out << "# I" << k + 1 << " = " << suite[k].to_string() << '\n'
        << "verdict " << k + 1 << ' ' << to_hex(instance_hash(suite[k])) << " ?\n";
}

inline void write_classification(std::ostream& out, const TestSuite& suite, const Signature& verdicts) {
  out << "narrow-classification " << kFormatVersion << '\n';
  for (std::size_t k = 0; k < suite.size(); ++k)
    out << "verdict " << k + 1 << ' ' << to_hex(instance_hash(suite[k])) << ' ' << (verdicts[k] ? "yes" : "no") << '\n';
}

}  // namespace narrow::io
