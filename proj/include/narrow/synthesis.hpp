#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "narrow/candidates.hpp"
#include "narrow/error.hpp"
#include "narrow/formula.hpp"
#include "narrow/maxsat.hpp"
#include "narrow/sat.hpp"

namespace narrow {

// Bit k of a candidate's signature is whether it holds in instance k.
using Signature = std::vector<bool>;

inline Signature signature_of(const Formula& f, std::span<const Instance> instances) {
  Signature s;
  s.reserve(instances.size());
  for (const auto& i : instances) s.push_back(eval(f, i));
  return s;
}

// True iff every pair of candidates disagrees on some instance. Evaluates
// directly, no solver involved.
inline bool verify_narrowing(const CandidateSet& candidates, std::span<const Instance> instances) {
  std::vector<Signature> sigs;
  for (const auto& c : candidates) sigs.push_back(signature_of(c.formula, instances));
  std::sort(sigs.begin(), sigs.end());
  return std::adjacent_find(sigs.begin(), sigs.end()) == sigs.end();
}

// Distinct instances in canonical order, with every candidate's signature.
class TestSuite {
 public:
  TestSuite(const CandidateSet& candidates, std::vector<Instance> instances) : vocab_(candidates.vocabulary_ptr()) {
    for (auto& i : instances) {
      if (!(i.vocabulary() == *vocab_)) throw VocabularyError("suite instance over a different vocabulary");
      if (std::find(instances_.begin(), instances_.end(), i) == instances_.end()) instances_.push_back(std::move(i));
    }
    std::sort(instances_.begin(), instances_.end(), canonical_less);
    for (const auto& c : candidates) signatures_.push_back(signature_of(c.formula, instances_));
  }

  std::size_t size() const { return instances_.size(); }
  const std::vector<Instance>& instances() const { return instances_; }
  const Instance& operator[](std::size_t k) const { return instances_[k]; }
  const std::vector<Signature>& signatures() const { return signatures_; }
  const VocabularyPtr& vocabulary_ptr() const { return vocab_; }

 private:
  VocabularyPtr vocab_;
  std::vector<Instance> instances_;
  std::vector<Signature> signatures_;
};

inline bool verify_narrowing(const CandidateSet& candidates, const TestSuite& suite) {
  return verify_narrowing(candidates, std::span<const Instance>(suite.instances()));
}

// Indices into a CandidateSet, ascending.
using CandidateSubset = std::vector<std::size_t>;

// Resolves the free choices of the greedy algorithm.
class ChoicePolicy {
 public:
  virtual ~ChoicePolicy() = default;

  // Worklist position of the subset to split next.
  virtual std::size_t choose_subset(std::span<const CandidateSubset> worklist) = 0;
  // Position within `reusable` (generation indices, ascending) of the instance to reuse.
  virtual std::size_t choose_reusable(std::span<const std::size_t> reusable) = 0;
  // Whether the positive part of a split is appended to the worklist before the negative part.
  virtual bool positive_first(const CandidateSubset& positive, const CandidateSubset& negative) = 0;
  // A new instance satisfying `target`; `call` counts solver calls from 0.
  virtual SatResult generate(const VocabularyPtr& vocab, const Formula& target, std::size_t /*call*/,
                             const SolveOptions& opts) {
    return solve(vocab, target, opts);
  }
};

// FIFO worklist, larger part enqueued first (positive part on ties), earliest reusable instance.
class DefaultPolicy : public ChoicePolicy {
 public:
  std::size_t choose_subset(std::span<const CandidateSubset>) override { return 0; }
  std::size_t choose_reusable(std::span<const std::size_t>) override { return 0; }
  bool positive_first(const CandidateSubset& p, const CandidateSubset& n) override { return p.size() >= n.size(); }
};

// Uniformly random choices, and a per-call solver seed, all derived from one seed.
class SeededPolicy : public ChoicePolicy {
 public:
  explicit SeededPolicy(std::uint64_t seed) : rng_(seed) {}

  std::size_t choose_subset(std::span<const CandidateSubset> w) override { return pick(w.size()); }
  std::size_t choose_reusable(std::span<const std::size_t> r) override { return pick(r.size()); }
  bool positive_first(const CandidateSubset&, const CandidateSubset&) override { return pick(2) == 0; }
  SatResult generate(const VocabularyPtr& vocab, const Formula& target, std::size_t,
                     const SolveOptions& opts) override {
    SolveOptions o = opts;
    o.seed = rng_() | 1u;
    return solve(vocab, target, o);
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  std::mt19937_64 rng_;
};

// Replays given choices: the i-th generated instance is pinned to pins[i]
// when it qualifies, and each scripted subset is taken as soon as it is on
// the worklist.
// Everything not scripted falls back to the default policy.
class ScriptedPolicy : public DefaultPolicy {
 public:
  ScriptedPolicy(std::vector<Instance> pins, std::vector<CandidateSubset> subset_order = {})
      : pins_(std::move(pins)), order_(std::move(subset_order)) {}

  std::size_t choose_subset(std::span<const CandidateSubset> w) override {
    if (next_subset_ < order_.size()) {
      auto it = std::find(w.begin(), w.end(), order_[next_subset_]);
      if (it != w.end()) {
        ++next_subset_;
        return static_cast<std::size_t>(it - w.begin());
      }
    }
    return 0;
  }

  SatResult generate(const VocabularyPtr& vocab, const Formula& target, std::size_t call,
                     const SolveOptions& opts) override {
    if (call < pins_.size()) {
      std::vector<Formula> cube{target};
      for (std::size_t v = 0; v < vocab->size(); ++v) {
        auto x = Formula::variable((*vocab)[v]);
        cube.push_back(pins_[call].value(v) ? x : lnot(x));
      }
      if (auto r = solve(vocab, conjunction(cube), opts)) return r;
    }
    return solve(vocab, target, opts);
  }

 private:
  std::vector<Instance> pins_;
  std::vector<CandidateSubset> order_;
  std::size_t next_subset_ = 0;
};

struct GreedyStep {
  CandidateSubset subset;
  std::size_t instance = 0;  // generation index
  bool reused = false;
  CandidateSubset positive;
  CandidateSubset negative;
  std::optional<std::size_t> parent;  // step whose split produced `subset`
};

struct GreedyResult {
  TestSuite suite;
  std::vector<Instance> generated;  // distinct instances in generation order
  std::vector<GreedyStep> trace;
  std::size_t solver_calls = 0;
};

namespace detail {
inline std::vector<std::string> names_of(const CandidateSet& f, const CandidateSubset& s) {
  std::vector<std::string> out;
  for (auto i : s) out.push_back(f[i].name);
  return out;
}
inline std::string join(const std::vector<std::string>& xs) {
  std::string s;
  for (const auto& x : xs) s += (s.empty() ? "" : ", ") + x;
  return s;
}
}  // namespace detail

// Splits candidate subsets with one instance at a time, reusing earlier
// instances whenever one already separates the subset.
inline GreedyResult synth_greedy(const CandidateSet& candidates, ChoicePolicy& policy, const SolveOptions& opts = {}) {
  struct Pending {
    CandidateSubset subset;
    std::optional<std::size_t> parent;
  };
  std::vector<Pending> worklist;
  CandidateSubset all(candidates.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  worklist.push_back({all, std::nullopt});

  std::vector<Instance> generated;
  std::vector<GreedyStep> trace;
  std::size_t calls = 0;

  while (!worklist.empty()) {
    if (opts.deadline && Clock::now() >= *opts.deadline) throw Timeout();
    std::vector<CandidateSubset> view;
    for (const auto& p : worklist) view.push_back(p.subset);
    auto pick = policy.choose_subset(view);
    Pending current = std::move(worklist[pick]);
    worklist.erase(worklist.begin() + static_cast<std::ptrdiff_t>(pick));
    const auto& subset = current.subset;

    auto separates = [&](const Instance& inst) {
      bool any = false, every = true;
      for (auto i : subset) {
        bool v = eval(candidates[i].formula, inst);
        any = any || v;
        every = every && v;
      }
      return any && !every;
    };

    GreedyStep step;
    step.subset = subset;
    step.parent = current.parent;
    std::vector<std::size_t> reusable;
    for (std::size_t g = 0; g < generated.size(); ++g)
      if (separates(generated[g])) reusable.push_back(g);

    if (!reusable.empty()) {
      step.instance = reusable[policy.choose_reusable(reusable)];
      step.reused = true;
    } else {
      std::vector<Formula> members;
      for (auto i : subset) members.push_back(candidates[i].formula);
      auto target = land(disjunction(members), lnot(conjunction(members)));
      auto inst = policy.generate(candidates.vocabulary_ptr(), target, calls++, opts);
      if (!inst)
        throw EquivalentCandidates(detail::names_of(candidates, subset),
                                   "no instance separates {" + detail::join(detail::names_of(candidates, subset)) +
                                       "}: candidates are not pairwise non-equivalent");
      step.instance = generated.size();
      generated.push_back(std::move(*inst));
    }

    const auto& chosen = generated[step.instance];
    for (auto i : subset) (eval(candidates[i].formula, chosen) ? step.positive : step.negative).push_back(i);

    const std::size_t id = trace.size();
    const bool pos_first = policy.positive_first(step.positive, step.negative);
    const auto& first = pos_first ? step.positive : step.negative;
    const auto& second = pos_first ? step.negative : step.positive;
    if (first.size() > 1) worklist.push_back({first, id});
    if (second.size() > 1) worklist.push_back({second, id});
    trace.push_back(std::move(step));
  }

  TestSuite suite(candidates, generated);
  return GreedyResult{std::move(suite), std::move(generated), std::move(trace), calls};
}

inline GreedyResult synth_greedy(const CandidateSet& candidates, const SolveOptions& opts = {}) {
  DefaultPolicy policy;
  return synth_greedy(candidates, policy, opts);
}

enum class Role { Copy, Selector, Validity };

struct EncodingVar {
  Role role;
  std::size_t slot;   // 1-based instance slot k
  std::size_t index;  // Copy: vocabulary position; Validity: candidate position; Selector: unused
};

// Partial MaxSAT problem whose optimum is a minimal narrowing suite. Slot k
// (1 <= k < N) holds one candidate instance, given by the k-th copies of the
// vocabulary; its selector says whether the slot is in the suite and its
// validity bits say which candidates hold there.
struct PmSatEncoding {
  std::size_t slots = 0;
  VocabularyPtr universe;
  std::vector<EncodingVar> roles;  // parallel to *universe
  std::vector<Formula> definitions;   // validity bit <-> renamed candidate
  std::vector<Formula> distinctions;  // one per candidate pair
  std::vector<Formula> soft;          // !selector per slot
  // Optional extra hard constraints that only remove slot permutations:
  // slots are used in order, unused slots are all-false, and used slots
  // hold strictly increasing instances.
  std::vector<Formula> symmetry;

  static VariableId selector(std::size_t k) { return VariableId::reserved("t@" + std::to_string(k)); }
  static VariableId validity(std::size_t k, std::size_t i) {
    return VariableId::reserved("v@" + std::to_string(k) + "@" + std::to_string(i));
  }

  Formula hard() const {
    std::vector<Formula> all = definitions;
    all.insert(all.end(), distinctions.begin(), distinctions.end());
    all.insert(all.end(), symmetry.begin(), symmetry.end());
    return conjunction(all);
  }
  PmSatProblem problem() const { return PmSatProblem{universe, hard(), soft}; }
};

// x < y as bit strings, most significant first.
inline Formula lex_less(std::span<const Formula> x, std::span<const Formula> y) {
  Formula less = lit(false);
  for (std::size_t i = x.size(); i-- > 0;)
    less = lor(land(lnot(x[i]), y[i]), land(iff(x[i], y[i]), less));
  return less;
}

inline PmSatEncoding build_encoding(const CandidateSet& candidates, bool break_symmetry = true) {
  const auto& vocab = candidates.vocabulary();
  const std::size_t n = candidates.size();
  PmSatEncoding e;
  e.slots = n - 1;

  std::vector<VariableId> universe;
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t a = 0; a < vocab.size(); ++a) {
      universe.push_back(copy_of(vocab[a], k));
      e.roles.push_back({Role::Copy, k, a});
    }
  for (std::size_t k = 1; k < n; ++k) {
    universe.push_back(PmSatEncoding::selector(k));
    e.roles.push_back({Role::Selector, k, 0});
  }
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = 1; i <= n; ++i) {
      universe.push_back(PmSatEncoding::validity(k, i));
      e.roles.push_back({Role::Validity, k, i - 1});
    }
  e.universe = make_vocabulary(std::move(universe));

  auto v = [](std::size_t k, std::size_t i) { return Formula::variable(PmSatEncoding::validity(k, i)); };
  auto t = [](std::size_t k) { return Formula::variable(PmSatEncoding::selector(k)); };

  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t i = 1; i <= n; ++i) e.definitions.push_back(iff(v(k, i), rename(candidates[i - 1].formula, k)));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) {
      std::vector<Formula> witnesses;
      for (std::size_t k = 1; k < n; ++k) witnesses.push_back(land(t(k), iff(v(k, i), lnot(v(k, j)))));
      e.distinctions.push_back(disjunction(witnesses));
    }
  for (std::size_t k = 1; k < n; ++k) e.soft.push_back(lnot(t(k)));

  if (break_symmetry) {
    auto copies = [&](std::size_t k) {
      std::vector<Formula> out;
      for (std::size_t a = 0; a < vocab.size(); ++a) out.push_back(Formula::variable(copy_of(vocab[a], k)));
      return out;
    };
    for (std::size_t k = 1; k < n; ++k) {
      auto a = copies(k);
      for (const auto& x : a) e.symmetry.push_back(implies(lnot(t(k)), lnot(x)));
      if (k + 1 < n) {
        e.symmetry.push_back(implies(t(k + 1), t(k)));
        e.symmetry.push_back(implies(t(k + 1), lex_less(a, copies(k + 1))));
      }
    }
  }
  return e;
}

struct OptimalResult {
  TestSuite suite;
  std::size_t sat_calls = 0;
  std::size_t selected_slots = 0;  // before merging duplicate instances
};

// Minimal narrowing suite from one partial MaxSAT optimization.
inline OptimalResult synth_optimal(const CandidateSet& candidates, const SolveOptions& opts = {}) {
  const auto enc = build_encoding(candidates);
  auto outcome = pmaxsolve(enc.problem(), opts);
  if (!outcome.model) {
    std::vector<std::string> names;
    for (auto [i, j] : check_nonequivalent(candidates, opts)) {
      names.push_back(candidates[i].name);
      names.push_back(candidates[j].name);
    }
    throw EquivalentCandidates(names, "no narrowing suite exists: equivalent candidates {" + detail::join(names) + "}");
  }
  const auto& model = *outcome.model;
  const auto& vocab = candidates.vocabulary_ptr();
  std::vector<Instance> picked;
  std::size_t selected = 0;
  for (std::size_t k = 1; k <= enc.slots; ++k) {
    if (!model.value(PmSatEncoding::selector(k))) continue;
    ++selected;
    Instance inst(vocab);
    for (std::size_t a = 0; a < vocab->size(); ++a) inst.set(a, model.value(copy_of((*vocab)[a], k)));
    picked.push_back(std::move(inst));
  }
  return OptimalResult{TestSuite(candidates, std::move(picked)), outcome.sat_calls, selected};
}

}  // namespace narrow
