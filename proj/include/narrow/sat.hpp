#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "narrow/candidates.hpp"
#include "narrow/cnf.hpp"
#include "narrow/error.hpp"
#include "narrow/formula.hpp"

namespace narrow {

using Clock = std::chrono::steady_clock;
using Deadline = Clock::time_point;

enum class Branching {
  // VSIDS activity; ties (including the initial all-zero state) go to the
  // lowest variable index.
  Activity,
  // Always the lowest-index unassigned variable.
  LowestIndex,
};

struct SolveOptions {
  // 0 keeps the plain index order for tie-breaking. Any other value perturbs
  // it deterministically.
  std::uint64_t seed = 0;
  Branching branching = Branching::Activity;
  std::optional<Deadline> deadline;
};

struct SolverStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t restarts = 0;
};

// Conflict-driven clause-learning solver over DIMACS literals. Decisions
// always try the negative phase first, so unconstrained variables end up false.
class CdclSolver {
 public:
  explicit CdclSolver(const SolveOptions& opts = {}) : opts_(opts) {}

  int num_vars() const { return static_cast<int>(assigns_.size()); }

  int new_var() {
    int v = num_vars();
    assigns_.push_back(kUndef);
    level_.push_back(0);
    reason_.push_back(kNoReason);
    activity_.push_back(0.0);
    seen_.push_back(0);
    heap_pos_.push_back(-1);
    watches_.emplace_back();
    watches_.emplace_back();
    tie_.push_back(static_cast<std::uint64_t>(v));
    heap_insert(v);
    return v + 1;
  }

  void reserve_vars(int n) {
    while (num_vars() < n) new_var();
  }

  // Returns false once the clause set is known to be unsatisfiable.
  bool add_clause(std::span<const Lit> dimacs) {
    if (!ok_) return false;
    std::vector<int> c;
    c.reserve(dimacs.size());
    for (Lit l : dimacs) {
      int v = std::abs(l);
      if (v == 0) continue;
      reserve_vars(v);
      c.push_back(encode(l));
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::vector<int> kept;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i + 1 < c.size() && c[i + 1] == (c[i] ^ 1)) return true;  // tautology
      if (value(c[i]) == kTrue) return true;
      if (value(c[i]) == kUndef) kept.push_back(c[i]);
    }
    if (kept.empty()) return ok_ = false;
    if (kept.size() == 1) {
      enqueue(kept[0], kNoReason);
      return ok_ = (propagate() == kNoReason);
    }
    attach(store(std::move(kept), false));
    return true;
  }

  void add_cnf(const CnfFormula& cnf) {
    reserve_vars(cnf.num_vars);
    for (const auto& c : cnf.clauses) add_clause(c);
  }

  // Throws Timeout when the deadline passes.
  bool solve() {
    if (!ok_) return false;
    if (!seeded_) seed_ties();
    max_learnts_ = std::max<double>(static_cast<double>(clauses_.size()) / 3.0, 2000.0);
    for (std::uint64_t restart = 0;; ++restart) {
      auto budget = static_cast<std::uint64_t>(luby(restart) * 100.0);
      int status = search(budget);
      if (status != 0) return status > 0;
      ++stats_.restarts;
    }
  }

  // Model value of DIMACS variable v after a satisfiable solve().
  bool model_value(int v) const { return model_[static_cast<std::size_t>(v - 1)]; }
  const SolverStats& stats() const { return stats_; }

 private:
  static constexpr std::int8_t kTrue = 1, kFalse = -1, kUndef = 0;
  static constexpr int kNoReason = -1;

  struct StoredClause {
    std::vector<int> lits;
    bool learnt = false;
    bool deleted = false;
    double activity = 0.0;
  };
  struct Watcher {
    int cref;
    int blocker;
  };

  static int encode(Lit l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }
  static int var_of(int x) { return x >> 1; }
  static bool negative(int x) { return x & 1; }

  std::int8_t value(int x) const {
    auto a = assigns_[static_cast<std::size_t>(var_of(x))];
    return negative(x) ? static_cast<std::int8_t>(-a) : a;
  }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  int store(std::vector<int> lits, bool learnt) {
    clauses_.push_back(StoredClause{std::move(lits), learnt, false, 0.0});
    return static_cast<int>(clauses_.size()) - 1;
  }
  void attach(int cref) {
    const auto& c = clauses_[static_cast<std::size_t>(cref)].lits;
    watches_[static_cast<std::size_t>(c[0] ^ 1)].push_back({cref, c[1]});
    watches_[static_cast<std::size_t>(c[1] ^ 1)].push_back({cref, c[0]});
  }

  void enqueue(int x, int reason) {
    auto v = static_cast<std::size_t>(var_of(x));
    assigns_[v] = negative(x) ? kFalse : kTrue;
    level_[v] = decision_level();
    reason_[v] = reason;
    trail_.push_back(x);
  }

  int propagate() {
    int conflict = kNoReason;
    while (qhead_ < trail_.size()) {
      int p = trail_[qhead_++];
      ++stats_.propagations;
      auto& ws = watches_[static_cast<std::size_t>(p)];
      std::size_t i = 0, j = 0;
      const int false_lit = p ^ 1;
      while (i < ws.size()) {
        Watcher w = ws[i];
        if (value(w.blocker) == kTrue) {
          ws[j++] = ws[i++];
          continue;
        }
        auto& sc = clauses_[static_cast<std::size_t>(w.cref)];
        if (sc.deleted) {
          ++i;
          continue;
        }
        auto& c = sc.lits;
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        ++i;
        int first = c[0];
        if (first != w.blocker && value(first) == kTrue) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != kFalse) {
            std::swap(c[1], c[k]);
            watches_[static_cast<std::size_t>(c[1] ^ 1)].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value(first) == kFalse) {
          conflict = w.cref;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason) break;
    }
    return conflict;
  }

  // First-UIP learning with local minimization.
  int analyze(int confl, std::vector<int>& learnt) {
    learnt.assign(1, 0);
    int path = 0;
    int p = -1;
    std::size_t idx = trail_.size();
    std::vector<int> to_clear;
    do {
      auto& sc = clauses_[static_cast<std::size_t>(confl)];
      if (sc.learnt) bump_clause(sc);
      // Reason clauses keep their implied literal at position 0.
      for (std::size_t k = (p == -1 ? 0 : 1); k < sc.lits.size(); ++k) {
        int q = sc.lits[k];
        auto v = static_cast<std::size_t>(var_of(q));
        if (seen_[v] || level_[v] == 0) continue;
        seen_[v] = 1;
        to_clear.push_back(static_cast<int>(v));
        bump_var(static_cast<int>(v));
        if (level_[v] >= decision_level()) ++path;
        else learnt.push_back(q);
      }
      while (!seen_[static_cast<std::size_t>(var_of(trail_[--idx]))]) {
      }
      p = trail_[idx];
      confl = reason_[static_cast<std::size_t>(var_of(p))];
      seen_[static_cast<std::size_t>(var_of(p))] = 0;
      --path;
    } while (path > 0);
    learnt[0] = p ^ 1;

    std::size_t keep = 1;
    for (std::size_t k = 1; k < learnt.size(); ++k) {
      int r = reason_[static_cast<std::size_t>(var_of(learnt[k]))];
      bool redundant = r != kNoReason;
      if (redundant) {
        for (int q : clauses_[static_cast<std::size_t>(r)].lits) {
          auto v = static_cast<std::size_t>(var_of(q));
          if (v == static_cast<std::size_t>(var_of(learnt[k]))) continue;
          if (!seen_[v] && level_[v] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant) learnt[keep++] = learnt[k];
    }
    learnt.resize(keep);
    for (int v : to_clear) seen_[static_cast<std::size_t>(v)] = 0;

    int bt = 0;
    if (learnt.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t k = 2; k < learnt.size(); ++k)
        if (level_[static_cast<std::size_t>(var_of(learnt[k]))] >
            level_[static_cast<std::size_t>(var_of(learnt[max_i]))])
          max_i = k;
      std::swap(learnt[1], learnt[max_i]);
      bt = level_[static_cast<std::size_t>(var_of(learnt[1]))];
    }
    return bt;
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t c = trail_.size(); c-- > trail_lim_[static_cast<std::size_t>(lvl)];) {
      auto v = static_cast<std::size_t>(var_of(trail_[c]));
      assigns_[v] = kUndef;
      reason_[v] = kNoReason;
      if (heap_pos_[v] < 0) heap_insert(static_cast<int>(v));
    }
    trail_.resize(trail_lim_[static_cast<std::size_t>(lvl)]);
    trail_lim_.resize(static_cast<std::size_t>(lvl));
    qhead_ = trail_.size();
  }

  // 1 = sat, -1 = unsat, 0 = restart.
  int search(std::uint64_t conflict_budget) {
    std::uint64_t conflicts = 0;
    std::vector<int> learnt;
    for (;;) {
      int confl = propagate();
      if (confl != kNoReason) {
        ++stats_.conflicts;
        ++conflicts;
        if ((stats_.conflicts & 63u) == 0) check_deadline();
        if (decision_level() == 0) return -1;
        int bt = analyze(confl, learnt);
        cancel_until(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          int cref = store(learnt, true);
          attach(cref);
          bump_clause(clauses_[static_cast<std::size_t>(cref)]);
          ++num_learnts_;
          enqueue(learnt[0], cref);
        }
        var_inc_ /= kVarDecay;
        cla_inc_ /= kClauseDecay;
        continue;
      }
      if (conflicts >= conflict_budget) {
        cancel_until(0);
        return 0;
      }
      if (static_cast<double>(num_learnts_) >= max_learnts_ + static_cast<double>(trail_.size())) {
        reduce_db();
        max_learnts_ *= 1.1;
      }
      int next = pick_branch();
      if (next < 0) {
        model_.assign(assigns_.size(), false);
        for (std::size_t v = 0; v < assigns_.size(); ++v) model_[v] = assigns_[v] == kTrue;
        cancel_until(0);
        return 1;
      }
      ++stats_.decisions;
      if ((stats_.decisions & 1023u) == 0) check_deadline();
      trail_lim_.push_back(trail_.size());
      enqueue(2 * next + 1, kNoReason);
    }
  }

  int pick_branch() {
    if (opts_.branching == Branching::LowestIndex) {
      for (std::size_t v = 0; v < assigns_.size(); ++v)
        if (assigns_[order_[v]] == kUndef) return static_cast<int>(order_[v]);
      return -1;
    }
    while (!heap_.empty()) {
      int v = heap_pop();
      if (assigns_[static_cast<std::size_t>(v)] == kUndef) return v;
    }
    return -1;
  }

  void reduce_db() {
    std::vector<int> learnts;
    for (std::size_t i = 0; i < clauses_.size(); ++i) {
      const auto& c = clauses_[i];
      if (c.learnt && !c.deleted && c.lits.size() > 2) learnts.push_back(static_cast<int>(i));
    }
    std::sort(learnts.begin(), learnts.end(), [&](int a, int b) {
      return clauses_[static_cast<std::size_t>(a)].activity < clauses_[static_cast<std::size_t>(b)].activity;
    });
    std::size_t target = learnts.size() / 2;
    for (std::size_t k = 0; k < target; ++k) {
      auto& c = clauses_[static_cast<std::size_t>(learnts[k])];
      int implied = c.lits[0];
      auto v = static_cast<std::size_t>(var_of(implied));
      if (value(implied) == kTrue && reason_[v] == learnts[k]) continue;  // locked
      c.deleted = true;
      c.lits.clear();
      c.lits.shrink_to_fit();
      --num_learnts_;
    }
    for (auto& ws : watches_)
      ws.erase(std::remove_if(ws.begin(), ws.end(),
                              [&](const Watcher& w) { return clauses_[static_cast<std::size_t>(w.cref)].deleted; }),
               ws.end());
  }

  void check_deadline() const {
    if (opts_.deadline && Clock::now() >= *opts_.deadline) throw Timeout();
  }

  static double luby(std::uint64_t x) {
    std::uint64_t size = 1, seq = 0;
    while (size < x + 1) {
      ++seq;
      size = 2 * size + 1;
    }
    while (size - 1 != x) {
      size = (size - 1) >> 1;
      --seq;
      x %= size;
    }
    return static_cast<double>(std::uint64_t{1} << seq);
  }

  void seed_ties() {
    seeded_ = true;
    order_.resize(assigns_.size());
    for (std::size_t v = 0; v < order_.size(); ++v) order_[v] = v;
    if (opts_.seed == 0) return;
    std::mt19937_64 rng(opts_.seed);
    std::shuffle(order_.begin(), order_.end(), rng);
    for (std::size_t k = 0; k < order_.size(); ++k) tie_[order_[k]] = k;
    heap_.clear();
    for (auto& p : heap_pos_) p = -1;
    for (std::size_t v = 0; v < assigns_.size(); ++v)
      if (assigns_[v] == kUndef) heap_insert(static_cast<int>(v));
  }

  // Activity heap; equal activities prefer the smaller tie key.
  bool before(int a, int b) const {
    auto ua = static_cast<std::size_t>(a), ub = static_cast<std::size_t>(b);
    if (activity_[ua] != activity_[ub]) return activity_[ua] > activity_[ub];
    return tie_[ua] < tie_[ub];
  }
  void heap_up(std::size_t i) {
    int v = heap_[i];
    while (i > 0) {
      std::size_t parent = (i - 1) / 2;
      if (!before(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      heap_pos_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
      i = parent;
    }
    heap_[i] = v;
    heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }
  void heap_down(std::size_t i) {
    int v = heap_[i];
    for (;;) {
      std::size_t child = 2 * i + 1;
      if (child >= heap_.size()) break;
      if (child + 1 < heap_.size() && before(heap_[child + 1], heap_[child])) ++child;
      if (!before(heap_[child], v)) break;
      heap_[i] = heap_[child];
      heap_pos_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
      i = child;
    }
    heap_[i] = v;
    heap_pos_[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }
  void heap_insert(int v) {
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
  }
  int heap_pop() {
    int top = heap_.front();
    heap_pos_[static_cast<std::size_t>(top)] = -1;
    heap_.front() = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_pos_[static_cast<std::size_t>(heap_.front())] = 0;
      heap_down(0);
    }
    return top;
  }

  void bump_var(int v) {
    if (opts_.branching == Branching::LowestIndex) return;
    auto u = static_cast<std::size_t>(v);
    if ((activity_[u] += var_inc_) > 1e100) {
      for (auto& a : activity_) a *= 1e-100;
      var_inc_ *= 1e-100;
    }
    if (heap_pos_[u] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[u]));
  }
  void bump_clause(StoredClause& c) {
    if ((c.activity += cla_inc_) > 1e20) {
      for (auto& sc : clauses_)
        if (sc.learnt) sc.activity *= 1e-20;
      cla_inc_ *= 1e-20;
    }
  }

  static constexpr double kVarDecay = 0.95;
  static constexpr double kClauseDecay = 0.999;

  SolveOptions opts_;
  SolverStats stats_;
  bool ok_ = true;
  bool seeded_ = false;
  std::vector<std::int8_t> assigns_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<double> activity_;
  std::vector<char> seen_;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;
  std::vector<std::uint64_t> tie_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<StoredClause> clauses_;
  std::vector<int> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::size_t num_learnts_ = 0;
  double max_learnts_ = 0.0;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  std::vector<bool> model_;
};

// Sat(instance) or Unsat (nullopt).
using SatResult = std::optional<Instance>;

inline void require_vocabulary(const Formula& f, const Vocabulary& vocab) {
  for (const auto& v : free_vars(f))
    if (!vocab.contains(v)) throw VocabularyError("variable '" + v.name() + "' is not in the vocabulary");
}

// Satisfying instance of f over `vocab`, or nullopt. Variables the formula
// does not constrain come back false.
inline SatResult solve(const VocabularyPtr& vocab, const Formula& f, const SolveOptions& opts = {},
                       SolverStats* stats = nullptr) {
  require_vocabulary(f, *vocab);
  auto cnf = to_cnf(f, *vocab);
  CdclSolver solver(opts);
  solver.add_cnf(cnf);
  bool sat = solver.solve();
  if (stats) *stats = solver.stats();
  if (!sat) return std::nullopt;
  Instance inst(vocab);
  for (std::size_t v = 0; v < vocab->size(); ++v) inst.set(v, solver.model_value(static_cast<int>(v) + 1));
  return inst;
}

// Pairs (i, j), i < j, of candidates that no instance tells apart. An empty
// result means the candidates are pairwise non-equivalent.
inline std::vector<std::pair<std::size_t, std::size_t>> check_nonequivalent(const CandidateSet& candidates,
                                                                            const SolveOptions& opts = {}) {
  std::vector<std::pair<std::size_t, std::size_t>> equivalent;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    for (std::size_t j = i + 1; j < candidates.size(); ++j)
      if (!solve(candidates.vocabulary_ptr(), lnot(iff(candidates[i].formula, candidates[j].formula)), opts))
        equivalent.emplace_back(i, j);
  return equivalent;
}

}  // namespace narrow
