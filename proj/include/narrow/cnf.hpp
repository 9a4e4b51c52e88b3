#pragma once

#include <cstdlib>
#include <span>
#include <unordered_map>
#include <vector>

#include "narrow/formula.hpp"

namespace narrow {

// DIMACS-style literal: +v / -v for variable v >= 1.
using Lit = int;
using Clause = std::vector<Lit>;

struct CnfFormula {
  // Variable v (1-based) with v <= named.size() stands for named[v - 1];
  // variables above that are auxiliary.
  std::vector<VariableId> named;
  int num_vars = 0;
  std::vector<Clause> clauses;

  int first_aux() const { return static_cast<int>(named.size()) + 1; }
  std::size_t aux_count() const { return static_cast<std::size_t>(num_vars) - named.size(); }
};

// Incremental Tseitin encoder. Named variables are numbered in vocabulary
// order before any auxiliary variable, so solver branching sees the
// vocabulary order first.
class CnfBuilder {
 public:
  explicit CnfBuilder(const Vocabulary& vocab) : vocab_(vocab) {
    cnf_.named = vocab.vars();
    cnf_.num_vars = static_cast<int>(vocab.size());
  }

  Lit new_var() { return ++cnf_.num_vars; }
  void add_clause(Clause c) { cnf_.clauses.push_back(std::move(c)); }

  // Asserts f. Top-level conjunctions become separate clause groups and
  // top-level disjunctions a single clause where possible.
  void assert_formula(const Formula& f) {
    auto g = simplify(f);
    roots_.push_back(g);
    if (g.is_const()) {
      if (!g.value()) add_clause({});
      return;
    }
    assert_simplified(g);
  }

  // A literal equivalent to f.
  Lit literal(const Formula& f) {
    roots_.push_back(f);
    return encode(f);
  }

  Lit named_var(const VariableId& v) const {
    auto idx = vocab_.index_of(v);
    if (!idx) throw VocabularyError("variable '" + v.name() + "' is not in the vocabulary");
    return static_cast<Lit>(*idx) + 1;
  }

  const CnfFormula& cnf() const { return cnf_; }
  CnfFormula take() { return std::move(cnf_); }

 private:
  Lit encode(const Formula& f) {
    switch (f.op()) {
      case Op::Const: {
        if (!true_lit_) {
          true_lit_ = new_var();
          add_clause({true_lit_});
        }
        return f.value() ? true_lit_ : -true_lit_;
      }
      case Op::Var: return named_var(f.var());
      case Op::Not: return -encode(f.lhs());
      default: break;
    }
    if (auto it = cache_.find(f.id()); it != cache_.end()) return it->second;
    Lit out = 0;
    switch (f.op()) {
      case Op::And:
      case Op::Or: {
        std::vector<Lit> in;
        flatten(f, f.op(), in);
        out = new_var();
        const int s = f.op() == Op::And ? 1 : -1;  // Or is And with every literal negated
        Clause big{s * out};
        for (Lit l : in) {
          add_clause({-s * out, s * l});
          big.push_back(-s * l);
        }
        add_clause(std::move(big));
        break;
      }
      case Op::Implies: {
        Lit a = encode(f.lhs()), b = encode(f.rhs());
        out = new_var();
        add_clause({-out, -a, b});
        add_clause({out, a});
        add_clause({out, -b});
        break;
      }
      case Op::Iff: {
        Lit a = encode(f.lhs()), b = encode(f.rhs());
        out = new_var();
        add_clause({-out, -a, b});
        add_clause({-out, a, -b});
        add_clause({out, a, b});
        add_clause({out, -a, -b});
        break;
      }
      default: break;
    }
    cache_.emplace(f.id(), out);
    return out;
  }

  void flatten(const Formula& f, Op op, std::vector<Lit>& out) {
    if (f.op() == op && !cache_.count(f.id())) {
      flatten(f.lhs(), op, out);
      flatten(f.rhs(), op, out);
    } else {
      out.push_back(encode(f));
    }
  }

  void assert_simplified(const Formula& f) {
    switch (f.op()) {
      case Op::And:
        assert_simplified(f.lhs());
        assert_simplified(f.rhs());
        return;
      case Op::Or: {
        std::vector<Lit> lits;
        flatten(f, Op::Or, lits);
        add_clause(Clause(lits.begin(), lits.end()));
        return;
      }
      case Op::Implies:
        add_clause({-encode(f.lhs()), encode(f.rhs())});
        return;
      case Op::Not:
        if (f.lhs().op() == Op::Not) return assert_simplified(f.lhs().lhs());
        [[fallthrough]];
      default:
        add_clause({encode(f)});
    }
  }

  const Vocabulary& vocab_;
  CnfFormula cnf_;
  // Cache keys are node addresses; roots_ keeps those nodes alive.
  std::unordered_map<const void*, Lit> cache_;
  std::vector<Formula> roots_;
  Lit true_lit_ = 0;
};

inline CnfFormula to_cnf(const Formula& f, const Vocabulary& vocab) {
  CnfBuilder b(vocab);
  b.assert_formula(f);
  return b.take();
}

// Vocabulary defaults to the formula's own variables.
inline CnfFormula to_cnf(const Formula& f) { return to_cnf(f, Vocabulary(free_vars(f))); }

}  // namespace narrow
