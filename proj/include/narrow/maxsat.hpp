#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <vector>

#include "narrow/cnf.hpp"
#include "narrow/sat.hpp"

namespace narrow {

// Unweighted partial MaxSAT: satisfy `hard`, maximize the number of
// satisfied `soft` formulas.
struct PmSatProblem {
  VocabularyPtr vocabulary;
  Formula hard = lit(true);
  std::vector<Formula> soft;
};

struct PmSatOutcome {
  SatResult model;               // nullopt iff hard is unsatisfiable
  std::size_t satisfied_soft = 0;
  std::size_t sat_calls = 0;
};

// Totalizer over `inputs`: returns outputs o[0..n-1] with o[m-1] <-> (at least m
// inputs true). Both directions are encoded.
inline std::vector<Lit> build_totalizer(CnfBuilder& b, std::span<const Lit> inputs) {
  if (inputs.size() <= 1) return {inputs.begin(), inputs.end()};
  auto mid = inputs.size() / 2;
  auto left = build_totalizer(b, inputs.first(mid));
  auto right = build_totalizer(b, inputs.subspan(mid));
  std::vector<Lit> out(inputs.size());
  for (auto& o : out) o = b.new_var();
  const std::size_t p = left.size(), q = right.size();
  // at_least(x, i): i == 0 is "true", i > size is "false".
  for (std::size_t i = 0; i <= p; ++i) {
    for (std::size_t j = 0; j <= q; ++j) {
      if (i + j > 0) {
        Clause up;
        if (i > 0) up.push_back(-left[i - 1]);
        if (j > 0) up.push_back(-right[j - 1]);
        up.push_back(out[i + j - 1]);
        b.add_clause(std::move(up));
      }
      if (i + j < p + q) {
        Clause down;
        if (i < p) down.push_back(left[i]);
        if (j < q) down.push_back(right[j]);
        down.push_back(-out[i + j]);
        b.add_clause(std::move(down));
      }
    }
  }
  return out;
}

// Exact optimum by binary search on the number of satisfied soft formulas.
// Each probe is an independent SAT call on hard + totalizer + one bound unit.
inline PmSatOutcome pmaxsolve(const PmSatProblem& p, const SolveOptions& opts = {}) {
  require_vocabulary(p.hard, *p.vocabulary);
  for (const auto& s : p.soft) require_vocabulary(s, *p.vocabulary);

  CnfBuilder builder(*p.vocabulary);
  builder.assert_formula(p.hard);
  std::vector<Lit> indicators;
  for (const auto& s : p.soft) indicators.push_back(builder.literal(simplify(s)));
  auto at_least = build_totalizer(builder, indicators);
  const CnfFormula base = builder.take();

  PmSatOutcome out;
  auto probe = [&](std::size_t bound) -> SatResult {
    CdclSolver solver(opts);
    solver.add_cnf(base);
    if (bound > 0) solver.add_clause(std::vector<Lit>{at_least[bound - 1]});
    ++out.sat_calls;
    if (!solver.solve()) return std::nullopt;
    Instance inst(p.vocabulary);
    for (std::size_t v = 0; v < p.vocabulary->size(); ++v)
      inst.set(v, solver.model_value(static_cast<int>(v) + 1));
    return inst;
  };
  auto count = [&](const Instance& i) {
    std::size_t n = 0;
    for (const auto& s : p.soft) n += eval(s, i) ? 1 : 0;
    return n;
  };

  out.model = probe(0);
  if (!out.model) return out;
  std::size_t lo = count(*out.model), hi = p.soft.size();
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo + 1) / 2;
    if (auto m = probe(mid)) {
      lo = std::max(mid, count(*m));
      out.model = std::move(m);
    } else {
      hi = mid - 1;
    }
  }
  out.satisfied_soft = lo;
  return out;
}

}  // namespace narrow
