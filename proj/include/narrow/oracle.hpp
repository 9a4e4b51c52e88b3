#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <unordered_map>
#include <vector>

#include "narrow/candidates.hpp"
#include "narrow/error.hpp"
#include "narrow/formula.hpp"

// Brute-force reference implementations. Exponential by construction; they
// exist to check the solver-based paths on small inputs.
namespace narrow::oracle {

inline constexpr std::size_t kDefaultCap = 16;

// Row r of the enumeration, with the first vocabulary variable as the most
// significant bit.
inline Instance instance_at(const VocabularyPtr& vocab, std::uint64_t row) {
  Instance i(vocab);
  const std::size_t n = vocab->size();
  for (std::size_t j = 0; j < n; ++j) i.set(j, (row >> (n - 1 - j)) & 1u);
  return i;
}

// All 2^|V| instances, ordered by counting up in binary.
inline std::vector<Instance> enumerate(const VocabularyPtr& vocab, std::size_t cap = kDefaultCap) {
  if (vocab->size() > cap) throw CapExceeded("vocabulary of " + std::to_string(vocab->size()) + " variables exceeds cap");
  std::vector<Instance> out;
  const std::uint64_t rows = std::uint64_t{1} << vocab->size();
  out.reserve(rows);
  for (std::uint64_t r = 0; r < rows; ++r) out.push_back(instance_at(vocab, r));
  return out;
}

// Truth table of every candidate over every instance: rows are instances in
// enumeration order; bit i of a row is candidate i's value there.
class SignatureMatrix {
 public:
  SignatureMatrix(const CandidateSet& candidates, std::size_t cap = kDefaultCap) : vocab_(candidates.vocabulary_ptr()) {
    const std::size_t n = vocab_->size();
    if (n > cap) throw CapExceeded("vocabulary of " + std::to_string(n) + " variables exceeds cap");
    if (candidates.size() > 64) throw CapExceeded("signature matrix supports at most 64 candidates");
    columns_ = candidates.size();
    std::vector<CompiledFormula> compiled;
    for (const auto& c : candidates) compiled.emplace_back(c.formula, *vocab_);
    const std::uint64_t rows = std::uint64_t{1} << n;
    rows_.resize(rows);
    for (std::uint64_t r = 0; r < rows; ++r) {
      std::uint64_t mask = 0;
      for (std::size_t j = 0; j < n; ++j)
        if ((r >> (n - 1 - j)) & 1u) mask |= std::uint64_t{1} << j;
      std::uint64_t row = 0;
      for (std::size_t i = 0; i < compiled.size(); ++i)
        if (compiled[i](mask)) row |= std::uint64_t{1} << i;
      rows_[r] = row;
    }
  }

  std::size_t row_count() const { return rows_.size(); }
  std::size_t column_count() const { return columns_; }
  bool cell(std::uint64_t row, std::size_t candidate) const { return (rows_[row] >> candidate) & 1u; }
  std::uint64_t row_mask(std::uint64_t row) const { return rows_[row]; }
  Instance instance(std::uint64_t row) const { return instance_at(vocab_, row); }

  bool equivalent(std::size_t i, std::size_t j) const {
    return std::all_of(rows_.begin(), rows_.end(), [&](std::uint64_t r) { return ((r >> i) & 1u) == ((r >> j) & 1u); });
  }
  bool columns_distinct() const {
    for (std::size_t i = 0; i < columns_; ++i)
      for (std::size_t j = i + 1; j < columns_; ++j)
        if (equivalent(i, j)) return false;
    return true;
  }

 private:
  VocabularyPtr vocab_;
  std::size_t columns_ = 0;
  std::vector<std::uint64_t> rows_;
};

struct MinimalSuite {
  std::size_t size = 0;
  std::vector<Instance> witness;
};

// Exact minimum narrowing suite by exhaustive subset search. Instances are
// first collapsed to one representative per distinct row of the signature
// matrix; sizes are then tried upward from ceil(log2 N).
inline MinimalSuite min_suite_bruteforce(const CandidateSet& candidates, std::size_t cap = kDefaultCap) {
  if (candidates.size() > cap) throw CapExceeded(std::to_string(candidates.size()) + " candidates exceed cap");
  SignatureMatrix m(candidates, cap);
  if (!m.columns_distinct()) throw NoNarrowingSet("candidates are not pairwise non-equivalent");

  const std::size_t n = candidates.size();
  const std::uint64_t full = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  std::vector<std::uint64_t> reps;  // first row index of each informative row class
  {
    std::unordered_map<std::uint64_t, std::uint64_t> first;
    for (std::uint64_t r = 0; r < m.row_count(); ++r) {
      auto mask = m.row_mask(r);
      if (mask == 0 || mask == full) continue;
      if (first.emplace(mask, r).second) reps.push_back(r);
    }
  }

  std::vector<std::uint64_t> chosen;
  std::function<bool(std::size_t, std::size_t, const std::vector<std::uint64_t>&)> search =
      [&](std::size_t budget, std::size_t start, const std::vector<std::uint64_t>& codes) {
        std::vector<std::uint64_t> sorted = codes;
        std::sort(sorted.begin(), sorted.end());
        std::size_t largest = 1, run = 1;
        for (std::size_t i = 1; i < sorted.size(); ++i) {
          run = sorted[i] == sorted[i - 1] ? run + 1 : 1;
          largest = std::max(largest, run);
        }
        if (largest == 1) return true;
        // b more instances split a class into at most 2^b parts.
        if (budget == 0 || (budget < 63 && largest > (std::uint64_t{1} << budget))) return false;
        for (std::size_t r = start; r < reps.size(); ++r) {
          auto row = m.row_mask(reps[r]);
          std::vector<std::uint64_t> next(codes.size());
          for (std::size_t i = 0; i < codes.size(); ++i) next[i] = (codes[i] << 1) | ((row >> i) & 1u);
          chosen.push_back(reps[r]);
          if (search(budget - 1, r + 1, next)) return true;
          chosen.pop_back();
        }
        return false;
      };

  for (std::size_t k = ceil_log2(n); k < n; ++k) {
    chosen.clear();
    if (search(k, 0, std::vector<std::uint64_t>(n, 0))) {
      MinimalSuite out{chosen.size(), {}};
      for (auto r : chosen) out.witness.push_back(m.instance(r));
      return out;
    }
  }
  throw NoNarrowingSet("no narrowing suite of at most N-1 instances");
}

}  // namespace narrow::oracle
