#pragma once

#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "narrow/error.hpp"
#include "narrow/formula.hpp"

namespace narrow {

// ceil(log2 n) for n >= 1.
inline std::size_t ceil_log2(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  return k;
}

struct Candidate {
  std::string name;
  Formula formula;
};

// The formulas to narrow down, with the vocabulary they are defined over.
// The vocabulary is exactly the union of the candidates' free variables.
class CandidateSet {
 public:
  // Vocabulary order defaults to first occurrence across the candidates.
  // A fixed order must list exactly the variables the candidates use.
  explicit CandidateSet(std::vector<Candidate> candidates,
                        std::optional<std::vector<VariableId>> order = std::nullopt)
      : candidates_(std::move(candidates)) {
    if (candidates_.size() < 2) throw Error("at least two candidates are required");
    std::unordered_set<std::string> names;
    std::vector<VariableId> used;
    std::unordered_set<std::string> used_names;
    for (const auto& c : candidates_) {
      if (c.name.empty()) throw Error("candidate names must be non-empty");
      if (!names.insert(c.name).second) throw Error("duplicate candidate name '" + c.name + "'");
      for (auto& v : free_vars(c.formula))
        if (used_names.insert(v.name()).second) used.push_back(v);
    }
    if (order) {
      Vocabulary fixed(*order);
      for (const auto& v : used)
        if (!fixed.contains(v)) throw VocabularyError("variable '" + v.name() + "' missing from the variable order");
      for (const auto& v : fixed)
        if (!used_names.count(v.name()))
          throw VocabularyError("variable '" + v.name() + "' does not occur in any candidate");
      used = *order;
    }
    vocab_ = make_vocabulary(std::move(used));
  }

  std::size_t size() const { return candidates_.size(); }
  const Candidate& operator[](std::size_t i) const { return candidates_[i]; }
  const std::vector<Candidate>& candidates() const { return candidates_; }
  auto begin() const { return candidates_.begin(); }
  auto end() const { return candidates_.end(); }

  const Vocabulary& vocabulary() const { return *vocab_; }
  const VocabularyPtr& vocabulary_ptr() const { return vocab_; }

  std::optional<std::size_t> find(std::string_view name) const {
    for (std::size_t i = 0; i < candidates_.size(); ++i)
      if (candidates_[i].name == name) return i;
    return std::nullopt;
  }

 private:
  std::vector<Candidate> candidates_;
  VocabularyPtr vocab_;
};

}  // namespace narrow
