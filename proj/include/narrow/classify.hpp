#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "narrow/candidates.hpp"
#include "narrow/error.hpp"
#include "narrow/hash.hpp"
#include "narrow/synthesis.hpp"

namespace narrow {

struct Verdict {
  bool desirable = false;
  // Content hash of the instance the verdict was given for, when known.
  std::optional<std::uint64_t> instance_hash;
};

// A user's judgement of every instance in a suite, keyed by suite position.
struct Classification {
  std::map<std::size_t, Verdict> verdicts;

  static Classification from_bits(const Signature& bits) {
    Classification c;
    for (std::size_t k = 0; k < bits.size(); ++k) c.verdicts[k] = Verdict{bits[k], std::nullopt};
    return c;
  }
};

inline Signature signature(const Formula& f, const TestSuite& suite) {
  return signature_of(f, suite.instances());
}

// The unique candidate whose signature equals the verdicts, if any.
// "No candidate matches" is an ordinary outcome, reported as nullopt.
inline std::optional<std::string> winner(const CandidateSet& candidates, const TestSuite& suite,
                                         const Classification& c) {
  if (!verify_narrowing(candidates, suite)) throw InvalidSuite("suite does not narrow the candidates");
  Signature wanted(suite.size());
  for (std::size_t k = 0; k < suite.size(); ++k) {
    auto it = c.verdicts.find(k);
    if (it == c.verdicts.end())
      throw IncompleteClassification("instance " + std::to_string(k + 1) + " " + suite[k].to_string() +
                                     " has no verdict");
    if (it->second.instance_hash && *it->second.instance_hash != instance_hash(suite[k]))
      throw StaleInput("verdict " + std::to_string(k + 1) + " was given for a different instance than " +
                       suite[k].to_string());
    wanted[k] = it->second.desirable;
  }
  for (const auto& [k, v] : c.verdicts)
    if (k >= suite.size()) throw StaleInput("verdict for instance " + std::to_string(k + 1) + " beyond the suite");
  for (const auto& cand : candidates)
    if (signature(cand.formula, suite) == wanted) return cand.name;
  return std::nullopt;
}

}  // namespace narrow
