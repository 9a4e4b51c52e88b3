#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "narrow/bench.hpp"
#include "narrow/candidates.hpp"
#include "narrow/formula.hpp"
#include "narrow/parser.hpp"

namespace narrow::testing {

// phi1 = a | b, phi2 = !b, phi3 = a, phi4 = a -> b over {a, b}.
inline CandidateSet toy_candidates() {
  return CandidateSet({{"phi1", parse("a | b")}, {"phi2", parse("!b")}, {"phi3", parse("a")}, {"phi4", parse("a -> b")}});
}

// The four key-policy repairs, reduced to one employee:
//   lab  - the employee owns a key that opens the secure lab
//   safe - the employee owns a key that does not open the lab
//   res  - every researcher owns a key that opens the lab
inline CandidateSet key_policy_candidates() {
  return CandidateSet({{"KeyPolicyFix1", parse("!lab & safe")},
                       {"KeyPolicyFix2", parse("!lab")},
                       {"KeyPolicyFix3", parse("!lab & !safe")},
                       {"KeyPolicyFix4", parse("!lab & safe & res")}});
}

// Brute-force truth value of f under the assignment packed in `mask`
// (bit j = vocabulary variable j), through the reference evaluator.
inline bool truth(const Formula& f, const Vocabulary& vocab, std::uint64_t mask) {
  return evaluate(f, [&](const VariableId& v) { return ((mask >> *vocab.index_of(v)) & 1u) != 0; });
}

}  // namespace narrow::testing
