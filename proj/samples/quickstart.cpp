// Builds a minimal suite for four candidates and resolves a classification.
#include <iostream>

#include "narrow/classify.hpp"
#include "narrow/io.hpp"
#include "narrow/parser.hpp"
#include "narrow/synthesis.hpp"

int main() {
  using namespace narrow;
  CandidateSet candidates({{"phi1", parse("a | b")},
                           {"phi2", parse("!b")},
                           {"phi3", parse("a")},
                           {"phi4", parse("a -> b")}});

  auto greedy = synth_greedy(candidates);
  auto optimal = synth_optimal(candidates);
  std::cout << "greedy |T| = " << greedy.suite.size() << ", optimal |T| = " << optimal.suite.size() << "\n\n"
            << io::render_table(candidates, optimal.suite) << '\n';

  // Suppose the user accepts every instance.
  Signature verdicts(optimal.suite.size(), true);
  auto w = winner(candidates, optimal.suite, Classification::from_bits(verdicts));
  std::cout << "winner: " << w.value_or("none") << '\n';
}
