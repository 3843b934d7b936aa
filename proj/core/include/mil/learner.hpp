#pragma once

// Clause construction by resolution against B* = B + E+, and Top Program
// Construction with negative-example filtering.

#include <cstddef>
#include <string>
#include <vector>

#include "mil/resolution.hpp"
#include "mil/term.hpp"

namespace mil {

struct MilProblem {
  std::string name;
  std::vector<Atom> pos;
  std::vector<Atom> neg;
  std::vector<Clause> bk;
  std::vector<Metarule> metarules;
  std::vector<std::string> invented;  // ordered symbol pool
  ProofConfig config;

  // Throws on non-ground or overlapping examples and non-definite BK.
  void validate() const;
  // Target predicate symbols (heads of E+ and E-), in first-seen order.
  std::vector<std::string> targets() const;
};

// "$1".."$n"
std::vector<std::string> default_invented_pool(std::size_t n = 8);

// One metarule instance: clause = apply(metarule, theta).
struct Instance {
  Metarule metarule;
  MetaSubstitution theta;
  Clause clause;
};

struct ConstructConfig {
  ProofConfig proof;
  // Upper bound on invented predicates in one derivation; the pool size caps
  // it as well.
  std::size_t max_inventions = SIZE_MAX;
  // Stop after this many successful derivations.
  std::size_t max_proofs = SIZE_MAX;
  // Derivations using an instance whose head repeats in its body are
  // dropped unless this is set.
  bool allow_tautologies = false;
};

struct ConstructResult {
  std::vector<Instance> instances;  // deduplicated, in discovery order
  std::size_t proofs = 0;
  std::size_t inferences = 0;
  std::size_t inventions = 0;  // invention depth at which proofs were found
  bool budget_exceeded = false;
};

// All metarule instances used by derivations of e. Body literals are first
// refuted against b_star; a ground literal with an unbound predicate that
// fails there is given a fresh symbol from the pool and constructed in turn.
// Invention depth grows from zero and stops at the first depth with any
// derivation. Throws "invention depth exceeded" when nothing was derived and
// some derivation ran out of pool symbols.
ConstructResult construct(const Atom& e, const std::vector<Clause>& b_star, const std::vector<Metarule>& metarules,
                          const std::vector<std::string>& invented_pool, const ConstructConfig& cfg);

struct Hypothesis {
  std::vector<Instance> clauses;

  // Diagnostics of the run that produced it.
  std::vector<Atom> budget_exceeded;  // examples whose construction was cut
  std::vector<Clause> removed;        // dropped by the specialise step
  std::size_t inferences = 0;

  std::vector<Clause> program() const;
  bool empty() const { return clauses.empty(); }
};

// Generalise: construct each example against B + E+ without invention; an
// example with no such derivation is retried with invention, seeing the
// clauses learned for earlier examples. Invented predicates with identical definitions
// are merged and renumbered. Specialise: drop clauses responsible for
// entailing any E- until none is entailed.
Hypothesis top_program(const MilProblem& problem);

// (TP + TN) / (|pos| + |neg|); 0 when both are empty.
double accuracy(const Hypothesis& h, const std::vector<Clause>& bk, const std::vector<Atom>& test_pos,
                const std::vector<Atom>& test_neg, const ProofConfig& cfg);

}  // namespace mil
