#pragma once

// Metarule learning: specialisation of punch and matrix metarules into
// fully-connected sort metarules (TOIL-3 and TOIL-2).

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mil/learner.hpp"
#include "mil/resolution.hpp"
#include "mil/term.hpp"

namespace mil {

// Constant -> number of first-order variables it substitutes, with an undo
// trail. Entries are kept in insertion order.
class SubstitutionBuffer {
 public:
  SubstitutionBuffer() = default;
  SubstitutionBuffer(std::initializer_list<std::pair<Term, std::size_t>> init);

  void add(const Term& c);
  std::size_t count(const Term& c) const;
  std::size_t mark() const { return trail_.size(); }
  void undo(std::size_t mark);

  std::vector<Term> constants() const;
  // Entries with count 1.
  std::size_t singletons() const;
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<std::pair<Term, std::size_t>> entries_;
  std::vector<std::size_t> trail_;  // entry index incremented, or appended
};

// Ground terms bound to universal variables become universal variables, those
// bound to existential first-order variables become existential variables, one
// per distinct term. Each predicate symbol binding gets its own existential
// second-order variable; atom bindings are lifted argument-wise. Variables are
// visited in first-occurrence order of `context` when given. Throws on a
// non-ground substitution.
MetaSubstitution lift(const MetaSubstitution& ms, const Clause* context = nullptr);

// True when the count-1 constants of the buffer can still be matched by the
// free first-order variables of a partly ground instance.
bool look_ahead(std::size_t free_variables, const SubstitutionBuffer& s);
bool look_ahead(const Clause& instance, const SubstitutionBuffer& s);

// One second-order atom of fresh variables per distinct head arity in b_star.
std::vector<Atom> matrix_atoms(const Metarule& punch, const std::vector<Clause>& b_star);

struct ToilConfig {
  ProofConfig proof;
  double sample_rate = 1.0;
  std::size_t max_specialisations = 1;  // per example and input metarule
  bool cover_set = true;
  bool look_ahead = true;
  std::size_t max_inventions = 0;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

// Everything that went into one yielded metarule.
struct LiftRecord {
  Atom example;
  Metarule input;
  MetaSubstitution ground;  // binds the input's variables
  Clause ground_instance;
  Metarule output;
};
using LiftLog = std::function<void(const LiftRecord&)>;

struct VlResult {
  std::vector<Metarule> metarules;  // distinct up to renaming, in yield order
  std::size_t inferences = 0;
  bool budget_exceeded = false;
};

// Fully-connected sort metarules M.Lift(w) for ground instances of the input
// metarules whose head is e and whose body is refuted by b_star. At most
// `max_yields` distinct metarules are returned.
VlResult vl_specialise(const Atom& e, const Program& b_star, const std::vector<Metarule>& metarules,
                       const std::vector<std::string>& invented_pool, const ToilConfig& cfg,
                       std::size_t max_yields = SIZE_MAX, const LiftLog& log = {});
VlResult vl_specialise(const Atom& e, const std::vector<Clause>& b_star, const std::vector<Metarule>& metarules,
                       const std::vector<std::string>& invented_pool, const ToilConfig& cfg,
                       std::size_t max_yields = SIZE_MAX, const LiftLog& log = {});

struct ToilResult {
  std::vector<Metarule> metarules;  // named m1, m2, .. in learning order
  std::vector<Atom> sample;
  std::size_t inferences = 0;
  std::size_t covered = 0;  // examples dropped by the cover-set step
};

// Runs vl_specialise over a seeded sample of E+ with B* = B + sample.
ToilResult toil_learn(const MilProblem& problem, const ToilConfig& cfg, const LiftLog& log = {});

}  // namespace mil
