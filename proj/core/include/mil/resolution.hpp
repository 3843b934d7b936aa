#pragma once

// Unification and depth-bounded SLD resolution over encapsulated programs.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "mil/term.hpp"

namespace mil {

struct ProofConfig {
  std::size_t max_depth = 64;           // resolution steps along one branch
  std::size_t max_inferences = 200000;  // total resolution steps per query
  bool occurs_check = true;

  void validate() const;
};

// Triangular bindings with an undo trail. Also hands out renaming
// generations so every party working on one derivation renames apart.
class Bindings {
 public:
  const Term* lookup(const VarKey& k) const;
  void bind(const VarKey& k, Term t);
  std::size_t mark() const { return trail_.size(); }
  void undo(std::size_t mark);

  // Follows variable bindings at the top level only.
  Term walk(Term t) const;
  // Applies bindings all the way down.
  Term resolve(const Term& t) const;
  Atom resolve(const Atom& a) const;

  std::uint32_t fresh_gen() { return ++next_gen_; }
  std::size_t size() const { return map_.size(); }
  // Resolved bindings of the given variables.
  std::map<VarKey, Term> project(const std::vector<Term>& vars) const;

 private:
  std::unordered_map<VarKey, Term, VarKeyHash> map_;
  std::vector<VarKey> trail_;
  std::uint32_t next_gen_ = 0;
};

// Extends `b` to a most general unifier of x and y. On failure the bindings
// are restored and false is returned.
bool unify(const Term& x, const Term& y, Bindings& b, bool occurs_check = true);
bool unify(const Atom& x, const Atom& y, Bindings& b, bool occurs_check = true);
std::optional<Bindings> unify(const Term& x, const Term& y, const Bindings& in, bool occurs_check = true);
std::optional<Bindings> unify(const Atom& x, const Atom& y, const Bindings& in, bool occurs_check = true);

// Renames every variable in t to generation `gen`.
Term rename(const Term& t, std::uint32_t gen);

// An immutable encapsulated program: each clause S(..) :- B1(..), .. is held
// as m(S,..) :- m(B1,..), .. and indexed on the predicate argument.
class Program {
 public:
  Program() = default;
  explicit Program(const std::vector<Clause>& clauses) {
    for (const auto& c : clauses) add(c);
  }
  void add(const Clause& c);
  void add_fact(const Atom& a) { add(Clause(a, {})); }

  struct Entry {
    Term head;
    std::vector<Term> body;
    Clause source;
  };
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  // Clause indices that may resolve with a goal whose predicate is `pred`
  // (any clause when pred is unbound), in insertion order.
  const std::vector<std::size_t>& candidates(const Term& pred) const;

 private:
  std::vector<Entry> entries_;
  std::vector<std::size_t> all_;
  std::vector<std::size_t> var_headed_;
  std::unordered_map<std::uint32_t, std::vector<std::size_t>> by_pred_;
};

enum class Outcome { exhausted, stopped, budget };

struct SearchStats {
  std::size_t inferences = 0;
  bool depth_limited = false;
};

// Depth-first SLD resolution, leftmost goal first, clauses in program order.
// Callback returns false to stop the search.
class Engine {
 public:
  Engine(const Program& program, ProofConfig cfg) : program_(program), cfg_(cfg) { cfg_.validate(); }

  // Goals are encapsulated atoms; bindings are extended in place while the
  // callback runs and restored afterwards.
  Outcome solve(const std::vector<Term>& goals, Bindings& b, const std::function<bool()>& on_solution);

  const SearchStats& stats() const { return stats_; }
  const ProofConfig& config() const { return cfg_; }
  // Resets the inference counter so one engine can serve several queries.
  // Otherwise the budget is shared by every solve call, nested or not.
  void reset_stats() {
    stats_ = {};
    budget_hit_ = false;
  }
  bool budget_exhausted() const { return budget_hit_; }
  // Program clause indices used by the current derivation; meaningful inside
  // a solution callback.
  const std::vector<std::size_t>& path() const { return path_; }

 private:
  struct Goal {
    Term term;
    std::size_t depth;
  };
  bool run(std::vector<Goal>& stack, Bindings& b, const std::function<bool()>& on_solution);

  const Program& program_;
  ProofConfig cfg_;
  SearchStats stats_;
  bool budget_hit_ = false;
  std::vector<std::size_t> path_;
};

struct Refutations {
  std::vector<std::map<VarKey, Term>> answers;  // bindings of goal variables
  Outcome outcome = Outcome::exhausted;
  SearchStats stats;
};

// Refutes the conjunction of the goal atoms (the negative literals of a goal
// clause). At most `limit` answers are collected.
Refutations sld_refute(const std::vector<Atom>& goal, const Program& program, const ProofConfig& cfg,
                       std::size_t limit = SIZE_MAX);

enum class Truth { yes, no, unknown };

// Whether program |= atom, found by refutation of its negation. `unknown`
// when no refutation was found but the search was cut by a budget.
Truth entails(const Program& program, const Atom& ground_atom, const ProofConfig& cfg,
              SearchStats* stats = nullptr);

// Least Herbrand model by semi-naive bottom-up evaluation. Only for
// function-free programs whose rules are range-restricted; nullopt otherwise,
// or when the model grows past max_facts.
std::optional<std::set<Atom>> datalog_model(const std::vector<Clause>& program, std::size_t max_facts = 1000000);

// Repeated ground queries against one program: answered from the least model
// when the program is datalog, by SLD otherwise.
class Entailer {
 public:
  Entailer(const std::vector<Clause>& program, const ProofConfig& cfg);
  Truth operator()(const Atom& ground_atom);
  bool exact() const { return model_.has_value(); }
  const std::set<Atom>* model() const { return model_ ? &*model_ : nullptr; }

 private:
  std::vector<Clause> clauses_;
  ProofConfig cfg_;
  std::optional<std::set<Atom>> model_;
  std::optional<Program> program_;  // built on first SLD query
};

}  // namespace mil
