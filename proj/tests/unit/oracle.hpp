#pragma once

// Brute-force bottom-up evaluation of function-free definite programs. Kept
// independent of the resolution engine: its own matcher, no unifier.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mil/term.hpp"

namespace oracle {

using Env = std::map<std::string, mil::Term>;

inline bool match(const mil::Term& pattern, const mil::Term& ground, Env& env) {
  if (pattern.is_var()) {
    auto it = env.find(pattern.name().str());
    if (it == env.end()) {
      env.emplace(pattern.name().str(), ground);
      return true;
    }
    return it->second == ground;
  }
  return pattern == ground;
}

inline bool match(const mil::Atom& pattern, const mil::Atom& ground, Env& env) {
  if (pattern.pred() != ground.pred() || pattern.arity() != ground.arity()) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match(pattern.args()[i], ground.args()[i], env)) return false;
  return true;
}

inline mil::Atom substitute(const mil::Atom& a, const Env& env) {
  std::vector<mil::Term> args;
  for (const auto& t : a.args()) args.push_back(t.is_var() ? env.at(t.name().str()) : t);
  return mil::Atom(a.pred(), args);
}

// Least Herbrand model. Rules must be range-restricted.
inline std::set<mil::Atom> least_model(const std::vector<mil::Clause>& program) {
  std::set<mil::Atom> facts;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& c : program) {
      auto body = c.body();
      std::vector<Env> envs{Env{}};
      for (const auto& b : body) {
        std::vector<Env> next;
        for (const auto& env : envs)
          for (const auto& f : facts) {
            Env e = env;
            if (match(b, f, e)) next.push_back(std::move(e));
          }
        envs = std::move(next);
      }
      for (const auto& env : envs)
        if (facts.insert(substitute(c.head(), env)).second) changed = true;
    }
  }
  return facts;
}

}  // namespace oracle
