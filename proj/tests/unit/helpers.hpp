#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mil/logic.hpp"
#include "mil/syntax.hpp"

namespace testing {

inline mil::Metarule mr(std::string_view text, std::string name = "") {
  return mil::make_metarule(std::move(name), mil::parse_clause(text, mil::Mode::metarule));
}

inline mil::Clause cl(std::string_view text) { return mil::parse_clause(text); }
inline mil::Atom at(std::string_view text) { return mil::parse_atom(text); }

inline bool same(const mil::Clause& a, const mil::Clause& b) { return mil::alpha_equivalent(a, b); }

template <class Ms>
bool contains_alpha(const Ms& ms, const mil::Metarule& m) {
  for (const auto& x : ms)
    if (mil::alpha_equivalent(x.clause, m.clause)) return true;
  return false;
}

}  // namespace testing
