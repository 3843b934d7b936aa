#pragma once

#include <string>
#include <vector>

#include "mil/term.hpp"

namespace mil {

// Positive literal first, then negative literals by predicate (symbol or
// variable) name, ties by ascending arity. Stable otherwise. Throws on a
// non-definite clause.
std::vector<Literal> order_literals(const Clause& c);

// Simultaneous replacement; unbound variables are left alone.
Term apply(const Term& t, const MetaSubstitution& ms);
Atom apply(const Atom& a, const MetaSubstitution& ms);
Clause apply(const Clause& c, const MetaSubstitution& ms);

// Classifies a definite clause by the variables it carries.
Taxon classify(const Clause& c);
inline Taxon classify(const Metarule& m) { return classify(m.clause); }

// Every literal occurs once and the shared-first-order-term graph over
// literals is connected. Punch input is rejected.
bool fully_connected(const Clause& c);
inline bool fully_connected(const Metarule& m) { return fully_connected(m.clause); }

// Renames variables to P0.., x0.., X0.., A0.. (second-order, universal and
// existential first-order, atom variables) by first occurrence. Body literals
// are put in the order giving the smallest rendering, so two metarules are
// equal up to variable renaming iff their canonical clauses are identical.
Clause canonical_clause(const Clause& c);
Metarule canonical_form(const Metarule& m);
// Rendering of canonical_clause, usable as a map key.
std::string canonical_key(const Clause& c);
inline std::string canonical_key(const Metarule& m) { return canonical_key(m.clause); }
inline bool alpha_equivalent(const Clause& a, const Clause& b) { return canonical_key(a) == canonical_key(b); }

// Builds a metarule from a clause, computing its taxon.
Metarule make_metarule(std::string name, Clause clause);

inline constexpr std::string_view kEncapsulationSymbol = "m";

// S(t1..tn) becomes m(S,t1..tn). Predicate symbols become constants;
// second-order variables stay variables.
Term encapsulate(const Atom& a, std::string_view symbol = kEncapsulationSymbol);
Atom decapsulate(const Term& t, std::string_view symbol = kEncapsulationSymbol);
Clause encapsulate(const Clause& c, std::string_view symbol = kEncapsulationSymbol);
inline Clause encapsulate(const Metarule& m, std::string_view symbol = kEncapsulationSymbol) {
  return encapsulate(m.clause, symbol);
}
Metarule decapsulate(const Clause& c, std::string_view symbol = kEncapsulationSymbol);

// Table-style rendering: `∃.P,Q,R ∀.x,y,z: P(x,y)←Q(x,z),R(z,y)`, using
// conventional letters for canonical variables.
std::string quantified_string(const Metarule& m);
// Just the implication with conventional letters: P(x,y)←Q(x,z),R(z,y).
std::string pretty_metarule(const Metarule& m);

}  // namespace mil
