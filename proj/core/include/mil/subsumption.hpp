#pragma once

// Meta-subsumption and the specialisation relations between metarules.

#include <optional>

#include "mil/term.hpp"

namespace mil {

// A witness w with apply(c,w) a subset of d. Both clauses are read as literal
// sets; literals of c go to distinct literals of d with the same sign, so a
// longer clause never subsumes a shorter one. Variables of d are rigid.
std::optional<MetaSubstitution> meta_subsumes(const Clause& c, const Clause& d);
inline std::optional<MetaSubstitution> meta_subsumes(const Metarule& c, const Metarule& d) {
  return meta_subsumes(c.clause, d.clause);
}

// apply(m1,w) equals m2 as a literal set.
bool is_v_spec(const Clause& m1, const Clause& m2);
// m2 is m1 plus extra literals, up to a renaming of m1's variables.
bool is_l_spec(const Clause& m1, const Clause& m2);
// apply(m1,w) plus some literal set L equals m2.
bool is_vl_spec(const Clause& m1, const Clause& m2);

inline bool is_v_spec(const Metarule& a, const Metarule& b) { return is_v_spec(a.clause, b.clause); }
inline bool is_l_spec(const Metarule& a, const Metarule& b) { return is_l_spec(a.clause, b.clause); }
inline bool is_vl_spec(const Metarule& a, const Metarule& b) { return is_vl_spec(a.clause, b.clause); }

// Every variable occurrence becomes a new variable: first-order ones
// universal, predicate ones existential. Accepts sort or matrix input.
Metarule generalise_to_matrix(const Metarule& s);
// Every literal becomes a new atom variable.
Metarule generalise_to_punch(const Metarule& m);

}  // namespace mil
