#pragma once

// Textual clause syntax. Object-level clauses follow Prolog conventions:
// lowercase identifiers, numbers and $-prefixed names are symbols, uppercase
// identifiers are variables, `head :- b1, b2.`, lists as [a,b] and [H|T].
//
// Metarule text flips the argument convention: in argument position a
// lowercase identifier is a universally quantified first-order variable and
// an uppercase one is existentially quantified. An uppercase identifier in
// predicate position is a second-order existential variable, and a bare
// uppercase atom with no argument list is a third-order atom variable.
// Constants inside metarules are written quoted: 'a'.

#include <cstddef>
#include <string>
#include <string_view>

#include "mil/term.hpp"

namespace mil {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

enum class Mode { object, metarule };

Term parse_term(std::string_view text, Mode mode = Mode::object);
Atom parse_atom(std::string_view text, Mode mode = Mode::object);
// Accepts an optional trailing period. Facts have no `:-`.
Clause parse_clause(std::string_view text, Mode mode = Mode::object);

std::string to_string(const Term& t, Mode mode = Mode::object);
std::string to_string(const Atom& a, Mode mode = Mode::object);
// `head :- b1, b2.` for definite clauses; `{l1, ~l2}` otherwise.
std::string to_string(const Clause& c, Mode mode = Mode::object);

// Implication style used in tables and CLI output: P(x,y)←Q(x,z),R(z,y).
std::string to_arrow_string(const Clause& c);

}  // namespace mil
