#pragma once

// Metarule-language descriptors, cardinality bounds and brute-force
// enumerators used to check them.

#include <boost/multiprecision/cpp_int.hpp>
#include <cstddef>
#include <string>
#include <vector>

#include "mil/term.hpp"

namespace mil {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Decimal rendering with `digits` places after the point (exact for integers).
std::string to_decimal(const Rational& r, int digits = 4);

// Literal-count interval and permitted arities (empty = any).
struct LanguageDescriptor {
  std::size_t min_literals = 1;
  std::size_t max_literals = 1;
  std::vector<std::size_t> arities;

  void validate() const;
};

struct CountParams {
  std::size_t k = 1;  // literals
  std::size_t a = 1;  // matrix atom set size
  std::size_t n = 1;  // variables, e + u
  std::size_t p = 1;  // predicate symbols
  std::size_t c = 1;  // constants

  void validate() const;
};

// Refusal to enumerate past the guard.
class TooLarge : public Error {
 public:
  TooLarge(const std::string& what, BigInt projected) : Error(what), projected_(std::move(projected)) {}
  const BigInt& projected() const { return projected_; }

 private:
  BigInt projected_;
};

inline constexpr std::size_t kEnumerationGuard = 1000000;

BigInt binomial(std::size_t n, std::size_t k);
BigInt factorial(std::size_t n);

BigInt punch_count(std::size_t k);
BigInt matrix_count_exact(std::size_t k, std::size_t a);
Rational matrix_bound(std::size_t k, std::size_t a);
Rational sort_bound(std::size_t n);
Rational metasub_bound(std::size_t p, std::size_t c, std::size_t k, std::size_t n);
// h * b^(k-1) * c^(e-k); zero when e < k.
BigInt metasub_exact(std::size_t h, std::size_t b, std::size_t c, std::size_t k, std::size_t e);
Rational ground_bound(std::size_t c, std::size_t n);
BigInt ground_exact(std::size_t c, std::size_t u);
Rational language_bound(const CountParams& params);

// Punch metarules of length 1..k.
std::vector<Metarule> enumerate_punch(std::size_t k);

// Matrix metarules over a set of `a` distinct atoms: every k-subset with each
// member taken as the head in turn. Atoms get arities 1..a so that no two
// clauses coincide up to renaming.
std::vector<Metarule> enumerate_matrix_subsets(std::size_t k, std::size_t a);

// Matrix metarules of exactly k literals whose arities come from `arities`,
// distinct up to renaming.
std::vector<Metarule> enumerate_matrix(std::size_t k, const std::vector<std::size_t>& arities);

struct SortOptions {
  bool fully_connected_only = false;
  bool distinct_head_variables = false;  // no variable repeated in the head
  bool range_restricted = false;         // every head variable occurs in the body
  bool existential_first_order = false;  // also try existential first-order variables
};

// Sort metarules from identifying first-order argument positions of m (set
// partitions of the positions), distinct up to renaming.
std::vector<Metarule> enumerate_sort(const Metarule& m, const SortOptions& opts = {});

// Multisets of size n over n variable symbols in which some symbol repeats,
// as sorted multiplicity vectors.
std::vector<std::vector<std::size_t>> enumerate_sort_multisets(std::size_t n);
// All multisets of size n over n symbols.
std::vector<std::vector<std::size_t>> enumerate_multisets(std::size_t n);

// Metasubstitution tuples (H, B1..B(k-1), c1..c(e-k)).
std::vector<std::vector<std::string>> enumerate_metasubstitutions(const std::vector<std::string>& heads,
                                                                  const std::vector<std::string>& bodies,
                                                                  const std::vector<std::string>& constants,
                                                                  std::size_t k, std::size_t e);
// Tuples of constants for u universal variables.
std::vector<std::vector<std::string>> enumerate_ground(const std::vector<std::string>& constants, std::size_t u);

// Per-stage enumerations multiplied together, summed over lengths 1..k: the
// brute-force counterpart of language_bound. Second-order variables take
// their symbols from p predicates, the remaining n-i variables are universal.
BigInt composed_language_count(const CountParams& params);

}  // namespace mil
