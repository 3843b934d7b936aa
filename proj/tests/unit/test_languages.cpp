#include <doctest.h>

#include <cstdint>

#include "helpers.hpp"
#include "mil/languages.hpp"
#include "mil/problems.hpp"
#include "mil/subsumption.hpp"

using namespace mil;
using testing::mr;

namespace {

// Plain 64-bit arithmetic, independent of the multiprecision code.
std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::uint64_t power(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

TEST_SUITE("languages") {

TEST_CASE("small closed forms") {
  CHECK(punch_count(4) == 4);
  CHECK(matrix_count_exact(2, 3) == 6);
  CHECK(to_decimal(matrix_bound(3, 3)) == "13.5");
  CHECK(to_decimal(sort_bound(2)) == "4.5");
  CHECK(to_decimal(sort_bound(3)) == "20.8333");
  CHECK(metasub_exact(1, 2, 3, 3, 4) == 12);
  CHECK(metasub_exact(1, 2, 3, 3, 2) == 0);
  CHECK(ground_exact(3, 3) == 27);
  CHECK(to_decimal(Rational(1, 3), 2) == "0.33");
  CHECK(to_decimal(Rational(2, 3), 2) == "0.67");
  CHECK(to_decimal(Rational(5)) == "5");
}

TEST_CASE("punch enumeration") {
  for (std::size_t k = 1; k <= 5; ++k) {
    auto ms = enumerate_punch(k);
    CHECK(ms.size() == k);
    for (const auto& m : ms) CHECK(m.taxon == Taxon::punch);
  }
}

TEST_CASE("matrix subsets match k * C(a,k)") {
  for (std::size_t a = 1; a <= 5; ++a)
    for (std::size_t k = 1; k <= a; ++k) {
      auto ms = enumerate_matrix_subsets(k, a);
      CHECK(ms.size() == k * choose(a, k));
      CHECK(BigInt(ms.size()) == matrix_count_exact(k, a));
      // a^k/k! never undercounts C(a,k)
      CHECK(Rational(static_cast<long long>(ms.size())) <= matrix_bound(k, a));
    }
}

TEST_CASE("matrix enumeration by arity") {
  auto ms = enumerate_matrix(2, {2});
  REQUIRE(ms.size() == 1);
  CHECK(testing::same(ms[0].clause, library_metarule("Meta-monadic")->clause));
  auto ds = enumerate_matrix(3, {2});
  REQUIRE(ds.size() == 1);
  CHECK(testing::same(ds[0].clause, library_metarule("Meta-dyadic")->clause));
  // head arity 1 or 2, body a multiset of {1,2}
  CHECK(enumerate_matrix(2, {1, 2}).size() == 4);
  for (const auto& m : enumerate_matrix(3, {1, 2})) CHECK(m.taxon == Taxon::matrix);
}

TEST_CASE("multisets") {
  for (std::size_t n = 1; n <= 6; ++n) {
    auto all = enumerate_multisets(n);
    CHECK(all.size() == choose(2 * n - 1, n));
    CHECK(enumerate_sort_multisets(n).size() == all.size() - 1);
    CHECK(Rational(static_cast<long long>(all.size())) <= sort_bound(n));
  }
  CHECK(enumerate_multisets(2).size() == 3);
}

TEST_CASE("metasubstitutions and ground substitutions") {
  std::vector<std::string> h{"p"}, b{"q", "r"}, c{"a", "b", "c"};
  auto ms = enumerate_metasubstitutions(h, b, c, 3, 4);
  CHECK(ms.size() == 12);
  std::set<std::vector<std::string>> distinct(ms.begin(), ms.end());
  CHECK(distinct.size() == ms.size());
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t e = k; e <= 5; ++e) {
      auto n = enumerate_metasubstitutions({"p", "q"}, {"p", "q", "r"}, {"a", "b"}, k, e).size();
      CHECK(n == 2 * power(3, k - 1) * power(2, e - k));
      CHECK(BigInt(n) == metasub_exact(2, 3, 2, k, e));
    }
  for (std::size_t u = 0; u <= 4; ++u) CHECK(enumerate_ground(c, u).size() == power(3, u));
  CHECK(Rational(static_cast<long long>(enumerate_ground(c, 3).size())) <= ground_bound(3, 3));
}

TEST_CASE("guard stops oversized enumerations") {
  bool thrown = false;
  try {
    enumerate_ground({"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"}, 7);
  } catch (const TooLarge& e) {
    thrown = true;
    CHECK(e.projected() == BigInt(10000000));
  }
  CHECK(thrown);
}

TEST_CASE("sort enumeration below Meta-monadic") {
  SortOptions o;
  o.fully_connected_only = true;
  o.range_restricted = true;
  auto mono = *library_metarule("Meta-monadic");
  auto ms = enumerate_sort(mono, o);
  CHECK(ms.size() == 5);
  for (const char* s : {"P(x,x) :- Q(x,x)", "P(x,x) :- Q(x,y)", "P(x,x) :- Q(y,x)"})
    CHECK(testing::contains_alpha(ms, mr(s)));
  CHECK(testing::contains_alpha(ms, *library_metarule("Identity")));
  CHECK(testing::contains_alpha(ms, *library_metarule("Inverse")));
  for (const auto& m : ms) {
    CHECK(m.taxon == Taxon::sort);
    CHECK(meta_subsumes(mono, m));
  }
  CHECK_THROWS_AS(enumerate_sort(*library_metarule("Chain")), Error);
}

TEST_CASE("sort enumeration below Meta-dyadic covers the canonical table") {
  SortOptions o;
  o.fully_connected_only = true;
  o.distinct_head_variables = true;
  o.range_restricted = true;
  auto dyadic = *library_metarule("Meta-dyadic");
  auto ms = enumerate_sort(dyadic, o);
  for (const auto& s : canonical_h22())
    if (s.clause.size() == 3) CHECK(testing::contains_alpha(ms, s));
  for (const auto& m : ms) {
    CHECK(fully_connected(m));
    CHECK(meta_subsumes(dyadic, m));
  }
  // unfiltered: at most Bell(6) partitions of the six argument positions
  CHECK(enumerate_sort(dyadic).size() <= 203);
}

TEST_CASE("bound dominates the composed enumeration") {
  for (std::size_t k = 1; k <= 2; ++k)
    for (std::size_t n = 1; n <= 3; ++n) {
      CountParams q{k, 2, n, 2, 2};
      CHECK(Rational(composed_language_count(q)) <= language_bound(q));
    }
}

TEST_CASE("parameter validation") {
  CountParams q{0, 1, 1, 1, 1};
  CHECK_THROWS_AS(q.validate(), Error);
  LanguageDescriptor d{3, 2, {2}};
  CHECK_THROWS_AS(d.validate(), Error);
}

}  // TEST_SUITE
