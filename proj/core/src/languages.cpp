#include "mil/languages.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "mil/logic.hpp"

namespace mil {

namespace {

BigInt power(std::size_t base, std::size_t exp) {
  BigInt r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

// Sum over k of Stirling numbers of the second kind, via the Bell triangle.
BigInt bell(std::size_t n) {
  std::vector<BigInt> row{1};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<BigInt> next{row.back()};
    for (const auto& x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}

void guard(const BigInt& projected, const std::string& what) {
  if (projected > kEnumerationGuard)
    throw TooLarge(what + ": projected " + projected.str() + " exceeds " + std::to_string(kEnumerationGuard),
                   projected);
}

Term so_var(std::size_t i) { return Term::var("P" + std::to_string(i), Order::second, Quant::existential); }
Term fo_var(std::size_t i) { return Term::var("x" + std::to_string(i)); }

void keep(std::vector<Metarule>& out, std::set<std::string>& seen, Clause c) {
  auto key = canonical_key(c);
  if (!seen.insert(key).second) return;
  out.push_back(make_metarule("", std::move(c)));
}

}  // namespace

std::string to_decimal(const Rational& r, int digits) {
  if (digits < 0) throw Error("negative digit count");
  BigInt num = boost::multiprecision::numerator(r);
  BigInt den = boost::multiprecision::denominator(r);
  bool neg = num < 0;
  if (neg) num = -num;
  BigInt scale = power(10, static_cast<std::size_t>(digits));
  BigInt scaled = (num * scale * 2 + den) / (den * 2);  // round half up
  BigInt whole = scaled / scale;
  BigInt frac = scaled % scale;
  std::string out = (neg && scaled != 0 ? "-" : "") + whole.str();
  if (frac != 0) {
    std::string f = frac.str();
    f.insert(0, static_cast<std::size_t>(digits) - f.size(), '0');
    while (!f.empty() && f.back() == '0') f.pop_back();
    out += "." + f;
  }
  return out;
}

void LanguageDescriptor::validate() const {
  if (min_literals == 0 || min_literals > max_literals) throw Error("bad literal interval");
  for (auto a : arities)
    if (a == 0) throw Error("arity 0 not allowed");
}

void CountParams::validate() const {
  if (k == 0 || a == 0 || n == 0 || p == 0 || c == 0) throw Error("count parameters must be positive");
}

BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  BigInt r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

BigInt factorial(std::size_t n) {
  BigInt r = 1;
  for (std::size_t i = 2; i <= n; ++i) r *= i;
  return r;
}

BigInt punch_count(std::size_t k) { return k; }

BigInt matrix_count_exact(std::size_t k, std::size_t a) { return binomial(a, k) * k; }

Rational matrix_bound(std::size_t k, std::size_t a) { return Rational(power(a, k) * k, factorial(k)); }

Rational sort_bound(std::size_t n) { return Rational(power(2 * n - 1, n), factorial(n)); }

Rational metasub_bound(std::size_t p, std::size_t c, std::size_t k, std::size_t n) {
  return Rational(power(p, k) * power(c, n));
}

BigInt metasub_exact(std::size_t h, std::size_t b, std::size_t c, std::size_t k, std::size_t e) {
  if (k == 0 || e < k) return 0;
  return power(b, k - 1) * power(c, e - k) * h;
}

Rational ground_bound(std::size_t c, std::size_t n) { return Rational(power(c, n)); }

BigInt ground_exact(std::size_t c, std::size_t u) { return power(c, u); }

Rational language_bound(const CountParams& q) {
  q.validate();
  Rational total = 0;
  Rational sort = sort_bound(q.n);
  for (std::size_t i = 1; i <= q.k; ++i)
    total += Rational(power(q.a, i) * i, factorial(i)) * sort * Rational(power(q.p, i) * power(q.c, 2 * q.n));
  return total;
}

std::vector<Metarule> enumerate_punch(std::size_t k) {
  std::vector<Metarule> out;
  for (std::size_t len = 1; len <= k; ++len) {
    std::vector<Literal> lits;
    for (std::size_t i = 0; i < len; ++i)
      lits.push_back({Atom::atom_var("A" + std::to_string(i)), i == 0});
    out.push_back(make_metarule("TOM-" + std::to_string(len), Clause(std::move(lits))));
  }
  return out;
}

std::vector<Metarule> enumerate_matrix_subsets(std::size_t k, std::size_t a) {
  if (k == 0) throw Error("matrix metarules need at least one literal");
  guard(matrix_count_exact(k, a), "matrix enumeration");
  std::vector<Atom> atoms;
  std::size_t fresh = 0;
  for (std::size_t i = 0; i < a; ++i) {
    std::vector<Term> args;
    for (std::size_t j = 0; j <= i; ++j) args.push_back(fo_var(fresh++));
    atoms.emplace_back(so_var(i), std::move(args));
  }
  std::vector<Metarule> out;
  std::set<std::string> seen;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t)> choose = [&](std::size_t from) {
    if (pick.size() == k) {
      for (std::size_t h = 0; h < k; ++h) {
        std::vector<Atom> body;
        for (std::size_t j = 0; j < k; ++j)
          if (j != h) body.push_back(atoms[pick[j]]);
        keep(out, seen, Clause(atoms[pick[h]], std::move(body)));
      }
      return;
    }
    for (std::size_t i = from; i < a; ++i) {
      pick.push_back(i);
      choose(i + 1);
      pick.pop_back();
    }
  };
  choose(0);
  return out;
}

std::vector<Metarule> enumerate_matrix(std::size_t k, const std::vector<std::size_t>& arities) {
  if (k == 0) throw Error("matrix metarules need at least one literal");
  std::vector<std::size_t> ar(arities);
  std::sort(ar.begin(), ar.end());
  ar.erase(std::unique(ar.begin(), ar.end()), ar.end());
  if (ar.empty()) throw Error("no arities given");
  for (auto x : ar)
    if (x == 0) throw Error("arity 0 not allowed");
  // head choice times multisets of body arities
  guard(binomial(ar.size() + k - 2, k - 1) * ar.size(), "matrix enumeration");

  std::vector<Metarule> out;
  std::set<std::string> seen;
  std::vector<std::size_t> body;
  auto build = [&](std::size_t head) {
    std::size_t fresh = 0, pred = 0;
    auto make = [&](std::size_t n) {
      std::vector<Term> args;
      for (std::size_t j = 0; j < n; ++j) args.push_back(fo_var(fresh++));
      return Atom(so_var(pred++), std::move(args));
    };
    Atom h = make(head);
    std::vector<Atom> b;
    for (auto n : body) b.push_back(make(n));
    keep(out, seen, Clause(std::move(h), std::move(b)));
  };
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (body.size() == k - 1) {
      for (auto h : ar) build(h);
      return;
    }
    for (std::size_t i = from; i < ar.size(); ++i) {
      body.push_back(ar[i]);
      rec(i);
      body.pop_back();
    }
  };
  rec(0);
  return out;
}

std::vector<Metarule> enumerate_sort(const Metarule& m, const SortOptions& opts) {
  if (classify(m.clause) != Taxon::matrix) throw Error("sort enumeration needs a matrix metarule");
  const auto& lits = m.clause.literals();
  std::size_t positions = 0;
  for (const auto& l : lits) {
    for (const auto& t : l.atom.args())
      if (!t.is_var() || t.order() != Order::first) throw Error("matrix arguments must be first-order variables");
    positions += l.atom.arity();
  }
  // Bell(N) partitions; with existentials each block doubles at most.
  BigInt projected = bell(positions);
  if (opts.existential_first_order) projected *= power(2, positions);
  guard(projected, "sort enumeration");

  std::vector<Metarule> out;
  std::set<std::string> seen;
  std::vector<std::size_t> block(positions);

  auto emit = [&](std::size_t blocks) {
    std::size_t masks = opts.existential_first_order ? (std::size_t{1} << blocks) : 1;
    for (std::size_t mask = 0; mask < masks; ++mask) {
      std::vector<Literal> out_lits;
      std::size_t pos = 0;
      for (const auto& l : lits) {
        std::vector<Term> args;
        for (std::size_t j = 0; j < l.atom.arity(); ++j, ++pos) {
          std::size_t b = block[pos];
          args.push_back((mask >> b) & 1 ? Term::var("X" + std::to_string(b), Order::first, Quant::existential)
                                         : fo_var(b));
        }
        out_lits.push_back({Atom(l.atom.pred(), std::move(args)), l.positive});
      }
      Clause c(std::move(out_lits));
      if (classify(c) != Taxon::sort) continue;
      if (opts.fully_connected_only && !fully_connected(c)) continue;
      if (opts.distinct_head_variables) {
        const auto& hargs = c.head().args();
        std::set<Term> distinct(hargs.begin(), hargs.end());
        if (distinct.size() != hargs.size()) continue;
      }
      if (opts.range_restricted) {
        std::vector<Term> body_vars;
        for (const auto& a : c.body()) {
          auto vs = variables_of(a);
          body_vars.insert(body_vars.end(), vs.begin(), vs.end());
        }
        bool ok = true;
        for (const auto& t : c.head().args())
          if (std::find(body_vars.begin(), body_vars.end(), t) == body_vars.end()) ok = false;
        if (!ok) continue;
      }
      keep(out, seen, std::move(c));
    }
  };

  // restricted growth strings
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t blocks) {
    if (i == positions) {
      emit(blocks);
      return;
    }
    for (std::size_t b = 0; b <= blocks; ++b) {
      block[i] = b;
      rec(i + 1, std::max(blocks, b + 1));
    }
  };
  rec(0, 0);
  return out;
}

std::vector<std::vector<std::size_t>> enumerate_multisets(std::size_t n) {
  guard(binomial(2 * n - 1, n), "multiset enumeration");
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> mult(n, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t left) {
    if (i + 1 == n) {
      mult[i] = left;
      out.push_back(mult);
      return;
    }
    for (std::size_t m = 0; m <= left; ++m) {
      mult[i] = m;
      rec(i + 1, left - m);
    }
  };
  if (n > 0) rec(0, n);
  return out;
}

std::vector<std::vector<std::size_t>> enumerate_sort_multisets(std::size_t n) {
  auto all = enumerate_multisets(n);
  std::erase_if(all, [](const auto& m) { return std::all_of(m.begin(), m.end(), [](auto x) { return x <= 1; }); });
  return all;
}

std::vector<std::vector<std::string>> enumerate_metasubstitutions(const std::vector<std::string>& heads,
                                                                  const std::vector<std::string>& bodies,
                                                                  const std::vector<std::string>& constants,
                                                                  std::size_t k, std::size_t e) {
  if (k == 0 || e < k) return {};
  guard(metasub_exact(heads.size(), bodies.size(), constants.size(), k, e), "metasubstitution enumeration");
  std::vector<const std::vector<std::string>*> domains{&heads};
  for (std::size_t i = 1; i < k; ++i) domains.push_back(&bodies);
  for (std::size_t i = k; i < e; ++i) domains.push_back(&constants);
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> tuple;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == domains.size()) {
      out.push_back(tuple);
      return;
    }
    for (const auto& s : *domains[i]) {
      tuple.push_back(s);
      rec(i + 1);
      tuple.pop_back();
    }
  };
  rec(0);
  return out;
}

std::vector<std::vector<std::string>> enumerate_ground(const std::vector<std::string>& constants, std::size_t u) {
  auto out = enumerate_metasubstitutions({""}, {}, constants, 1, u + 1);
  for (auto& t : out) t.erase(t.begin());
  return out;
}

BigInt composed_language_count(const CountParams& q) {
  q.validate();
  std::vector<std::string> preds, consts;
  for (std::size_t i = 0; i < q.p; ++i) preds.push_back("p" + std::to_string(i));
  for (std::size_t i = 0; i < q.c; ++i) consts.push_back("c" + std::to_string(i));
  BigInt sorts = enumerate_multisets(q.n).size();
  BigInt ground = enumerate_ground(consts, q.n).size();
  BigInt total = 0;
  for (std::size_t i = 1; i <= q.k; ++i) {
    BigInt matrices = enumerate_matrix_subsets(i, q.a).size();
    BigInt metasubs = enumerate_metasubstitutions(preds, preds, consts, i, q.n).size();
    total += matrices * sorts * metasubs * ground;
  }
  return total;
}

}  // namespace mil
