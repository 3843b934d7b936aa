#include "mil/logic.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "mil/syntax.hpp"

namespace mil {

std::vector<Literal> order_literals(const Clause& c) {
  if (!c.is_definite()) throw Error("not definite");
  std::vector<Literal> out = c.literals();
  std::stable_sort(out.begin(), out.end(), [](const Literal& a, const Literal& b) {
    if (a.positive != b.positive) return a.positive;
    const auto& na = a.atom.pred().name().str();
    const auto& nb = b.atom.pred().name().str();
    if (na != nb) return na < nb;
    return a.atom.arity() < b.atom.arity();
  });
  return out;
}

Term apply(const Term& t, const MetaSubstitution& ms) {
  if (t.is_var()) {
    const Target* target = ms.find(t.key());
    if (!target) return t;
    if (const Term* term = std::get_if<Term>(target)) return *term;
    throw Error("variable " + t.name().str() + " bound to an atom");
  }
  if (!t.is_compound()) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(apply(a, ms));
  return Term::compound(t.name(), std::move(args));
}

Atom apply(const Atom& a, const MetaSubstitution& ms) {
  if (a.is_atom_var()) {
    const Target* target = ms.find(a.pred().key());
    if (!target) return a;
    if (const Atom* atom = std::get_if<Atom>(target)) return *atom;
    throw Error("third-order variable " + a.pred().name().str() + " bound to a non-atom");
  }
  Term pred = a.pred();
  if (pred.is_var()) {
    if (const Target* target = ms.find(pred.key())) {
      const Term* term = std::get_if<Term>(target);
      if (!term || term->is_compound()) throw Error("predicate variable bound to a non-symbol");
      pred = *term;
    }
  }
  std::vector<Term> args;
  args.reserve(a.arity());
  for (const auto& t : a.args()) args.push_back(apply(t, ms));
  return Atom(std::move(pred), std::move(args));
}

Clause apply(const Clause& c, const MetaSubstitution& ms) {
  if (ms.empty()) return c;
  std::vector<Literal> lits;
  lits.reserve(c.size());
  for (const auto& l : c.literals()) lits.push_back({apply(l.atom, ms), l.positive});
  return Clause(std::move(lits));
}

namespace {

void args_variables(const Atom& a, std::vector<Term>& out) {
  for (const auto& t : a.args()) collect_variables(t, out);
}

}  // namespace

Taxon classify(const Clause& c) {
  if (!c.is_definite()) throw Error("not definite");
  std::size_t atom_vars = 0;
  bool higher = false;
  for (const auto& l : c.literals()) {
    if (l.atom.is_atom_var()) ++atom_vars;
    if (l.atom.pred().is_var()) higher = true;
  }
  if (atom_vars == c.size()) return Taxon::punch;
  if (atom_vars > 0) throw Error("ill-formed metarule");
  if (!higher) return Taxon::first_order;

  // Matrix iff no variable occurs in two different literals.
  std::map<VarKey, std::size_t> owner;
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::vector<Term> vars;
    collect_variables(c.literals()[i].atom.pred(), vars);
    args_variables(c.literals()[i].atom, vars);
    for (const auto& v : vars) {
      auto [it, fresh] = owner.emplace(v.key(), i);
      if (!fresh && it->second != i) return Taxon::sort;
    }
  }
  return Taxon::matrix;
}

bool fully_connected(const Clause& c) {
  const auto& lits = c.literals();
  for (const auto& l : lits)
    if (l.atom.is_atom_var()) throw Error("order too high");
  for (std::size_t i = 0; i < lits.size(); ++i)
    for (std::size_t j = i + 1; j < lits.size(); ++j)
      if (lits[i] == lits[j]) return false;
  if (lits.size() <= 1) return true;

  // First-order items of each literal: variables anywhere in its arguments
  // and ground top-level arguments.
  std::vector<std::vector<Term>> items(lits.size());
  for (std::size_t i = 0; i < lits.size(); ++i) {
    for (const auto& t : lits[i].atom.args()) {
      if (t.is_ground()) {
        if (std::find(items[i].begin(), items[i].end(), t) == items[i].end()) items[i].push_back(t);
      } else {
        collect_variables(t, items[i]);
      }
    }
  }
  auto shares = [&](std::size_t a, std::size_t b) {
    for (const auto& t : items[a])
      if (std::find(items[b].begin(), items[b].end(), t) != items[b].end()) return true;
    return false;
  };
  std::vector<bool> seen(lits.size(), false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    std::size_t cur = stack.back();
    stack.pop_back();
    for (std::size_t j = 0; j < lits.size(); ++j) {
      if (!seen[j] && shares(cur, j)) {
        seen[j] = true;
        stack.push_back(j);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

namespace {

struct Renamer {
  std::map<VarKey, Term> map;
  int second = 0, universal = 0, existential = 0, third = 0;

  Term var(const Term& v) {
    if (auto it = map.find(v.key()); it != map.end()) return it->second;
    std::string name;
    switch (v.order()) {
      case Order::third: name = "A" + std::to_string(third++); break;
      case Order::second: name = "P" + std::to_string(second++); break;
      case Order::first:
        name = v.quant() == Quant::universal ? "x" + std::to_string(universal++)
                                             : "X" + std::to_string(existential++);
        break;
    }
    Term fresh = Term::var(name, v.order(), v.quant());
    map.emplace(v.key(), fresh);
    return fresh;
  }

  Term term(const Term& t) {
    if (t.is_var()) return var(t);
    if (!t.is_compound()) return t;
    std::vector<Term> args;
    for (const auto& a : t.args()) args.push_back(term(a));
    return Term::compound(t.name(), std::move(args));
  }

  Atom atom(const Atom& a) {
    Term pred = a.pred().is_var() ? var(a.pred()) : a.pred();
    std::vector<Term> args;
    for (const auto& t : a.args()) args.push_back(term(t));
    return Atom(std::move(pred), std::move(args));
  }
};

Clause rename_in_order(const std::vector<Literal>& lits) {
  Renamer r;
  std::vector<Literal> out;
  out.reserve(lits.size());
  for (const auto& l : lits) out.push_back({r.atom(l.atom), l.positive});
  return Clause(std::move(out));
}

constexpr std::size_t kMaxPermutedBody = 7;

}  // namespace

Clause canonical_clause(const Clause& c) {
  std::vector<Literal> ordered = c.is_definite() ? order_literals(c) : c.literals();
  const std::size_t first_body = c.is_definite() ? 1 : 0;
  const std::size_t body_len = ordered.size() - first_body;
  if (body_len <= 1 || body_len > kMaxPermutedBody) return rename_in_order(ordered);

  std::vector<std::size_t> perm(body_len);
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<Clause> best;
  std::string best_key;
  std::vector<Literal> trial(ordered.size());
  do {
    for (std::size_t i = 0; i < first_body; ++i) trial[i] = ordered[i];
    for (std::size_t i = 0; i < body_len; ++i) trial[first_body + i] = ordered[first_body + perm[i]];
    Clause renamed = rename_in_order(trial);
    std::string key = to_string(renamed, Mode::metarule);
    if (!best || key < best_key) {
      best_key = std::move(key);
      best = std::move(renamed);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return *best;
}

Metarule canonical_form(const Metarule& m) {
  return Metarule{m.name, canonical_clause(m.clause), m.taxon};
}

std::string canonical_key(const Clause& c) { return to_string(canonical_clause(c), Mode::metarule); }

Metarule make_metarule(std::string name, Clause clause) {
  Taxon t = classify(clause);
  return Metarule{std::move(name), std::move(clause), t};
}

Term encapsulate(const Atom& a, std::string_view symbol) {
  if (a.is_atom_var()) throw Error("cannot encapsulate an atom variable");
  if (!a.pred().is_var() && a.pred().name().str() == symbol)
    throw Error("reserved encapsulation symbol '" + std::string(symbol) + "' used at the object level");
  std::vector<Term> args;
  args.reserve(a.arity() + 1);
  args.push_back(a.pred());
  for (const auto& t : a.args()) args.push_back(t);
  return Term::compound(symbol, std::move(args));
}

Atom decapsulate(const Term& t, std::string_view symbol) {
  if (!t.is_compound() || t.name().str() != symbol) throw Error("not an encapsulated atom");
  const auto& args = t.args();
  std::vector<Term> rest(args.begin() + 1, args.end());
  return Atom(args.front(), std::move(rest));
}

Clause encapsulate(const Clause& c, std::string_view symbol) {
  std::vector<Literal> lits;
  lits.reserve(c.size());
  for (const auto& l : c.literals()) {
    Term enc = encapsulate(l.atom, symbol);
    lits.push_back({Atom(Term::constant(symbol), enc.args()), l.positive});
  }
  return Clause(std::move(lits));
}

Metarule decapsulate(const Clause& c, std::string_view symbol) {
  std::vector<Literal> lits;
  lits.reserve(c.size());
  for (const auto& l : c.literals()) {
    const Atom& a = l.atom;
    if (a.pred().is_var() || a.pred().name().str() != symbol || a.arity() == 0)
      throw Error("not an encapsulated clause");
    std::vector<Term> rest(a.args().begin() + 1, a.args().end());
    const Term& pred = a.args().front();
    if (pred.is_compound()) throw Error("encapsulated predicate must be a symbol or variable");
    Term p = pred.is_var() ? Term::var(pred.key(), Order::second, pred.quant()) : pred;
    lits.push_back({Atom(std::move(p), std::move(rest)), l.positive});
  }
  return make_metarule("", Clause(std::move(lits)));
}

namespace {

std::string letter(const Term& v) {
  static const char* second[] = {"P", "Q", "R", "S", "T", "U", "V", "W"};
  static const char* universal[] = {"x", "y", "z", "u", "v", "w", "s", "t"};
  static const char* existential[] = {"X", "Y", "Z"};
  const std::string& n = v.name().str();
  std::size_t idx = std::stoul(n.substr(1));
  switch (v.order()) {
    case Order::second:
    case Order::third: return idx < 8 ? second[idx] : "P" + std::to_string(idx);
    case Order::first:
      if (v.quant() == Quant::universal) return idx < 8 ? universal[idx] : "x" + std::to_string(idx);
      return idx < 3 ? existential[idx] : "X" + std::to_string(idx);
  }
  return n;
}

Clause with_letters(const Clause& canonical, std::vector<std::string>& exist,
                    std::vector<std::string>& univ) {
  MetaSubstitution ms;
  for (const auto& v : variables_of(canonical)) {
    std::string l = letter(v);
    if (v.order() == Order::third) {
      ms.bind(v, Atom::atom_var(l));
      exist.push_back(l);
      continue;
    }
    ms.bind(v, Term::var(l, v.order(), v.quant()));
    (v.quant() == Quant::universal ? univ : exist).push_back(l);
  }
  return apply(canonical, ms);
}

}  // namespace

std::string pretty_metarule(const Metarule& m) {
  std::vector<std::string> e, u;
  return to_arrow_string(with_letters(canonical_clause(m.clause), e, u));
}

std::string quantified_string(const Metarule& m) {
  std::vector<std::string> e, u;
  Clause c = with_letters(canonical_clause(m.clause), e, u);
  std::string out;
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
  };
  if (!e.empty()) out += "\xE2\x88\x83." + join(e) + " ";
  if (!u.empty()) out += "\xE2\x88\x80." + join(u);
  if (!out.empty() && out.back() == ' ') out.pop_back();
  if (!out.empty()) out += ": ";
  return out + to_arrow_string(c);
}

}  // namespace mil
