#include "mil/subsumption.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mil/logic.hpp"

namespace mil {

namespace {

std::vector<Literal> as_set(const Clause& c) {
  std::vector<Literal> out;
  for (const auto& l : c.literals())
    if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(l);
  return out;
}

// One-way matching of c onto rigid d with an undo trail. In renaming mode a
// variable may only go to a distinct variable of the same order and
// quantifier.
class Matcher {
 public:
  explicit Matcher(bool renaming) : renaming_(renaming) {}

  bool atom(const Atom& c, const Atom& d) {
    std::size_t m = trail_.size();
    bool ok = atom_rec(c, d);
    if (!ok) undo(m);
    return ok;
  }
  std::size_t mark() const { return trail_.size(); }
  void undo(std::size_t m) {
    while (trail_.size() > m) {
      VarKey k = trail_.back();
      trail_.pop_back();
      if (auto it = image_of_.find(k); it != image_of_.end()) {
        image_.erase(it->second);
        image_of_.erase(it);
      }
      map_.erase(k);
      vars_.erase(k);
    }
  }

  MetaSubstitution witness() const {
    MetaSubstitution ms;
    for (const auto& [k, target] : map_) ms.bind(vars_.at(k), target);
    return ms;
  }

 private:
  bool bind(const Term& v, Target t) {
    if (auto it = map_.find(v.key()); it != map_.end()) return it->second == t;
    if (renaming_) {
      const Term* tv = std::get_if<Term>(&t);
      if (!tv) {
        const Atom& a = std::get<Atom>(t);
        if (!a.is_atom_var()) return false;
        tv = &a.pred();
      }
      if (!tv->is_var() || tv->order() != v.order() || tv->quant() != v.quant()) return false;
      if (!image_.insert(tv->key()).second) return false;
      image_of_.emplace(v.key(), tv->key());
    }
    map_.emplace(v.key(), std::move(t));
    vars_.emplace(v.key(), v);
    trail_.push_back(v.key());
    return true;
  }

  bool term(const Term& c, const Term& d) {
    if (c.is_var()) return bind(c, d);
    if (c.kind() != d.kind() || c.name() != d.name() || c.arity() != d.arity()) return false;
    for (std::size_t i = 0; i < c.arity(); ++i)
      if (!term(c.args()[i], d.args()[i])) return false;
    return true;
  }

  bool atom_rec(const Atom& c, const Atom& d) {
    if (c.is_atom_var()) return bind(c.pred(), d);
    if (d.is_atom_var() || c.arity() != d.arity()) return false;
    if (!term(c.pred(), d.pred())) return false;
    for (std::size_t i = 0; i < c.arity(); ++i)
      if (!term(c.args()[i], d.args()[i])) return false;
    return true;
  }

  bool renaming_;
  std::map<VarKey, Target> map_;
  std::map<VarKey, Term> vars_;
  std::set<VarKey> image_;
  std::map<VarKey, VarKey> image_of_;
  std::vector<VarKey> trail_;
};

// Injective literal assignment of c into d; with `cover`, every literal of d
// must be hit.
std::optional<MetaSubstitution> search(const Clause& c, const Clause& d, bool renaming, bool cover) {
  auto lc = as_set(c);
  auto ld = as_set(d);
  if (lc.size() > ld.size()) return std::nullopt;
  if (cover && lc.size() != ld.size()) return std::nullopt;
  Matcher m(renaming);
  std::vector<bool> used(ld.size(), false);
  std::optional<MetaSubstitution> out;
  auto rec = [&](auto&& self, std::size_t i) -> bool {
    if (i == lc.size()) {
      out = m.witness();
      return true;
    }
    for (std::size_t j = 0; j < ld.size(); ++j) {
      if (used[j] || ld[j].positive != lc[i].positive) continue;
      std::size_t mark = m.mark();
      if (!m.atom(lc[i].atom, ld[j].atom)) continue;
      used[j] = true;
      if (self(self, i + 1)) return true;
      used[j] = false;
      m.undo(mark);
    }
    return false;
  };
  rec(rec, 0);
  return out;
}

}  // namespace

std::optional<MetaSubstitution> meta_subsumes(const Clause& c, const Clause& d) {
  return search(c, d, false, false);
}

bool is_v_spec(const Clause& m1, const Clause& m2) { return search(m1, m2, false, true).has_value(); }

bool is_l_spec(const Clause& m1, const Clause& m2) { return search(m1, m2, true, false).has_value(); }

bool is_vl_spec(const Clause& m1, const Clause& m2) { return meta_subsumes(m1, m2).has_value(); }

Metarule generalise_to_matrix(const Metarule& s) {
  Taxon t = classify(s.clause);
  if (t != Taxon::sort && t != Taxon::matrix) throw Error("generalise_to_matrix expects a sort metarule");
  int preds = 0, firsts = 0;
  auto fresh_term = [&](auto&& self, const Term& x) -> Term {
    if (x.is_var()) return Term::var("x" + std::to_string(firsts++));
    if (!x.is_compound()) return x;
    std::vector<Term> args;
    for (const auto& a : x.args()) args.push_back(self(self, a));
    return Term::compound(x.name(), std::move(args));
  };
  std::vector<Literal> lits;
  for (const auto& l : s.clause.literals()) {
    Term pred = l.atom.pred().is_var()
                    ? Term::var("P" + std::to_string(preds++), Order::second, Quant::existential)
                    : l.atom.pred();
    std::vector<Term> args;
    for (const auto& a : l.atom.args()) args.push_back(fresh_term(fresh_term, a));
    lits.push_back({Atom(std::move(pred), std::move(args)), l.positive});
  }
  return make_metarule(s.name.empty() ? "" : "matrix-" + s.name, Clause(std::move(lits)));
}

Metarule generalise_to_punch(const Metarule& m) {
  std::vector<Literal> lits;
  int n = 0;
  for (const auto& l : m.clause.literals()) lits.push_back({Atom::atom_var("A" + std::to_string(n++)), l.positive});
  return make_metarule(m.name.empty() ? "" : "punch-" + m.name, Clause(std::move(lits)));
}

}  // namespace mil
