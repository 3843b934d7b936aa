#include "mil/term.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <unordered_map>

namespace mil {

namespace {

struct NameTable {
  std::mutex mu;
  std::deque<std::string> texts;  // stable addresses
  std::unordered_map<std::string_view, std::uint32_t> ids;
};

NameTable& table() {
  static NameTable t;
  return t;
}

const std::vector<Term>& empty_args() {
  static const std::vector<Term> none;
  return none;
}

}  // namespace

Name::Name(std::string_view text) {
  auto& t = table();
  std::lock_guard lock(t.mu);
  if (auto it = t.ids.find(text); it != t.ids.end()) {
    id_ = it->second;
    return;
  }
  t.texts.emplace_back(text);
  id_ = static_cast<std::uint32_t>(t.texts.size() - 1);
  t.ids.emplace(t.texts.back(), id_);
}

const std::string& Name::str() const {
  auto& t = table();
  std::lock_guard lock(t.mu);
  return t.texts[id_];
}

Term Term::var(std::string_view name, Order order, Quant quant, std::uint32_t gen) {
  return var(VarKey{Name(name), gen}, order, quant);
}

Term Term::var(VarKey key, Order order, Quant quant) {
  Term t(Kind::variable);
  t.name_ = key.name;
  t.gen_ = key.gen;
  t.order_ = order;
  t.quant_ = quant;
  return t;
}

Term Term::constant(std::string_view name) { return constant(Name(name)); }

Term Term::constant(Name name) {
  Term t(Kind::constant);
  t.name_ = name;
  return t;
}

Term Term::compound(std::string_view functor, std::vector<Term> args) {
  return compound(Name(functor), std::move(args));
}

Term Term::compound(Name functor, std::vector<Term> args) {
  if (args.empty()) return constant(functor);
  Term t(Kind::compound);
  t.name_ = functor;
  t.args_ = std::make_shared<const std::vector<Term>>(std::move(args));
  return t;
}

Term Term::list(const std::vector<Term>& items, std::optional<Term> tail) {
  static const Name cons(".");
  Term out = tail ? *tail : constant("[]");
  for (auto it = items.rbegin(); it != items.rend(); ++it) out = compound(cons, {*it, out});
  return out;
}

const std::vector<Term>& Term::args() const { return args_ ? *args_ : empty_args(); }

bool Term::is_ground() const {
  switch (kind_) {
    case Kind::variable: return false;
    case Kind::constant: return true;
    case Kind::compound:
      return std::all_of(args_->begin(), args_->end(), [](const Term& a) { return a.is_ground(); });
  }
  return true;
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_ || a.name_ != b.name_) return false;
  switch (a.kind_) {
    case Term::Kind::variable: return a.gen_ == b.gen_;
    case Term::Kind::constant: return true;
    case Term::Kind::compound:
      return a.args_ == b.args_ || *a.args_ == *b.args_;
  }
  return false;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  if (auto c = a.name_ <=> b.name_; c != 0) return c;
  if (a.kind_ == Term::Kind::variable) return a.gen_ <=> b.gen_;
  if (a.kind_ == Term::Kind::compound) {
    const auto& x = *a.args_;
    const auto& y = *b.args_;
    return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
  }
  return std::strong_ordering::equal;
}

Atom::Atom(Term pred, std::vector<Term> args) : pred_(std::move(pred)), args_(std::move(args)) {
  if (pred_.is_compound()) throw Error("atom predicate must be a symbol or a variable");
}

Atom Atom::atom_var(std::string_view name, std::uint32_t gen) {
  return Atom(Term::var(name, Order::third, Quant::existential, gen), {});
}

bool Atom::is_ground() const {
  if (pred_.is_var()) return false;
  return std::all_of(args_.begin(), args_.end(), [](const Term& a) { return a.is_ground(); });
}

std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
  if (auto c = a.pred_ <=> b.pred_; c != 0) return c;
  if (auto c = a.args_.size() <=> b.args_.size(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.args_.begin(), a.args_.end(), b.args_.begin(),
                                                b.args_.end());
}

Clause::Clause(Atom head, std::vector<Atom> body) {
  literals_.reserve(body.size() + 1);
  literals_.push_back({std::move(head), true});
  for (auto& b : body) literals_.push_back({std::move(b), false});
}

bool Clause::is_definite() const {
  return std::count_if(literals_.begin(), literals_.end(), [](const Literal& l) { return l.positive; }) == 1;
}

const Atom& Clause::head() const {
  for (const auto& l : literals_)
    if (l.positive) return l.atom;
  throw Error("not definite");
}

std::vector<Atom> Clause::body() const {
  std::vector<Atom> out;
  for (const auto& l : literals_)
    if (!l.positive) out.push_back(l.atom);
  return out;
}

bool Clause::is_ground() const {
  return std::all_of(literals_.begin(), literals_.end(), [](const Literal& l) { return l.atom.is_ground(); });
}

std::string_view to_string(Taxon t) {
  switch (t) {
    case Taxon::punch: return "punch";
    case Taxon::matrix: return "matrix";
    case Taxon::sort: return "sort";
    case Taxon::first_order: return "first_order";
  }
  return "?";
}

const Target* MetaSubstitution::find(const VarKey& k) const {
  if (auto it = universal.find(k); it != universal.end()) return &it->second;
  if (auto it = existential.find(k); it != existential.end()) return &it->second;
  return nullptr;
}

void MetaSubstitution::bind(const Term& var, Target target) {
  if (!var.is_var()) throw Error("can only bind variables");
  auto& m = var.quant() == Quant::universal ? universal : existential;
  m.insert_or_assign(var.key(), std::move(target));
  variables.insert_or_assign(var.key(), var);
}

void collect_variables(const Term& t, std::vector<Term>& out) {
  if (t.is_var()) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  } else if (t.is_compound()) {
    for (const auto& a : t.args()) collect_variables(a, out);
  }
}

std::vector<Term> variables_of(const Atom& a) {
  std::vector<Term> out;
  collect_variables(a.pred(), out);
  for (const auto& t : a.args()) collect_variables(t, out);
  return out;
}

std::vector<Term> variables_of(const Clause& c) {
  std::vector<Term> out;
  for (const auto& l : c.literals()) {
    collect_variables(l.atom.pred(), out);
    for (const auto& t : l.atom.args()) collect_variables(t, out);
  }
  return out;
}

}  // namespace mil
