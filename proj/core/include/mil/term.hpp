#pragma once

// Symbolic syntax shared by every module: interned names, terms, atoms,
// literals, clauses and metarules at orders 0 to 3.

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace mil {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Interned identifier. Equality is by id; ordering is lexicographic on text.
class Name {
 public:
  Name() : Name(std::string_view{}) {}
  explicit Name(std::string_view text);

  const std::string& str() const;
  std::uint32_t id() const { return id_; }
  bool empty() const { return str().empty(); }

  friend bool operator==(Name a, Name b) { return a.id_ == b.id_; }
  friend std::strong_ordering operator<=>(Name a, Name b) {
    if (a.id_ == b.id_) return std::strong_ordering::equal;
    return a.str() <=> b.str();
  }

 private:
  std::uint32_t id_;
};

enum class Order : std::uint8_t { first = 1, second = 2, third = 3 };
enum class Quant : std::uint8_t { universal, existential };

// Identity of a variable: its name plus a renaming generation. Generation 0 is
// the variable as written; the resolution engine renames apart by bumping it.
struct VarKey {
  Name name;
  std::uint32_t gen = 0;

  friend bool operator==(const VarKey&, const VarKey&) = default;
  friend std::strong_ordering operator<=>(const VarKey& a, const VarKey& b) {
    if (auto c = a.name.id() <=> b.name.id(); c != 0) return c;
    return a.gen <=> b.gen;
  }
};

struct VarKeyHash {
  std::size_t operator()(const VarKey& k) const noexcept {
    return (static_cast<std::size_t>(k.name.id()) << 20) ^ k.gen;
  }
};

class Term {
 public:
  enum class Kind : std::uint8_t { variable, constant, compound };

  Term() : Term(constant("[]")) {}

  static Term var(std::string_view name, Order order = Order::first,
                  Quant quant = Quant::universal, std::uint32_t gen = 0);
  static Term var(VarKey key, Order order, Quant quant);
  static Term constant(std::string_view name);
  static Term constant(Name name);
  static Term compound(std::string_view functor, std::vector<Term> args);
  static Term compound(Name functor, std::vector<Term> args);

  // Lists desugar to '.'/2 cells terminated by the constant [].
  static Term list(const std::vector<Term>& items, std::optional<Term> tail = std::nullopt);

  Kind kind() const { return kind_; }
  bool is_var() const { return kind_ == Kind::variable; }
  bool is_constant() const { return kind_ == Kind::constant; }
  bool is_compound() const { return kind_ == Kind::compound; }

  Name name() const { return name_; }
  VarKey key() const { return {name_, gen_}; }
  std::uint32_t gen() const { return gen_; }
  Order order() const { return order_; }
  Quant quant() const { return quant_; }
  std::size_t arity() const { return args_ ? args_->size() : 0; }
  const std::vector<Term>& args() const;

  bool is_ground() const;

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  explicit Term(Kind k) : kind_(k) {}

  Kind kind_ = Kind::constant;
  Order order_ = Order::first;
  Quant quant_ = Quant::universal;
  std::uint32_t gen_ = 0;
  Name name_;
  std::shared_ptr<const std::vector<Term>> args_;
};

// An applied atom P(t1..tn) whose predicate is a constant symbol or a
// second-order variable, or a bare third-order atom variable.
class Atom {
 public:
  Atom() = default;
  Atom(Term pred, std::vector<Term> args);
  static Atom atom_var(std::string_view name, std::uint32_t gen = 0);

  const Term& pred() const { return pred_; }
  const std::vector<Term>& args() const { return args_; }
  std::size_t arity() const { return args_.size(); }
  bool is_atom_var() const { return pred_.is_var() && pred_.order() == Order::third; }
  bool is_ground() const;

  friend bool operator==(const Atom&, const Atom&) = default;
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);

 private:
  Term pred_;
  std::vector<Term> args_;
};

struct Literal {
  Atom atom;
  bool positive = true;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend std::strong_ordering operator<=>(const Literal& a, const Literal& b) {
    if (a.positive != b.positive) return a.positive ? std::strong_ordering::less : std::strong_ordering::greater;
    return a.atom <=> b.atom;
  }
};

// A clause is stored as a literal sequence; duplicates are kept.
class Clause {
 public:
  Clause() = default;
  explicit Clause(std::vector<Literal> literals) : literals_(std::move(literals)) {}
  // Definite clause head :- body.
  Clause(Atom head, std::vector<Atom> body);

  const std::vector<Literal>& literals() const { return literals_; }
  std::size_t size() const { return literals_.size(); }
  bool is_definite() const;
  // Requires is_definite().
  const Atom& head() const;
  std::vector<Atom> body() const;
  bool is_ground() const;

  friend bool operator==(const Clause&, const Clause&) = default;

 private:
  std::vector<Literal> literals_;
};

enum class Taxon : std::uint8_t { punch, matrix, sort, first_order };
std::string_view to_string(Taxon t);

struct Metarule {
  std::string name;
  Clause clause;
  Taxon taxon = Taxon::sort;
};

// Binding target: a term (constant, variable, compound) or, for atom
// variables, a whole atom.
using Target = std::variant<Term, Atom>;

// Universally (theta) and existentially (Theta) quantified bindings.
struct MetaSubstitution {
  std::map<VarKey, Target> universal;
  std::map<VarKey, Target> existential;

  bool empty() const { return universal.empty() && existential.empty(); }
  std::size_t size() const { return universal.size() + existential.size(); }
  // The bound variables themselves, for their order and quantifier.
  std::map<VarKey, Term> variables;

  const Target* find(const VarKey& k) const;
  // Adds to the map matching `quant`.
  void bind(const Term& var, Target target);
};

// Variables of a clause in first-occurrence order (predicate before args).
std::vector<Term> variables_of(const Clause& c);
std::vector<Term> variables_of(const Atom& a);
void collect_variables(const Term& t, std::vector<Term>& out);

}  // namespace mil
