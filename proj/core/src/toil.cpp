#include "mil/toil.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <set>

#include "mil/logic.hpp"

namespace mil {

SubstitutionBuffer::SubstitutionBuffer(std::initializer_list<std::pair<Term, std::size_t>> init) {
  for (const auto& [t, n] : init)
    for (std::size_t i = 0; i < n; ++i) add(t);
  trail_.clear();
}

void SubstitutionBuffer::add(const Term& c) {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].first == c) {
      ++entries_[i].second;
      trail_.push_back(i);
      return;
    }
  entries_.emplace_back(c, 1);
  trail_.push_back(entries_.size() - 1);
}

std::size_t SubstitutionBuffer::count(const Term& c) const {
  for (const auto& [t, n] : entries_)
    if (t == c) return n;
  return 0;
}

void SubstitutionBuffer::undo(std::size_t mark) {
  while (trail_.size() > mark) {
    std::size_t i = trail_.back();
    trail_.pop_back();
    if (--entries_[i].second == 0) entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(i));
  }
}

std::vector<Term> SubstitutionBuffer::constants() const {
  std::vector<Term> out;
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

std::size_t SubstitutionBuffer::singletons() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const auto& e) { return e.second == 1; }));
}

bool look_ahead(std::size_t free_variables, const SubstitutionBuffer& s) { return s.singletons() <= free_variables; }

bool look_ahead(const Clause& instance, const SubstitutionBuffer& s) {
  std::size_t free = 0;
  for (const auto& v : variables_of(instance))
    if (v.order() == Order::first) ++free;
  return look_ahead(free, s);
}

namespace {

class Lifter {
 public:
  explicit Lifter(const MetaSubstitution& ms) {
    for (const auto* m : {&ms.universal, &ms.existential})
      for (const auto& [k, target] : *m) {
        if (const Term* t = std::get_if<Term>(&target); t && t->is_var()) used_.insert(t->name().str());
      }
  }

  Term fresh(const std::string& base, Order order, Quant quant) {
    std::string name = base;
    for (int k = 2; used_.count(name); ++k) name = base + "_" + std::to_string(k);
    used_.insert(name);
    return Term::var(name, order, quant);
  }

  Term ground(const Term& t, Quant quant, const std::string& base) {
    auto& map = quant == Quant::universal ? universal_ : existential_;
    if (auto it = map.find(t); it != map.end()) return it->second;
    Term v = fresh(base, Order::first, quant);
    map.emplace(t, v);
    return v;
  }

  std::string next_arg_name() { return "x" + std::to_string(++args_); }

 private:
  std::set<std::string> used_;
  std::map<Term, Term> universal_, existential_;
  int args_ = 0;
};

}  // namespace

MetaSubstitution lift(const MetaSubstitution& ms, const Clause* context) {
  std::vector<Term> order;
  std::set<VarKey> placed;
  if (context)
    for (const auto& v : variables_of(*context))
      if (ms.find(v.key()) && placed.insert(v.key()).second) order.push_back(v);
  std::vector<std::pair<std::string, Term>> rest;
  for (const auto& [k, v] : ms.variables)
    if (!placed.count(k)) rest.emplace_back(k.name.str(), v);
  std::stable_sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [_, v] : rest) order.push_back(v);

  for (const auto* m : {&ms.universal, &ms.existential})
    for (const auto& [k, target] : *m) {
      bool ground = std::holds_alternative<Term>(target) ? std::get<Term>(target).is_ground()
                                                         : std::get<Atom>(target).is_ground();
      if (!ground) throw Error("lift expects a ground metasubstitution");
    }

  Lifter lifter(ms);
  MetaSubstitution out;
  for (const auto& v : order) {
    const bool universal = ms.universal.count(v.key()) > 0;
    const Target& target = *ms.find(v.key());
    if (const Atom* a = std::get_if<Atom>(&target)) {
      std::vector<Term> args;
      for (const auto& t : a->args()) args.push_back(lifter.ground(t, Quant::universal, lifter.next_arg_name()));
      Term pred = lifter.fresh(v.name().str() + "1", Order::second, Quant::existential);
      out.bind(v, Atom(std::move(pred), std::move(args)));
      continue;
    }
    const Term& t = std::get<Term>(target);
    if (v.order() == Order::second) {
      out.bind(v, lifter.fresh(v.name().str() + "1", Order::second, Quant::existential));
    } else {
      Quant q = universal ? Quant::universal : Quant::existential;
      out.bind(v, lifter.ground(t, q, v.name().str() + "1"));
    }
  }
  return out;
}

std::vector<Atom> matrix_atoms(const Metarule& punch, const std::vector<Clause>& b_star) {
  if (classify(punch.clause) != Taxon::punch) throw Error("matrix_atoms expects a punch metarule");
  std::set<std::size_t> arities;
  for (const auto& c : b_star)
    if (c.is_definite()) arities.insert(c.head().arity());
  std::vector<Atom> out;
  for (std::size_t n : arities) {
    std::vector<Term> args;
    for (std::size_t i = 1; i <= n; ++i) args.push_back(Term::var("x" + std::to_string(i)));
    out.emplace_back(Term::var("P", Order::second, Quant::existential), std::move(args));
  }
  return out;
}

void ToilConfig::validate() const {
  proof.validate();
  if (!(sample_rate > 0.0 && sample_rate <= 1.0)) throw Error("sample_rate must be in (0,1]");
  if (max_specialisations < 1) throw Error("max_specialisations must be at least 1");
}

namespace {

Atom rename_atom(const Atom& a, std::uint32_t gen) {
  std::vector<Term> args;
  for (const auto& t : a.args()) args.push_back(rename(t, gen));
  Term pred = a.pred().is_var() ? Term::var(VarKey{a.pred().name(), gen}, a.pred().order(), a.pred().quant())
                                : a.pred();
  return Atom(std::move(pred), std::move(args));
}

std::vector<Term> first_order_vars(const Atom& a, const Bindings& b) {
  std::vector<Term> out;
  for (const auto& t : a.args()) collect_variables(b.resolve(t), out);
  return out;
}

class Specialiser {
 public:
  Specialiser(const Program& program, const std::vector<Metarule>& metarules, std::vector<std::string> pool,
              const ToilConfig& cfg, std::size_t max_yields, const LiftLog& log, VlResult& out)
      : engine_(program, cfg.proof),
        metarules_(metarules),
        pool_(std::move(pool)),
        cfg_(cfg),
        max_yields_(max_yields),
        log_(log),
        out_(out) {
    std::vector<Clause> heads;
    for (const auto& e : program.entries()) heads.push_back(e.source);
    for (const auto& m : metarules)
      if (classify(m.clause) == Taxon::punch) {
        shapes_ = matrix_atoms(m, heads);
        break;
      }
  }

  // False once the search should stop.
  bool run(const Atom& e, std::size_t inventions_left) {
    for (const auto& m : metarules_) {
      if (over()) return false;
      Taxon t = classify(m.clause);
      if (t != Taxon::punch && t != Taxon::matrix)
        throw Error("vl_specialise expects punch or matrix metarules, got " + std::string(to_string(t)));
      if (!one(e, m, t == Taxon::punch, inventions_left)) return false;
    }
    return true;
  }

  std::size_t inferences() const { return engine_.stats().inferences + steps_; }
  bool budget_exceeded() const { return budget_; }

 private:
  struct Frame {
    const Metarule* m;
    bool punch;
    Atom head;
    std::vector<Atom> body;  // matrix: renamed body; punch: grows as slots are filled
    std::uint32_t gen;
    SubstitutionBuffer buffer;
    std::size_t inventions_left;
  };

  bool over() {
    if (engine_.budget_exhausted() || inferences() >= cfg_.proof.max_inferences) budget_ = true;
    return budget_;
  }

  bool one(const Atom& e, const Metarule& m, bool punch, std::size_t inventions_left) {
    Frame f{&m, punch, {}, {}, b_.fresh_gen(), {}, inventions_left};
    std::size_t mark = b_.mark();
    if (punch) {
      std::vector<Term> args;
      for (std::size_t i = 0; i < e.arity(); ++i) args.push_back(Term::var("h" + std::to_string(i), Order::first));
      f.head = rename_atom(Atom(Term::var("H", Order::second, Quant::existential), std::move(args)), f.gen);
    } else {
      f.head = rename_atom(m.clause.head(), f.gen);
      for (const auto& a : m.clause.body()) f.body.push_back(rename_atom(a, f.gen));
    }
    if (f.head.arity() != e.arity() || !unify(encapsulate(f.head), encapsulate(e), b_, cfg_.proof.occurs_check))
      return true;
    for (const auto& t : f.head.args()) f.buffer.add(b_.resolve(t));
    const std::size_t slots = punch ? m.clause.size() - 1 : f.body.size();
    bool go = slot(f, 0, slots);
    b_.undo(mark);
    return go;
  }

  std::size_t free_after(const Frame& f, std::size_t i) const {
    if (f.punch) return 0;
    std::size_t n = 0;
    for (std::size_t j = i; j < f.body.size(); ++j) n += first_order_vars(f.body[j], b_).size();
    return n;
  }

  bool slot(Frame& f, std::size_t i, std::size_t slots) {
    if (over()) return false;
    if (i == slots) return finish(f);
    std::vector<Atom> patterns;
    if (f.punch) {
      for (const auto& s : shapes_) patterns.push_back(rename_atom(s, b_.fresh_gen()));
    } else {
      patterns.push_back(f.body[i]);
    }
    bool any = false;
    for (const auto& pat : patterns) {
      if (f.punch) f.body.push_back(pat);
      bool go = assign(f, i, slots, pat, any);
      if (f.punch) f.body.pop_back();
      if (!go) return false;
    }
    if (!any && f.inventions_left > 0) return invent(f, i, slots, patterns);
    return true;
  }

  // Binds each variable of the pattern to a buffer constant or leaves it
  // free, at least one bound, then refutes the literal against B*.
  bool assign(Frame& f, std::size_t i, std::size_t slots, const Atom& pat, bool& any) {
    std::vector<Term> vars = first_order_vars(pat, b_);
    std::vector<Term> consts = f.buffer.constants();
    std::vector<std::size_t> choice(vars.size(), 0);  // index into consts; consts.size() = free
    const std::size_t options = consts.size() + 1;
    for (;;) {
      std::size_t bound = 0;
      for (auto c : choice) bound += c < consts.size();
      if (bound > 0 || vars.empty()) {
        std::size_t mark = b_.mark();
        bool ok = true;
        for (std::size_t k = 0; k < vars.size() && ok; ++k)
          if (choice[k] < consts.size()) ok = unify(vars[k], consts[choice[k]], b_, cfg_.proof.occurs_check);
        if (ok && !resolve_literal(f, i, slots, pat, vars, any)) {
          b_.undo(mark);
          return false;
        }
        b_.undo(mark);
      }
      std::size_t k = 0;
      while (k < choice.size() && ++choice[k] == options) choice[k++] = 0;
      if (k == choice.size()) break;
    }
    return true;
  }

  bool resolve_literal(Frame& f, std::size_t i, std::size_t slots, const Atom& pat, const std::vector<Term>& vars,
                       bool& any) {
    ++steps_;
    Outcome o = engine_.solve({encapsulate(pat)}, b_, [&] {
      Atom ground = b_.resolve(pat);
      if (!ground.is_ground()) return true;
      for (std::size_t j = 0; j < i; ++j)
        if (b_.resolve(f.body[j]) == ground) return true;
      any = true;
      return advance(f, i, slots, vars);
    });
    if (o == Outcome::budget) budget_ = true;
    return o == Outcome::exhausted;
  }

  bool advance(Frame& f, std::size_t i, std::size_t slots, const std::vector<Term>& vars) {
    std::size_t bmark = f.buffer.mark();
    for (const auto& v : vars) f.buffer.add(b_.resolve(v));
    bool go = true;
    if (!(cfg_.look_ahead && !f.punch && !look_ahead(free_after(f, i + 1), f.buffer))) go = slot(f, i + 1, slots);
    f.buffer.undo(bmark);
    return go;
  }

  // A literal nothing in B* grounds: name it with a fresh invented symbol
  // and specialise it as an example of its own.
  bool invent(Frame& f, std::size_t i, std::size_t slots, const std::vector<Atom>& patterns) {
    std::string sym;
    for (const auto& s : pool_)
      if (!used_symbols_.count(s)) {
        sym = s;
        break;
      }
    if (sym.empty()) return true;
    for (const auto& pat : patterns) {
      std::vector<Term> vars = first_order_vars(pat, b_);
      std::vector<Term> consts = f.buffer.constants();
      if (vars.empty() || consts.empty()) continue;
      std::vector<std::size_t> choice(vars.size(), 0);
      for (;;) {
        std::size_t mark = b_.mark();
        bool ok = true;
        for (std::size_t k = 0; k < vars.size() && ok; ++k) ok = unify(vars[k], consts[choice[k]], b_);
        ok = ok && unify(pat.pred(), Term::constant(sym), b_);
        if (ok) {
          Atom goal = b_.resolve(pat);
          used_symbols_.insert(sym);
          std::size_t before = out_.metarules.size();
          if (!run(goal, f.inventions_left - 1)) return false;
          if (out_.metarules.size() > before) {
            if (f.punch) f.body.push_back(pat);
            --f.inventions_left;
            bool go = advance(f, i, slots, vars);
            ++f.inventions_left;
            if (f.punch) f.body.pop_back();
            if (!go) return false;
          }
          used_symbols_.erase(sym);
        }
        b_.undo(mark);
        std::size_t k = 0;
        while (k < choice.size() && ++choice[k] == consts.size()) choice[k++] = 0;
        if (k == choice.size()) break;
      }
    }
    return true;
  }

  bool finish(Frame& f) {
    if (f.buffer.singletons() != 0) return true;
    Atom head = b_.resolve(f.head);
    std::vector<Atom> body;
    for (const auto& a : f.body) body.push_back(b_.resolve(a));
    // h <- h explains nothing
    if (std::all_of(body.begin(), body.end(), [&](const Atom& a) { return a == head; })) return true;
    Clause g(head, body);
    if (!fully_connected(g)) return true;

    MetaSubstitution ground;
    if (f.punch) {
      const auto& lits = f.m->clause.literals();
      ground.bind(lits[0].atom.pred(), head);
      for (std::size_t j = 1; j < lits.size(); ++j) ground.bind(lits[j].atom.pred(), body[j - 1]);
    } else {
      for (const auto& v : variables_of(f.m->clause))
        ground.bind(v, b_.resolve(Term::var(VarKey{v.name(), f.gen}, v.order(), v.quant())));
    }
    MetaSubstitution lifted = lift(ground, &f.m->clause);
    Metarule out = make_metarule("", apply(f.m->clause, lifted));
    if (log_) log_(LiftRecord{head, *f.m, ground, g, out});
    if (seen_.insert(canonical_key(out.clause)).second) out_.metarules.push_back(std::move(out));
    return out_.metarules.size() < max_yields_;
  }

  Engine engine_;
  Bindings b_;
  const std::vector<Metarule>& metarules_;
  std::vector<std::string> pool_;
  std::set<std::string> used_symbols_;
  const ToilConfig& cfg_;
  std::size_t max_yields_;
  const LiftLog& log_;
  VlResult& out_;
  std::vector<Atom> shapes_;
  std::set<std::string> seen_;
  std::size_t steps_ = 0;
  bool budget_ = false;
};

}  // namespace

VlResult vl_specialise(const Atom& e, const Program& b_star, const std::vector<Metarule>& metarules,
                       const std::vector<std::string>& invented_pool, const ToilConfig& cfg, std::size_t max_yields,
                       const LiftLog& log) {
  cfg.validate();
  VlResult out;
  if (max_yields == 0) return out;
  Specialiser s(b_star, metarules, invented_pool, cfg, max_yields, log, out);
  s.run(e, std::min(cfg.max_inventions, invented_pool.size()));
  out.inferences = s.inferences();
  out.budget_exceeded = s.budget_exceeded();
  return out;
}

VlResult vl_specialise(const Atom& e, const std::vector<Clause>& b_star, const std::vector<Metarule>& metarules,
                       const std::vector<std::string>& invented_pool, const ToilConfig& cfg, std::size_t max_yields,
                       const LiftLog& log) {
  Program program(b_star);
  return vl_specialise(e, program, metarules, invented_pool, cfg, max_yields, log);
}

ToilResult toil_learn(const MilProblem& problem, const ToilConfig& cfg, const LiftLog& log) {
  cfg.validate();
  problem.validate();
  ToilResult out;
  if (problem.pos.empty()) return out;

  std::vector<std::size_t> idx(problem.pos.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::size_t k = static_cast<std::size_t>(std::llround(cfg.sample_rate * static_cast<double>(idx.size())));
  k = std::clamp<std::size_t>(k, 1, idx.size());
  if (k < idx.size()) {
    std::mt19937_64 rng(cfg.rng_seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
  }
  for (auto i : idx) out.sample.push_back(problem.pos[i]);

  std::vector<Clause> b_star = problem.bk;
  for (const auto& e : out.sample) b_star.emplace_back(e, std::vector<Atom>{});
  Program program(b_star);

  ConstructConfig cover;
  cover.proof = cfg.proof;
  cover.max_inventions = 0;
  cover.max_proofs = 1;
  cover.allow_tautologies = true;

  std::set<std::string> seen;
  std::deque<Atom> queue(out.sample.begin(), out.sample.end());
  while (!queue.empty()) {
    Atom e = queue.front();
    queue.pop_front();
    for (const auto& m : problem.metarules) {
      VlResult r = vl_specialise(e, program, {m}, problem.invented, cfg, cfg.max_specialisations, log);
      out.inferences += r.inferences;
      for (auto& learned : r.metarules) {
        if (!seen.insert(canonical_key(learned.clause)).second) continue;
        learned.name = "m" + std::to_string(out.metarules.size() + 1);
        out.metarules.push_back(learned);
        if (!cfg.cover_set) continue;
        std::deque<Atom> kept;
        for (const auto& other : queue) {
          auto c = construct(other, b_star, {learned}, {}, cover);
          out.inferences += c.inferences;
          if (c.proofs > 0)
            ++out.covered;
          else
            kept.push_back(other);
        }
        queue = std::move(kept);
      }
    }
  }
  return out;
}

}  // namespace mil
