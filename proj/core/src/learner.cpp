#include "mil/learner.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "mil/logic.hpp"
#include "mil/syntax.hpp"

namespace mil {

void MilProblem::validate() const {
  config.validate();
  for (const auto* set : {&pos, &neg})
    for (const auto& a : *set)
      if (!a.is_ground() || a.pred().is_var()) throw Error("example is not ground: " + to_string(a));
  for (const auto& a : pos)
    if (std::find(neg.begin(), neg.end(), a) != neg.end())
      throw Error("example is both positive and negative: " + to_string(a));
  for (const auto& c : bk)
    if (!c.is_definite()) throw Error("background clause is not definite: " + to_string(c));
}

std::vector<std::string> MilProblem::targets() const {
  std::vector<std::string> out;
  for (const auto* set : {&pos, &neg})
    for (const auto& a : *set) {
      const std::string& s = a.pred().name().str();
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    }
  return out;
}

std::vector<std::string> default_invented_pool(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= n; ++i) out.push_back("$" + std::to_string(i));
  return out;
}

std::vector<Clause> Hypothesis::program() const {
  std::vector<Clause> out;
  out.reserve(clauses.size());
  for (const auto& i : clauses) out.push_back(i.clause);
  return out;
}

namespace {

struct Prepared {
  const Metarule* metarule;
  Term head;
  std::vector<Term> body;
  std::vector<Term> existential;
};

std::vector<Prepared> prepare(const std::vector<Metarule>& metarules) {
  std::vector<Prepared> out;
  for (const auto& m : metarules) {
    if (!m.clause.is_definite()) throw Error("metarule " + m.name + " is not definite");
    if (classify(m.clause) == Taxon::punch) throw Error("punch metarule " + m.name + " cannot be used to construct clauses");
    Prepared p{&m, encapsulate(m.clause.head()), {}, {}};
    for (const auto& a : m.clause.body()) p.body.push_back(encapsulate(a));
    for (const auto& v : variables_of(m.clause))
      if (v.quant() == Quant::existential) p.existential.push_back(v);
    out.push_back(std::move(p));
  }
  return out;
}

bool is_tautology(const Clause& c) {
  const auto body = c.body();
  return std::find(body.begin(), body.end(), c.head()) != body.end();
}

bool args_ground(const Term& enc, const Bindings& b) {
  for (std::size_t i = 1; i < enc.arity(); ++i)
    if (!b.resolve(enc.args()[i]).is_ground()) return false;
  return true;
}

class Constructor {
 public:
  Constructor(const Program& program, const std::vector<Prepared>& metarules, std::vector<std::string> available,
              const ConstructConfig& cfg)
      : engine_(program, cfg.proof), metarules_(metarules), available_(std::move(available)), cfg_(cfg) {}

  // Runs every derivation of goal with at most `limit` inventions.
  void run(const Term& goal, std::size_t limit, const std::function<bool(std::vector<Instance>)>& on_proof) {
    limit_ = limit;
    wanted_more_ = false;
    prove_head(goal, [&] {
      std::vector<Instance> out;
      for (const auto& [pi, gen] : acc_) {
        const Prepared& p = metarules_[pi];
        MetaSubstitution theta;
        for (const auto& v : p.existential) {
          Term t = b_.resolve(Term::var(VarKey{v.name(), gen}, v.order(), v.quant()));
          if (!t.is_ground()) return true;
          theta.bind(v, t);
        }
        Clause c = apply(p.metarule->clause, theta);
        if (!cfg_.allow_tautologies && is_tautology(c)) return true;
        out.push_back({*p.metarule, std::move(theta), std::move(c)});
      }
      return on_proof(std::move(out));
    });
  }

  bool budget_exceeded() const { return budget_; }
  bool pool_short() const { return pool_short_; }
  bool wanted_more() const { return wanted_more_; }
  std::size_t inferences() const { return engine_.stats().inferences + meta_steps_; }

 private:
  bool over() {
    if (engine_.budget_exhausted() || inferences() >= cfg_.proof.max_inferences) budget_ = true;
    return budget_;
  }

  bool prove_head(const Term& goal, const std::function<bool()>& k) {
    for (std::size_t pi = 0; pi < metarules_.size(); ++pi) {
      if (over()) return false;
      const Prepared& p = metarules_[pi];
      if (p.head.arity() != goal.arity()) continue;
      std::uint32_t gen = b_.fresh_gen();
      std::size_t mark = b_.mark();
      if (!unify(rename(p.head, gen), goal, b_, cfg_.proof.occurs_check)) continue;
      ++meta_steps_;
      std::vector<Term> body;
      body.reserve(p.body.size());
      for (const auto& t : p.body) body.push_back(rename(t, gen));
      acc_.emplace_back(pi, gen);
      bool go = prove_body(body, 0, k);
      acc_.pop_back();
      b_.undo(mark);
      if (!go) return false;
    }
    return true;
  }

  bool prove_body(const std::vector<Term>& body, std::size_t i, const std::function<bool()>& k) {
    if (i == body.size()) return k();
    bool found = false;
    Outcome o = engine_.solve({body[i]}, b_, [&] {
      found = true;
      return prove_body(body, i + 1, k);
    });
    if (o == Outcome::budget) budget_ = true;
    if (o != Outcome::exhausted) return false;
    if (found) return true;

    Term pred = b_.walk(body[i].args().front());
    if (!pred.is_var() || !args_ground(body[i], b_)) return true;
    if (inventions_ >= limit_) {
      wanted_more_ = true;
      if (inventions_ >= available_.size()) pool_short_ = true;
      return true;
    }
    std::size_t mark = b_.mark();
    b_.bind(pred.key(), Term::constant(available_[inventions_]));
    ++inventions_;
    Term goal = b_.resolve(body[i]);
    bool go = prove_head(goal, [&] { return prove_body(body, i + 1, k); });
    --inventions_;
    b_.undo(mark);
    return go;
  }

  Engine engine_;
  Bindings b_;
  const std::vector<Prepared>& metarules_;
  std::vector<std::string> available_;
  const ConstructConfig& cfg_;
  std::vector<std::pair<std::size_t, std::uint32_t>> acc_;
  std::size_t limit_ = 0;
  std::size_t inventions_ = 0;
  std::size_t meta_steps_ = 0;
  bool budget_ = false;
  bool pool_short_ = false;
  bool wanted_more_ = false;
};

std::vector<std::string> unused_symbols(const std::vector<Clause>& b_star, const std::vector<std::string>& pool) {
  std::set<std::string> used;
  for (const auto& c : b_star)
    for (const auto& l : c.literals())
      if (!l.atom.pred().is_var()) used.insert(l.atom.pred().name().str());
  std::vector<std::string> out;
  for (const auto& s : pool)
    if (!used.count(s)) out.push_back(s);
  return out;
}

}  // namespace

ConstructResult construct(const Atom& e, const std::vector<Clause>& b_star, const std::vector<Metarule>& metarules,
                          const std::vector<std::string>& invented_pool, const ConstructConfig& cfg) {
  cfg.proof.validate();
  auto prepared = prepare(metarules);
  Program program(b_star);
  auto available = unused_symbols(b_star, invented_pool);
  Constructor ctor(program, prepared, available, cfg);
  const std::size_t max_level = std::min(cfg.max_inventions, available.size());
  Term goal = encapsulate(e);

  ConstructResult out;
  std::set<std::string> seen;
  for (std::size_t level = 0; level <= max_level; ++level) {
    ctor.run(goal, level, [&](std::vector<Instance> instances) {
      for (auto& inst : instances) {
        std::string key = inst.metarule.name + "|" + to_string(inst.clause);
        if (seen.insert(key).second) out.instances.push_back(std::move(inst));
      }
      return ++out.proofs < cfg.max_proofs;
    });
    out.inventions = level;
    if (out.proofs > 0 || ctor.budget_exceeded() || !ctor.wanted_more()) break;
  }
  out.inferences = ctor.inferences();
  out.budget_exceeded = ctor.budget_exceeded();
  if (out.proofs == 0 && !out.budget_exceeded && ctor.pool_short() && available.size() < cfg.max_inventions) throw Error("invention depth exceeded");
  return out;
}

namespace {

Clause rename_symbols(const Clause& c, const std::map<std::string, std::string>& map) {
  std::vector<Literal> lits;
  for (const auto& l : c.literals()) {
    Term pred = l.atom.pred();
    if (!pred.is_var())
      if (auto it = map.find(pred.name().str()); it != map.end()) pred = Term::constant(it->second);
    lits.push_back({Atom(pred, l.atom.args()), l.positive});
  }
  return Clause(std::move(lits));
}

Instance rename_symbols(const Instance& inst, const std::map<std::string, std::string>& map) {
  Instance out = inst;
  out.clause = rename_symbols(inst.clause, map);
  for (auto& [k, target] : out.theta.existential) {
    if (Term* t = std::get_if<Term>(&target); t && t->is_constant())
      if (auto it = map.find(t->name().str()); it != map.end()) *t = Term::constant(it->second);
  }
  return out;
}

std::vector<std::string> definition(const std::vector<Instance>& h, const std::string& sym,
                                    const std::map<std::string, std::string>& placeholder) {
  std::vector<std::string> out;
  for (const auto& i : h)
    if (i.clause.head().pred().name().str() == sym) out.push_back(canonical_key(rename_symbols(i.clause, placeholder)));
  std::sort(out.begin(), out.end());
  return out;
}

void dedupe(std::vector<Instance>& h) {
  std::set<std::string> seen;
  std::vector<Instance> out;
  for (auto& i : h)
    if (seen.insert(canonical_key(i.clause)).second) out.push_back(std::move(i));
  h = std::move(out);
}

// Folds invented predicates with identical definitions into one and
// renumbers the survivors from the front of the pool.
void merge_invented(std::vector<Instance>& h, const std::vector<std::string>& pool) {
  std::set<std::string> pool_set(pool.begin(), pool.end());
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<std::string> syms;
    for (const auto& i : h) {
      const std::string& s = i.clause.head().pred().name().str();
      if (pool_set.count(s) && std::find(syms.begin(), syms.end(), s) == syms.end()) syms.push_back(s);
    }
    for (std::size_t a = 0; a < syms.size() && !changed; ++a)
      for (std::size_t b = a + 1; b < syms.size() && !changed; ++b) {
        std::map<std::string, std::string> ph{{syms[a], "$_"}, {syms[b], "$_"}};
        if (definition(h, syms[a], ph) != definition(h, syms[b], ph)) continue;
        std::map<std::string, std::string> fold{{syms[b], syms[a]}};
        for (auto& i : h) i = rename_symbols(i, fold);
        dedupe(h);
        changed = true;
      }
  }
  std::map<std::string, std::string> renumber;
  std::size_t next = 0;
  for (const auto& i : h)
    for (const auto& l : i.clause.literals()) {
      const std::string& s = l.atom.pred().name().str();
      if (pool_set.count(s) && !renumber.count(s)) renumber[s] = pool[next++];
    }
  for (auto& i : h) i = rename_symbols(i, renumber);
}

std::vector<Clause> with_hypothesis(const std::vector<Clause>& bk, const std::vector<Instance>& h,
                                    std::size_t skip = SIZE_MAX) {
  std::vector<Clause> out = bk;
  for (std::size_t i = 0; i < h.size(); ++i)
    if (i != skip) out.push_back(h[i].clause);
  return out;
}

void specialise(Hypothesis& h, const std::vector<Clause>& bk, const std::vector<Atom>& neg, const ProofConfig& cfg) {
  for (bool changed = true; changed && !h.clauses.empty();) {
    changed = false;
    Entailer full(with_hypothesis(bk, h.clauses), cfg);
    for (const auto& e : neg) {
      if (full(e) != Truth::yes) continue;
      // a minimal subset of H still entailing e; every clause whose removal
      // alone breaks e is in it
      std::vector<Instance> support = h.clauses;
      std::vector<std::size_t> index(h.clauses.size());
      for (std::size_t i = 0; i < index.size(); ++i) index[i] = i;
      for (std::size_t i = support.size(); i-- > 0;) {
        if (Entailer(with_hypothesis(bk, support, i), cfg)(e) != Truth::yes) continue;
        support.erase(support.begin() + static_cast<std::ptrdiff_t>(i));
        index.erase(index.begin() + static_cast<std::ptrdiff_t>(i));
      }
      // blame the clauses that conclude e from what the rest derives
      std::set<std::size_t> culprits;
      Entailer support_only(with_hypothesis(bk, support), cfg);
      for (std::size_t k = 0; k < support.size(); ++k) {
        const Clause& c = support[k].clause;
        Bindings b;
        if (!unify(c.head(), e, b, true)) continue;
        if (const auto* m = support_only.model()) {
          std::vector<Clause> facts;
          for (const auto& f : *m)
            if (!(f == e)) facts.emplace_back(f, std::vector<Atom>{});
          facts.push_back(c);
          if (Entailer(facts, cfg)(e) != Truth::yes) continue;
        }
        culprits.insert(index[k]);
      }
      if (culprits.empty()) culprits.insert(index.begin(), index.end());
      if (culprits.empty()) continue;
      std::vector<Instance> kept;
      for (std::size_t i = 0; i < h.clauses.size(); ++i) {
        if (culprits.count(i))
          h.removed.push_back(h.clauses[i].clause);
        else
          kept.push_back(std::move(h.clauses[i]));
      }
      h.clauses = std::move(kept);
      changed = true;
      break;
    }
  }
}

}  // namespace

Hypothesis top_program(const MilProblem& problem) {
  problem.validate();
  Hypothesis h;
  std::vector<Clause> b_star = problem.bk;
  for (const auto& e : problem.pos) b_star.emplace_back(e, std::vector<Atom>{});
  ConstructConfig cc;
  cc.proof = problem.config;
  std::set<std::string> seen;
  ConstructConfig flat = cc;
  flat.max_inventions = 0;
  const std::vector<Clause> base = b_star;
  for (const auto& e : problem.pos) {
    // B + E+ alone first; clauses learned so far only help examples that
    // have no derivation without them
    ConstructResult r = construct(e, base, problem.metarules, {}, flat);
    h.inferences += r.inferences;
    if (r.proofs == 0 && !r.budget_exceeded) {
      try {
        r = construct(e, b_star, problem.metarules, problem.invented, cc);
      } catch (const Error&) {
        continue;  // pool exhausted without a derivation: e stays uncovered
      }
      h.inferences += r.inferences;
    }
    if (r.budget_exceeded) h.budget_exceeded.push_back(e);
    for (auto& inst : r.instances) {
      if (!seen.insert(canonical_key(inst.clause)).second) continue;
      b_star.push_back(inst.clause);
      h.clauses.push_back(std::move(inst));
    }
  }
  merge_invented(h.clauses, problem.invented);
  specialise(h, problem.bk, problem.neg, problem.config);
  return h;
}

double accuracy(const Hypothesis& h, const std::vector<Clause>& bk, const std::vector<Atom>& test_pos,
                const std::vector<Atom>& test_neg, const ProofConfig& cfg) {
  const std::size_t total = test_pos.size() + test_neg.size();
  if (total == 0) return 0.0;
  Entailer entailed(with_hypothesis(bk, h.clauses), cfg);
  std::size_t correct = 0;
  for (const auto& a : test_pos)
    if (entailed(a) == Truth::yes) ++correct;
  for (const auto& a : test_neg)
    if (entailed(a) != Truth::yes) ++correct;
  return static_cast<double>(correct) / static_cast<double>(total);
}

}  // namespace mil
