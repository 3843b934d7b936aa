#include "mil/resolution.hpp"

#include "mil/logic.hpp"

namespace mil {

void ProofConfig::validate() const {
  if (max_depth < 1) throw Error("max_depth must be at least 1");
  if (max_inferences < max_depth) throw Error("max_inferences must be at least max_depth");
}

const Term* Bindings::lookup(const VarKey& k) const {
  auto it = map_.find(k);
  return it == map_.end() ? nullptr : &it->second;
}

void Bindings::bind(const VarKey& k, Term t) {
  map_.insert_or_assign(k, std::move(t));
  trail_.push_back(k);
}

void Bindings::undo(std::size_t mark) {
  while (trail_.size() > mark) {
    map_.erase(trail_.back());
    trail_.pop_back();
  }
}

Term Bindings::walk(Term t) const {
  while (t.is_var()) {
    const Term* next = lookup(t.key());
    if (!next) break;
    t = *next;
  }
  return t;
}

Term Bindings::resolve(const Term& t) const {
  Term w = walk(t);
  if (!w.is_compound()) return w;
  std::vector<Term> args;
  args.reserve(w.arity());
  bool changed = false;
  for (const auto& a : w.args()) {
    args.push_back(resolve(a));
    changed = changed || !(args.back() == a);
  }
  return changed ? Term::compound(w.name(), std::move(args)) : w;
}

Atom Bindings::resolve(const Atom& a) const {
  std::vector<Term> args;
  args.reserve(a.arity());
  for (const auto& t : a.args()) args.push_back(resolve(t));
  Term pred = resolve(a.pred());
  return Atom(std::move(pred), std::move(args));
}

std::map<VarKey, Term> Bindings::project(const std::vector<Term>& vars) const {
  std::map<VarKey, Term> out;
  for (const auto& v : vars) {
    Term r = resolve(v);
    if (!(r == v)) out.emplace(v.key(), r);
  }
  return out;
}

namespace {

bool occurs(const VarKey& k, const Term& t, const Bindings& b) {
  Term w = b.walk(t);
  if (w.is_var()) return w.key() == k;
  if (!w.is_compound()) return false;
  for (const auto& a : w.args())
    if (occurs(k, a, b)) return true;
  return false;
}

bool unify_rec(const Term& x, const Term& y, Bindings& b, bool oc) {
  Term a = b.walk(x);
  Term c = b.walk(y);
  if (a.is_var() && c.is_var() && a.key() == c.key()) return true;
  if (a.is_var()) {
    if (oc && occurs(a.key(), c, b)) return false;
    b.bind(a.key(), c);
    return true;
  }
  if (c.is_var()) {
    if (oc && occurs(c.key(), a, b)) return false;
    b.bind(c.key(), a);
    return true;
  }
  if (a.kind() != c.kind() || a.name() != c.name() || a.arity() != c.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i)
    if (!unify_rec(a.args()[i], c.args()[i], b, oc)) return false;
  return true;
}

}  // namespace

bool unify(const Term& x, const Term& y, Bindings& b, bool occurs_check) {
  std::size_t m = b.mark();
  if (unify_rec(x, y, b, occurs_check)) return true;
  b.undo(m);
  return false;
}

bool unify(const Atom& x, const Atom& y, Bindings& b, bool occurs_check) {
  if (x.is_atom_var() || y.is_atom_var()) throw Error("cannot unify atom variables directly");
  if (x.arity() != y.arity()) return false;
  std::size_t m = b.mark();
  bool ok = unify_rec(x.pred(), y.pred(), b, occurs_check);
  for (std::size_t i = 0; ok && i < x.arity(); ++i) ok = unify_rec(x.args()[i], y.args()[i], b, occurs_check);
  if (!ok) b.undo(m);
  return ok;
}

std::optional<Bindings> unify(const Term& x, const Term& y, const Bindings& in, bool occurs_check) {
  Bindings out = in;
  if (!unify(x, y, out, occurs_check)) return std::nullopt;
  return out;
}

std::optional<Bindings> unify(const Atom& x, const Atom& y, const Bindings& in, bool occurs_check) {
  Bindings out = in;
  if (!unify(x, y, out, occurs_check)) return std::nullopt;
  return out;
}

Term rename(const Term& t, std::uint32_t gen) {
  if (t.is_var()) return Term::var(VarKey{t.name(), gen}, t.order(), t.quant());
  if (!t.is_compound()) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(rename(a, gen));
  return Term::compound(t.name(), std::move(args));
}

void Program::add(const Clause& c) {
  if (!c.is_definite()) throw Error("program clauses must be definite");
  Entry e{encapsulate(c.head()), {}, c};
  for (const auto& a : c.body()) e.body.push_back(encapsulate(a));
  std::size_t idx = entries_.size();
  const Term& pred = c.head().pred();
  entries_.push_back(std::move(e));
  all_.push_back(idx);
  if (pred.is_var()) {
    var_headed_.push_back(idx);
    for (auto& [_, list] : by_pred_) list.push_back(idx);
  } else {
    auto [it, fresh] = by_pred_.try_emplace(pred.name().id());
    if (fresh) it->second = var_headed_;
    it->second.push_back(idx);
  }
}

const std::vector<std::size_t>& Program::candidates(const Term& pred) const {
  if (pred.is_var()) return all_;
  auto it = by_pred_.find(pred.name().id());
  return it == by_pred_.end() ? var_headed_ : it->second;
}

Outcome Engine::solve(const std::vector<Term>& goals, Bindings& b, const std::function<bool()>& on_solution) {
  if (budget_hit_) return Outcome::budget;
  std::vector<Goal> stack;
  stack.reserve(goals.size());
  for (auto it = goals.rbegin(); it != goals.rend(); ++it) stack.push_back({*it, 0});
  bool go_on = run(stack, b, on_solution);
  if (budget_hit_) return Outcome::budget;
  return go_on ? Outcome::exhausted : Outcome::stopped;
}

// Iterative so that long derivations do not grow the C++ stack. One frame
// per selected goal; a frame is "applied" while one of its clauses is in use.
bool Engine::run(std::vector<Goal>& stack, Bindings& b, const std::function<bool()>& on_solution) {
  struct Frame {
    Goal goal;
    Term selected;
    std::size_t next = 0;  // position in the candidate list
    std::size_t base = 0;  // stack size once the goal is popped
    std::size_t mark = 0;
    bool applied = false;
  };
  std::vector<Frame> frames;
  bool go_on = true;

  auto retract = [&](Frame& f) {
    if (!f.applied) return;
    stack.resize(f.base);
    path_.pop_back();
    b.undo(f.mark);
    f.applied = false;
  };

  bool descend = true;
  while (true) {
    if (descend) {
      if (stack.empty()) {
        if (!on_solution()) {
          go_on = false;
          break;
        }
      } else {
        Goal goal = stack.back();
        Term g = b.walk(goal.term);
        if (!g.is_compound()) throw Error("goal is not an encapsulated atom");
        if (goal.depth >= cfg_.max_depth) {
          stats_.depth_limited = true;
        } else {
          stack.pop_back();
          frames.push_back({goal, std::move(g), 0, stack.size(), 0, false});
        }
      }
    }
    if (frames.empty()) break;

    // try the next clause for the top frame
    Frame& f = frames.back();
    retract(f);
    Term pred = b.walk(f.selected.args().front());
    const auto& cands = program_.candidates(pred);
    descend = false;
    while (f.next < cands.size()) {
      std::size_t idx = cands[f.next++];
      const auto& entry = program_.entries()[idx];
      if (entry.head.arity() != f.selected.arity()) continue;
      if (stats_.inferences >= cfg_.max_inferences) {
        budget_hit_ = true;
        go_on = false;
        break;
      }
      std::uint32_t gen = b.fresh_gen();
      std::size_t mark = b.mark();
      if (!unify(rename(entry.head, gen), f.selected, b, cfg_.occurs_check)) continue;
      ++stats_.inferences;
      f.mark = mark;
      f.applied = true;
      path_.push_back(idx);
      for (auto it = entry.body.rbegin(); it != entry.body.rend(); ++it)
        stack.push_back({rename(*it, gen), f.goal.depth + 1});
      descend = true;
      break;
    }
    if (!go_on) break;
    if (!descend) {
      stack.push_back(f.goal);
      frames.pop_back();
    }
  }

  for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
    retract(*it);
    stack.push_back(it->goal);
  }
  return go_on;
}

Refutations sld_refute(const std::vector<Atom>& goal, const Program& program, const ProofConfig& cfg,
                       std::size_t limit) {
  Refutations out;
  std::vector<Term> goals;
  std::vector<Term> vars;
  for (const auto& a : goal) {
    goals.push_back(encapsulate(a));
    for (const auto& v : variables_of(a)) collect_variables(v, vars);
  }
  Engine engine(program, cfg);
  Bindings b;
  if (limit == 0) return out;
  out.outcome = engine.solve(goals, b, [&] {
    out.answers.push_back(b.project(vars));
    return out.answers.size() < limit;
  });
  out.stats = engine.stats();
  return out;
}

Truth entails(const Program& program, const Atom& ground_atom, const ProofConfig& cfg, SearchStats* stats) {
  if (!ground_atom.is_ground()) throw Error("entails expects a ground atom");
  Engine engine(program, cfg);
  Bindings b;
  bool found = false;
  Outcome o = engine.solve({encapsulate(ground_atom)}, b, [&] {
    found = true;
    return false;
  });
  if (stats) *stats = engine.stats();
  if (found) return Truth::yes;
  if (o == Outcome::budget || engine.stats().depth_limited) return Truth::unknown;
  return Truth::no;
}

namespace {

bool flat(const Atom& a) {
  if (!a.pred().is_constant()) return false;
  for (const auto& t : a.args())
    if (t.is_compound()) return false;
  return true;
}

// Argument is a constant, or a variable slot when `slot` >= 0.
struct Arg {
  Term constant;
  int slot = -1;
};
struct Lit {
  std::uint32_t pred;
  std::vector<Arg> args;
};
struct Rule {
  Lit head;
  std::vector<Lit> body;
  std::size_t slots = 0;
};

Lit compile(const Atom& a, std::map<VarKey, int>& slots) {
  Lit l{a.pred().name().id(), {}};
  for (const auto& t : a.args()) {
    if (t.is_var()) {
      auto [it, _] = slots.try_emplace(t.key(), static_cast<int>(slots.size()));
      l.args.push_back({Term(), it->second});
    } else {
      l.args.push_back({t, -1});
    }
  }
  return l;
}

using Facts = std::map<std::uint32_t, std::vector<Atom>>;

class Joiner {
 public:
  Joiner(const Rule& r, const Facts& all, const std::vector<Atom>& first, std::size_t j)
      : r_(r), all_(all), first_(first), j_(j), env_(r.slots, nullptr) {}

  template <class F>
  void run(F&& emit) {
    for (const auto& f : first_) {
      if (f.arity() != r_.body[j_].args.size()) continue;
      std::vector<int> bound;
      if (bind(r_.body[j_], f, bound)) step(0, emit);
      for (int s : bound) env_[s] = nullptr;
    }
  }

 private:
  bool bind(const Lit& l, const Atom& f, std::vector<int>& bound) {
    for (std::size_t i = 0; i < l.args.size(); ++i) {
      const Term& t = f.args()[i];
      const Arg& a = l.args[i];
      if (a.slot < 0) {
        if (a.constant != t) return false;
      } else if (env_[a.slot]) {
        if (*env_[a.slot] != t) return false;
      } else {
        env_[a.slot] = &t;
        bound.push_back(a.slot);
      }
    }
    return true;
  }

  template <class F>
  void step(std::size_t i, F& emit) {
    if (i == j_) ++i;
    if (i >= r_.body.size()) {
      std::vector<Term> args;
      args.reserve(r_.head.args.size());
      for (const auto& a : r_.head.args) args.push_back(a.slot < 0 ? a.constant : *env_[a.slot]);
      emit(std::move(args));
      return;
    }
    const Lit& l = r_.body[i];
    auto it = all_.find(l.pred);
    if (it == all_.end()) return;
    for (const auto& f : it->second) {
      if (f.arity() != l.args.size()) continue;
      std::vector<int> bound;
      if (bind(l, f, bound)) step(i + 1, emit);
      for (int s : bound) env_[s] = nullptr;
    }
  }

  const Rule& r_;
  const Facts& all_;
  const std::vector<Atom>& first_;
  std::size_t j_;
  std::vector<const Term*> env_;
};

}  // namespace

std::optional<std::set<Atom>> datalog_model(const std::vector<Clause>& program, std::size_t max_facts) {
  std::vector<Rule> rules;
  std::vector<Term> head_preds;
  std::set<Atom> model;
  Facts all;
  for (const auto& c : program) {
    if (!c.is_definite()) return std::nullopt;
    const Atom& head = c.head();
    auto body = c.body();
    if (!flat(head)) return std::nullopt;
    if (body.empty()) {
      if (!head.is_ground()) return std::nullopt;
      if (model.insert(head).second) all[head.pred().name().id()].push_back(head);
      continue;
    }
    std::map<VarKey, int> slots;
    Rule r;
    for (const auto& b : body) {
      if (!flat(b)) return std::nullopt;
      r.body.push_back(compile(b, slots));
    }
    std::size_t body_slots = slots.size();
    r.head = compile(head, slots);
    if (slots.size() != body_slots) return std::nullopt;  // not range-restricted
    r.slots = slots.size();
    rules.push_back(std::move(r));
    head_preds.push_back(head.pred());
  }

  Facts fresh = all;
  while (!fresh.empty()) {
    Facts next;
    bool overflow = false;
    for (std::size_t ri = 0; ri < rules.size() && !overflow; ++ri) {
      const Rule& r = rules[ri];
      // at least one body literal matches a fact new in the last round
      for (std::size_t j = 0; j < r.body.size(); ++j) {
        auto fj = fresh.find(r.body[j].pred);
        if (fj == fresh.end()) continue;
        Joiner(r, all, fj->second, j).run([&](std::vector<Term> args) {
          if (args.size() != r.head.args.size()) return;
          Atom a(head_preds[ri], std::move(args));
          if (!model.insert(a).second) return;
          if (model.size() > max_facts) overflow = true;
          next[r.head.pred].push_back(std::move(a));
        });
      }
    }
    if (overflow) return std::nullopt;
    for (auto& [k, v] : next) all[k].insert(all[k].end(), v.begin(), v.end());
    fresh = std::move(next);
  }
  return model;
}

Entailer::Entailer(const std::vector<Clause>& program, const ProofConfig& cfg)
    : cfg_(cfg), model_(datalog_model(program)) {
  if (!model_) clauses_ = program;
}

Truth Entailer::operator()(const Atom& ground_atom) {
  if (model_) return model_->count(ground_atom) ? Truth::yes : Truth::no;
  if (!program_) program_.emplace(clauses_);
  return entails(*program_, ground_atom, cfg_);
}

}  // namespace mil
