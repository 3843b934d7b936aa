// Acceptance checks. `milkit_acceptance [N...]` runs the numbered criteria
// (all of them by default) and prints one PASS/FAIL line each.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mil/experiment.hpp"
#include "mil/languages.hpp"
#include "mil/learner.hpp"
#include "mil/logic.hpp"
#include "mil/problems.hpp"
#include "mil/subsumption.hpp"
#include "mil/syntax.hpp"
#include "mil/toil.hpp"

using namespace mil;

namespace {

// Pinned tolerances and limits.
constexpr double kAnbnSeconds = 5.0;
constexpr double kRecoverySeconds = 60.0;
constexpr double kCountingSeconds = 120.0;
constexpr std::size_t kSoundnessYields = 1000;
constexpr double kTrendTolerance = 0.05;
constexpr double kBaselineTolerance = 0.05;

struct Verdict {
  bool pass = true;
  std::string detail;
};

class Check {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (failures_ < 5) notes_ << (failures_ ? "; " : "") << what;
      ++failures_;
    }
  }
  void note(const std::string& s) { info_ << (info_.tellp() > 0 ? ", " : "") << s; }
  Verdict done() const {
    Verdict o;
    o.pass = failures_ == 0;
    o.detail = info_.str();
    if (failures_) o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(failures_) + " failed: " + notes_.str();
    return o;
  }

 private:
  std::size_t failures_ = 0;
  std::ostringstream notes_, info_;
};

std::vector<Clause> b_star_of(const MilProblem& p) {
  std::vector<Clause> out = p.bk;
  for (const auto& e : p.pos) out.emplace_back(e, std::vector<Atom>{});
  return out;
}

bool has_alpha(const std::vector<Metarule>& ms, const Clause& c) {
  return std::any_of(ms.begin(), ms.end(), [&](const Metarule& m) { return alpha_equivalent(m.clause, c); });
}

bool has_alpha(const std::vector<Clause>& cs, const Clause& c) {
  return std::any_of(cs.begin(), cs.end(), [&](const Clause& x) { return alpha_equivalent(x, c); });
}

Clause obj(const std::string& s) { return parse_clause(s); }

// Literals of apply(c, w) all occur in d.
bool witness_holds(const Clause& c, const Clause& d, const MetaSubstitution& w) {
  auto img = apply(c, w);
  for (const auto& l : img.literals())
    if (std::find(d.literals().begin(), d.literals().end(), l) == d.literals().end()) return false;
  return true;
}

bool subsumes_with_witness(const Clause& c, const Clause& d) {
  auto w = meta_subsumes(c, d);
  return w && witness_holds(c, d, *w);
}

std::size_t invented_count(const std::vector<Clause>& prog) {
  std::set<std::string> syms;
  for (const auto& c : prog)
    for (const auto& l : c.literals()) {
      const auto& n = l.atom.pred().name().str();
      if (!n.empty() && n[0] == '$') syms.insert(n);
    }
  return syms.size();
}

std::string fmt(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// 1
Verdict anbn_end_to_end() {
  Check ck;
  auto t0 = std::chrono::steady_clock::now();
  auto p = gen_anbn(3);
  const Clause chain = library_metarule("Chain")->clause;
  for (const char* input : {"Meta-dyadic", "TOM-3"}) {
    MilProblem q = p;
    q.metarules = {*library_metarule(input)};
    auto r = toil_learn(q, {});
    ck.require(r.metarules.size() == 1 && alpha_equivalent(r.metarules[0].clause, chain),
               std::string(input) + " did not give exactly {Chain}");
  }
  auto h = top_program(p);
  auto prog = h.program();
  ck.require(prog.size() == 3, "hypothesis has " + std::to_string(prog.size()) + " clauses");
  for (const char* c : {"s(X,Y) :- a(X,Z), b(Z,Y).", "s(X,Y) :- a(X,Z), $1(Z,Y).", "$1(X,Y) :- s(X,Z), b(Z,Y)."})
    ck.require(has_alpha(prog, obj(c)), std::string("missing ") + c);
  ck.require(invented_count(prog) == 1, "expected one invented predicate");
  Program full(p.bk);
  for (const auto& c : prog) full.add(c);
  for (const auto& e : p.pos) ck.require(entails(full, e, {}) == Truth::yes, "E+ not entailed: " + to_string(e));
  ck.require(entails(full, parse_atom("s([a,a,a,a,b,b,b,b],[])"), {}) == Truth::yes, "a^4b^4 not entailed");
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ck.require(secs < kAnbnSeconds, "took " + fmt(secs) + " s");
  ck.note("hypothesis " + std::to_string(prog.size()) + " clauses");
  return ck.done();
}

// fully-connected H22: dyadic head, 1 or 2 dyadic body literals
bool in_h22(const Metarule& m) {
  if (m.taxon != Taxon::sort || !fully_connected(m)) return false;
  if (m.clause.size() < 2 || m.clause.size() > 3) return false;
  for (const auto& l : m.clause.literals())
    if (l.atom.arity() != 2) return false;
  return true;
}

// 2
Verdict canonical_recovery() {
  Check ck;
  auto t0 = std::chrono::steady_clock::now();
  auto p = gen_coloured_graph(6, Noise::false_pos, 0.1, 7);
  p.metarules = punch_upto(3);
  ToilConfig cfg;
  cfg.max_specialisations = SIZE_MAX;
  auto r = toil_learn(p, cfg);
  std::vector<Metarule> h22;
  for (const auto& m : r.metarules)
    if (in_h22(m)) h22.push_back(m);
  std::size_t found = 0;
  for (const auto& row : canonical_h22()) {
    bool ok = has_alpha(h22, row.clause);
    found += ok;
    ck.require(ok, "missing " + row.name);
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ck.require(secs < kRecoverySeconds, "took " + fmt(secs) + " s");
  ck.note(std::to_string(found) + "/14 rows, " + std::to_string(r.metarules.size()) + " learned, " +
          std::to_string(h22.size()) + " in H22, " + fmt(secs) + " s");
  return ck.done();
}

// 3
Verdict analogy_transfer() {
  Check ck;
  auto [parents, bounded] = gen_analogy_problems();
  const Metarule m1 = analogy_m1();
  MilProblem q = parents;
  q.metarules = {*library_metarule("TOM-3")};
  auto learned = toil_learn(q, {}).metarules;
  ck.require(learned.size() == 1 && alpha_equivalent(learned[0].clause, m1.clause), "TOIL-3 did not give exactly {M1}");

  MilProblem pp = parents;
  pp.metarules = learned.empty() ? std::vector<Metarule>{m1} : learned;
  auto ph = top_program(pp).program();
  ck.require(ph.size() == 1 && has_alpha(ph, obj("parents(X,Y,Z) :- father(X,Z), mother(Y,Z).")),
             "parents clause not learned exactly");

  MilProblem bp = bounded;
  bp.metarules = pp.metarules;
  auto bh = top_program(bp).program();
  ck.require(bh.size() == 2, "bounded_by hypothesis has " + std::to_string(bh.size()) + " clauses");
  ck.require(has_alpha(bh, obj("bounded_by(X,Y,Z) :- lt(X,Z), lt(Y,Z).")), "lt clause missing");
  ck.require(has_alpha(bh, obj("bounded_by(X,Y,Z) :- gt(X,Z), gt(Y,Z).")), "gt clause missing");
  return ck.done();
}

// 4
Verdict counting_suite() {
  Check ck;
  auto t0 = std::chrono::steady_clock::now();
  std::size_t checks = 0, degenerate = 0;
  auto count = [&](std::size_t n) { return Rational(static_cast<long long>(n)); };

  for (std::size_t k = 1; k <= 3; ++k) {
    ck.require(BigInt(enumerate_punch(k).size()) == punch_count(k), "punch count k=" + std::to_string(k));
    ++checks;
  }

  // matrix: "at most", so not strict
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t a = 1; a <= 6; ++a) {
      auto n = enumerate_matrix_subsets(k, a).size();
      ck.require(BigInt(n) == matrix_count_exact(k, a), "matrix exact k=" + std::to_string(k) + " a=" + std::to_string(a));
      ck.require(count(n) <= matrix_bound(k, a), "matrix bound k=" + std::to_string(k) + " a=" + std::to_string(a));
      checks += 2;
    }

  // sort: "less than", strict
  for (std::size_t n = 1; n <= 6; ++n) {
    ck.require(count(enumerate_sort_multisets(n).size()) < sort_bound(n), "sort multisets n=" + std::to_string(n));
    ++checks;
  }
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t a = 1; a <= 6; ++a)
      for (const auto& m : enumerate_matrix_subsets(k, a)) {
        std::size_t first_order = 0;
        for (const auto& v : variables_of(m.clause))
          if (v.order() == Order::first) ++first_order;
        if (first_order == 0 || first_order > 6) continue;
        auto sorts = enumerate_sort(m).size();
        ck.require(count(sorts) < sort_bound(first_order), "sort metarules below " + m.name);
        ++checks;
      }

  // metasubstitutions: "less than"; with a single predicate and a single
  // constant the only tuple meets the bound
  for (std::size_t p = 1; p <= 3; ++p)
    for (std::size_t c = 1; c <= 3; ++c)
      for (std::size_t k = 1; k <= 3; ++k)
        for (std::size_t n = 1; n <= 6; ++n)
          for (std::size_t e = k; e <= n; ++e) {
            std::vector<std::string> preds;
            for (std::size_t i = 0; i < p; ++i) preds.push_back("p" + std::to_string(i));
            std::vector<std::string> consts;
            for (std::size_t i = 0; i < c; ++i) consts.push_back("c" + std::to_string(i));
            std::vector<std::string> heads{preds[0]};
            std::vector<std::string> bodies = p > 1 ? std::vector<std::string>(preds.begin() + 1, preds.end()) : preds;
            auto listed = enumerate_metasubstitutions(heads, bodies, consts, k, e).size();
            ck.require(BigInt(listed) == metasub_exact(heads.size(), bodies.size(), c, k, e), "metasub exact");
            if (p == 1 && c == 1) {
              ck.require(count(listed) <= metasub_bound(p, c, k, n), "metasub bound");
              ++degenerate;
            } else {
              ck.require(count(listed) < metasub_bound(p, c, k, n),
                         "metasub strict p=" + std::to_string(p) + " c=" + std::to_string(c) + " k=" +
                             std::to_string(k) + " n=" + std::to_string(n));
            }
            checks += 2;
          }

  // ground clauses: "less than", strict once some variable is existential
  // and there is more than one constant
  for (std::size_t c = 1; c <= 3; ++c)
    for (std::size_t n = 1; n <= 6; ++n)
      for (std::size_t e = 0; e <= n; ++e) {
        std::vector<std::string> consts;
        for (std::size_t i = 0; i < c; ++i) consts.push_back("c" + std::to_string(i));
        auto listed = enumerate_ground(consts, n - e).size();
        ck.require(BigInt(listed) == ground_exact(c, n - e), "ground exact");
        if (e > 0 && c > 1) {
          ck.require(count(listed) < ground_bound(c, n), "ground strict");
        } else {
          ck.require(count(listed) <= ground_bound(c, n), "ground bound");
          ++degenerate;
        }
        checks += 2;
      }

  // whole language against the composed enumeration
  for (std::size_t k = 1; k <= 2; ++k)
    for (std::size_t a = 1; a <= 4; ++a)
      for (std::size_t n = 1; n <= 4; ++n)
        for (std::size_t p = 1; p <= 2; ++p)
          for (std::size_t c = 1; c <= 2; ++c) {
            CountParams q{k, a, n, p, c};
            ck.require(Rational(composed_language_count(q)) <= language_bound(q), "language bound");
            ++checks;
          }

  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ck.require(secs < kCountingSeconds, "took " + fmt(secs) + " s");
  ck.note(std::to_string(checks) + " comparisons, " + std::to_string(degenerate) + " non-strict by degenerate parameters, " +
          fmt(secs) + " s");
  return ck.done();
}

// 5
Verdict order_theory() {
  Check ck;
  std::vector<Metarule> all = canonical_h22();
  for (auto& m : matrix_h22()) all.push_back(m);
  for (auto& m : punch_upto(3)) all.push_back(m);
  ck.require(all.size() == 18, "expected 18 metarules");
  const std::size_t n = all.size();
  std::vector<std::vector<bool>> le(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      auto w = meta_subsumes(all[i], all[j]);
      le[i][j] = w.has_value();
      if (w) ck.require(witness_holds(all[i].clause, all[j].clause, *w), "bad witness " + all[i].name + " / " + all[j].name);
    }
  for (std::size_t i = 0; i < n; ++i) ck.require(le[i][i], "not reflexive on " + all[i].name);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (le[i][j] && le[j][k]) ck.require(le[i][k], "not transitive " + all[i].name + " " + all[j].name + " " + all[k].name);

  auto lib = [](const char* s) { return library_metarule(s)->clause; };
  const std::pair<const char*, const char*> chains[] = {{"TOM-2", "Meta-monadic"}, {"Meta-monadic", "Identity"},
                                                        {"Meta-monadic", "Inverse"}, {"TOM-3", "Meta-dyadic"},
                                                        {"Meta-dyadic", "Chain"}};
  for (const auto& [a, b] : chains)
    ck.require(subsumes_with_witness(lib(a), lib(b)), std::string(a) + " does not subsume " + b);
  return ck.done();
}

// Randomised vl_specialise runs shared by criteria 6 and 7.
struct SoundnessRun {
  std::size_t yields = 0;
  std::size_t unsound = 0;
  std::vector<LiftRecord> log;
  std::string first_violation;
};

const SoundnessRun& soundness_run() {
  static SoundnessRun run = [] {
    SoundnessRun out;
    std::mt19937_64 rng(20240607);
    std::vector<Metarule> inputs = punch_upto(3);
    for (auto& m : matrix_h22()) inputs.push_back(m);
    ConstructConfig cc;
    cc.max_inventions = 0;
    cc.max_proofs = 1;
    cc.allow_tautologies = true;

    for (std::size_t round = 0; out.yields < kSoundnessYields && round < 10000; ++round) {
      MilProblem p;
      switch (rng() % 4) {
        case 0: {
          static const Noise noises[] = {Noise::none, Noise::false_pos, Noise::false_neg, Noise::ambiguities};
          p = gen_coloured_graph(3 + rng() % 4, noises[rng() % 4], 0.2, rng(), 2 + rng() % 2);
          break;
        }
        case 1: p = gen_anbn(1 + rng() % 4); break;
        case 2: p = (rng() % 2) ? gen_analogy_problems().first : gen_analogy_problems().second; break;
        default: p = gen_grid_world(1 + rng() % 3, 1 + rng() % 3); break;
      }
      if (p.pos.empty()) continue;
      std::vector<Metarule> chosen;
      for (const auto& m : inputs)
        if (rng() % 2) chosen.push_back(m);
      if (chosen.empty()) chosen.push_back(inputs[rng() % inputs.size()]);
      const Atom e = p.pos[rng() % p.pos.size()];
      auto b_star = b_star_of(p);
      auto r = vl_specialise(e, b_star, chosen, {}, ToilConfig{}, SIZE_MAX,
                             [&](const LiftRecord& rec) { out.log.push_back(rec); });
      for (const auto& m : r.metarules) {
        ++out.yields;
        bool ok = m.taxon == Taxon::sort && classify(m) == Taxon::sort && fully_connected(m) &&
                  construct(e, b_star, {m}, {}, cc).proofs > 0;
        if (!ok) {
          if (!out.unsound) out.first_violation = pretty_metarule(m) + " for " + to_string(e);
          ++out.unsound;
        }
      }
    }
    return out;
  }();
  return run;
}

// 6
Verdict soundness() {
  Check ck;
  const auto& run = soundness_run();
  ck.require(run.yields >= kSoundnessYields, "only " + std::to_string(run.yields) + " yields");
  ck.require(run.unsound == 0, std::to_string(run.unsound) + " unsound, first " + run.first_violation);
  ck.note(std::to_string(run.yields) + " yields");
  return ck.done();
}

// 7
Verdict lifting() {
  Check ck;
  const auto& run = soundness_run();
  std::size_t violations = 0;
  for (const auto& rec : run.log) {
    bool ok = fully_connected(rec.ground_instance) == fully_connected(rec.output) &&
              subsumes_with_witness(rec.input.clause, rec.output.clause) &&
              subsumes_with_witness(rec.output.clause, rec.ground_instance);
    if (!ok) {
      if (!violations) ck.require(false, "first violation " + pretty_metarule(rec.output));
      ++violations;
    }
  }
  ck.require(!run.log.empty(), "no tuples logged");
  ck.require(violations == 0, std::to_string(violations) + " violations");
  ck.note(std::to_string(run.log.size()) + " tuples");
  return ck.done();
}

void check_trends(Check& ck, const std::string& label, const ExperimentResult& r) {
  const std::size_t last = r.steps;
  for (Leg leg : {Leg::toil2, Leg::toil3}) {
    double first = r.at(1, leg, "accuracy").mean;
    double worst = 0;
    for (std::size_t s = 1; s <= last; ++s) worst = std::max(worst, std::fabs(r.at(s, leg, "accuracy").mean - first));
    ck.require(worst <= kTrendTolerance, label + " " + std::string(to_string(leg)) + " drifts by " + fmt(worst));
    ck.note(label + " " + std::string(to_string(leg)) + " drift " + fmt(worst));
  }
  double acc = r.at(last, Leg::no_replacement, "accuracy").mean;
  double base = r.at(last, Leg::no_replacement, "baseline").mean;
  ck.require(std::fabs(acc - base) <= kBaselineTolerance,
             label + " final no-replacement accuracy " + fmt(acc) + " vs baseline " + fmt(base));
  ck.note(label + " final " + fmt(acc) + "/" + fmt(base));
  for (std::size_t s = 2; s <= last; ++s) {
    double before = r.at(s - 1, Leg::no_replacement, "inferences").mean;
    double now = r.at(s, Leg::no_replacement, "inferences").mean;
    ck.require(now <= before + 1e-9, label + " inferences rise at step " + std::to_string(s));
  }
}

// 8
Verdict experiment_trends() {
  Check ck;
  {
    ExperimentConfig cfg;
    cfg.problem = gen_anbn(6);
    cfg.runs = 10;
    cfg.rng_seed = 11;
    check_trends(ck, "anbn", run_replacement_experiment(cfg));
  }
  {
    ExperimentConfig cfg;
    cfg.problem = gen_coloured_graph(6, Noise::none, 0.0, 5);
    cfg.runs = 3;
    cfg.rng_seed = 11;
    cfg.toil.sample_rate = 0.5;
    check_trends(ck, "coloured_graph", run_replacement_experiment(cfg));
  }
  return ck.done();
}

struct Criterion {
  const char* name;
  Verdict (*run)();
};

const Criterion kCriteria[] = {
    {"anbn end-to-end", anbn_end_to_end},
    {"canonical-set recovery", canonical_recovery},
    {"analogy transfer", analogy_transfer},
    {"counting suite", counting_suite},
    {"order theory", order_theory},
    {"soundness", soundness},
    {"lifting properties", lifting},
    {"experiment trends", experiment_trends},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::size_t> which;
  for (int i = 1; i < argc; ++i) {
    int n = std::atoi(argv[i]);
    if (n < 1 || n > 8) {
      std::cerr << "usage: milkit_acceptance [1-8...]\n";
      return 2;
    }
    which.push_back(static_cast<std::size_t>(n));
  }
  if (which.empty())
    for (std::size_t i = 1; i <= 8; ++i) which.push_back(i);

  int failed = 0;
  for (std::size_t n : which) {
    const auto& c = kCriteria[n - 1];
    auto t0 = std::chrono::steady_clock::now();
    Verdict o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << n << " " << c.name << " [" << fmt(secs, 2) << " s] " << o.detail
              << std::endl;
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
