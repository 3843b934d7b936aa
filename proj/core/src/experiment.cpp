#include "mil/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <random>
#include <set>

#include "mil/logic.hpp"
#include "mil/subsumption.hpp"

namespace mil {

namespace {

struct Split {
  std::vector<Atom> train_pos, train_neg, test_pos, test_neg;
};

std::size_t train_count(std::size_t n, double frac) {
  if (n < 2) return n;
  auto k = static_cast<std::size_t>(std::llround(frac * static_cast<double>(n)));
  return std::clamp<std::size_t>(k, 1, n - 1);
}

void split_into(std::vector<Atom> xs, double frac, std::mt19937_64& rng, std::vector<Atom>& train,
                std::vector<Atom>& test) {
  std::shuffle(xs.begin(), xs.end(), rng);
  std::size_t k = train_count(xs.size(), frac);
  train.assign(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(k));
  test.assign(xs.begin() + static_cast<std::ptrdiff_t>(k), xs.end());
}

std::vector<Metarule> dedup(std::vector<Metarule> ms) {
  std::set<std::string> seen;
  std::vector<Metarule> out;
  for (auto& m : ms)
    if (seen.insert(canonical_key(m)).second) out.push_back(std::move(m));
  return out;
}

std::vector<Metarule> toil_inputs(const std::vector<Metarule>& user, Leg leg) {
  std::vector<Metarule> out;
  for (const auto& m : user) out.push_back(leg == Leg::toil2 ? generalise_to_matrix(m) : generalise_to_punch(m));
  return dedup(std::move(out));
}

struct Sample {
  std::vector<double> values;
  void add(double v) { values.push_back(v); }
  double mean() const {
    if (values.empty()) return 0;
    double s = 0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }
  double stderr_() const {
    if (values.size() < 2) return 0;
    double m = mean(), ss = 0;
    for (double v : values) ss += (v - m) * (v - m);
    double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    return sd / std::sqrt(static_cast<double>(values.size()));
  }
};

}  // namespace

std::string_view to_string(Leg leg) {
  switch (leg) {
    case Leg::no_replacement: return "no_replacement";
    case Leg::toil2: return "toil2";
    case Leg::toil3: return "toil3";
  }
  return "?";
}

std::size_t default_attempt_budget() {
  if (const char* env = std::getenv("MILKIT_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1000000;
}

void ExperimentConfig::validate() const {
  if (runs < 1) throw Error("runs must be at least 1");
  if (!(sample_split > 0.0 && sample_split < 1.0)) throw Error("sample split must be in (0,1)");
  if (legs.empty()) throw Error("no legs selected");
  if (attempt_budget == 0) throw Error("attempt budget must be positive");
  toil.validate();
  problem.validate();
  for (const auto& m : problem.metarules)
    if (m.taxon != Taxon::sort) throw Error("experiment metarules must be sort metarules: " + m.name);
}

const ExperimentRow& ExperimentResult::at(std::size_t step, Leg leg, const std::string& metric) const {
  for (const auto& r : rows)
    if (r.step == step && r.leg == leg && r.metric == metric) return r;
  throw Error("no row for step " + std::to_string(step) + " " + std::string(to_string(leg)) + " " + metric);
}

ExperimentResult run_replacement_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto& user = cfg.problem.metarules;
  const std::size_t steps = user.size() + 1;
  static const char* metrics[] = {"accuracy", "baseline", "inferences", "duration_ms", "metarules", "budget_exceeded"};

  // samples[step][leg][metric]
  std::map<std::size_t, std::map<Leg, std::map<std::string, Sample>>> samples;
  ExperimentResult result;
  result.steps = steps;

  std::mt19937_64 master(cfg.rng_seed);
  for (std::size_t run = 0; run < cfg.runs; ++run) {
    RunRecord rec;
    rec.seed = master();
    std::mt19937_64 rng(rec.seed);

    std::vector<std::size_t> order(user.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (auto i : order) rec.removal_order.push_back(user[i].name);

    // one split per run, shared by legs and steps
    Split sp;
    split_into(cfg.problem.pos, cfg.sample_split, rng, sp.train_pos, sp.test_pos);
    split_into(cfg.problem.neg, cfg.sample_split, rng, sp.train_neg, sp.test_neg);
    MilProblem train = cfg.problem;
    train.pos = sp.train_pos;
    train.neg = sp.train_neg;

    for (Leg leg : cfg.legs) {
      if (leg == Leg::no_replacement) continue;
      MilProblem tp = train;
      tp.metarules = toil_inputs(user, leg);
      ToilConfig tc = cfg.toil;
      tc.rng_seed = rec.seed;
      rec.learned[leg] = toil_learn(tp, tc).metarules;
    }

    double baseline = 0;
    std::size_t test_total = sp.test_pos.size() + sp.test_neg.size();
    if (test_total > 0) baseline = static_cast<double>(sp.test_neg.size()) / static_cast<double>(test_total);

    for (std::size_t step = 1; step <= steps; ++step) {
      std::vector<Metarule> kept;
      std::set<std::size_t> removed(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(step - 1));
      for (std::size_t i = 0; i < user.size(); ++i)
        if (!removed.count(i)) kept.push_back(user[i]);

      for (Leg leg : cfg.legs) {
        std::vector<Metarule> ms = kept;
        if (leg != Leg::no_replacement)
          for (const auto& m : rec.learned[leg]) ms.push_back(m);
        MilProblem p = train;
        p.metarules = dedup(std::move(ms));

        auto t0 = std::chrono::steady_clock::now();
        Hypothesis h = top_program(p);
        auto t1 = std::chrono::steady_clock::now();
        bool over = h.inferences > cfg.attempt_budget;
        double acc = over ? baseline : accuracy(h, p.bk, sp.test_pos, sp.test_neg, p.config);

        auto& s = samples[step][leg];
        s["accuracy"].add(acc);
        s["baseline"].add(baseline);
        s["inferences"].add(static_cast<double>(h.inferences));
        s["duration_ms"].add(std::chrono::duration<double, std::milli>(t1 - t0).count());
        s["metarules"].add(static_cast<double>(p.metarules.size()));
        s["budget_exceeded"].add(over ? 1.0 : 0.0);
      }
    }
    result.runs.push_back(std::move(rec));
  }

  for (std::size_t step = 1; step <= steps; ++step)
    for (Leg leg : cfg.legs)
      for (const char* m : metrics) {
        const auto& s = samples[step][leg][m];
        result.rows.push_back({step, leg, m, s.mean(), s.stderr_()});
      }
  return result;
}

void write_csv(const ExperimentResult& r, std::ostream& out) {
  out << "step,leg,metric,mean,stderr\n";
  for (const auto& row : r.rows)
    out << row.step << "," << to_string(row.leg) << "," << row.metric << "," << row.mean << "," << row.stderr_ << "\n";
}

}  // namespace mil
