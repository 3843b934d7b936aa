#pragma once

// Metarule-replacement experiment: user metarules are removed one at a time
// and learning is repeated with no replacement, or with metarules learned
// from matrix (TOIL-2) or punch (TOIL-3) inputs.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "mil/learner.hpp"
#include "mil/toil.hpp"

namespace mil {

enum class Leg { no_replacement, toil2, toil3 };
std::string_view to_string(Leg leg);

// Default attempt budget, overridden by MILKIT_BUDGET when set.
std::size_t default_attempt_budget();

struct ExperimentConfig {
  MilProblem problem;
  std::size_t runs = 10;
  double sample_split = 0.5;
  std::vector<Leg> legs{Leg::no_replacement, Leg::toil2, Leg::toil3};
  // Learner inferences per attempt; an attempt over it scores as the empty
  // hypothesis.
  std::size_t attempt_budget = default_attempt_budget();
  ToilConfig toil;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

struct ExperimentRow {
  std::size_t step = 0;  // 1-based; step s has s-1 metarules removed
  Leg leg = Leg::no_replacement;
  std::string metric;  // accuracy, baseline, inferences, duration_ms, metarules, budget_exceeded
  double mean = 0;
  double stderr_ = 0;
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::vector<std::string> removal_order;            // metarule names
  std::map<Leg, std::vector<Metarule>> learned;      // TOIL output per leg
};

struct ExperimentResult {
  std::size_t steps = 0;
  std::vector<ExperimentRow> rows;
  std::vector<RunRecord> runs;

  // Throws when absent.
  const ExperimentRow& at(std::size_t step, Leg leg, const std::string& metric) const;
};

ExperimentResult run_replacement_experiment(const ExperimentConfig& cfg);

// Columns: step, leg, metric, mean, stderr.
void write_csv(const ExperimentResult& r, std::ostream& out);

}  // namespace mil
