#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "helpers.hpp"
#include "mil/experiment.hpp"
#include "mil/problems.hpp"

using namespace mil;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.problem = gen_anbn(4);
  cfg.runs = 2;
  cfg.rng_seed = 3;
  return cfg;
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("rows cover every step, leg and metric") {
  auto r = run_replacement_experiment(small_config());
  CHECK(r.steps == 2);
  CHECK(r.rows.size() == 2 * 3 * 6);
  CHECK(r.runs.size() == 2);
  for (std::size_t step = 1; step <= r.steps; ++step)
    for (Leg leg : {Leg::no_replacement, Leg::toil2, Leg::toil3}) {
      double acc = r.at(step, leg, "accuracy").mean;
      CHECK(acc >= 0.0);
      CHECK(acc <= 1.0);
    }
  // no negatives, so the majority-class baseline is zero
  CHECK(r.at(2, Leg::no_replacement, "accuracy").mean == 0.0);
  // TOIL relearns Chain from the same training split
  CHECK(r.at(2, Leg::toil3, "accuracy").mean == r.at(1, Leg::no_replacement, "accuracy").mean);
  CHECK(r.at(2, Leg::toil2, "accuracy").mean == r.at(1, Leg::no_replacement, "accuracy").mean);
  CHECK(r.at(2, Leg::no_replacement, "metarules").mean == 0.0);
  CHECK_THROWS_AS(r.at(9, Leg::toil2, "accuracy"), Error);
}

TEST_CASE("same seed, same numbers") {
  auto a = run_replacement_experiment(small_config());
  auto b = run_replacement_experiment(small_config());
  REQUIRE(a.rows.size() == b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (a.rows[i].metric == "duration_ms") continue;
    CHECK(a.rows[i].mean == b.rows[i].mean);
  }
  CHECK(a.runs[0].removal_order == b.runs[0].removal_order);
}

TEST_CASE("csv layout") {
  auto cfg = small_config();
  cfg.runs = 1;
  cfg.legs = {Leg::no_replacement};
  std::ostringstream out;
  write_csv(run_replacement_experiment(cfg), out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "step,leg,metric,mean,stderr");
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++rows;
    CHECK(std::count(line.begin(), line.end(), ',') == 4);
  }
  CHECK(rows == 2 * 6);
}

TEST_CASE("configuration is validated") {
  auto cfg = small_config();
  cfg.runs = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  auto split = small_config();
  split.sample_split = 1.0;
  CHECK_THROWS_AS(split.validate(), Error);
  auto punch = small_config();
  punch.problem.metarules = punch_upto(3);
  CHECK_THROWS_AS(run_replacement_experiment(punch), Error);
}

}  // TEST_SUITE
