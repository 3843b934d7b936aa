// mil: command-line front end for the learner, TOIL and the counting tools.

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "mil/experiment.hpp"
#include "mil/languages.hpp"
#include "mil/learner.hpp"
#include "mil/logic.hpp"
#include "mil/problems.hpp"
#include "mil/syntax.hpp"
#include "mil/toil.hpp"

namespace {

using namespace mil;

int fail(const std::string& kind, const std::string& message, std::optional<std::pair<std::size_t, std::size_t>> pos = {}) {
  nlohmann::json j{{"error", kind}, {"message", message}};
  if (pos) {
    j["line"] = pos->first;
    j["column"] = pos->second;
  }
  std::cerr << j.dump() << "\n";
  return 1;
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::string label(const Metarule& m) {
  if (auto lib = library_name(m)) return *lib;
  return m.name;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Meta-interpretive learning and metarule learning"};
  app.require_subcommand(1);

  // learn
  auto* learn = app.add_subcommand("learn", "Learn a hypothesis with the problem's metarules");
  std::string learn_file;
  std::vector<std::string> learn_metarules;
  learn->add_option("problem", learn_file, "Problem file")->required();
  learn->add_option("-m,--metarule", learn_metarules, "Use these library metarules instead");

  // learn-metarules
  auto* lm = app.add_subcommand("learn-metarules", "Learn sort metarules from punch or matrix metarules");
  std::string lm_file, lm_mode = "matrix";
  std::size_t lm_max_spec = 1, lm_k = 3;
  double lm_sample = 1.0;
  std::uint64_t lm_seed = 0;
  bool lm_no_cover = false;
  lm->add_option("problem", lm_file, "Problem file")->required();
  lm->add_option("--mode", lm_mode, "matrix (TOIL-2) or punch (TOIL-3)")->check(CLI::IsMember({"matrix", "punch"}));
  lm->add_option("--max-spec", lm_max_spec, "Specialisations per example and metarule (0 = unbounded)");
  lm->add_option("--sample", lm_sample, "Fraction of E+ to sample")->check(CLI::Range(0.0, 1.0));
  lm->add_option("--seed", lm_seed, "Sampling seed");
  lm->add_option("--k", lm_k, "Longest punch metarule in punch mode")->check(CLI::Range(2, 8));
  lm->add_flag("--no-cover-set", lm_no_cover, "Keep examples covered by learned metarules");

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Evaluate the cardinality bounds");
  CountParams cp;
  bounds->add_option("--k", cp.k, "Literals")->required();
  bounds->add_option("--a", cp.a, "Matrix atoms")->required();
  bounds->add_option("--n", cp.n, "Variables")->required();
  bounds->add_option("--p", cp.p, "Predicate symbols")->required();
  bounds->add_option("--c", cp.c, "Constants")->required();

  // enumerate
  auto* en = app.add_subcommand("enumerate", "Enumerate metarule languages");
  std::size_t en_punch = 0, en_length = 0;
  std::string en_matrix;
  std::vector<std::size_t> en_arities;
  bool en_connected = false, en_distinct = false, en_range = false;
  auto* o_punch = en->add_option("--punch", en_punch, "Punch metarules up to this length");
  auto* o_matrix = en->add_option("--matrix", en_matrix, "Sort metarules of a library matrix metarule");
  auto* o_length = en->add_option("--length", en_length, "Matrix metarules with this many literals");
  en->add_option("--arity", en_arities, "Arities for --length")->needs(o_length);
  en->add_flag("--fully-connected", en_connected, "Only fully-connected sort metarules");
  en->add_flag("--distinct-head", en_distinct, "No variable repeated in the head");
  en->add_flag("--range-restricted", en_range, "Every head variable occurs in the body");
  o_punch->excludes(o_matrix)->excludes(o_length);
  o_matrix->excludes(o_length);

  // gen
  auto* gen = app.add_subcommand("gen", "Write a generated problem");
  std::string gen_name, gen_out, gen_noise = "none";
  std::size_t gen_n = 3, gen_nodes = 5, gen_colours = 2, gen_w = 3, gen_h = 3;
  double gen_rate = 0.1;
  std::uint64_t gen_seed = 0;
  gen->add_option("dataset", gen_name, "anbn, parents, bounded_by, coloured_graph, grid_world")
      ->required()
      ->check(CLI::IsMember({"anbn", "parents", "bounded_by", "coloured_graph", "grid_world"}));
  gen->add_option("-o,--output", gen_out, "Output file (default stdout)");
  gen->add_option("--n", gen_n, "anbn: longest string has n a's");
  gen->add_option("--nodes", gen_nodes, "coloured_graph: node count");
  gen->add_option("--colours", gen_colours, "coloured_graph: colour count");
  gen->add_option("--noise", gen_noise, "coloured_graph: none, false_pos, false_neg, ambiguities");
  gen->add_option("--rate", gen_rate, "coloured_graph: noise rate")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", gen_seed, "coloured_graph: noise seed");
  gen->add_option("--width", gen_w, "grid_world: width");
  gen->add_option("--height", gen_h, "grid_world: height");

  // experiment
  auto* ex = app.add_subcommand("experiment", "Run the metarule replacement experiment");
  std::string ex_file, ex_out;
  ExperimentConfig ec;
  std::vector<std::string> ex_legs;
  std::size_t ex_max_spec = 1;
  ex->add_option("problem", ex_file, "Problem file")->required();
  ex->add_option("-o,--output", ex_out, "CSV output (default stdout)");
  ex->add_option("--runs", ec.runs, "Runs per step")->check(CLI::PositiveNumber);
  ex->add_option("--split", ec.sample_split, "Training fraction")->check(CLI::Range(0.01, 0.99));
  ex->add_option("--seed", ec.rng_seed, "Seed");
  ex->add_option("--budget", ec.attempt_budget, "Learner inferences per attempt")->check(CLI::PositiveNumber);
  ex->add_option("--legs", ex_legs, "Subset of no_replacement, toil2, toil3");
  ex->add_option("--max-spec", ex_max_spec, "TOIL specialisations per example and metarule (0 = unbounded)");

  // check
  auto* check = app.add_subcommand("check", "Parse and validate a problem file");
  std::string check_file;
  check->add_option("problem", check_file, "Problem file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*learn) {
      MilProblem p = load_problem(learn_file);
      if (!learn_metarules.empty()) {
        p.metarules.clear();
        for (const auto& n : learn_metarules) {
          auto m = library_metarule(n);
          if (!m) return fail("usage", "unknown metarule name '" + n + "'");
          p.metarules.push_back(*m);
        }
      }
      Hypothesis h = top_program(p);
      for (const auto& inst : h.clauses) {
        std::cout << to_string(inst.clause);
        auto name = label(inst.metarule);
        if (!name.empty()) std::cout << "  % " << name;
        std::cout << "\n";
      }
      for (const auto& e : h.budget_exceeded) std::cerr << "% budget exceeded: " << to_string(e) << "\n";
      for (const auto& c : h.removed) std::cerr << "% removed: " << to_string(c) << "\n";
      std::cerr << "% inferences: " << h.inferences << "\n";
    } else if (*lm) {
      MilProblem p = load_problem(lm_file);
      if (lm_mode == "punch") {
        p.metarules = punch_upto(lm_k);
      } else {
        std::vector<Metarule> ms;
        for (const auto& m : p.metarules)
          if (m.taxon == Taxon::matrix) ms.push_back(m);
        p.metarules = ms.empty() ? matrix_h22() : ms;
      }
      ToilConfig tc;
      tc.max_specialisations = lm_max_spec == 0 ? SIZE_MAX : lm_max_spec;
      tc.sample_rate = lm_sample;
      tc.rng_seed = lm_seed;
      tc.cover_set = !lm_no_cover;
      tc.proof = p.config;
      ToilResult r = toil_learn(p, tc);
      for (const auto& m : r.metarules) std::cout << "(" << label(m) << ") " << quantified_string(m) << "\n";
      std::cerr << "% inferences: " << r.inferences << "\n";
    } else if (*bounds) {
      cp.validate();
      std::cout << "punch:    " << punch_count(cp.k) << "\n";
      std::cout << "matrix:   " << to_decimal(matrix_bound(cp.k, cp.a)) << "\n";
      std::cout << "sort:     " << to_decimal(sort_bound(cp.n)) << "\n";
      std::cout << "metasub:  " << to_decimal(metasub_bound(cp.p, cp.c, cp.k, cp.n)) << "\n";
      std::cout << "ground:   " << to_decimal(ground_bound(cp.c, cp.n)) << "\n";
      std::cout << "language: " << to_decimal(language_bound(cp)) << "\n";
    } else if (*en) {
      std::vector<Metarule> ms;
      if (*o_punch) {
        ms = enumerate_punch(en_punch);
      } else if (*o_matrix) {
        auto m = library_metarule(en_matrix);
        if (!m) return fail("usage", "unknown metarule name '" + en_matrix + "'");
        SortOptions so;
        so.fully_connected_only = en_connected;
        so.distinct_head_variables = en_distinct;
        so.range_restricted = en_range;
        ms = enumerate_sort(*m, so);
      } else if (*o_length) {
        ms = enumerate_matrix(en_length, en_arities.empty() ? std::vector<std::size_t>{2} : en_arities);
      } else {
        return fail("usage", "one of --punch, --matrix or --length is required");
      }
      for (const auto& m : ms) {
        auto name = library_name(m);
        std::cout << (name ? "(" + *name + ") " : "") << quantified_string(m) << "\n";
      }
      std::cerr << "% " << ms.size() << " metarules\n";
    } else if (*gen) {
      MilProblem p;
      if (gen_name == "anbn") p = gen_anbn(gen_n);
      else if (gen_name == "parents") p = gen_analogy_problems().first;
      else if (gen_name == "bounded_by") p = gen_analogy_problems().second;
      else if (gen_name == "coloured_graph") {
        auto noise = parse_noise(gen_noise);
        if (!noise) return fail("usage", "unknown noise kind '" + gen_noise + "'");
        p = gen_coloured_graph(gen_nodes, *noise, gen_rate, gen_seed, gen_colours);
      } else {
        p = gen_grid_world(gen_w, gen_h);
      }
      std::string header;
      if (gen_name == "coloured_graph")
        header = "%% adapted: connected(x,y) iff x and y share a colour\n";
      else if (gen_name == "grid_world")
        header = "%% adapted: four step primitives, move(a,b) for every ordered cell pair\n";
      emit(header + serialize_problem(p), gen_out);
    } else if (*ex) {
      ec.problem = load_problem(ex_file);
      if (!ex_legs.empty()) {
        ec.legs.clear();
        for (const auto& l : ex_legs) {
          if (l == "no_replacement") ec.legs.push_back(Leg::no_replacement);
          else if (l == "toil2") ec.legs.push_back(Leg::toil2);
          else if (l == "toil3") ec.legs.push_back(Leg::toil3);
          else return fail("usage", "unknown leg '" + l + "'");
        }
      }
      ec.toil.max_specialisations = ex_max_spec == 0 ? SIZE_MAX : ex_max_spec;
      ec.toil.proof = ec.problem.config;
      ExperimentResult r = run_replacement_experiment(ec);
      std::ostringstream csv;
      write_csv(r, csv);
      emit(csv.str(), ex_out);
    } else if (*check) {
      MilProblem p = load_problem(check_file);
      std::cout << "ok " << p.name << ": " << p.pos.size() << " positive, " << p.neg.size() << " negative, "
                << p.bk.size() << " background, " << p.metarules.size() << " metarules, " << p.invented.size()
                << " invented symbols\n";
    }
  } catch (const ParseError& e) {
    return fail("parse", e.what(), std::make_pair(e.line(), e.column()));
  } catch (const TooLarge& e) {
    return fail("too_large", e.what());
  } catch (const Error& e) {
    return fail("invalid", e.what());
  }
  return 0;
}
