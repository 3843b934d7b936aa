#pragma once

// Problem files, built-in metarule libraries and dataset generators.
//
// File format, one item per line, sections in any order:
//   %pos / %neg     ground atoms
//   %bk             definite clauses
//   %metarules      `name chain.` or `sort P(x,y) :- Q(x,z), R(z,y).`
//   %punch 3        TOM-2..TOM-3
//   %matrix h22     Meta-monadic and Meta-dyadic
//   %invented 8     size of the invented-symbol pool
// `%%` starts a comment line.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mil/learner.hpp"
#include "mil/term.hpp"

namespace mil {

MilProblem parse_problem(std::string_view text);
std::string serialize_problem(const MilProblem& p);
MilProblem load_problem(const std::string& path);

// Fully-connected H22 metarules, named as in the usual table.
std::vector<Metarule> canonical_h22();
// Meta-monadic and Meta-dyadic.
std::vector<Metarule> matrix_h22();
// TOM-2..TOM-k.
std::vector<Metarule> punch_upto(std::size_t k);

// Looks a name up (case-insensitive) in the three libraries above and the
// extra named metarules (e.g. M1 of the analogy task).
std::optional<Metarule> library_metarule(std::string_view name);
// Name of the library metarule alpha-equivalent to m, if any.
std::optional<std::string> library_name(const Metarule& m);

MilProblem gen_anbn(std::size_t n_max);
std::pair<MilProblem, MilProblem> gen_analogy_problems();
// P(x,y,z) <- Q(x,z), R(y,z)
Metarule analogy_m1();

enum class Noise { none, false_pos, false_neg, ambiguities };
std::optional<Noise> parse_noise(std::string_view s);
std::string_view to_string(Noise n);

// Adapted dataset: complete graph, each node coloured, connected(x,y) iff x
// and y share a colour.
MilProblem gen_coloured_graph(std::size_t nodes, Noise noise, double rate, std::uint64_t seed,
                              std::size_t colours = 2);
// Adapted dataset: cells c_X_Y with four step predicates; move(a,b) for every
// ordered pair of cells.
MilProblem gen_grid_world(std::size_t width, std::size_t height);

}  // namespace mil
