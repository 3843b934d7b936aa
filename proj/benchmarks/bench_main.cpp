#include <benchmark/benchmark.h>

#include <string>

#include "mil/languages.hpp"
#include "mil/learner.hpp"
#include "mil/problems.hpp"
#include "mil/resolution.hpp"
#include "mil/syntax.hpp"
#include "mil/toil.hpp"

using namespace mil;

static void BM_TopProgramAnbn(benchmark::State& st) {
  auto p = gen_anbn(static_cast<std::size_t>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(top_program(p));
}
BENCHMARK(BM_TopProgramAnbn)->Arg(3)->Arg(6);

static void BM_TopProgramColouredGraph(benchmark::State& st) {
  auto p = gen_coloured_graph(static_cast<std::size_t>(st.range(0)), Noise::false_pos, 0.1, 7);
  p.metarules = canonical_h22();
  for (auto _ : st) benchmark::DoNotOptimize(top_program(p));
}
BENCHMARK(BM_TopProgramColouredGraph)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_ToilPunch(benchmark::State& st) {
  auto p = gen_coloured_graph(static_cast<std::size_t>(st.range(0)), Noise::false_pos, 0.1, 7);
  p.metarules = punch_upto(3);
  ToilConfig cfg;
  cfg.max_specialisations = SIZE_MAX;
  for (auto _ : st) benchmark::DoNotOptimize(toil_learn(p, cfg));
}
BENCHMARK(BM_ToilPunch)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_EntailsAnbn(benchmark::State& st) {
  Program prog(gen_anbn(3).bk);
  for (const char* c : {"s(X,Y) :- a(X,Z), b(Z,Y).", "s(X,Y) :- a(X,Z), $1(Z,Y).", "$1(X,Y) :- s(X,Z), b(Z,Y)."})
    prog.add(parse_clause(c));
  std::string s = "s([";
  for (int i = 0; i < st.range(0); ++i) s += "a,";
  for (int i = 0; i < st.range(0); ++i) s += i ? ",b" : "b";
  auto goal = parse_atom(s + "],[])");
  for (auto _ : st) benchmark::DoNotOptimize(entails(prog, goal, {}));
}
BENCHMARK(BM_EntailsAnbn)->Arg(4)->Arg(16);

static void BM_DatalogModelGrid(benchmark::State& st) {
  auto n = static_cast<std::size_t>(st.range(0));
  auto p = gen_grid_world(n, n);
  std::vector<Clause> prog = p.bk;
  for (const char* d : {"up", "down", "left", "right"})
    prog.push_back(parse_clause(std::string("step(X,Y) :- ") + d + "(X,Y)."));
  prog.push_back(parse_clause("path(X,Y) :- step(X,Y)."));
  prog.push_back(parse_clause("path(X,Y) :- step(X,Z), path(Z,Y)."));
  for (auto _ : st) benchmark::DoNotOptimize(datalog_model(prog));
}
BENCHMARK(BM_DatalogModelGrid)->Arg(3)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_EnumerateSortDyadic(benchmark::State& st) {
  auto dyadic = *library_metarule("Meta-dyadic");
  for (auto _ : st) benchmark::DoNotOptimize(enumerate_sort(dyadic));
}
BENCHMARK(BM_EnumerateSortDyadic);
BENCHMARK_MAIN();
