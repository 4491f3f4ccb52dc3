#include <benchmark/benchmark.h>

#include "partrace/bench.hpp"
#include "partrace/generator.hpp"
#include "partrace/interpolant_automaton.hpp"
#include "partrace/parallel.hpp"

using namespace partrace;

namespace {

const char* kNotZero = R"(int x;
if (x > 0) { x = -x; } else { while (x > -10) { x = x - 1; } }
assert(x != 0);
)";

void BM_SolverFeasibility(benchmark::State& state) {
  Predicate p = Predicate::parse("x>0&&y==2*x+1&&y<=10&&x!=3");
  for (auto _ : state) benchmark::DoNotOptimize(is_satisfiable(p));
}
BENCHMARK(BM_SolverFeasibility);

void BM_CheckTrace(benchmark::State& state) {
  auto pa = load_program_text(kNotZero, false);
  Trace t = *shortest_accepted(pa.automaton());
  BuiltinBackend be;
  for (auto _ : state) benchmark::DoNotOptimize(check_trace(t, be));
}
BENCHMARK(BM_CheckTrace);

void BM_Difference(benchmark::State& state) {
  auto pa = load_program_text(gen_family(FamilyKind::Branches, 8, 0), false);
  const Nfa& a = pa.automaton();
  Trace t = *shortest_accepted(a);
  BuiltinBackend be;
  auto r = check_trace(t, be);
  auto ia = build_interpolant_automaton(t, r.interpolants, a);
  for (auto _ : state) benchmark::DoNotOptimize(difference(a, ia.automaton));
}
BENCHMARK(BM_Difference);

void BM_DiverseSearch(benchmark::State& state) {
  auto pa = load_program_text(gen_family(FamilyKind::Branches, 8, 0), false);
  const Nfa& a = pa.automaton();
  std::vector<Trace> relevant;
  for (int i = 0; i < state.range(0); ++i) {
    auto r = diverse_search(a, a.initial(), Trace(a.symbols(), {}), relevant);
    relevant.push_back(*r.trace);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(diverse_search(a, a.initial(), Trace(a.symbols(), {}), relevant));
  }
}
BENCHMARK(BM_DiverseSearch)->Arg(1)->Arg(4)->Arg(7);

void BM_VerifyBranches(benchmark::State& state) {
  auto pa = load_program_text(gen_family(FamilyKind::Branches, 8, 0), false);
  auto be = std::make_shared<BuiltinBackend>();
  const auto workers = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_engine(pa, workers, be, Limits{}, ExecutorKind::Threaded));
  }
}
BENCHMARK(BM_VerifyBranches)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
