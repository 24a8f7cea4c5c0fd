#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "cglab/engine.h"
#include "cglab/master.h"
#include "cglab/mdp_state.h"
#include "cglab/pricing.h"
#include "cglab/selection.h"

namespace {

using namespace cglab;

Instance Make(ProblemKind kind, Category category, std::uint64_t seed) {
  GenConfig config;
  config.kind = kind;
  config.category = category;
  config.seed = seed;
  return Generate(config);
}

// A column generation run advanced `steps` greedy iterations, so the duals
// and pool are those of a typical mid-run state.
ColumnGeneration MidRun(const Instance& inst, int steps) {
  ColumnGeneration cg(inst, CgConfig{});
  for (int i = 0; i < steps && !cg.done(); ++i) {
    Selection pick;
    for (int j = 0; j < std::min(5, cg.pool().size()); ++j) pick.push_back(j);
    cg.Apply(pick);
  }
  return cg;
}

void BM_CspPricing(benchmark::State& state) {
  const auto category = static_cast<Category>(state.range(0));
  const Instance inst = Make(ProblemKind::kCsp, category, 3);
  const ColumnGeneration cg = MidRun(inst, 3);
  const auto& csp = std::get<CspInstance>(inst);
  const std::vector<double> duals = cg.master().solution().duals;
  for (auto _ : state) benchmark::DoNotOptimize(SolveCspPricing(csp, duals, 10));
}
BENCHMARK(BM_CspPricing)->Arg(0)->Arg(1)->Arg(2);

void BM_GcpPricing(benchmark::State& state) {
  const auto category = static_cast<Category>(state.range(0));
  const Instance inst = Make(ProblemKind::kGcp, category, 3);
  const ColumnGeneration cg = MidRun(inst, 3);
  const Graph graph(std::get<GcpInstance>(inst));
  const std::vector<double> duals = cg.master().solution().duals;
  for (auto _ : state) benchmark::DoNotOptimize(SolveGcpPricing(graph, duals, 10));
}
BENCHMARK(BM_GcpPricing)->Arg(0)->Arg(1);

void BM_MasterColdSolve(benchmark::State& state) {
  const Instance inst = Make(ProblemKind::kCsp, static_cast<Category>(state.range(0)), 5);
  const ColumnGeneration cg = MidRun(inst, 5);
  std::vector<Column> columns(cg.master().columns().begin(), cg.master().columns().end());
  for (auto _ : state) {
    RmpModel master(inst);
    for (const Column& c : columns) master.AddColumn(c);
    benchmark::DoNotOptimize(master.Solve().objective);
  }
}
BENCHMARK(BM_MasterColdSolve)->Arg(0)->Arg(1);

void BM_TrialObjective(benchmark::State& state) {
  const ColumnGeneration cg = MidRun(Make(ProblemKind::kCsp, Category::kEasy, 5), 2);
  const std::vector<Column> extra(cg.pool().columns.begin(),
                                  cg.pool().columns.begin() + std::min(5, cg.pool().size()));
  for (auto _ : state) benchmark::DoNotOptimize(cg.master().TrialObjective(extra));
}
BENCHMARK(BM_TrialObjective);

void BM_Select(benchmark::State& state, std::string name) {
  const ColumnGeneration cg = MidRun(Make(ProblemKind::kCsp, Category::kEasy, 7), 2);
  auto strategy = MakeStrategy(name);
  std::mt19937_64 rng(1);
  const SelectionContext ctx{cg.pool(), 5, true, cg.master(), rng, {}};
  for (auto _ : state) benchmark::DoNotOptimize(strategy->Select(ctx));
}
BENCHMARK_CAPTURE(BM_Select, greedy_m, std::string("greedy-m"));
BENCHMARK_CAPTURE(BM_Select, diverse_m, std::string("diverse-m"));
BENCHMARK_CAPTURE(BM_Select, lookahead_m, std::string("lookahead-m"));

void BM_StateSnapshot(benchmark::State& state) {
  const ColumnGeneration cg = MidRun(Make(ProblemKind::kCsp, Category::kNormal, 9), 4);
  for (auto _ : state) benchmark::DoNotOptimize(SerializeState(cg.Snapshot()));
}
BENCHMARK(BM_StateSnapshot);

void BM_FullRun(benchmark::State& state, std::string name) {
  const Instance inst = Make(ProblemKind::kCsp, Category::kEasy, 11);
  auto strategy = MakeStrategy(name);
  for (auto _ : state) {
    const CgRun run = RunColumnGeneration(inst, *strategy, CgConfig{}, 0);
    state.counters["iterations"] = run.iterations;
  }
}
BENCHMARK_CAPTURE(BM_FullRun, greedy_s, std::string("greedy-s"))->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_FullRun, greedy_m, std::string("greedy-m"))->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_FullRun, diverse_m, std::string("diverse-m"))->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
