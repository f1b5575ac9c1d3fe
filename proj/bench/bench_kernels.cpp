#include <benchmark/benchmark.h>

#include <random>

#include "netdes/cutset_cuts.hpp"
#include "netdes/engine.hpp"
#include "netdes/oracle.hpp"
#include "netdes/relaxation.hpp"

using namespace netdes;

namespace {

Instance bench_instance(int nodes) {
  GeneratorOptions o;
  o.seed = 5;
  o.nodes = nodes;
  o.density = 0.2;
  o.facilities = {1, 2};
  o.demand_scale = 1;
  o.demand_probability = 0.3;
  return generate_instance(o);
}

FractionalPoint lp_point(const Instance& inst) {
  const RelaxationModel model = build_relaxation(inst);
  return model.point_from(solve(model.lp).primal);
}

void BM_BruteForceIP(benchmark::State& state) {
  const Instance inst = bench_instance(4);
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    IPResult r = parallel ? brute_force_ip(inst, default_y_bounds(inst)) : brute_force_ip_serial(inst, default_y_bounds(inst));
    benchmark::DoNotOptimize(r.objective);
  }
  state.SetLabel(parallel ? "parallel" : "serial");
}

void BM_ValidateCut(benchmark::State& state) {
  const Instance inst = bench_instance(4);
  std::vector<char> in_u(static_cast<std::size_t>(inst.num_nodes()), 0);
  in_u[0] = 1;
  LinearCut cut;
  if (auto c = cutset_cut(build_cutset(inst, in_u))) cut = *c;
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    CutCheck r = parallel ? validate_cut(cut, inst, default_y_bounds(inst)) : validate_cut_serial(cut, inst, default_y_bounds(inst));
    benchmark::DoNotOptimize(r.valid);
  }
  state.SetLabel(parallel ? "parallel" : "serial");
}

void BM_SeparatePartitions(benchmark::State& state) {
  const Instance inst = bench_instance(7);
  const FractionalPoint p = lp_point(inst);
  std::mt19937 rng(1);
  auto parts = two_partitions(inst, PartitionHeuristics{}, rng);
  for (auto& t : three_partitions(inst, PartitionHeuristics{}, rng)) parts.push_back(t);
  const auto families = parse_families("cutset,flowcutset,mf,partition");
  const bool parallel = state.range(0) != 0;
  for (auto _ : state) {
    auto cuts = separate_partitions(inst, p, parts, families, Rational(1, 1'000'000), parallel);
    benchmark::DoNotOptimize(cuts.size());
  }
  state.SetLabel(parallel ? "parallel" : "serial");
}

}  // namespace

BENCHMARK(BM_BruteForceIP)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ValidateCut)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SeparatePartitions)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
