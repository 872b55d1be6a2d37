#include <dtvcn/flowcontrol.hpp>
#include <dtvcn/generator.hpp>
#include <dtvcn/metrics.hpp>
#include <dtvcn/traffic.hpp>

#include <benchmark/benchmark.h>

using namespace dtvcn;

namespace {

GraphSnapshot network(std::int64_t nodes) {
  GrowthParams p;
  p.T = nodes - static_cast<TimeStep>(p.n0);
  return grow(p).final_graph;
}

void BM_Grow(benchmark::State& state) {
  GrowthParams p;
  p.model = static_cast<GrowthModel>(state.range(1));
  p.T = state.range(0) - static_cast<TimeStep>(p.n0);
  for (auto _ : state) benchmark::DoNotOptimize(grow(p));
}
BENCHMARK(BM_Grow)
    ->ArgsProduct({{1000, 2000, 5000}, {0, 2}})
    ->Unit(benchmark::kMillisecond);

void BM_Betweenness(benchmark::State& state) {
  const auto g = network(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(betweenness(g));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Betweenness)->Arg(500)->Arg(1000)->Arg(2000)->Unit(benchmark::kMillisecond)->Complexity();

void BM_Simulate(benchmark::State& state) {
  const auto g = network(500);
  const CapacityModel model;
  const auto bc = betweenness(g);
  const auto cap = capacities(g, model, bc);
  const double lambda = lambda_c_theoretical(g, model, bc).value * static_cast<double>(state.range(0)) / 100;
  const RoutingTable routes(g);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(g, routes, cap, lambda, 1, {500, 2000}));
}
// load as a percentage of the theoretical critical rate
BENCHMARK(BM_Simulate)->Arg(50)->Arg(100)->Arg(150)->Unit(benchmark::kMillisecond);

void BM_EvolveRates(benchmark::State& state) {
  const auto g = network(2000);
  const auto bc = betweenness(g);
  const auto rg = local_min_contribution(bc, g, ValueKind::Betweenness);
  auto users = sample_users(g, static_cast<std::size_t>(state.range(0)), 7);
  plan_routes(g, rg, users);
  std::vector<Flow> flows;
  for (const auto& u : users) flows.push_back({path_links(u.paths.paths[u.chosen.min_index]), u.a, u.b, 1.0});
  for (auto _ : state) benchmark::DoNotOptimize(evolve_rates(flows, LinkPriceModel{}));
}
BENCHMARK(BM_EvolveRates)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
