#include <benchmark/benchmark.h>

#include <vector>

#include "sdenet/dual_solver.hpp"
#include "sdenet/fitter.hpp"
#include "sdenet/monte_carlo.hpp"
#include "sdenet/taylor_net.hpp"

using namespace sdenet;

namespace {

const SdeModel& vdp() {
  static const SdeModel m = builtin_model("vdp", {{"eps", 1.0}, {"nu11", 1.0}, {"nu22", 1.0}});
  return m;
}

void BM_BuildGenerator(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(build_generator(vdp(), order));
}
BENCHMARK(BM_BuildGenerator)->Arg(8)->Arg(17)->Arg(24);

void BM_SolveMoment(benchmark::State& state) {
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_moment(vdp(), order, 1, 2, 0.1));
}
BENCHMARK(BM_SolveMoment)->Arg(8)->Arg(17)->Unit(benchmark::kMillisecond);

void BM_NetworkTaylor(benchmark::State& state) {
  const auto net = random_net(8, 2, -1.0, 1.0, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(network_taylor(net, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_NetworkTaylor)->Arg(12)->Arg(17);

void BM_TaylorJacobian(benchmark::State& state) {
  const auto net = random_net(8, 2, -1.0, 1.0, 1, 0);
  for (auto _ : state) benchmark::DoNotOptimize(taylor_jacobian(net, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_TaylorJacobian)->Arg(12)->Arg(17);

void BM_FitOu(benchmark::State& state) {
  const auto target = solve_moment(builtin_model("ou", {{"gamma", 1.0}, {"sigma", 1.0}}), 12, 0, 1, 1.0);
  FitConfig cfg;
  cfg.restarts = 1;
  for (auto _ : state) benchmark::DoNotOptimize(fit_network(target, cfg));
}
BENCHMARK(BM_FitOu)->Unit(benchmark::kMillisecond);

void BM_Simulate(benchmark::State& state) {
  const std::vector<double> x0{1.0, 1.0};
  SimConfig sim;
  sim.dt = 1e-3;
  sim.t = 0.1;
  sim.paths = static_cast<std::size_t>(state.range(0));
  sim.seed = 1;
  sim.threads = 1;
  for (auto _ : state) benchmark::DoNotOptimize(simulate(vdp(), x0, sim));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 100);
}
BENCHMARK(BM_Simulate)->Arg(10'000)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
