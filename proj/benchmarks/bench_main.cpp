#include <benchmark/benchmark.h>

#include <map>

#include "ssvrp/assign.hpp"
#include "ssvrp/bench.hpp"
#include "ssvrp/expect.hpp"
#include "ssvrp/search.hpp"
#include "ssvrp/simulate.hpp"

using namespace ssvrp;

namespace {

struct Fixture {
  Instance inst;
  FirstStageSolution sol;
  Schedule sched;
  Assignment asg;
};

const Fixture& fixture(int customers) {
  static std::map<int, Fixture> cache;
  auto it = cache.find(customers);
  if (it != cache.end()) return it->second;
  GeneratorParams gp;
  gp.customers = customers;
  gp.waiting = customers / 2;
  gp.vehicles = 2;
  gp.seed = 11;
  const AddressPool pool = synthetic_pool({}, 5);
  Instance inst = gen_instance(gp, pool);
  Rng rng(17);
  FirstStageSolution sol = initial_solution(inst, rng, 10);
  Schedule sched = compute_schedule(inst, sol);
  Assignment asg = assign_requests(inst, sched);
  return cache.emplace(customers, Fixture{std::move(inst), std::move(sol), std::move(sched), std::move(asg)})
      .first->second;
}

template <Strategy S>
void BM_ExpectedCost(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(expected_cost(f.inst, f.sched, f.asg, S));
  state.counters["requests"] = f.inst.num_requests();
}
BENCHMARK(BM_ExpectedCost<Strategy::kRInf>)->Arg(10)->Arg(20);
BENCHMARK(BM_ExpectedCost<Strategy::kRq>)->Arg(10)->Arg(20);
BENCHMARK(BM_ExpectedCost<Strategy::kRqPlus>)->Arg(10)->Arg(20);

void BM_Recourse(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<int>(state.range(0)));
  Rng rng(3);
  for (auto _ : state) {
    const Scenario sc = sample_scenario(f.inst, rng);
    benchmark::DoNotOptimize(run_recourse(f.inst, f.sched, f.asg, sc, Strategy::kRqPlus).rejected);
  }
}
BENCHMARK(BM_Recourse)->Arg(10)->Arg(20);

void BM_WaitAndServe(benchmark::State& state) {
  const Fixture& f = fixture(static_cast<int>(state.range(0)));
  Rng rng(3);
  for (auto _ : state) {
    const Scenario sc = sample_scenario(f.inst, rng);
    benchmark::DoNotOptimize(run_wait_and_serve(f.inst, sc).rejected);
  }
}
BENCHMARK(BM_WaitAndServe)->Arg(10)->Arg(20);

}  // namespace

BENCHMARK_MAIN();
