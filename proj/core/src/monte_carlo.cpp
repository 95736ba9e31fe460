#include <cmath>
#include <functional>
#include <thread>

#include "ssvrp/simulate.hpp"

namespace ssvrp {

namespace {

struct Sums {
  std::int64_t total = 0;
  std::int64_t squares = 0;
};

// `make()` builds one per-thread runner mapping a scenario to a rejected count.
template <class MakeRunner>
MonteCarloEstimate sample_mean(const Instance& inst, std::int64_t samples, std::uint64_t seed, int threads,
                               MakeRunner make) {
  MonteCarloEstimate est;
  est.samples = samples;
  if (samples <= 0) return est;
  threads = std::max(1, static_cast<int>(std::min<std::int64_t>(threads, samples)));
  std::vector<Sums> parts(threads);
  auto work = [&](int part) {
    auto runner = make();
    Scenario sc;
    Sums s;
    for (std::int64_t i = part; i < samples; i += threads) {
      Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(i));
      sc = sample_scenario(inst, rng);
      const std::int64_t c = runner(sc);
      s.total += c;
      s.squares += c * c;
    }
    parts[part] = s;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(work, i);
    for (auto& th : pool) th.join();
  }
  Sums all;
  for (const auto& p : parts) {
    all.total += p.total;
    all.squares += p.squares;
  }
  const double n = static_cast<double>(samples);
  est.mean = static_cast<double>(all.total) / n;
  if (samples > 1) {
    const double var = (static_cast<double>(all.squares) - n * est.mean * est.mean) / (n - 1.0);
    est.std_error = std::sqrt(std::max(0.0, var) / n);
  }
  return est;
}

}  // namespace

MonteCarloEstimate monte_carlo_cost(const Instance& inst, const Schedule& sched, const Assignment& asg,
                                    Strategy s, std::int64_t samples, std::uint64_t seed, int threads) {
  RecourseSimulator probe(inst, sched, asg, s);  // surfaces configuration errors on this thread
  return sample_mean(inst, samples, seed, threads, [&] {
    auto sim = std::make_shared<RecourseSimulator>(inst, sched, asg, s);
    return [sim](const Scenario& sc) { return sim->run(sc); };
  });
}

MonteCarloEstimate monte_carlo_wait_and_serve(const Instance& inst, std::int64_t samples, std::uint64_t seed,
                                              int threads) {
  return sample_mean(inst, samples, seed, threads, [&] {
    return [&inst](const Scenario& sc) { return run_wait_and_serve(inst, sc).rejected; };
  });
}

}  // namespace ssvrp
