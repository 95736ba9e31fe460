#include <gtest/gtest.h>

#include <sstream>

#include "ssvrp/error.hpp"
#include "ssvrp/simulate.hpp"
#include "tiny.hpp"

using namespace ssvrp;

namespace {

Instance star(int customers, Time d, Time h, int cap, std::vector<PotentialRequest> reqs, int vehicles = 1) {
  const int nv = 2 + customers;
  std::vector<Time> t(static_cast<std::size_t>(nv) * nv, d);
  for (int i = 0; i < nv; ++i) t[static_cast<std::size_t>(i) * nv + i] = 0;
  return Instance("star", 1, customers, std::move(t), h, vehicles, cap, std::move(reqs));
}

PotentialRequest req(int id, int c, Time g, Time e, Time l, double p, int q = 1, Time s = 0) {
  return PotentialRequest{id, c, g, q, s, e, l, p};
}

struct Setup {
  Instance inst;
  FirstStageSolution sol;
  Schedule sched;
  Assignment asg;
};

Setup setup(Instance inst, Time wait) {
  FirstStageSolution sol(inst.vehicles(), inst.num_waiting());
  sol.routes[0] = {1};
  sol.waits[1] = wait;
  auto sched = compute_schedule(inst, sol);
  auto asg = assign_requests(inst, sched);
  return {std::move(inst), std::move(sol), std::move(sched), std::move(asg)};
}

std::vector<TraceRecord> moves(const std::vector<TraceRecord>& trace) {
  std::vector<TraceRecord> out;
  for (const auto& e : trace)
    if (e.kind == EventKind::kDepart || e.kind == EventKind::kArrive) out.push_back(e);
  return out;
}

}  // namespace

TEST(Sampling, DegenerateProbabilities) {
  auto none = star(2, 1, 20, kUnboundedCapacity, {req(0, 2, 1, 1, 5, 0.0), req(1, 3, 1, 1, 5, 0.0)});
  auto all = star(2, 1, 20, kUnboundedCapacity, {req(0, 2, 1, 1, 5, 1.0), req(1, 3, 1, 1, 5, 1.0)});
  Rng rng(1);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(sample_scenario(none, rng).size(), 0);
    EXPECT_EQ(sample_scenario(all, rng).size(), 2);
  }
}

TEST(Sampling, InclusionFrequency) {
  auto inst = star(1, 1, 20, kUnboundedCapacity, {req(0, 2, 1, 1, 5, 0.3)});
  Rng rng(2);
  int hits = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) hits += sample_scenario(inst, rng).size();
  EXPECT_NEAR(hits / double(n), 0.3, 0.01);
}

TEST(Sampling, ScenarioProbabilityIsProduct) {
  auto inst = star(2, 1, 20, kUnboundedCapacity, {req(0, 2, 1, 1, 5, 0.2), req(1, 3, 1, 1, 5, 0.7)});
  Scenario sc{{1, 0}};
  EXPECT_DOUBLE_EQ(scenario_probability(inst, sc), 0.2 * 0.3);
}

TEST(Recourse, EmptyScenarioFollowsPlan) {
  auto s = setup(star(2, 2, 30, kUnboundedCapacity, {req(0, 2, 4, 4, 20, 0.5)}), 6);
  for (Strategy st : {Strategy::kRInf, Strategy::kRq, Strategy::kRqPlus}) {
    auto res = run_recourse(s.inst, s.sched, s.asg, Scenario::none(s.inst), st);
    EXPECT_EQ(res.rejected, 0);
    auto m = moves(res.trace);
    ASSERT_EQ(m.size(), 4u);
    EXPECT_EQ(m[0].kind, EventKind::kDepart);
    EXPECT_EQ(m[0].time, 1);
    EXPECT_EQ(m[1].kind, EventKind::kArrive);
    EXPECT_EQ(m[1].time, 3);
    EXPECT_EQ(m[1].vertex, 1);
    EXPECT_EQ(m[2].time, 9);
    EXPECT_EQ(m[3].time, 11);
    EXPECT_EQ(m[3].vertex, 0);
  }
}

TEST(Recourse, HandExecutedChain) {
  // on(w) = [2, 22]. r0 leaves at 2 and is back at 8; r1 (window ends at 6)
  // is rejected; r2 leaves at 8.
  auto s = setup(star(3, 1, 40,
                      kUnboundedCapacity,
                      {req(0, 2, 2, 2, 10, 1.0, 1, 4), req(1, 3, 3, 4, 6, 1.0), req(2, 4, 5, 6, 12, 1.0)}),
                 20);
  auto res = run_recourse(s.inst, s.sched, s.asg, Scenario::all(s.inst), Strategy::kRInf);
  EXPECT_EQ(res.rejected, 1);
  EXPECT_EQ(res.accepted, (std::vector<char>{1, 0, 1}));
  int served_2 = -1;
  for (const auto& e : res.trace)
    if (e.kind == EventKind::kDepart && e.request == 2) served_2 = e.time;
  EXPECT_EQ(served_2, 8);
}

TEST(Recourse, CapacityCountsAcceptedLoad) {
  auto s = setup(star(3, 1, 40, 2, {req(0, 2, 2, 2, 30, 1.0), req(1, 3, 3, 3, 30, 1.0), req(2, 4, 5, 5, 30, 1.0)}),
                 30);
  auto res = run_recourse(s.inst, s.sched, s.asg, Scenario::all(s.inst), Strategy::kRq);
  EXPECT_EQ(res.accepted, (std::vector<char>{1, 1, 0}));
  auto skip = Scenario::all(s.inst);
  skip.present[0] = 0;
  EXPECT_EQ(run_recourse(s.inst, s.sched, s.asg, skip, Strategy::kRq).rejected, 0);
}

TEST(Recourse, RinfRefusesBindingCapacity) {
  auto s = setup(star(2, 1, 40, 1, {req(0, 2, 2, 2, 30, 1.0), req(1, 3, 3, 3, 30, 1.0)}), 30);
  EXPECT_THROW(RecourseSimulator(s.inst, s.sched, s.asg, Strategy::kRInf), ConfigError);
}

TEST(Recourse, TracesAreValidOnRandomScenarios) {
  Rng rng(41);
  for (int trial = 0; trial < 300; ++trial) {
    auto inst = ssvrp::testing::random_tiny_instance(rng);
    auto sol = ssvrp::testing::random_solution(inst, rng);
    auto sched = compute_schedule(inst, sol);
    auto asg = assign_requests(inst, sched);
    for (Strategy st : {Strategy::kRq, Strategy::kRqPlus}) {
      RecourseSimulator sim(inst, sched, asg, st);
      for (int i = 0; i < 8; ++i) {
        auto sc = sample_scenario(inst, rng);
        RecourseResult res;
        const int rejected = sim.run(sc, &res);
        ASSERT_EQ(rejected, res.rejected);
        ASSERT_EQ(rejected, sc.size() - std::count(res.accepted.begin(), res.accepted.end(), 1));
        std::vector<int> load(inst.vehicles(), 0);
        for (const auto& e : res.trace) {
          if (e.kind == EventKind::kServeStart) {
            const auto& q = inst.request(e.request);
            if (res.slips == 0) {
              EXPECT_GE(e.time, q.earliest);
              EXPECT_LE(e.time, q.latest);
            }
            EXPECT_TRUE(res.accepted[e.request]);
          }
          if (e.load > inst.capacity()) ADD_FAILURE() << "overload";
          // Routes leave at time 1 and last at most h.
          if (e.kind == EventKind::kArrive && e.vertex == 0 && res.slips == 0) EXPECT_LE(e.time - 1, inst.horizon());
        }
        // Deterministic replay.
        RecourseResult again;
        sim.run(sc, &again);
        ASSERT_EQ(again.accepted, res.accepted);
        ASSERT_EQ(again.trace.size(), res.trace.size());
      }
    }
  }
}

TEST(Recourse, TraceIsWritable) {
  auto s = setup(star(1, 1, 20, kUnboundedCapacity, {req(0, 2, 2, 2, 10, 1.0)}), 10);
  auto res = run_recourse(s.inst, s.sched, s.asg, Scenario::all(s.inst), Strategy::kRq);
  std::ostringstream os;
  write_trace(os, res.trace);
  EXPECT_NE(os.str().find("serve-start"), std::string::npos);
}

TEST(Exhaustive, SimpleExpectations) {
  auto one = setup(star(1, 3, 20, kUnboundedCapacity, {req(0, 2, 1, 1, 2, 0.35)}), 10);
  EXPECT_DOUBLE_EQ(exhaustive_expected_cost(one.inst, one.sched, one.asg, Strategy::kRq), 0.35);
  auto two = setup(star(2, 3, 20, kUnboundedCapacity, {req(0, 2, 1, 1, 2, 0.35), req(1, 3, 1, 1, 2, 0.25)}), 10);
  EXPECT_DOUBLE_EQ(exhaustive_expected_cost(two.inst, two.sched, two.asg, Strategy::kRq), 0.6);
}

TEST(Exhaustive, RefusesLargeInstances) {
  std::vector<PotentialRequest> reqs;
  for (int i = 0; i < 25; ++i) reqs.push_back(req(i, 2, 1 + i, 1 + i, 30, 0.5));
  auto s = setup(star(1, 1, 30, kUnboundedCapacity, reqs), 20);
  EXPECT_THROW(exhaustive_expected_cost(s.inst, s.sched, s.asg, Strategy::kRq), BudgetError);
}

TEST(WaitServe, EmptyScenario) {
  auto inst = star(1, 1, 20, kUnboundedCapacity, {req(0, 2, 2, 2, 10, 0.5)});
  EXPECT_EQ(run_wait_and_serve(inst, Scenario::none(inst)).rejected, 0);
}

TEST(WaitServe, ReachableRequestAccepted) {
  auto inst = star(1, 3, 20, kUnboundedCapacity, {req(0, 2, 2, 2, 5, 1.0)});
  auto res = run_wait_and_serve(inst, Scenario::all(inst), true);
  EXPECT_EQ(res.rejected, 0);
  EXPECT_TRUE(audit_wait_and_serve(inst, Scenario::all(inst), res));
}

TEST(WaitServe, NoTimeToGetHome) {
  auto inst = star(1, 3, 20, kUnboundedCapacity, {req(0, 2, 15, 15, 18, 1.0, 1, 1)});
  EXPECT_EQ(run_wait_and_serve(inst, Scenario::all(inst)).rejected, 1);
}

TEST(WaitServe, ClosestThenLeastLoaded) {
  // Vehicle 0 serves r0 at customer 2 and idles there; r1 at customer 2 again
  // is closest to vehicle 0.
  auto inst = star(2, 2, 40, kUnboundedCapacity, {req(0, 2, 1, 1, 30, 1.0), req(1, 2, 10, 10, 30, 1.0)}, 2);
  auto res = run_wait_and_serve(inst, Scenario::all(inst), true);
  int owner1 = -2;
  for (const auto& e : res.trace)
    if (e.kind == EventKind::kAccept && e.request == 1) owner1 = e.vehicle;
  EXPECT_EQ(owner1, 0);
}

TEST(WaitServe, AuditHoldsOnRandomScenarios) {
  Rng rng(43);
  for (int trial = 0; trial < 300; ++trial) {
    auto inst = ssvrp::testing::random_tiny_instance(rng);
    auto sc = sample_scenario(inst, rng);
    auto res = run_wait_and_serve(inst, sc, true);
    EXPECT_TRUE(audit_wait_and_serve(inst, sc, res));
  }
}

TEST(MonteCarlo, ZeroProbabilityGivesZero) {
  auto s = setup(star(1, 1, 20, kUnboundedCapacity, {req(0, 2, 2, 2, 10, 0.0)}), 10);
  auto est = monte_carlo_cost(s.inst, s.sched, s.asg, Strategy::kRq, 1000, 1);
  EXPECT_EQ(est.mean, 0.0);
  EXPECT_EQ(est.std_error, 0.0);
  EXPECT_EQ(est.samples, 1000);
}

TEST(MonteCarlo, IndependentOfThreadCount) {
  Rng rng(44);
  auto inst = ssvrp::testing::random_tiny_instance(rng);
  auto sol = ssvrp::testing::random_solution(inst, rng);
  auto sched = compute_schedule(inst, sol);
  auto asg = assign_requests(inst, sched);
  auto a = monte_carlo_cost(inst, sched, asg, Strategy::kRqPlus, 20000, 9, 1);
  auto b = monte_carlo_cost(inst, sched, asg, Strategy::kRqPlus, 20000, 9, 4);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
  auto c = monte_carlo_wait_and_serve(inst, 20000, 9, 1);
  auto d = monte_carlo_wait_and_serve(inst, 20000, 9, 3);
  EXPECT_EQ(c.mean, d.mean);
}

TEST(MonteCarlo, AgreesWithClosedForm) {
  Rng rng(45);
  for (int trial = 0; trial < 5; ++trial) {
    auto inst = ssvrp::testing::random_tiny_instance(rng);
    auto sol = ssvrp::testing::random_solution(inst, rng);
    auto sched = compute_schedule(inst, sol);
    auto asg = assign_requests(inst, sched);
    auto est = monte_carlo_cost(inst, sched, asg, Strategy::kRq, 50000, trial, 2);
    const double exact = expected_cost(inst, sched, asg, Strategy::kRq);
    EXPECT_LE(std::abs(est.mean - exact), 4 * est.std_error + 1e-12);
  }
}

