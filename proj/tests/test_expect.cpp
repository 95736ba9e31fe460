#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "ssvrp/assign.hpp"
#include "ssvrp/error.hpp"
#include "ssvrp/expect.hpp"
#include "ssvrp/simulate.hpp"
#include "tiny.hpp"

using namespace ssvrp;
using ssvrp::testing::random_solution;
using ssvrp::testing::random_tiny_instance;
using ssvrp::testing::TinyShape;
using ssvrp::testing::with_capacity;

namespace {

// Depot 0, waiting vertex 1, customers 2.. with uniform travel `d`.
Instance star(int customers, Time d, Time h, int cap, std::vector<PotentialRequest> reqs, int vehicles = 1) {
  const int nv = 2 + customers;
  std::vector<Time> t(static_cast<std::size_t>(nv) * nv, d);
  for (int i = 0; i < nv; ++i) t[static_cast<std::size_t>(i) * nv + i] = 0;
  return Instance("star", 1, customers, std::move(t), h, vehicles, cap, std::move(reqs));
}

PotentialRequest req(int id, int c, Time g, Time e, Time l, double p, int q = 1, Time s = 0) {
  return PotentialRequest{id, c, g, q, s, e, l, p};
}

FirstStageSolution single(const Instance& inst, Time wait, int vehicles = 1) {
  FirstStageSolution sol(vehicles, inst.num_waiting());
  sol.routes[0] = {1};
  sol.waits[1] = wait;
  return sol;
}

struct Prepared {
  Schedule sched;
  Assignment asg;
};

Prepared prepare(const Instance& inst, const FirstStageSolution& sol) {
  Prepared p{compute_schedule(inst, sol), {}};
  p.asg = assign_requests(inst, p.sched);
  return p;
}

}  // namespace

TEST(ExpectedCost, ZeroProbabilitiesCostNothing) {
  auto inst = star(2, 1, 20, kUnboundedCapacity, {req(0, 2, 1, 3, 9, 0.0), req(1, 3, 2, 3, 9, 0.0)});
  for (Strategy s : {Strategy::kRInf, Strategy::kRq, Strategy::kRqPlus})
    EXPECT_EQ(expected_cost(inst, single(inst, 10), s), 0.0);
}

TEST(ExpectedCost, UnassignedRequestCostsItsProbability) {
  auto inst = star(1, 1, 20, kUnboundedCapacity, {req(0, 2, 1, 1, 1, 0.4)});
  for (Strategy s : {Strategy::kRInf, Strategy::kRq, Strategy::kRqPlus})
    EXPECT_DOUBLE_EQ(expected_cost(inst, single(inst, 10), s), 0.4);
}

TEST(ExpectedCost, FirstRequestAcceptedWhenWindowOpen) {
  auto inst = star(1, 1, 20, kUnboundedCapacity, {req(0, 2, 1, 3, 6, 0.7)});
  auto p = prepare(inst, single(inst, 10));
  auto ev = evaluate(inst, p.sched, p.asg, Strategy::kRInf);
  EXPECT_DOUBLE_EQ(ev.accept_prob[0], 0.7);
  EXPECT_NEAR(ev.cost, 0.0, 1e-15);
}

TEST(ExpectedCost, ServingFirstMakesSecondMiss) {
  // Round trip of 2 with service 4 keeps the vehicle away until t=8.
  auto inst = star(2, 1, 30, kUnboundedCapacity, {req(0, 2, 2, 2, 10, 1.0, 1, 4), req(1, 3, 3, 4, 5, 1.0)});
  auto p = prepare(inst, single(inst, 20));
  ASSERT_TRUE(p.asg.assigned(0));
  ASSERT_TRUE(p.asg.assigned(1));
  auto ev = evaluate(inst, p.sched, p.asg, Strategy::kRInf);
  EXPECT_DOUBLE_EQ(ev.accept_prob[0], 1.0);
  EXPECT_DOUBLE_EQ(ev.accept_prob[1], 0.0);
  EXPECT_DOUBLE_EQ(exhaustive_expected_cost(inst, p.sched, p.asg, Strategy::kRInf), 1.0);
}

TEST(ExpectedCost, AbsentPredecessorShiftsAvailability) {
  auto inst = star(2, 1, 30, kUnboundedCapacity, {req(0, 2, 2, 2, 10, 0.0, 1, 4), req(1, 3, 3, 4, 5, 0.6)});
  auto p = prepare(inst, single(inst, 20));
  auto ev = evaluate(inst, p.sched, p.asg, Strategy::kRInf);
  EXPECT_DOUBLE_EQ(ev.accept_prob[1], 0.6);
}

TEST(ExpectedCost, CapacityOneRejectsSecondUnitRequest) {
  auto inst = star(2, 1, 30, 1, {req(0, 2, 2, 2, 20, 1.0), req(1, 3, 3, 3, 20, 1.0)});
  auto p = prepare(inst, single(inst, 20));
  auto ev = evaluate(inst, p.sched, p.asg, Strategy::kRq);
  EXPECT_DOUBLE_EQ(ev.accept_prob[1], 0.0);
  EXPECT_DOUBLE_EQ(ev.cost, 1.0);
  EXPECT_DOUBLE_EQ(exhaustive_expected_cost(inst, p.sched, p.asg, Strategy::kRq), 1.0);
}

TEST(ExpectedCost, RinfRejectsBindingCapacity) {
  auto inst = star(2, 1, 30, 1, {req(0, 2, 2, 2, 20, 1.0), req(1, 3, 3, 3, 20, 1.0)});
  EXPECT_THROW(expected_cost(inst, single(inst, 20), Strategy::kRInf), ConfigError);
}

TEST(ExpectedCost, RqPlusMatchesRqForLoneRequest) {
  auto inst = star(1, 2, 30, 3, {req(0, 2, 4, 6, 12, 0.8, 1, 2)});
  auto sol = single(inst, 20);
  EXPECT_DOUBLE_EQ(expected_cost(inst, sol, Strategy::kRqPlus), expected_cost(inst, sol, Strategy::kRq));
}

namespace {

// r0 is served at a far customer; r1's customer is next door to it. Going
// back to the waiting vertex first makes r1 late, direct travel does not.
Instance direct_travel_instance() {
  // vertices: 0 depot, 1 waiting, 2 customer A, 3 customer B
  const std::vector<Time> d = {
      0, 1, 4, 4,  //
      1, 0, 4, 4,  //
      4, 4, 0, 1,  //
      4, 4, 1, 0,  //
  };
  return Instance("direct", 1, 2, d, 30, 1, kUnboundedCapacity,
                  {req(0, 2, 2, 2, 8, 0.9), req(1, 3, 6, 6, 10, 0.9)});
}

}  // namespace

TEST(ExpectedCost, DirectTravelBeatsReturningHome) {
  auto inst = direct_travel_instance();
  auto p = prepare(inst, single(inst, 24));
  const auto rq = evaluate(inst, p.sched, p.asg, Strategy::kRq);
  const auto plus = evaluate(inst, p.sched, p.asg, Strategy::kRqPlus);
  EXPECT_GT(plus.accept_prob[1], rq.accept_prob[1] + 0.5);
  EXPECT_LT(plus.cost, rq.cost);
  EXPECT_NEAR(plus.cost, exhaustive_expected_cost(inst, p.sched, p.asg, Strategy::kRqPlus), 1e-12);
  EXPECT_NEAR(rq.cost, exhaustive_expected_cost(inst, p.sched, p.asg, Strategy::kRq), 1e-12);
}

TEST(ExpectedCost, StrategyNamesRoundTrip) {
  for (Strategy s : {Strategy::kRInf, Strategy::kRq, Strategy::kRqPlus, Strategy::kRqHybrid})
    EXPECT_EQ(parse_strategy(to_string(s)), s);
  EXPECT_THROW(parse_strategy("bogus"), ConfigError);
  EXPECT_EQ(working_strategy(Strategy::kRqHybrid), Strategy::kRq);
  EXPECT_EQ(reporting_strategy(Strategy::kRqHybrid), Strategy::kRqPlus);
}

// ---- brute-force oracle ----

class OracleTest : public ::testing::TestWithParam<Strategy> {};

TEST_P(OracleTest, ClosedFormMatchesScenarioEnumeration) {
  const Strategy s = GetParam();
  Rng rng(0xC0FFEE + static_cast<int>(s));
  TinyShape shape;
  shape.unbounded = s == Strategy::kRInf;
  int nontrivial = 0;
  for (int trial = 0; trial < 400; ++trial) {
    auto inst = random_tiny_instance(rng, shape);
    auto sol = random_solution(inst, rng);
    ASSERT_TRUE(is_feasible(inst, sol));
    auto p = prepare(inst, sol);
    const double closed = expected_cost(inst, p.sched, p.asg, s);
    const double oracle = exhaustive_expected_cost(inst, p.sched, p.asg, s);
    ASSERT_NEAR(closed, oracle, 1e-9) << "trial " << trial;
    double sum_p = 0;
    for (const auto& r : inst.requests()) sum_p += r.probability;
    if (oracle > 1e-9 && oracle < sum_p - 1e-9) ++nontrivial;
  }
  EXPECT_GT(nontrivial, 100);
}

INSTANTIATE_TEST_SUITE_P(AllStrategies, OracleTest,
                         ::testing::Values(Strategy::kRInf, Strategy::kRq, Strategy::kRqPlus),
                         [](const auto& info) {
                           switch (info.param) {
                             case Strategy::kRInf: return std::string("RInf");
                             case Strategy::kRq: return std::string("Rq");
                             default: return std::string("RqPlus");
                           }
                         });

TEST(Oracle, LiteralRevealReadingDisagreesSomewhere) {
  Rng rng(77);
  int differs = 0;
  for (int trial = 0; trial < 400 && differs == 0; ++trial) {
    auto inst = random_tiny_instance(rng);
    auto p = prepare(inst, random_solution(inst, rng));
    const double lit = expected_cost(inst, p.sched, p.asg, Strategy::kRqPlus, {NextReveal::kLiteral});
    const double oracle = exhaustive_expected_cost(inst, p.sched, p.asg, Strategy::kRqPlus);
    if (std::abs(lit - oracle) > 1e-9) ++differs;
  }
  EXPECT_GT(differs, 0);
}

TEST(Oracle, UnboundedRqEqualsRinf) {
  Rng rng(5);
  TinyShape shape;
  shape.unbounded = true;
  for (int trial = 0; trial < 200; ++trial) {
    auto inst = random_tiny_instance(rng, shape);
    auto p = prepare(inst, random_solution(inst, rng));
    ASSERT_NEAR(expected_cost(inst, p.sched, p.asg, Strategy::kRq),
                expected_cost(inst, p.sched, p.asg, Strategy::kRInf), 1e-12);
    auto big = with_capacity(inst, static_cast<int>(std::max<std::int64_t>(1, inst.total_demand())));
    auto pb = prepare(big, random_solution(big, rng));
    ASSERT_NEAR(expected_cost(big, pb.sched, pb.asg, Strategy::kRq),
                expected_cost(big, pb.sched, pb.asg, Strategy::kRInf), 1e-12);
  }
}

TEST(Oracle, AcceptanceProbabilitiesWithinBounds) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    auto inst = random_tiny_instance(rng);
    auto p = prepare(inst, random_solution(inst, rng));
    for (Strategy s : {Strategy::kRq, Strategy::kRqPlus}) {
      auto ev = evaluate(inst, p.sched, p.asg, s);
      for (int r = 0; r < inst.num_requests(); ++r) {
        ASSERT_GE(ev.accept_prob[r], -1e-12);
        ASSERT_LE(ev.accept_prob[r], inst.request(r).probability + 1e-12);
      }
    }
  }
}

TEST(Oracle, ScalingProbabilitiesDownNeverHelps) {
  Rng rng(12);
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = random_tiny_instance(rng);
    auto sol = random_solution(inst, rng);
    std::vector<PotentialRequest> reqs(inst.requests().begin(), inst.requests().end());
    for (auto& r : reqs) r.probability *= 0.5;
    Instance half(inst.name(), inst.num_waiting(), inst.num_customers(), inst.travel_matrix(), inst.horizon(),
                  inst.vehicles(), inst.capacity(), reqs);
    for (Strategy s : {Strategy::kRq, Strategy::kRqPlus})
      ASSERT_LE(expected_cost(half, sol, s), expected_cost(inst, sol, s) + 1e-12);
  }
}

TEST(Oracle, RouteRelabelingLeavesCostUnchanged) {
  Rng rng(13);
  TinyShape shape;
  shape.max_vehicles = 3;
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = random_tiny_instance(rng, shape);
    auto sol = random_solution(inst, rng);
    auto perm = sol;
    std::reverse(perm.routes.begin(), perm.routes.end());
    for (Strategy s : {Strategy::kRq, Strategy::kRqPlus})
      ASSERT_NEAR(expected_cost(inst, sol, s), expected_cost(inst, perm, s), 1e-12);
  }
}

// ---- single-vertex chains ----

TEST(Bertsimas, FirstRequestStartsEmpty) {
  auto inst = star(3, 1, 40, 5, {req(0, 2, 1, 1, 40, 0.3), req(1, 3, 1, 1, 40, 0.5), req(2, 4, 1, 1, 40, 0.8)});
  auto p = prepare(inst, single(inst, 36));
  auto f = bertsimas_marginals(inst, p.sched, p.asg, 0);
  ASSERT_EQ(f.size(), 3u);
  EXPECT_DOUBLE_EQ(f[0][0], 1.0);
  for (std::size_t q = 1; q < f[0].size(); ++q) EXPECT_EQ(f[0][q], 0.0);
  EXPECT_NEAR(f[1][0], 0.7, 1e-15);
  EXPECT_NEAR(f[1][1], 0.3, 1e-15);
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t q = i + 1; q < f[i].size(); ++q) EXPECT_EQ(f[i][q], 0.0);
}

TEST(Bertsimas, RejectsWindowedRoutes) {
  // Serving the first request (service 5) pushes the second past its window.
  auto inst = star(2, 1, 40, 5, {req(0, 2, 1, 1, 40, 0.3, 1, 5), req(1, 3, 2, 2, 5, 0.5)});
  auto p = prepare(inst, single(inst, 36));
  EXPECT_THROW(bertsimas_marginals(inst, p.sched, p.asg, 0), ConfigError);
}

// ---- cell counters ----

TEST(Complexity, CellCountsStayWithinEnvelopes) {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    auto inst = random_tiny_instance(rng);
    auto p = prepare(inst, random_solution(inst, rng));
    const double R = inst.num_requests(), h = inst.horizon(), Q = inst.capacity();
    auto rq = evaluate(inst, p.sched, p.asg, Strategy::kRq);
    auto plus = evaluate(inst, p.sched, p.asg, Strategy::kRqPlus);
    EXPECT_LE(rq.stats.cells, 8.0 * R * h * (Q + 1));
    EXPECT_LE(plus.stats.cells, 8.0 * R * h * h * (Q + 1) * std::max(1, plus.stats.max_fan_in));
  }
}
