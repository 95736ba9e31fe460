#include <gtest/gtest.h>

#include <algorithm>

#include "ssvrp/error.hpp"
#include "ssvrp/model.hpp"
#include "tiny.hpp"

using namespace ssvrp;

namespace {

PotentialRequest make(int id, int c, Time g, Time l) { return PotentialRequest{id, c, g, 1, 0, g, l, 0.5}; }

Instance line(Time h, std::vector<PotentialRequest> reqs = {}, int m = 2, int n = 2, Time d = 1, int k = 2) {
  const int nv = 1 + m + n;
  std::vector<Time> t(static_cast<std::size_t>(nv) * nv, d);
  for (int i = 0; i < nv; ++i) t[static_cast<std::size_t>(i) * nv + i] = 0;
  return Instance("line", m, n, std::move(t), h, k, kUnboundedCapacity, std::move(reqs));
}

bool has(const std::vector<Violation>& v, ViolationKind k) {
  return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.kind == k; });
}

}  // namespace

TEST(RequestOrder, RevealTimeFirst) {
  EXPECT_TRUE(request_less(make(0, 5, 10, 20), make(1, 4, 12, 15)));
}

TEST(RequestOrder, WindowEndBreaksRevealTies) {
  EXPECT_TRUE(request_less(make(0, 5, 10, 15), make(1, 4, 10, 20)));
}

TEST(RequestOrder, CustomerBreaksRemainingTies) {
  EXPECT_TRUE(request_less(make(0, 4, 10, 15), make(1, 5, 10, 15)));
  EXPECT_FALSE(request_less(make(1, 5, 10, 15), make(0, 4, 10, 15)));
}

TEST(RequestOrder, StrictTotalOrderOnRandomSets) {
  ssvrp::Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto inst = ssvrp::testing::random_tiny_instance(rng);
    const auto rs = inst.requests();
    for (std::size_t i = 0; i < rs.size(); ++i) {
      EXPECT_EQ(request_order_compare(rs[i], rs[i]), 0);
      for (std::size_t j = 0; j < rs.size(); ++j) {
        if (i == j) continue;
        EXPECT_EQ(request_order_compare(rs[i], rs[j]), -request_order_compare(rs[j], rs[i]));
        EXPECT_EQ(request_less(rs[i], rs[j]), i < j);  // stored sorted
      }
    }
  }
}

TEST(InstanceTest, SortsRequestsOnConstruction) {
  auto inst = line(20, {make(7, 3, 9, 12), make(8, 4, 2, 12), make(9, 3, 2, 5)});
  ASSERT_EQ(inst.num_requests(), 3);
  EXPECT_EQ(inst.request(0).id, 9);
  EXPECT_EQ(inst.request(1).id, 8);
  EXPECT_EQ(inst.request(2).id, 7);
}

TEST(InstanceTest, RejectsBadInput) {
  EXPECT_THROW(line(20, {make(0, 1, 2, 3)}), ConfigError);          // waiting vertex as customer
  EXPECT_THROW(line(20, {make(0, 3, 2, 30)}), ConfigError);         // window past horizon
  EXPECT_THROW(line(20, {make(0, 3, 2, 3), make(0, 4, 5, 6)}), ConfigError);  // duplicate id
  auto bad = make(0, 3, 2, 3);
  bad.probability = 1.5;
  EXPECT_THROW(line(20, {bad}), ConfigError);
}

TEST(Validate, EmptySolutionIsFeasible) {
  auto inst = line(20);
  FirstStageSolution sol(2, 2);
  EXPECT_TRUE(validate_first_stage(inst, sol).empty());
}

TEST(Validate, OverlongRouteIsReported) {
  auto inst = line(20, {}, 2, 2, 10);
  FirstStageSolution sol(2, 2);
  sol.routes[0] = {1};
  sol.waits[1] = 1;
  auto v = validate_first_stage(inst, sol);
  ASSERT_TRUE(has(v, ViolationKind::kRouteTooLong));
  EXPECT_EQ(route_duration(inst, sol, 0), 21);
}

TEST(Validate, DuplicateVertexIsReported) {
  auto inst = line(20);
  FirstStageSolution sol(2, 2);
  sol.routes[0] = {1};
  sol.routes[1] = {1};
  sol.waits[1] = 2;
  EXPECT_TRUE(has(validate_first_stage(inst, sol), ViolationKind::kDuplicateVertex));
}

TEST(Validate, WaitsMustMatchVisits) {
  auto inst = line(20);
  FirstStageSolution sol(2, 2);
  sol.routes[0] = {1};
  sol.waits[2] = 3;
  auto v = validate_first_stage(inst, sol);
  EXPECT_TRUE(has(v, ViolationKind::kMissingWait));
  EXPECT_TRUE(has(v, ViolationKind::kStrayWait));
}

TEST(Validate, UnknownVertexIsStructural) {
  auto inst = line(20);
  FirstStageSolution sol(2, 2);
  sol.routes[0] = {3};  // a customer
  EXPECT_THROW(validate_first_stage(inst, sol), StructuralError);
  FirstStageSolution wrong_fleet(3, 2);
  EXPECT_THROW(validate_first_stage(inst, wrong_fleet), StructuralError);
}

TEST(Validate, BruteForceAgreesOnTinySolutions) {
  // Two waiting vertices, one vehicle: enumerate every route and wait vector.
  auto inst = line(8, {}, 2, 1, 2, 1);
  const std::vector<std::vector<int>> routes = {{}, {1}, {2}, {1, 2}, {2, 1}};
  for (const auto& r : routes)
    for (Time a = 0; a <= 5; ++a)
      for (Time b = 0; b <= 5; ++b) {
        FirstStageSolution sol(1, 2);
        sol.routes[0] = r;
        sol.waits[1] = a;
        sol.waits[2] = b;
        const bool v1 = std::count(r.begin(), r.end(), 1) > 0, v2 = std::count(r.begin(), r.end(), 2) > 0;
        const Time travel = r.empty() ? 0 : 2 * (static_cast<Time>(r.size()) + 1);
        const bool expect = (v1 ? a >= 1 : a == 0) && (v2 ? b >= 1 : b == 0) && travel + a + b <= 8;
        EXPECT_EQ(is_feasible(inst, sol), expect) << a << ' ' << b << ' ' << r.size();
      }
}

TEST(Scaling, CeilingRule) {
  EXPECT_EQ(coarsen(480, 5), 96);
  EXPECT_EQ(coarsen(7, 2), 4);
  EXPECT_EQ(coarsen(0, 3), 0);
  for (Time v = 0; v < 200; ++v)
    for (int s = 1; s <= 7; ++s) EXPECT_GE(coarsen(v, s) * s, v);
}

TEST(Scaling, ScaleOneIsIdentity) {
  ssvrp::Rng rng(9);
  auto inst = ssvrp::testing::random_tiny_instance(rng);
  EXPECT_EQ(scale_instance(inst, {1, 1}), inst);
}

TEST(Scaling, ScalesAllTimeFields) {
  std::vector<PotentialRequest> reqs = {PotentialRequest{0, 3, 7, 2, 5, 9, 16, 0.3}};
  auto inst = line(480, reqs, 2, 2, 7);
  auto s = scale_instance(inst, {5, 10});
  EXPECT_EQ(s.horizon(), 96);
  EXPECT_EQ(s.travel(0, 1), 2);
  const auto& r = s.request(0);
  EXPECT_EQ(r.reveal, 2);
  EXPECT_EQ(r.service, 1);
  EXPECT_EQ(r.earliest, 2);
  EXPECT_EQ(r.latest, 4);
  EXPECT_EQ(r.demand, 2);
  EXPECT_EQ(r.probability, 0.3);
}

TEST(Scaling, OrderIsRederivedAfterScaling) {
  // Distinct reveal times 6 and 7 collapse to 2 at scale 5; the window end
  // then decides.
  auto inst = line(100, {make(0, 3, 6, 40), make(1, 4, 7, 12)});
  EXPECT_EQ(inst.request(0).id, 0);
  auto s = scale_instance(inst, {5, 10});
  EXPECT_EQ(s.request(0).id, 1);
}

TEST(Scaling, WaitStep) {
  EXPECT_EQ((TimeScale{5, 60}.wait_step()), 12);
  EXPECT_EQ((TimeScale{1, 10}.wait_step()), 10);
  EXPECT_THROW((TimeScale{4, 10}.wait_step()), ConfigError);
}

TEST(Scaling, RescaleMultipliesWaits) {
  FirstStageSolution sol(1, 2);
  sol.routes[0] = {2};
  sol.waits[2] = 12;
  auto r = rescale_solution(sol, {5, 60});
  EXPECT_EQ(r.waits[2], 60);
  EXPECT_EQ(r.routes, sol.routes);
  EXPECT_EQ(rescale_solution(sol, {1, 10}), sol);
}

TEST(Scaling, RescaleReportsInfeasibility) {
  // h = 9 coarsens to 5 at scale 2, which is more than 9 / 2.
  auto inst = line(9, {}, 1, 1, 2, 1);
  auto coarse = scale_instance(inst, {2, 2});
  EXPECT_EQ(coarse.horizon(), 5);
  FirstStageSolution sol(1, 1);
  sol.routes[0] = {1};
  sol.waits[1] = 3;  // 1 + 3 + 1 = 5 scaled
  ASSERT_TRUE(is_feasible(coarse, sol));
  EXPECT_THROW(rescale_checked(inst, sol, {2, 2}), FeasibilityError);  // 2 + 6 + 2 = 10 > 9
  sol.waits[1] = 2;
  EXPECT_NO_THROW(rescale_checked(inst, sol, {2, 2}));
}
