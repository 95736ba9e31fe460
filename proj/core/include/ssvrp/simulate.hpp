#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string_view>
#include <span>
#include <vector>

#include "ssvrp/assign.hpp"
#include "ssvrp/expect.hpp"
#include "ssvrp/model.hpp"
#include "ssvrp/rng.hpp"

namespace ssvrp {

// Realized requests: present[r] != 0 when request r appears.
struct Scenario {
  std::vector<char> present;

  static Scenario none(const Instance& inst) { return {std::vector<char>(inst.num_requests(), 0)}; }
  static Scenario all(const Instance& inst) { return {std::vector<char>(inst.num_requests(), 1)}; }
  int size() const;
  // Requests revealed exactly at time t, in request order.
  std::vector<int> revealed_at(const Instance& inst, Time t) const;
};

Scenario sample_scenario(const Instance& inst, Rng& rng);
// Probability of the scenario under independent appearances.
double scenario_probability(const Instance& inst, const Scenario& sc);

enum class EventKind { kDepart, kArrive, kAccept, kReject, kServeStart, kServeEnd, kSlip };
std::string_view to_string(EventKind e);

struct TraceRecord {
  Time time = 0;
  int vehicle = -1;  // -1 for rejections of unassigned requests
  EventKind kind = EventKind::kDepart;
  int vertex = 0;
  int load = 0;
  int request = -1;
};

void write_trace(std::ostream& os, std::span<const TraceRecord> trace);

struct RecourseResult {
  int rejected = 0;
  std::vector<char> accepted;
  std::vector<TraceRecord> trace;
  // Times a vehicle reached a waiting vertex (or the depot) after its planned
  // arrival. Only direct travel between customers can cause this.
  int slips = 0;
};

// Time-stepped execution of a recourse strategy on one scenario. Acceptance
// decisions are taken in route order as soon as a request is known and every
// request before it on the route has been decided; vehicles then move by the
// strategy's rules and every service departure is checked against the
// decision that admitted it. Reusable across scenarios.
class RecourseSimulator {
 public:
  RecourseSimulator(const Instance& inst, const Schedule& sched, const Assignment& asg, Strategy s);
  int run(const Scenario& sc, RecourseResult* detail = nullptr);

 private:
  struct Impl;
  struct ImplDeleter {
    void operator()(Impl* p) const;
  };
  std::unique_ptr<Impl, ImplDeleter> impl_;
};

RecourseResult run_recourse(const Instance& inst, const Schedule& sched, const Assignment& asg,
                            const Scenario& sc, Strategy s);

struct WaitServeResult {
  int rejected = 0;
  std::vector<char> accepted;
  std::vector<TraceRecord> trace;
};

// Baseline without first-stage plan: each request goes to the closest idle
// vehicle able to serve it in time and still reach the depot by the horizon.
WaitServeResult run_wait_and_serve(const Instance& inst, const Scenario& sc, bool record_trace = false);
// Re-checks that every rejection was forced under the baseline's own rules.
bool audit_wait_and_serve(const Instance& inst, const Scenario& sc, const WaitServeResult& res);

struct MonteCarloEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t samples = 0;
};

// Sample i uses Rng::stream(seed, i), so results do not depend on `threads`.
MonteCarloEstimate monte_carlo_cost(const Instance& inst, const Schedule& sched, const Assignment& asg,
                                    Strategy s, std::int64_t samples, std::uint64_t seed, int threads = 1);
MonteCarloEstimate monte_carlo_wait_and_serve(const Instance& inst, std::int64_t samples, std::uint64_t seed,
                                              int threads = 1);

inline constexpr int kMaxExhaustiveRequests = 20;
// Exact expectation by enumerating every scenario; throws BudgetError above
// kMaxExhaustiveRequests requests.
double exhaustive_expected_cost(const Instance& inst, const Schedule& sched, const Assignment& asg, Strategy s);

}  // namespace ssvrp
