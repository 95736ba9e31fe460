#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace ssvrp {

using Time = int;

inline constexpr int kUnboundedCapacity = std::numeric_limits<int>::max();

// A request that may appear at `customer` at time `reveal`.
struct PotentialRequest {
  int id = 0;  // stable label, survives reordering and scaling
  int customer = 0;
  Time reveal = 1;
  int demand = 0;
  Time service = 0;
  Time earliest = 1;
  Time latest = 1;
  double probability = 0.0;

  bool operator==(const PotentialRequest&) const = default;
};

// Strict total order on requests: reveal time, then window end, then
// customer, then id (only reached for duplicates created by coarse scaling).
bool request_less(const PotentialRequest& a, const PotentialRequest& b);
int request_order_compare(const PotentialRequest& a, const PotentialRequest& b);

// Vertex layout: 0 is the depot, [1, m] are waiting vertices and
// [m+1, m+n] are customers. Requests are kept sorted by request_less so a
// request's index doubles as its rank.
class Instance {
 public:
  Instance() = default;
  Instance(std::string name, int num_waiting, int num_customers, std::vector<Time> travel,
           Time horizon, int vehicles, int capacity, std::vector<PotentialRequest> requests);

  const std::string& name() const { return name_; }
  int num_waiting() const { return num_waiting_; }
  int num_customers() const { return num_customers_; }
  int num_vertices() const { return 1 + num_waiting_ + num_customers_; }
  bool is_waiting(int v) const { return v >= 1 && v <= num_waiting_; }
  bool is_customer(int v) const { return v > num_waiting_ && v < num_vertices(); }

  Time travel(int i, int j) const { return travel_[static_cast<std::size_t>(i) * num_vertices() + j]; }
  const std::vector<Time>& travel_matrix() const { return travel_; }
  Time max_travel() const { return max_travel_; }

  Time horizon() const { return horizon_; }
  int vehicles() const { return vehicles_; }
  int capacity() const { return capacity_; }
  bool capacity_unbounded() const { return capacity_ == kUnboundedCapacity; }

  int num_requests() const { return static_cast<int>(requests_.size()); }
  const PotentialRequest& request(int r) const { return requests_[r]; }
  std::span<const PotentialRequest> requests() const { return requests_; }
  Time max_service() const { return max_service_; }
  std::int64_t total_demand() const;
  double expected_requests() const;

  bool operator==(const Instance&) const = default;

 private:
  std::string name_;
  int num_waiting_ = 0;
  int num_customers_ = 0;
  std::vector<Time> travel_;
  Time horizon_ = 0;
  int vehicles_ = 1;
  int capacity_ = kUnboundedCapacity;
  std::vector<PotentialRequest> requests_;
  Time max_travel_ = 0;
  Time max_service_ = 0;
};

// K routes over waiting vertices plus a waiting time per vertex; waits[w] is
// zero for vertices that are not visited.
struct FirstStageSolution {
  std::vector<std::vector<int>> routes;
  std::vector<Time> waits;

  FirstStageSolution() = default;
  FirstStageSolution(int vehicles, int num_waiting)
      : routes(static_cast<std::size_t>(vehicles)), waits(static_cast<std::size_t>(num_waiting) + 1, 0) {}

  int visited_count() const;
  bool operator==(const FirstStageSolution&) const = default;
};

enum class ViolationKind { kDuplicateVertex, kRouteTooLong, kMissingWait, kStrayWait };

struct Violation {
  ViolationKind kind;
  int route = -1;
  int vertex = -1;
  Time duration = 0;  // route duration for kRouteTooLong
  std::string describe() const;
};

// Reports feasibility problems; throws StructuralError for unknown vertices
// or a route count different from the fleet size.
std::vector<Violation> validate_first_stage(const Instance& inst, const FirstStageSolution& sol);
bool is_feasible(const Instance& inst, const FirstStageSolution& sol);
Time route_travel(const Instance& inst, const std::vector<int>& route);
Time route_duration(const Instance& inst, const FirstStageSolution& sol, int k);

// Time coarsening: every time field becomes ceil(v / scale). Waiting times
// are restricted to multiples of `multiple` minutes of the original clock.
struct TimeScale {
  int scale = 1;
  int multiple = 10;

  // Waiting-time step in scaled units; throws ConfigError if the multiple is
  // not a whole number of scaled units.
  Time wait_step() const;
};

// ceil(v / scale) for v >= 0.
Time coarsen(Time v, int scale);
Instance scale_instance(const Instance& inst, const TimeScale& ts);
FirstStageSolution rescale_solution(const FirstStageSolution& sol, const TimeScale& ts);
// Rescales to the original clock and throws FeasibilityError if the result
// violates the original instance's constraints.
FirstStageSolution rescale_checked(const Instance& original, const FirstStageSolution& sol,
                                   const TimeScale& ts);

}  // namespace ssvrp
