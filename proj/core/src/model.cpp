#include "ssvrp/model.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>
#include <sstream>

#include "ssvrp/error.hpp"

namespace ssvrp {

int request_order_compare(const PotentialRequest& a, const PotentialRequest& b) {
  auto key = [](const PotentialRequest& r) {
    return std::tuple(r.reveal, r.latest, r.customer, r.reveal, r.id);
  };
  auto ka = key(a), kb = key(b);
  if (ka < kb) return -1;
  if (kb < ka) return 1;
  return 0;
}

bool request_less(const PotentialRequest& a, const PotentialRequest& b) {
  return request_order_compare(a, b) < 0;
}

Instance::Instance(std::string name, int num_waiting, int num_customers, std::vector<Time> travel,
                   Time horizon, int vehicles, int capacity, std::vector<PotentialRequest> requests)
    : name_(std::move(name)),
      num_waiting_(num_waiting),
      num_customers_(num_customers),
      travel_(std::move(travel)),
      horizon_(horizon),
      vehicles_(vehicles),
      capacity_(capacity),
      requests_(std::move(requests)) {
  if (num_waiting_ < 0 || num_customers_ < 0) throw ConfigError("negative vertex count");
  if (horizon_ < 1) throw ConfigError("horizon must be positive");
  if (vehicles_ < 1) throw ConfigError("fleet size must be positive");
  if (capacity_ < 1) throw ConfigError("capacity must be positive");
  const auto nv = static_cast<std::size_t>(num_vertices());
  if (travel_.size() != nv * nv) throw ConfigError("travel matrix has wrong size");
  for (std::size_t i = 0; i < nv; ++i) {
    for (std::size_t j = 0; j < nv; ++j) {
      Time d = travel_[i * nv + j];
      if (d < 0) throw ConfigError("negative travel time");
      if (i == j && d != 0) throw ConfigError("travel matrix diagonal must be zero");
      max_travel_ = std::max(max_travel_, d);
    }
  }
  for (const auto& r : requests_) {
    std::ostringstream where;
    where << "request " << r.id << ": ";
    if (!is_customer(r.customer)) throw ConfigError(where.str() + "customer is not a customer vertex");
    if (!(1 <= r.reveal && r.reveal <= r.earliest && r.earliest <= r.latest && r.latest <= horizon_))
      throw ConfigError(where.str() + "times must satisfy 1 <= reveal <= earliest <= latest <= horizon");
    if (!(r.probability >= 0.0 && r.probability <= 1.0))
      throw ConfigError(where.str() + "probability outside [0,1]");
    if (r.demand < 0) throw ConfigError(where.str() + "negative demand");
    if (!capacity_unbounded() && r.demand > capacity_)
      throw ConfigError(where.str() + "demand exceeds capacity");
    if (r.service < 0) throw ConfigError(where.str() + "negative service time");
    max_service_ = std::max(max_service_, r.service);
  }
  std::vector<int> ids;
  ids.reserve(requests_.size());
  for (const auto& r : requests_) ids.push_back(r.id);
  std::sort(ids.begin(), ids.end());
  if (auto dup = std::adjacent_find(ids.begin(), ids.end()); dup != ids.end())
    throw ConfigError("duplicate request id " + std::to_string(*dup));
  std::sort(requests_.begin(), requests_.end(), request_less);
}

std::int64_t Instance::total_demand() const {
  std::int64_t total = 0;
  for (const auto& r : requests_) total += r.demand;
  return total;
}

double Instance::expected_requests() const {
  double total = 0.0;
  for (const auto& r : requests_) total += r.probability;
  return total;
}

int FirstStageSolution::visited_count() const {
  int n = 0;
  for (const auto& route : routes) n += static_cast<int>(route.size());
  return n;
}

std::string Violation::describe() const {
  std::ostringstream os;
  switch (kind) {
    case ViolationKind::kDuplicateVertex:
      os << "waiting vertex " << vertex << " visited more than once (route " << route << ")";
      break;
    case ViolationKind::kRouteTooLong:
      os << "route " << route << " lasts " << duration << " time units, beyond the horizon";
      break;
    case ViolationKind::kMissingWait:
      os << "waiting vertex " << vertex << " on route " << route << " has no positive waiting time";
      break;
    case ViolationKind::kStrayWait:
      os << "waiting vertex " << vertex << " has a waiting time but is not visited";
      break;
  }
  return os.str();
}

Time route_travel(const Instance& inst, const std::vector<int>& route) {
  if (route.empty()) return 0;
  Time total = inst.travel(0, route.front());
  for (std::size_t i = 1; i < route.size(); ++i) total += inst.travel(route[i - 1], route[i]);
  return total + inst.travel(route.back(), 0);
}

Time route_duration(const Instance& inst, const FirstStageSolution& sol, int k) {
  Time total = route_travel(inst, sol.routes[k]);
  for (int w : sol.routes[k]) total += sol.waits[w];
  return total;
}

std::vector<Violation> validate_first_stage(const Instance& inst, const FirstStageSolution& sol) {
  if (static_cast<int>(sol.routes.size()) != inst.vehicles())
    throw StructuralError("solution has " + std::to_string(sol.routes.size()) + " routes, fleet has " +
                          std::to_string(inst.vehicles()));
  if (static_cast<int>(sol.waits.size()) != inst.num_waiting() + 1)
    throw StructuralError("waiting-time table does not match the number of waiting vertices");
  for (const auto& route : sol.routes)
    for (int w : route)
      if (!inst.is_waiting(w)) throw StructuralError("vertex " + std::to_string(w) + " is not a waiting vertex");

  std::vector<Violation> out;
  std::vector<int> seen(inst.num_waiting() + 1, 0);
  for (int k = 0; k < inst.vehicles(); ++k) {
    for (int w : sol.routes[k]) {
      if (seen[w]++) out.push_back({ViolationKind::kDuplicateVertex, k, w, 0});
      if (sol.waits[w] <= 0) out.push_back({ViolationKind::kMissingWait, k, w, 0});
    }
    Time dur = route_duration(inst, sol, k);
    if (dur > inst.horizon()) out.push_back({ViolationKind::kRouteTooLong, k, -1, dur});
  }
  for (int w = 1; w <= inst.num_waiting(); ++w)
    if (!seen[w] && sol.waits[w] != 0) out.push_back({ViolationKind::kStrayWait, -1, w, 0});
  return out;
}

bool is_feasible(const Instance& inst, const FirstStageSolution& sol) {
  return validate_first_stage(inst, sol).empty();
}

Time TimeScale::wait_step() const {
  if (scale < 1) throw ConfigError("scale must be >= 1");
  if (multiple < 1) throw ConfigError("waiting multiple must be >= 1");
  if (multiple % scale != 0)
    throw ConfigError("waiting multiple " + std::to_string(multiple) + " is not a whole number of scale-" +
                      std::to_string(scale) + " units");
  return multiple / scale;
}

Time coarsen(Time v, int scale) { return (v + scale - 1) / scale; }

Instance scale_instance(const Instance& inst, const TimeScale& ts) {
  if (ts.scale < 1) throw ConfigError("scale must be >= 1");
  if (ts.scale == 1) return inst;
  const int s = ts.scale;
  std::vector<Time> travel = inst.travel_matrix();
  for (auto& d : travel) d = coarsen(d, s);
  std::vector<PotentialRequest> reqs(inst.requests().begin(), inst.requests().end());
  for (auto& r : reqs) {
    r.reveal = coarsen(r.reveal, s);
    r.earliest = coarsen(r.earliest, s);
    r.latest = coarsen(r.latest, s);
    r.service = coarsen(r.service, s);
  }
  return Instance(inst.name(), inst.num_waiting(), inst.num_customers(), std::move(travel),
                  coarsen(inst.horizon(), s), inst.vehicles(), inst.capacity(), std::move(reqs));
}

FirstStageSolution rescale_solution(const FirstStageSolution& sol, const TimeScale& ts) {
  FirstStageSolution out = sol;
  for (auto& t : out.waits) t *= ts.scale;
  return out;
}

FirstStageSolution rescale_checked(const Instance& original, const FirstStageSolution& sol,
                                   const TimeScale& ts) {
  FirstStageSolution out = rescale_solution(sol, ts);
  auto violations = validate_first_stage(original, out);
  if (!violations.empty()) {
    std::vector<std::string> text;
    for (const auto& v : violations) text.push_back(v.describe());
    throw FeasibilityError("rescaled solution is infeasible on the original instance", std::move(text));
  }
  return out;
}

}  // namespace ssvrp
