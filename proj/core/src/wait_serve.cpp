#include <algorithm>
#include <tuple>

#include "ssvrp/simulate.hpp"

namespace ssvrp {

namespace {

struct Idle {
  int where = 0;
  Time free_at = 0;  // idle from this time on
  int load = 0;
};

// Arrival time at r's customer if vehicle v can take r at time t, else -1.
Time reach(const Instance& inst, const Idle& v, const PotentialRequest& req, Time t) {
  if (v.free_at > t) return -1;
  if (!inst.capacity_unbounded() && v.load + req.demand > inst.capacity()) return -1;
  const Time arrive = std::max(t + inst.travel(v.where, req.customer), req.earliest);
  if (arrive > req.latest) return -1;
  if (arrive + req.service + inst.travel(req.customer, 0) > inst.horizon()) return -1;
  return arrive;
}

}  // namespace

WaitServeResult run_wait_and_serve(const Instance& inst, const Scenario& sc, bool record_trace) {
  WaitServeResult res;
  res.accepted.assign(inst.num_requests(), 0);
  std::vector<Idle> fleet(inst.vehicles());
  for (int r = 0; r < inst.num_requests(); ++r) {
    if (!sc.present[r]) continue;
    const auto& req = inst.request(r);
    const Time t = req.reveal;
    int best = -1;
    Time best_arrival = 0;
    for (int k = 0; k < inst.vehicles(); ++k) {
      const Time arrive = reach(inst, fleet[k], req, t);
      if (arrive < 0) continue;
      if (best < 0 ||
          std::tuple(inst.travel(fleet[k].where, req.customer), fleet[k].load) <
              std::tuple(inst.travel(fleet[best].where, req.customer), fleet[best].load)) {
        best = k;
        best_arrival = arrive;
      }
    }
    if (best < 0) {
      ++res.rejected;
      if (record_trace) res.trace.push_back({t, -1, EventKind::kReject, req.customer, 0, r});
      continue;
    }
    Idle& v = fleet[best];
    res.accepted[r] = 1;
    v.load += req.demand;
    if (record_trace) {
      res.trace.push_back({t, best, EventKind::kAccept, req.customer, v.load, r});
      res.trace.push_back({t, best, EventKind::kDepart, v.where, v.load - req.demand, r});
      res.trace.push_back({best_arrival, best, EventKind::kServeStart, req.customer, v.load, r});
      res.trace.push_back({best_arrival + req.service, best, EventKind::kServeEnd, req.customer, v.load, r});
    }
    v.where = req.customer;
    v.free_at = best_arrival + req.service;
  }
  if (record_trace) {
    for (int k = 0; k < inst.vehicles(); ++k) {
      const Idle& v = fleet[k];
      if (v.where == 0) continue;
      res.trace.push_back({v.free_at, k, EventKind::kDepart, v.where, v.load, -1});
      res.trace.push_back({v.free_at + inst.travel(v.where, 0), k, EventKind::kArrive, 0, v.load, -1});
    }
    std::stable_sort(res.trace.begin(), res.trace.end(),
                     [](const TraceRecord& a, const TraceRecord& b) { return a.time < b.time; });
  }
  return res;
}

bool audit_wait_and_serve(const Instance& inst, const Scenario& sc, const WaitServeResult& res) {
  // Replay vehicle states from the accepted set and check each rejection.
  std::vector<Idle> fleet(inst.vehicles());
  std::vector<int> owner(inst.num_requests(), -1);
  for (const auto& e : res.trace)
    if (e.kind == EventKind::kAccept) owner[e.request] = e.vehicle;
  for (int r = 0; r < inst.num_requests(); ++r) {
    if (!sc.present[r]) continue;
    const auto& req = inst.request(r);
    if (res.accepted[r]) {
      const int k = owner[r];
      if (k < 0) return false;
      const Time arrive = reach(inst, fleet[k], req, req.reveal);
      if (arrive < 0) return false;
      fleet[k].where = req.customer;
      fleet[k].free_at = arrive + req.service;
      fleet[k].load += req.demand;
      continue;
    }
    for (const auto& v : fleet)
      if (reach(inst, v, req, req.reveal) >= 0) return false;
  }
  return true;
}

}  // namespace ssvrp
