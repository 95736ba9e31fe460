// Capacity-aware acceptance: one table per route over (time free at w, load
// already committed). Load carries over from one waiting vertex to the next,
// where the vehicle is free again at its scheduled arrival.
#include <algorithm>

#include "grid.hpp"
#include "ssvrp/error.hpp"
#include "ssvrp/expect.hpp"

namespace ssvrp {

int effective_capacity(const Instance& inst, const Assignment& asg, int route) {
  long long total = 0;
  for (int r : asg.by_route[route]) total += inst.request(r).demand;
  return static_cast<int>(std::min<long long>(total, inst.capacity()));
}

bool capacity_binds(const Instance& inst, const Assignment& asg) {
  if (inst.capacity_unbounded()) return false;
  for (int k = 0; k < static_cast<int>(asg.by_route.size()); ++k) {
    long long total = 0;
    for (int r : asg.by_route[k]) total += inst.request(r).demand;
    if (total > inst.capacity()) return true;
  }
  return false;
}

namespace {

// Runs the route recursion; `observe(r, f)` sees each request's availability
// table before r is processed.
template <class Observer>
void rq_route(const Instance& inst, const Schedule& sched, const Assignment& asg, int k,
              std::vector<double>& prob, EvalStats& stats, Observer&& observe) {
  const int qcap = effective_capacity(inst, asg, k);
  const int loads = qcap + 1;
  const int span = detail::time_span(inst);
  detail::TimeLoadGrid f(span, loads), next(span, loads);
  std::vector<double> carried(loads, 0.0);
  carried[0] = 1.0;

  for (int w : sched.routes[k]) {
    const auto& chain = asg.by_vertex[w];
    if (chain.empty()) continue;
    f.clear();
    for (int q = 0; q < loads; ++q)
      if (carried[q] != 0.0) f.add(sched.arrival[w], q, carried[q]);

    for (int r : chain) {
      observe(r, f);
      const auto& req = inst.request(r);
      const double p = req.probability;
      const Time tmin = asg.tmin[r], tmax = asg.tmax[r], trip = asg.round_trip[r];
      next.clear();
      double accepted = 0.0;
      for (int t = f.lo(); t <= f.hi(); ++t) {
        const double* row = f.row(t);
        const Time dep = std::max(t, tmin);
        const Time known = std::max(t, req.reveal);
        for (int q = 0; q < loads; ++q) {
          ++stats.cells;
          const double m = row[q];
          if (m == 0.0) continue;
          if (q + req.demand <= qcap && dep <= tmax) {
            accepted += p * m;
            next.add(dep + trip, q + req.demand, p * m);
          } else {
            // Rejected: the vehicle has not moved and is free once r is known.
            next.add(known, q, p * m);
          }
          next.add(known, q, (1.0 - p) * m);
        }
      }
      prob[r] = accepted;
      std::swap(f, next);
    }

    std::fill(carried.begin(), carried.end(), 0.0);
    for (int t = f.lo(); t <= f.hi(); ++t)
      for (int q = 0; q < loads; ++q) carried[q] += f.at(t, q);
  }
}

}  // namespace

void accept_probs_rq(const Instance& inst, const Schedule& sched, const Assignment& asg,
                     std::vector<double>& prob, EvalStats& stats) {
  for (int k = 0; k < static_cast<int>(sched.routes.size()); ++k)
    rq_route(inst, sched, asg, k, prob, stats, [](int, const detail::TimeLoadGrid&) {});
}

std::vector<std::vector<double>> rq_load_marginals(const Instance& inst, const Schedule& sched,
                                                   const Assignment& asg, int route) {
  std::vector<double> prob(inst.num_requests(), 0.0);
  EvalStats stats;
  std::vector<std::vector<double>> out;
  rq_route(inst, sched, asg, route, prob, stats, [&](int, const detail::TimeLoadGrid& f) {
    std::vector<double> marg(f.loads(), 0.0);
    for (int t = f.lo(); t <= f.hi(); ++t)
      for (int q = 0; q < f.loads(); ++q) marg[q] += f.at(t, q);
    out.push_back(std::move(marg));
  });
  return out;
}

std::vector<std::vector<double>> bertsimas_marginals(const Instance& inst, const Schedule& sched,
                                                     const Assignment& asg, int route) {
  const auto& reqs = asg.by_route[route];
  if (reqs.empty()) throw ConfigError("route has no requests");
  const int w = asg.vertex_of[reqs.front()];
  Time worst = sched.arrival[w];
  for (int r : reqs) {
    const auto& req = inst.request(r);
    if (asg.vertex_of[r] != w) throw ConfigError("requests span several waiting vertices");
    if (req.demand != 1) throw ConfigError("requests must have unit demand");
    // Departure can only be delayed by earlier services; it must never run
    // past the window.
    Time dep = std::max(worst, asg.tmin[r]);
    if (dep > asg.tmax[r]) throw ConfigError("time windows bind on this chain");
    worst = dep + asg.round_trip[r];
  }
  if (effective_capacity(inst, asg, route) < static_cast<int>(reqs.size()))
    throw ConfigError("capacity binds on this chain");
  return rq_load_marginals(inst, sched, asg, route);
}

}  // namespace ssvrp
