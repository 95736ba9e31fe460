#include "ssvrp/assign.hpp"

#include <algorithm>

namespace ssvrp {

int Schedule::successor(int w) const {
  const auto& route = routes[route_of[w]];
  std::size_t i = static_cast<std::size_t>(position[w]) + 1;
  return i < route.size() ? route[i] : 0;
}

Time Schedule::successor_arrival(int w) const {
  int s = successor(w);
  return s == 0 ? horizon : arrival[s];
}

Time Schedule::return_time(const Instance& inst, int k) const {
  const auto& route = routes[k];
  if (route.empty()) return 1;
  return departure[route.back()] + inst.travel(route.back(), 0);
}

Schedule compute_schedule(const Instance& inst, const FirstStageSolution& sol) {
  Schedule s;
  s.routes = sol.routes;
  s.horizon = inst.horizon();
  const auto nw = static_cast<std::size_t>(inst.num_waiting()) + 1;
  s.route_of.assign(nw, -1);
  s.position.assign(nw, -1);
  s.arrival.assign(nw, 0);
  s.departure.assign(nw, 0);
  for (int k = 0; k < static_cast<int>(sol.routes.size()); ++k) {
    int prev = 0;
    Time leave = 1;
    for (int i = 0; i < static_cast<int>(sol.routes[k].size()); ++i) {
      int w = sol.routes[k][i];
      s.route_of[w] = k;
      s.position[w] = i;
      s.arrival[w] = leave + inst.travel(prev, w);
      s.departure[w] = s.arrival[w] + sol.waits[w];
      leave = s.departure[w];
      prev = w;
    }
  }
  return s;
}

DepartureWindow departure_window(const Instance& inst, const Schedule& sched, int r, int w) {
  const auto& req = inst.request(r);
  const Time out = inst.travel(w, req.customer);
  const Time back = inst.travel(req.customer, w);
  DepartureWindow win;
  win.vertex = w;
  win.earliest = std::max({sched.arrival[w], req.reveal, req.earliest - out});
  win.latest = std::min(req.latest - out, sched.departure[w] - out - req.service - back);
  return win;
}

DepartureWindow direct_window(const Instance& inst, const Schedule& sched, int r, int w, int from) {
  const auto& req = inst.request(r);
  const int next = sched.successor(w);
  const Time out = inst.travel(from, req.customer);
  DepartureWindow win;
  win.vertex = from;
  win.earliest = std::max({sched.arrival[w], req.reveal, req.earliest - out});
  win.latest = std::min(req.latest - out,
                        sched.successor_arrival(w) - out - req.service - inst.travel(req.customer, next));
  return win;
}

std::vector<DepartureWindow> feasible_waiting_vertices(const Instance& inst, const Schedule& sched, int r) {
  std::vector<DepartureWindow> out;
  for (int w = 1; w <= inst.num_waiting(); ++w) {
    if (!sched.visited(w)) continue;
    auto win = departure_window(inst, sched, r, w);
    if (win.feasible()) out.push_back(win);
  }
  return out;
}

Assignment assign_requests(const Instance& inst, const Schedule& sched) {
  const int nr = inst.num_requests();
  Assignment a;
  a.vertex_of.assign(nr, -1);
  a.by_vertex.assign(static_cast<std::size_t>(inst.num_waiting()) + 1, {});
  a.by_route.assign(sched.routes.size(), {});
  a.tmin.assign(nr, 0);
  a.tmax.assign(nr, -1);
  a.round_trip.assign(nr, 0);
  a.next_at_vertex.assign(nr, -1);
  a.rank_at_vertex.assign(nr, -1);

  for (int r = 0; r < nr; ++r) {
    DepartureWindow best;
    for (const auto& win : feasible_waiting_vertices(inst, sched, r)) {
      if (best.vertex < 0 || a.by_vertex[win.vertex].size() < a.by_vertex[best.vertex].size())
        best = win;
    }
    if (best.vertex < 0) {
      a.unassigned.push_back(r);
      continue;
    }
    const int w = best.vertex;
    const auto& req = inst.request(r);
    a.vertex_of[r] = w;
    a.tmin[r] = best.earliest;
    a.tmax[r] = best.latest;
    a.round_trip[r] = inst.travel(w, req.customer) + req.service + inst.travel(req.customer, w);
    a.rank_at_vertex[r] = static_cast<int>(a.by_vertex[w].size());
    if (!a.by_vertex[w].empty()) a.next_at_vertex[a.by_vertex[w].back()] = r;
    a.by_vertex[w].push_back(r);
  }
  for (int k = 0; k < static_cast<int>(sched.routes.size()); ++k)
    for (int w : sched.routes[k])
      a.by_route[k].insert(a.by_route[k].end(), a.by_vertex[w].begin(), a.by_vertex[w].end());
  return a;
}

}  // namespace ssvrp
