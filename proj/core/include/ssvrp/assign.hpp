#pragma once

#include <vector>

#include "ssvrp/model.hpp"

namespace ssvrp {

// Presence window [arrival, departure] of each visited waiting vertex.
struct Schedule {
  std::vector<std::vector<int>> routes;
  std::vector<int> route_of;   // per vertex id, -1 when not visited
  std::vector<int> position;   // index within its route
  std::vector<Time> arrival;   // on_lo
  std::vector<Time> departure; // on_hi
  Time horizon = 0;

  bool visited(int w) const { return w >= 0 && w < static_cast<int>(route_of.size()) && route_of[w] >= 0; }
  // Next stop after w: the following waiting vertex, or the depot (0).
  int successor(int w) const;
  // Time the vehicle is due at successor(w); the horizon when it is the depot.
  Time successor_arrival(int w) const;
  // Planned depot return of route k (1 when the route is empty).
  Time return_time(const Instance& inst, int k) const;
};

Schedule compute_schedule(const Instance& inst, const FirstStageSolution& sol);

struct DepartureWindow {
  int vertex = -1;
  Time earliest = 0;  // t^min
  Time latest = 0;    // t^max
  bool feasible() const { return earliest <= latest; }
};

// Departure window for serving r from waiting vertex w and returning there.
DepartureWindow departure_window(const Instance& inst, const Schedule& sched, int r, int w);
std::vector<DepartureWindow> feasible_waiting_vertices(const Instance& inst, const Schedule& sched, int r);

// Window for leaving vertex `from` (w(r) itself or an earlier customer of the
// same waiting vertex) when the vehicle goes on to s(w) instead of back to w.
DepartureWindow direct_window(const Instance& inst, const Schedule& sched, int r, int w, int from);

struct Assignment {
  std::vector<int> vertex_of;               // per request, -1 when unassigned
  std::vector<std::vector<int>> by_vertex;  // requests of each waiting vertex, in request order
  std::vector<std::vector<int>> by_route;   // requests of each route, route order then request order
  std::vector<int> unassigned;
  std::vector<Time> tmin, tmax;             // departure window from w(r)
  std::vector<Time> round_trip;             // d(w,r) + s_r + d(r,w)
  std::vector<int> next_at_vertex;          // following request of the same vertex or -1
  std::vector<int> rank_at_vertex;          // index of r in by_vertex[w(r)]

  bool assigned(int r) const { return vertex_of[r] >= 0; }
};

// Balanced assignment: requests in request order go to the feasible waiting
// vertex holding the fewest requests so far, smallest id on ties.
Assignment assign_requests(const Instance& inst, const Schedule& sched);

}  // namespace ssvrp
