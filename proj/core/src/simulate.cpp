#include "ssvrp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "grid.hpp"
#include "ssvrp/error.hpp"

namespace ssvrp {

int Scenario::size() const {
  int n = 0;
  for (char c : present) n += c != 0;
  return n;
}

std::vector<int> Scenario::revealed_at(const Instance& inst, Time t) const {
  std::vector<int> out;
  for (int r = 0; r < inst.num_requests(); ++r)
    if (present[r] && inst.request(r).reveal == t) out.push_back(r);
  return out;
}

Scenario sample_scenario(const Instance& inst, Rng& rng) {
  Scenario sc;
  sc.present.resize(inst.num_requests());
  for (int r = 0; r < inst.num_requests(); ++r) sc.present[r] = rng.bernoulli(inst.request(r).probability);
  return sc;
}

double scenario_probability(const Instance& inst, const Scenario& sc) {
  double pr = 1.0;
  for (int r = 0; r < inst.num_requests(); ++r) {
    const double p = inst.request(r).probability;
    pr *= sc.present[r] ? p : 1.0 - p;
  }
  return pr;
}

std::string_view to_string(EventKind e) {
  switch (e) {
    case EventKind::kDepart: return "depart";
    case EventKind::kArrive: return "arrive";
    case EventKind::kAccept: return "accept";
    case EventKind::kReject: return "reject";
    case EventKind::kServeStart: return "serve-start";
    case EventKind::kServeEnd: return "serve-end";
    case EventKind::kSlip: return "slip";
  }
  return "?";
}

void write_trace(std::ostream& os, std::span<const TraceRecord> trace) {
  for (const auto& e : trace)
    os << e.time << ' ' << e.vehicle << ' ' << to_string(e.kind) << ' ' << e.vertex << ' ' << e.load << ' '
       << e.request << '\n';
}

namespace {

enum class Phase { kStart, kAtWaiting, kAtCustomer, kDone };

// The strategy's own view of a route: where the vehicle will be free next and
// with how much committed load, advanced one decision at a time.
struct Plan {
  int vertex = -1;  // waiting vertex of the last decision
  int loc = 0;      // vertex where the vehicle is idle (w or a customer)
  Time free = 0;
  int load = 0;
  std::size_t next = 0;  // next position in the route's request list
};

struct Vehicle {
  Phase phase = Phase::kStart;
  int stop = -1;   // index of the current waiting vertex in the route
  int where = 0;   // vertex the vehicle is at (valid when idle)
  bool moving = false;
  Time busy_until = 0;
  Phase after = Phase::kStart;  // phase entered when the current move ends
  int after_where = 0;
  int after_stop = -1;
  int load = 0;
  bool slipped = false;
};

}  // namespace

struct RecourseSimulator::Impl {
  const Instance& inst;
  const Schedule& sched;
  const Assignment& asg;
  Strategy strategy;
  bool direct = false;  // Rq+ rules
  bool capacitated = true;
  int span = 0;

  std::vector<Plan> plans;
  std::vector<Vehicle> vehicles;
  std::vector<std::size_t> cursor;  // per waiting vertex, first request not yet resolved
  std::vector<char> accepted, served, decided;
  std::vector<Time> planned_dep;
  std::vector<int> planned_from;
  std::size_t unassigned_next = 0;
  const Scenario* sc = nullptr;
  RecourseResult* out = nullptr;
  int rejected = 0;
  int slips = 0;

  Impl(const Instance& i, const Schedule& s, const Assignment& a, Strategy st)
      : inst(i), sched(s), asg(a), strategy(working_strategy(st)) {
    direct = strategy == Strategy::kRqPlus;
    if (strategy == Strategy::kRInf) {
      if (capacity_binds(inst, asg))
        throw ConfigError("the uncapacitated strategy cannot be used when capacity binds on a route");
      capacitated = false;
    }
    span = detail::time_span(inst);
  }

  void log(Time t, int k, EventKind kind, int vertex, int load, int r = -1) {
    if (out) out->trace.push_back({t, k, kind, vertex, load, r});
  }

  void reset() {
    const int nr = inst.num_requests();
    const int nk = static_cast<int>(sched.routes.size());
    plans.assign(nk, Plan{});
    vehicles.assign(nk, Vehicle{});
    cursor.assign(static_cast<std::size_t>(inst.num_waiting()) + 1, 0);
    accepted.assign(nr, 0);
    served.assign(nr, 0);
    decided.assign(nr, 0);
    planned_dep.assign(nr, -1);
    planned_from.assign(nr, -1);
    unassigned_next = 0;
    rejected = 0;
    slips = 0;
  }

  Time gate_of(int r) const {
    int after = asg.next_at_vertex[r];
    return after >= 0 ? inst.request(after).reveal : 0;
  }

  void decide(int k, int r, Time t) {
    Plan& plan = plans[k];
    const auto& req = inst.request(r);
    const int w = asg.vertex_of[r];
    if (plan.vertex != w) {
      plan.vertex = w;
      plan.loc = w;
      plan.free = sched.arrival[w];
    }
    const bool present = sc->present[r] != 0;
    const bool fits = !capacitated || plan.load + req.demand <= inst.capacity();
    decided[r] = 1;

    if (!direct) {
      const Time dep = std::max(plan.free, asg.tmin[r]);
      if (present && fits && dep <= asg.tmax[r]) {
        accepted[r] = 1;
        planned_dep[r] = dep;
        planned_from[r] = w;
        plan.free = dep + asg.round_trip[r];
        plan.load += req.demand;
        log(t, k, EventKind::kAccept, req.customer, plan.load, r);
      } else {
        plan.free = std::max(plan.free, req.reveal);
        if (present) {
          ++rejected;
          log(t, k, EventKind::kReject, req.customer, plan.load, r);
        }
      }
      return;
    }

    const DepartureWindow win = direct_window(inst, sched, r, w, plan.loc);
    const Time dep = std::max(plan.free, win.earliest);
    const Time gate = gate_of(r);
    if (present && fits && dep <= win.latest) {
      accepted[r] = 1;
      planned_dep[r] = dep;
      planned_from[r] = plan.loc;
      plan.load += req.demand;
      const Time done = dep + inst.travel(plan.loc, req.customer) + req.service;
      if (gate > done) {
        plan.loc = w;
        plan.free = done + inst.travel(req.customer, w);
      } else {
        plan.loc = req.customer;
        plan.free = done;
      }
      log(t, k, EventKind::kAccept, req.customer, plan.load, r);
      return;
    }
    if (present) {
      ++rejected;
      log(t, k, EventKind::kReject, req.customer, plan.load, r);
    }
    const Time known = std::max(plan.free, req.reveal);
    if (plan.loc != w && gate > known) {
      plan.free = known + inst.travel(plan.loc, w);
      plan.loc = w;
    } else {
      plan.free = known;
    }
  }

  void notify(Time t) {
    while (unassigned_next < asg.unassigned.size()) {
      int r = asg.unassigned[unassigned_next];
      if (inst.request(r).reveal > t) break;
      decided[r] = 1;
      if (sc->present[r]) {
        ++rejected;
        log(t, -1, EventKind::kReject, inst.request(r).customer, 0, r);
      }
      ++unassigned_next;
    }
    for (int k = 0; k < static_cast<int>(plans.size()); ++k) {
      const auto& order = asg.by_route[k];
      Plan& plan = plans[k];
      while (plan.next < order.size() && inst.request(order[plan.next]).reveal <= t) {
        decide(k, order[plan.next], t);
        ++plan.next;
      }
    }
  }

  // First request of w the vehicle still has to care about: accepted and not
  // yet served, or not yet revealed. -1 when there is none.
  int pending(int w, Time t) {
    const auto& chain = asg.by_vertex[w];
    std::size_t& c = cursor[w];
    while (c < chain.size()) {
      int r = chain[c];
      if (served[r]) {
        ++c;
        continue;
      }
      if (inst.request(r).reveal > t) return r;
      if (!decided[r]) throw std::logic_error("request revealed at the vehicle's vertex but still undecided");
      if (accepted[r]) return r;
      ++c;
    }
    return -1;
  }

  void travel(int k, Time t, int from, int to, Phase phase, int stop) {
    Vehicle& v = vehicles[k];
    log(t, k, EventKind::kDepart, from, v.load);
    v.moving = true;
    v.busy_until = t + inst.travel(from, to);
    v.after = phase;
    v.after_where = to;
    v.after_stop = stop;
  }

  void leave_vertex(int k, Time t) {
    Vehicle& v = vehicles[k];
    const auto& route = sched.routes[k];
    const int next_stop = v.stop + 1;
    if (next_stop < static_cast<int>(route.size()))
      travel(k, t, v.where, route[next_stop], Phase::kAtWaiting, next_stop);
    else
      travel(k, t, v.where, 0, Phase::kDone, next_stop);
  }

  void serve(int k, int r, Time t) {
    Vehicle& v = vehicles[k];
    const auto& req = inst.request(r);
    if (planned_dep[r] != t || planned_from[r] != v.where) {
      if (!v.slipped) {
        std::ostringstream os;
        os << "vehicle " << k << " leaves for request " << req.id << " from vertex " << v.where << " at " << t
           << " but the strategy committed to vertex " << planned_from[r] << " at " << planned_dep[r];
        throw std::logic_error(os.str());
      }
    }
    served[r] = 1;
    const Time start = t + inst.travel(v.where, req.customer);
    const Time end = start + req.service;
    if (!v.slipped && (start < req.earliest || start > req.latest))
      throw std::logic_error("service of request " + std::to_string(req.id) + " starts outside its window");
    log(t, k, EventKind::kDepart, v.where, v.load, r);
    v.load += req.demand;
    if (capacitated && v.load > inst.capacity()) throw std::logic_error("vehicle load exceeds capacity");
    log(start, k, EventKind::kServeStart, req.customer, v.load, r);
    log(end, k, EventKind::kServeEnd, req.customer, v.load, r);
    v.moving = true;
    if (direct) {
      v.busy_until = end;
      v.after = Phase::kAtCustomer;
      v.after_where = req.customer;
      v.after_stop = v.stop;
    } else {
      v.busy_until = end + inst.travel(req.customer, v.where);
      v.after = Phase::kAtWaiting;
      v.after_where = v.where;
      v.after_stop = v.stop;
    }
  }

  void arrive(int k, Time t) {
    Vehicle& v = vehicles[k];
    const int prev_stop = v.stop;
    v.moving = false;
    v.phase = v.after;
    v.where = v.after_where;
    v.stop = v.after_stop;
    if (v.phase == Phase::kAtWaiting) {
      log(t, k, EventKind::kArrive, v.where, v.load);
      if (v.stop != prev_stop && t > sched.arrival[v.where]) {
        ++slips;
        v.slipped = true;
        log(t, k, EventKind::kSlip, v.where, v.load);
      }
    } else if (v.phase == Phase::kDone) {
      log(t, k, EventKind::kArrive, 0, v.load);
      // Routes start at time 1, so a planned return may be h + 1.
      const Time planned = sched.return_time(inst, k);
      const Time due = direct ? std::max(inst.horizon(), planned) : planned;
      if (t > due) {
        ++slips;
        v.slipped = true;
        log(t, k, EventKind::kSlip, 0, v.load);
      }
    }
  }

  void operate(int k, Time t) {
    Vehicle& v = vehicles[k];
    const auto& route = sched.routes[k];
    for (int guard = 0; guard < 4 * inst.num_requests() + 4 * static_cast<int>(route.size()) + 8; ++guard) {
      if (v.phase == Phase::kDone) return;
      if (v.moving) {
        if (v.busy_until > t) return;
        arrive(k, t);
      }

      switch (v.phase) {
        case Phase::kStart:
          if (route.empty()) {
            v.phase = Phase::kDone;
            return;
          }
          travel(k, t, 0, route[0], Phase::kAtWaiting, 0);
          continue;
        case Phase::kAtWaiting: {
          const int w = route[v.stop];
          const int r = pending(w, t);
          if (r < 0) {
            if (t < sched.departure[w]) return;  // keep to the planned stay
            leave_vertex(k, t);
            continue;
          }
          if (!accepted[r]) return;  // not revealed yet
          if (t < asg.tmin[r]) return;
          serve(k, r, t);
          continue;
        }
        case Phase::kAtCustomer: {
          const int w = route[v.stop];
          const int r = pending(w, t);
          if (r < 0) {
            const int next_stop = v.stop + 1;
            const bool last = next_stop >= static_cast<int>(route.size());
            const int target = last ? 0 : route[next_stop];
            const Time due = last ? inst.horizon() : sched.arrival[target];
            if (t + inst.travel(v.where, target) < due) return;
            travel(k, t, v.where, target, last ? Phase::kDone : Phase::kAtWaiting, next_stop);
            continue;
          }
          if (!accepted[r]) {
            travel(k, t, v.where, w, Phase::kAtWaiting, v.stop);
            continue;
          }
          if (t < direct_window(inst, sched, r, w, v.where).earliest) return;
          serve(k, r, t);
          continue;
        }
        case Phase::kDone:
          return;
      }
    }
    throw std::logic_error("vehicle operations did not settle within one time step");
  }

  int run(const Scenario& scenario, RecourseResult* detail) {
    sc = &scenario;
    out = detail;
    if (out) {
      out->trace.clear();
    }
    reset();
    for (Time t = 1; t < span; ++t) {
      notify(t);
      for (int k = 0; k < static_cast<int>(vehicles.size()); ++k) operate(k, t);
    }
    for (int k = 0; k < static_cast<int>(vehicles.size()); ++k) {
      if (vehicles[k].phase != Phase::kDone && !vehicles[k].slipped)
        throw std::logic_error("vehicle " + std::to_string(k) + " did not return to the depot");
      for (int r : asg.by_route[k])
        if (accepted[r] && !served[r] && !vehicles[k].slipped)
          throw std::logic_error("accepted request " + std::to_string(inst.request(r).id) + " was never served");
    }
    if (out) {
      out->rejected = rejected;
      out->accepted = accepted;
      out->slips = slips;
      std::stable_sort(out->trace.begin(), out->trace.end(),
                       [](const TraceRecord& a, const TraceRecord& b) { return a.time < b.time; });
    }
    return rejected;
  }
};

void RecourseSimulator::ImplDeleter::operator()(Impl* p) const { delete p; }

RecourseSimulator::RecourseSimulator(const Instance& inst, const Schedule& sched, const Assignment& asg,
                                     Strategy s)
    : impl_(new Impl(inst, sched, asg, s)) {}

int RecourseSimulator::run(const Scenario& sc, RecourseResult* detail) { return impl_->run(sc, detail); }

RecourseResult run_recourse(const Instance& inst, const Schedule& sched, const Assignment& asg,
                            const Scenario& sc, Strategy s) {
  RecourseSimulator sim(inst, sched, asg, s);
  RecourseResult res;
  sim.run(sc, &res);
  return res;
}

double exhaustive_expected_cost(const Instance& inst, const Schedule& sched, const Assignment& asg, Strategy s) {
  const int nr = inst.num_requests();
  if (nr > kMaxExhaustiveRequests)
    throw BudgetError("exhaustive enumeration refused: " + std::to_string(nr) + " requests", std::ldexp(1.0, nr));
  std::vector<int> uncertain;
  Scenario sc = Scenario::none(inst);
  for (int r = 0; r < nr; ++r) {
    const double p = inst.request(r).probability;
    if (p >= 1.0) sc.present[r] = 1;
    else if (p > 0.0) uncertain.push_back(r);
  }
  RecourseSimulator sim(inst, sched, asg, s);
  double total = 0.0;
  const std::uint64_t count = std::uint64_t{1} << uncertain.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    double pr = 1.0;
    for (std::size_t i = 0; i < uncertain.size(); ++i) {
      const bool on = (mask >> i) & 1U;
      const double p = inst.request(uncertain[i]).probability;
      sc.present[uncertain[i]] = on;
      pr *= on ? p : 1.0 - p;
    }
    total += pr * sim.run(sc);
  }
  return total;
}

}  // namespace ssvrp
