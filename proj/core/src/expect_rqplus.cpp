// Capacity-aware acceptance with direct travel between customers. Within a
// waiting vertex the vehicle may be idle at w or at the customer of any
// earlier request of the same vertex, so the table gains a location index:
// location 0 is w, location j >= 1 is the customer of the j-th earlier request.
#include <algorithm>

#include "grid.hpp"
#include "ssvrp/expect.hpp"

namespace ssvrp {

void accept_probs_rqplus(const Instance& inst, const Schedule& sched, const Assignment& asg,
                         std::vector<double>& prob, EvalStats& stats, NextReveal next_reveal) {
  const int span = detail::time_span(inst);
  std::vector<detail::TimeLoadGrid> cur, nxt;

  for (int k = 0; k < static_cast<int>(sched.routes.size()); ++k) {
    const int qcap = effective_capacity(inst, asg, k);
    const int loads = qcap + 1;
    auto ensure = [&](std::vector<detail::TimeLoadGrid>& pool, std::size_t n) {
      for (auto& g : pool) {
        if (g.loads() != loads || g.span() != span) g.reset_shape(span, loads);
        else g.clear();
      }
      while (pool.size() < n) pool.emplace_back(span, loads);
    };
    std::vector<double> carried(loads, 0.0);
    carried[0] = 1.0;

    for (int w : sched.routes[k]) {
      const auto& chain = asg.by_vertex[w];
      if (chain.empty()) continue;
      ensure(cur, chain.size() + 1);
      for (int q = 0; q < loads; ++q)
        if (carried[q] != 0.0) cur[0].add(sched.arrival[w], q, carried[q]);
      std::vector<int> where{w};

      for (int i = 0; i < static_cast<int>(chain.size()); ++i) {
        const int r = chain[i];
        const auto& req = inst.request(r);
        const double p = req.probability;
        const int cust = req.customer;
        const int after = asg.next_at_vertex[r];
        // The vehicle goes back to w only while the next request of w is
        // still unknown; 0 disables the return.
        Time gate = 0;
        if (after >= 0)
          gate = next_reveal == NextReveal::kSuccessor ? inst.request(after).reveal : req.reveal;

        ensure(nxt, static_cast<std::size_t>(i) + 2);
        stats.max_fan_in = std::max(stats.max_fan_in, i + 1);
        double accepted = 0.0;

        for (int v = 0; v <= i; ++v) {
          const auto& f = cur[v];
          if (f.empty()) continue;
          const int from = where[v];
          const DepartureWindow win = direct_window(inst, sched, r, w, from);
          const Time reach = inst.travel(from, cust);

          // Mass the vehicle drops r with while sitting at `from`.
          auto discard = [&](Time t, int q, double m) {
            if (v == 0) {
              nxt[0].add(t, q, m);
            } else if (gate > t) {
              nxt[0].add(t + inst.travel(from, w), q, m);
            } else {
              nxt[v].add(t, q, m);
            }
          };

          for (int t = f.lo(); t <= f.hi(); ++t) {
            const double* row = f.row(t);
            const Time dep = std::max(t, win.earliest);
            const Time known = std::max(t, req.reveal);
            for (int q = 0; q < loads; ++q) {
              ++stats.cells;
              const double m = row[q];
              if (m == 0.0) continue;
              if (q + req.demand <= qcap && dep <= win.latest) {
                accepted += p * m;
                const Time done = dep + reach + req.service;
                if (gate > done) {
                  nxt[0].add(done + inst.travel(cust, w), q + req.demand, p * m);
                } else {
                  nxt[i + 1].add(done, q + req.demand, p * m);
                }
              } else {
                discard(known, q, p * m);
              }
              discard(known, q, (1.0 - p) * m);
            }
          }
        }
        prob[r] = accepted;
        std::swap(cur, nxt);
        where.push_back(cust);
      }

      std::fill(carried.begin(), carried.end(), 0.0);
      for (std::size_t v = 0; v < where.size(); ++v) {
        const auto& f = cur[v];
        for (int t = f.lo(); t <= f.hi(); ++t)
          for (int q = 0; q < loads; ++q) carried[q] += f.at(t, q);
      }
    }
  }
}

}  // namespace ssvrp
