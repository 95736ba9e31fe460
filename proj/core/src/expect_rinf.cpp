// Acceptance probabilities when capacity never binds. Each waiting vertex is
// independent: f(t) is the distribution of the time the vehicle is free at w
// for the current request.
#include <algorithm>

#include "grid.hpp"
#include "ssvrp/expect.hpp"

namespace ssvrp {

void accept_probs_rinf(const Instance& inst, const Schedule& sched, const Assignment& asg,
                       std::vector<double>& prob, EvalStats& stats) {
  detail::TimeLoadGrid f(detail::time_span(inst), 1), next(detail::time_span(inst), 1);

  for (int w = 1; w <= inst.num_waiting(); ++w) {
    const auto& chain = asg.by_vertex[w];
    if (chain.empty()) continue;
    f.clear();
    f.add(sched.arrival[w], 0, 1.0);

    for (int r : chain) {
      const auto& req = inst.request(r);
      const double p = req.probability;
      const Time tmin = asg.tmin[r], tmax = asg.tmax[r], trip = asg.round_trip[r];
      next.clear();
      double accepted = 0.0;
      for (int t = f.lo(); t <= f.hi(); ++t) {
        ++stats.cells;
        const double m = f.at(t, 0);
        if (m == 0.0) continue;
        // r appears: the vehicle leaves at max(t, tmin) if that is still in time
        // (all mass below tmin collapses onto tmin), otherwise it stays put.
        const Time dep = std::max(t, tmin);
        if (dep <= tmax) {
          accepted += p * m;
          next.add(dep + trip, 0, p * m);
        } else {
          next.add(t, 0, p * m);
        }
        // r does not appear: known at its reveal time.
        next.add(std::max(t, req.reveal), 0, (1.0 - p) * m);
      }
      prob[r] = accepted;
      std::swap(f, next);
    }
  }
}

}  // namespace ssvrp
