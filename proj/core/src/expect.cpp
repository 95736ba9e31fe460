#include "ssvrp/expect.hpp"

#include <string>

#include "ssvrp/error.hpp"

namespace ssvrp {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::kRInf: return "rinf";
    case Strategy::kRq: return "rq";
    case Strategy::kRqPlus: return "rq+";
    case Strategy::kRqHybrid: return "hybrid";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "rinf" || text == "r-inf") return Strategy::kRInf;
  if (text == "rq") return Strategy::kRq;
  if (text == "rq+" || text == "rqplus") return Strategy::kRqPlus;
  if (text == "hybrid" || text == "rq/q+") return Strategy::kRqHybrid;
  throw ConfigError("unknown strategy '" + std::string(text) + "'");
}

Strategy working_strategy(Strategy s) { return s == Strategy::kRqHybrid ? Strategy::kRq : s; }

Strategy reporting_strategy(Strategy s) { return s == Strategy::kRqHybrid ? Strategy::kRqPlus : s; }

Evaluation evaluate(const Instance& inst, const Schedule& sched, const Assignment& asg, Strategy s,
                    EvalOptions opt) {
  Evaluation ev;
  ev.accept_prob.assign(inst.num_requests(), 0.0);
  switch (working_strategy(s)) {
    case Strategy::kRInf:
      if (capacity_binds(inst, asg))
        throw ConfigError("the uncapacitated strategy cannot be used when capacity binds on a route");
      accept_probs_rinf(inst, sched, asg, ev.accept_prob, ev.stats);
      break;
    case Strategy::kRq:
      accept_probs_rq(inst, sched, asg, ev.accept_prob, ev.stats);
      break;
    default:
      accept_probs_rqplus(inst, sched, asg, ev.accept_prob, ev.stats, opt.next_reveal);
      break;
  }
  double cost = 0.0;
  for (int r = 0; r < inst.num_requests(); ++r) cost += inst.request(r).probability - ev.accept_prob[r];
  ev.cost = cost;
  return ev;
}

double expected_cost(const Instance& inst, const Schedule& sched, const Assignment& asg, Strategy s,
                     EvalOptions opt) {
  return evaluate(inst, sched, asg, s, opt).cost;
}

double expected_cost(const Instance& inst, const FirstStageSolution& sol, Strategy s, EvalOptions opt) {
  Schedule sched = compute_schedule(inst, sol);
  Assignment asg = assign_requests(inst, sched);
  return expected_cost(inst, sched, asg, s, opt);
}

}  // namespace ssvrp
