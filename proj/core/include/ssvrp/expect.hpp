#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "ssvrp/assign.hpp"
#include "ssvrp/model.hpp"

namespace ssvrp {

// Recourse strategies. kRqHybrid optimizes with Rq and reports with Rq+.
enum class Strategy { kRInf, kRq, kRqPlus, kRqHybrid };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view text);  // rinf | rq | rq+ | hybrid
// Strategy whose rules are actually executed when optimizing with `s`.
Strategy working_strategy(Strategy s);
// Strategy used for final reporting.
Strategy reporting_strategy(Strategy s);

// Which reveal time gates the vehicle's return to its waiting vertex under
// Rq+: the next request's (kSuccessor) or the current one's (kLiteral). Only
// kSuccessor agrees with the simulator; kLiteral is kept for comparison.
enum class NextReveal { kSuccessor, kLiteral };

struct EvalOptions {
  NextReveal next_reveal = NextReveal::kSuccessor;
};

struct EvalStats {
  std::int64_t cells = 0;  // table entries touched
  int max_fan_in = 0;      // largest number of departure locations for one request
};

struct Evaluation {
  double cost = 0.0;                 // expected number of rejected requests
  std::vector<double> accept_prob;   // per request
  EvalStats stats;
};

Evaluation evaluate(const Instance& inst, const Schedule& sched, const Assignment& asg, Strategy s,
                    EvalOptions opt = {});
double expected_cost(const Instance& inst, const Schedule& sched, const Assignment& asg, Strategy s,
                     EvalOptions opt = {});
double expected_cost(const Instance& inst, const FirstStageSolution& sol, Strategy s, EvalOptions opt = {});

// Per-strategy acceptance probabilities. `prob` must have one slot per request;
// unassigned requests are left untouched.
void accept_probs_rinf(const Instance& inst, const Schedule& sched, const Assignment& asg,
                       std::vector<double>& prob, EvalStats& stats);
void accept_probs_rq(const Instance& inst, const Schedule& sched, const Assignment& asg,
                     std::vector<double>& prob, EvalStats& stats);
void accept_probs_rqplus(const Instance& inst, const Schedule& sched, const Assignment& asg,
                         std::vector<double>& prob, EvalStats& stats, NextReveal next_reveal);

// Largest load a route can ever carry: min(Q, total demand assigned to it).
int effective_capacity(const Instance& inst, const Assignment& asg, int route);
// True when some route's assigned demand exceeds Q.
bool capacity_binds(const Instance& inst, const Assignment& asg);

// Load marginals of the Rq availability tables: out[i][q] = Pr{vehicle is
// free for the i-th request of the route carrying load q}.
std::vector<std::vector<double>> rq_load_marginals(const Instance& inst, const Schedule& sched,
                                                   const Assignment& asg, int route);

// Same marginals restricted to a single-vertex chain of unit-demand requests
// whose windows never bind, where they reduce to the classic
// f'(r,q) = p_prev f'(prev,q-1) + (1-p_prev) f'(prev,q). Throws ConfigError
// when the route does not satisfy those conditions.
std::vector<std::vector<double>> bertsimas_marginals(const Instance& inst, const Schedule& sched,
                                                     const Assignment& asg, int route);

}  // namespace ssvrp
