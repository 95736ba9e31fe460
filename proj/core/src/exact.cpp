#include <cmath>
#include <functional>

#include "ssvrp/error.hpp"
#include "ssvrp/search.hpp"

namespace ssvrp {

namespace {

double binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Upper bound on the number of route structures before any horizon check:
// ordered selections of j vertices split into K labeled routes.
double structure_bound(int m, int k) {
  double total = 0.0;
  for (int j = 0; j <= m; ++j) {
    double ordered = binomial(m, j);
    for (int i = 2; i <= j; ++i) ordered *= i;
    total += ordered * binomial(j + k - 1, k - 1);
  }
  return total;
}

// Visits every assignment of vertices to K ordered routes with route vertex
// sets non-decreasing as bitmasks; only empty routes can tie, so each set of
// routes is produced once up to relabeling. Routes that cannot hold one
// waiting step are pruned.
void for_each_structure(const Instance& inst, Time step,
                        const std::function<void(const std::vector<std::vector<int>>&)>& visit) {
  const int m = inst.num_waiting();
  const int nk = inst.vehicles();
  std::vector<std::vector<int>> routes(nk);
  std::vector<char> used(m + 1, 0);
  std::function<void(int, unsigned long long)> route_level;
  std::function<void(int, unsigned long long, unsigned long long)> extend;

  auto fits = [&](const std::vector<int>& r) {
    return route_travel(inst, r) + static_cast<Time>(r.size()) * step <= inst.horizon();
  };

  extend = [&](int k, unsigned long long prev_mask, unsigned long long mask) {
    // Close the route here if it keeps masks ordered.
    if (mask >= prev_mask) route_level(k + 1, mask);
    for (int w = 1; w <= m; ++w) {
      if (used[w]) continue;
      used[w] = 1;
      routes[k].push_back(w);
      if (fits(routes[k])) extend(k, prev_mask, mask | (1ULL << (w - 1)));
      routes[k].pop_back();
      used[w] = 0;
    }
  };
  route_level = [&](int k, unsigned long long prev_mask) {
    if (k == nk) {
      visit(routes);
      return;
    }
    extend(k, prev_mask, 0);
  };
  route_level(0, 0);
}

}  // namespace

double exact_space_size(const Instance& scaled, Time step) {
  double total = 0.0;
  for_each_structure(scaled, step, [&](const std::vector<std::vector<int>>& routes) {
    double n = 1.0;
    for (const auto& r : routes) {
      if (r.empty()) continue;
      const int units = (scaled.horizon() - route_travel(scaled, r)) / step;
      n *= binomial(units, static_cast<int>(r.size()));
    }
    total += n;
  });
  return total;
}

ExactResult solve_exact(const Instance& scaled, Strategy s, Time step, double budget) {
  if (scaled.num_waiting() > 60) throw BudgetError("too many waiting vertices for exhaustive search", INFINITY);
  const double bound = structure_bound(scaled.num_waiting(), scaled.vehicles());
  if (bound > 1e7)
    throw BudgetError("exhaustive search refused: more than " + std::to_string(bound) + " route structures", bound);
  ExactResult res;
  res.space_size = exact_space_size(scaled, step);
  if (res.space_size > budget)
    throw BudgetError("exhaustive search refused: " + std::to_string(static_cast<long long>(res.space_size)) +
                          " first-stage solutions exceed the budget of " +
                          std::to_string(static_cast<long long>(budget)),
                      res.space_size);
  const Strategy working = working_strategy(s);
  bool have = false;
  FirstStageSolution sol(scaled.vehicles(), scaled.num_waiting());

  for_each_structure(scaled, step, [&](const std::vector<std::vector<int>>& routes) {
    sol.routes = routes;
    std::fill(sol.waits.begin(), sol.waits.end(), 0);
    std::vector<int> order;
    std::vector<int> route_of_slot;
    for (int k = 0; k < static_cast<int>(routes.size()); ++k)
      for (int w : routes[k]) {
        order.push_back(w);
        route_of_slot.push_back(k);
      }
    std::vector<Time> slack(routes.size());
    for (std::size_t k = 0; k < routes.size(); ++k) slack[k] = scaled.horizon() - route_travel(scaled, routes[k]);

    // Odometer over waiting units; each route's total must fit its slack.
    std::function<void(std::size_t)> assign = [&](std::size_t i) {
      if (i == order.size()) {
        const double c = expected_cost(scaled, sol, working);
        ++res.evaluated;
        if (!have || c < res.cost) {
          have = true;
          res.cost = c;
          res.best = sol;
        }
        return;
      }
      const int k = route_of_slot[i];
      Time used_k = 0;
      int remaining_after = 0;
      for (std::size_t j = 0; j < order.size(); ++j) {
        if (route_of_slot[j] != k) continue;
        if (j < i) used_k += sol.waits[order[j]];
        if (j > i) ++remaining_after;
      }
      for (Time wait = step; used_k + wait + remaining_after * step <= slack[k]; wait += step) {
        sol.waits[order[i]] = wait;
        assign(i + 1);
      }
      sol.waits[order[i]] = 0;
    };
    assign(0);
  });
  return res;
}

}  // namespace ssvrp
