#include "ssvrp/search.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <ostream>

#include "ssvrp/error.hpp"

namespace ssvrp {

const char* move_name(int op) {
  static const char* names[] = {"relocate", "swap", "2-opt", "cross-exchange", "insert",
                                "remove", "wait+", "wait-", "wait-transfer"};
  return op >= 1 && op <= kMoveCount ? names[op - 1] : "?";
}

void SearchConfig::validate() const {
  if (!(t_min > 0.0 && t_init > t_min)) throw ConfigError("temperatures must satisfy 0 < T_min < T_init");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("cooling factor must lie in (0,1)");
  if (phases.empty()) throw ConfigError("search needs at least one phase");
  double total = 0.0;
  for (const auto& ph : phases) {
    if (ph.fraction < 0.0) throw ConfigError("phase fractions must be non-negative");
    TimeScale{ph.scale, ph.multiple}.wait_step();
    total += ph.fraction;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("phase fractions must sum to 1");
  if (time_limit < 0.0 && max_iterations < 0) throw ConfigError("search needs a time limit or an iteration limit");
}

FirstStageSolution initial_solution(const Instance& inst, Rng& rng, Time step) {
  FirstStageSolution sol(inst.vehicles(), inst.num_waiting());
  for (int w = 1; w <= inst.num_waiting(); ++w) {
    auto& route = sol.routes[rng.uniform_int(0, inst.vehicles() - 1)];
    route.insert(route.begin() + rng.uniform_int(0, static_cast<int>(route.size())), w);
  }
  for (auto& route : sol.routes) {
    while (!route.empty() &&
           route_travel(inst, route) + static_cast<Time>(route.size()) * step > inst.horizon())
      route.erase(route.begin() + rng.uniform_int(0, static_cast<int>(route.size()) - 1));
    if (route.empty()) continue;
    const Time share = (inst.horizon() - route_travel(inst, route)) / static_cast<Time>(route.size());
    const Time wait = std::max(step, share / step * step);
    for (int w : route) sol.waits[w] = wait;
  }
  return sol;
}

namespace {

struct Slot {
  int route;
  int index;
};

std::vector<Slot> visited_slots(const FirstStageSolution& sol) {
  std::vector<Slot> out;
  for (int k = 0; k < static_cast<int>(sol.routes.size()); ++k)
    for (int i = 0; i < static_cast<int>(sol.routes[k].size()); ++i) out.push_back({k, i});
  return out;
}

int& at(FirstStageSolution& sol, Slot s) { return sol.routes[s.route][s.index]; }

}  // namespace

namespace {

// Routes as a label-free multiset: equal keys mean equal costs.
std::vector<std::vector<std::pair<int, Time>>> canonical(const FirstStageSolution& sol) {
  std::vector<std::vector<std::pair<int, Time>>> out;
  for (const auto& route : sol.routes) {
    if (route.empty()) continue;
    std::vector<std::pair<int, Time>> r;
    for (int w : route) r.emplace_back(w, sol.waits[w]);
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<FirstStageSolution> draw_move(int op, const Instance& inst, const FirstStageSolution& sol, Time step,
                                            Rng& rng);

}  // namespace

std::optional<Candidate> neighbor(int op, const Instance& inst, const FirstStageSolution& sol, Time step, Rng& rng) {
  if (op < 1 || op > kMoveCount) throw ConfigError("unknown neighborhood operator " + std::to_string(op));
  // A draw that only relabels routes (or restores the input) is not a move;
  // redraw a few times before reporting the neighborhood as empty.
  const auto self = canonical(sol);
  for (int attempt = 0; attempt < 16; ++attempt) {
    auto next = draw_move(op, inst, sol, step, rng);
    if (!next) return std::nullopt;
    if (canonical(*next) == self) continue;
    Candidate c;
    c.feasible = is_feasible(inst, *next);
    c.solution = std::move(*next);
    return c;
  }
  return std::nullopt;
}

namespace {

std::optional<FirstStageSolution> draw_move(int op, const Instance& inst, const FirstStageSolution& sol, Time step,
                                            Rng& rng) {
  FirstStageSolution next = sol;
  const auto slots = visited_slots(sol);
  const int nk = static_cast<int>(sol.routes.size());

  switch (static_cast<Move>(op)) {
    case Move::kRelocate: {
      if (slots.empty()) return std::nullopt;
      const Slot s = slots[rng.uniform_int(0, static_cast<int>(slots.size()) - 1)];
      const int w = at(next, s);
      next.routes[s.route].erase(next.routes[s.route].begin() + s.index);
      // Insertion points after removal, excluding the one that restores the
      // original solution.
      std::vector<Slot> targets;
      for (int k = 0; k < nk; ++k)
        for (int i = 0; i <= static_cast<int>(next.routes[k].size()); ++i)
          if (k != s.route || i != s.index) targets.push_back({k, i});
      if (targets.empty()) return std::nullopt;
      const Slot t = targets[rng.uniform_int(0, static_cast<int>(targets.size()) - 1)];
      next.routes[t.route].insert(next.routes[t.route].begin() + t.index, w);
      break;
    }
    case Move::kSwap: {
      if (slots.size() < 2) return std::nullopt;
      const int a = rng.uniform_int(0, static_cast<int>(slots.size()) - 1);
      int b = rng.uniform_int(0, static_cast<int>(slots.size()) - 2);
      if (b >= a) ++b;
      std::swap(at(next, slots[a]), at(next, slots[b]));
      break;
    }
    case Move::kTwoOpt: {
      std::vector<int> eligible;
      for (int k = 0; k < nk; ++k)
        if (sol.routes[k].size() >= 2) eligible.push_back(k);
      if (eligible.empty()) return std::nullopt;
      auto& route = next.routes[eligible[rng.uniform_int(0, static_cast<int>(eligible.size()) - 1)]];
      const int len = static_cast<int>(route.size());
      const int i = rng.uniform_int(0, len - 2);
      const int j = rng.uniform_int(i + 1, len - 1);
      std::reverse(route.begin() + i, route.begin() + j + 1);
      break;
    }
    case Move::kCrossExchange: {
      std::vector<int> eligible;
      for (int k = 0; k < nk; ++k)
        if (!sol.routes[k].empty()) eligible.push_back(k);
      if (eligible.size() < 2) return std::nullopt;
      const int a = rng.uniform_int(0, static_cast<int>(eligible.size()) - 1);
      int b = rng.uniform_int(0, static_cast<int>(eligible.size()) - 2);
      if (b >= a) ++b;
      auto& ra = next.routes[eligible[a]];
      auto& rb = next.routes[eligible[b]];
      const int sa = rng.uniform_int(0, static_cast<int>(ra.size()) - 1);
      const int la = rng.uniform_int(1, static_cast<int>(ra.size()) - sa);
      const int sb = rng.uniform_int(0, static_cast<int>(rb.size()) - 1);
      const int lb = rng.uniform_int(1, static_cast<int>(rb.size()) - sb);
      std::vector<int> seg_a(ra.begin() + sa, ra.begin() + sa + la);
      std::vector<int> seg_b(rb.begin() + sb, rb.begin() + sb + lb);
      ra.erase(ra.begin() + sa, ra.begin() + sa + la);
      ra.insert(ra.begin() + sa, seg_b.begin(), seg_b.end());
      rb.erase(rb.begin() + sb, rb.begin() + sb + lb);
      rb.insert(rb.begin() + sb, seg_a.begin(), seg_a.end());
      break;
    }
    case Move::kInsert: {
      std::vector<int> free;
      for (int w = 1; w <= inst.num_waiting(); ++w)
        if (sol.waits[w] == 0) free.push_back(w);
      if (free.empty()) return std::nullopt;
      const int w = free[rng.uniform_int(0, static_cast<int>(free.size()) - 1)];
      auto& target = next.routes[rng.uniform_int(0, nk - 1)];
      target.insert(target.begin() + rng.uniform_int(0, static_cast<int>(target.size())), w);
      next.waits[w] = step;
      break;
    }
    case Move::kRemove: {
      if (slots.empty()) return std::nullopt;
      const Slot s = slots[rng.uniform_int(0, static_cast<int>(slots.size()) - 1)];
      next.waits[at(next, s)] = 0;
      next.routes[s.route].erase(next.routes[s.route].begin() + s.index);
      break;
    }
    case Move::kIncreaseWait: {
      if (slots.empty()) return std::nullopt;
      next.waits[at(next, slots[rng.uniform_int(0, static_cast<int>(slots.size()) - 1)])] += step;
      break;
    }
    case Move::kDecreaseWait: {
      std::vector<int> eligible;
      for (const auto& s : slots)
        if (sol.waits[sol.routes[s.route][s.index]] >= 2 * step) eligible.push_back(sol.routes[s.route][s.index]);
      if (eligible.empty()) return std::nullopt;
      next.waits[eligible[rng.uniform_int(0, static_cast<int>(eligible.size()) - 1)]] -= step;
      break;
    }
    case Move::kTransferWait: {
      if (slots.size() < 2) return std::nullopt;
      std::vector<int> donors;
      for (const auto& s : slots)
        if (sol.waits[sol.routes[s.route][s.index]] >= 2 * step) donors.push_back(sol.routes[s.route][s.index]);
      if (donors.empty()) return std::nullopt;
      const int from = donors[rng.uniform_int(0, static_cast<int>(donors.size()) - 1)];
      std::vector<int> receivers;
      for (const auto& s : slots)
        if (sol.routes[s.route][s.index] != from) receivers.push_back(sol.routes[s.route][s.index]);
      const int to = receivers[rng.uniform_int(0, static_cast<int>(receivers.size()) - 1)];
      const Time amount = step * rng.uniform_int(1, sol.waits[from] / step - 1);
      next.waits[from] -= amount;
      next.waits[to] += amount;
      break;
    }
    default:
      throw ConfigError("unknown neighborhood operator " + std::to_string(op));
  }
  return next;
}

}  // namespace

bool anneal_accepts(double cur, double cand, double temperature, double u) {
  if (cand <= cur) return true;
  return u < std::exp(-(1.0 - cur / cand) / temperature);
}

Time regrid_wait(Time original, const TimeScale& ts) {
  const Time step = ts.wait_step();
  const auto units = std::max<long long>(1, std::llround(static_cast<double>(original) / ts.multiple));
  return static_cast<Time>(units) * step;
}

void write_log(std::ostream& os, const std::vector<LogEntry>& log) {
  char buf[256];
  os << "phase,iteration,op,produced,feasible,accepted,current,best,temperature\n";
  for (const auto& e : log) {
    std::snprintf(buf, sizeof buf, "%d,%lld,%d,%d,%d,%d,%.17g,%.17g,%.17g\n", e.phase,
                  static_cast<long long>(e.iteration), e.op, e.produced, e.feasible, e.accepted, e.current, e.best,
                  e.temperature);
    os << buf;
  }
}

namespace {

using Clock = std::chrono::steady_clock;

struct PhaseOutcome {
  FirstStageSolution best;
  double best_cost;
  std::int64_t iterations;
};

// True when the solution stays feasible once mapped back to the original
// clock; only fails when the horizon is not a multiple of the scale.
bool fits_original(const Instance& original, const FirstStageSolution& sol, const TimeScale& ts) {
  return ts.scale == 1 || is_feasible(original, rescale_solution(sol, ts));
}

PhaseOutcome anneal(const Instance& original, const Instance& scaled, const TimeScale& ts, FirstStageSolution start,
                    const SearchConfig& cfg, Strategy working, Time step, std::int64_t max_iter, double seconds,
                    Rng& rng, int phase, std::vector<LogEntry>& log) {
  auto eval = [&](const FirstStageSolution& s) { return expected_cost(scaled, s, working); };
  FirstStageSolution cur = std::move(start);
  double cur_cost = eval(cur);
  PhaseOutcome out{cur, cur_cost, 0};
  int op = 1;
  double temp = cfg.t_init;
  const auto t0 = Clock::now();
  for (std::int64_t it = 0;; ++it) {
    if (max_iter >= 0 && it >= max_iter) break;
    if (seconds >= 0.0 && std::chrono::duration<double>(Clock::now() - t0).count() >= seconds) break;
    LogEntry e;
    e.phase = phase;
    e.iteration = it;
    e.op = op;
    e.temperature = temp;
    auto cand = neighbor(op, scaled, cur, step, rng);
    if (cand) {
      e.produced = true;
      e.feasible = cand->feasible && fits_original(original, cand->solution, ts);
      if (e.feasible) {
        const double c = eval(cand->solution);
        const double u = c > cur_cost ? rng.uniform() : 0.0;
        if (anneal_accepts(cur_cost, c, temp, u)) {
          cur = std::move(cand->solution);
          cur_cost = c;
          e.accepted = true;
          if (cur_cost < out.best_cost) {
            out.best = cur;
            out.best_cost = cur_cost;
          }
        }
      }
    }
    op = e.accepted ? 1 : op % kMoveCount + 1;
    temp *= cfg.alpha;
    if (temp < cfg.t_min) temp = cfg.t_init;
    e.current = cur_cost;
    e.best = out.best_cost;
    log.push_back(e);
    out.iterations = it + 1;
  }
  return out;
}

}  // namespace

SearchResult scheduled_search(const Instance& inst, const SearchConfig& config) {
  config.validate();
  const Strategy working = working_strategy(config.strategy);
  if (working == Strategy::kRInf && !inst.capacity_unbounded() && inst.total_demand() > inst.capacity())
    throw ConfigError("the uncapacitated strategy needs a capacity that never binds");

  SearchResult res;
  Rng rng(config.seed);
  std::optional<FirstStageSolution> incumbent;  // original clock
  for (int i = 0; i < static_cast<int>(config.phases.size()); ++i) {
    const auto& ph = config.phases[i];
    const TimeScale ts{ph.scale, ph.multiple};
    const Time step = ts.wait_step();
    const Instance scaled = scale_instance(inst, ts);

    FirstStageSolution start;
    bool fresh = true;
    if (incumbent) {
      start = *incumbent;
      for (int w = 1; w <= inst.num_waiting(); ++w)
        if (start.waits[w] > 0) start.waits[w] = regrid_wait(start.waits[w], ts);
      fresh = !is_feasible(scaled, start) || !fits_original(inst, start, ts);
      if (fresh) res.notes.push_back("phase " + std::to_string(i) + ": incumbent infeasible on the new grid, restarting");
    }
    if (fresh) {
      start = initial_solution(scaled, rng, step);
      if (!fits_original(inst, start, ts)) start = FirstStageSolution(inst.vehicles(), inst.num_waiting());
    }
    res.notes.push_back("phase " + std::to_string(i) + ": scale " + std::to_string(ph.scale) + ", multiple " +
                        std::to_string(ph.multiple));

    const std::int64_t iters =
        config.max_iterations < 0 ? -1 : std::llround(static_cast<double>(config.max_iterations) * ph.fraction);
    const double seconds = config.time_limit < 0.0 ? -1.0 : config.time_limit * ph.fraction;
    PhaseOutcome o = anneal(inst, scaled, ts, std::move(start), config, working, step, iters, seconds, rng, i, res.log);
    res.iterations += o.iterations;
    res.best_cost = o.best_cost;
    incumbent = rescale_solution(o.best, ts);
  }
  res.best = rescale_checked(inst, *incumbent, TimeScale{1, 1});
  res.reported_strategy = reporting_strategy(config.strategy);
  res.reported_cost = expected_cost(inst, res.best, res.reported_strategy);
  return res;
}

SearchResult local_search(const Instance& inst, const SearchConfig& config) {
  if (config.phases.size() != 1) throw ConfigError("local search runs exactly one phase");
  return scheduled_search(inst, config);
}

}  // namespace ssvrp
