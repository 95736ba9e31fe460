#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ssvrp/expect.hpp"
#include "ssvrp/model.hpp"
#include "ssvrp/rng.hpp"

namespace ssvrp {

struct SearchPhase {
  int scale = 1;
  int multiple = 10;
  double fraction = 1.0;  // share of the budget spent in this phase
};

struct SearchConfig {
  double t_init = 2.0;
  double t_min = 1e-6;
  double alpha = 0.95;
  double time_limit = -1.0;         // wall-clock seconds; negative means no limit
  std::int64_t max_iterations = -1; // -1 means no limit
  Strategy strategy = Strategy::kRqHybrid;
  std::vector<SearchPhase> phases{{1, 10, 1.0}};
  std::uint64_t seed = 1;

  // Throws ConfigError when the parameters are inconsistent.
  void validate() const;
};

enum class Move {
  kRelocate = 1,
  kSwap,
  kTwoOpt,
  kCrossExchange,
  kInsert,
  kRemove,
  kIncreaseWait,
  kDecreaseWait,
  kTransferWait,
};
inline constexpr int kMoveCount = 9;
const char* move_name(int op);

// Random first-stage solution on the waiting-time grid `step` (scaled units).
FirstStageSolution initial_solution(const Instance& inst, Rng& rng, Time step);

struct Candidate {
  FirstStageSolution solution;
  bool feasible = false;
};

// A random move of kind `op` (1..9); nullopt when no such move exists.
std::optional<Candidate> neighbor(int op, const Instance& inst, const FirstStageSolution& sol, Time step, Rng& rng);

// Simulated-annealing acceptance for a candidate of cost `cand` against the
// current cost `cur`. `u` is a uniform draw in [0,1).
bool anneal_accepts(double cur, double cand, double temperature, double u);

struct LogEntry {
  int phase = 0;
  std::int64_t iteration = 0;
  int op = 0;
  bool produced = false;  // a candidate existed
  bool feasible = false;
  bool accepted = false;
  double current = 0.0;
  double best = 0.0;
  double temperature = 0.0;
};

struct SearchResult {
  FirstStageSolution best;       // on the original clock
  double best_cost = 0.0;        // working strategy, last phase's scale
  double reported_cost = 0.0;    // reporting strategy, scale 1
  Strategy reported_strategy = Strategy::kRqPlus;
  std::int64_t iterations = 0;
  std::vector<LogEntry> log;
  std::vector<std::string> notes;  // phase transitions, fallbacks
};

// One annealing run on a single phase.
SearchResult local_search(const Instance& inst, const SearchConfig& config);
// Phases are run coarse to fine; each phase starts from the previous best
// moved onto its grid.
SearchResult scheduled_search(const Instance& inst, const SearchConfig& config);

// Moves a waiting time from the original clock onto a phase's grid: nearest
// multiple, at least one multiple.
Time regrid_wait(Time original, const TimeScale& ts);

void write_log(std::ostream& os, const std::vector<LogEntry>& log);

struct ExactResult {
  FirstStageSolution best;  // scaled units
  double cost = 0.0;
  std::int64_t evaluated = 0;
  double space_size = 0.0;
};

inline constexpr double kDefaultExactBudget = 2.0e5;

// Size of the first-stage space explored by solve_exact: every set of routes
// (up to route relabeling) times every waiting-time vector on the grid that
// fits the horizon.
double exact_space_size(const Instance& scaled, Time step);
// Exhaustive search on the scaled instance; throws BudgetError when the
// space is larger than `budget`.
ExactResult solve_exact(const Instance& scaled, Strategy s, Time step, double budget = kDefaultExactBudget);

}  // namespace ssvrp
