#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ssvrp/assign.hpp"
#include "ssvrp/bench.hpp"
#include "ssvrp/error.hpp"
#include "ssvrp/expect.hpp"
#include "ssvrp/search.hpp"
#include "ssvrp/simulate.hpp"

#ifndef SSVRP_VERSION
#define SSVRP_VERSION "unknown"
#endif

using json = nlohmann::ordered_json;
using namespace ssvrp;

namespace {

enum ExitCode { kOk = 0, kOther = 1, kUsage = 2, kParse = 3, kFeasibility = 4, kBudget = 5 };

// Collects what a run did so it can be replayed.
struct Manifest {
  std::string command;
  json params = json::object();
  json results = json::object();
  std::vector<std::string> outputs;
  std::string path;
  std::optional<std::uint64_t> seed;

  void write(double seconds, int exit_code) const {
    json m;
    m["command"] = command;
    m["version"] = SSVRP_VERSION;
    m["parameters"] = params;
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["results"] = results;
    m["outputs"] = outputs;
    m["wall_time_seconds"] = seconds;
    m["exit_code"] = exit_code;
    std::ofstream f(path);
    if (!f) {
      std::cerr << "warning: cannot write manifest " << path << '\n';
      return;
    }
    f << m.dump(2) << '\n';
  }
};

int capacity_from(const std::string& text) {
  if (text == "inf") return kUnboundedCapacity;
  try {
    std::size_t used = 0;
    const int v = std::stoi(text, &used);
    if (used == text.size() && v >= 0) return v;
  } catch (...) {
  }
  throw ConfigError("capacity must be a non-negative integer or 'inf', got '" + text + "'");
}

// "5:60,2:30,1:10" or "5:60:0.5,1:10:0.5"; missing fractions share evenly.
std::vector<SearchPhase> parse_schedule(const std::string& text) {
  std::vector<SearchPhase> phases;
  std::vector<bool> explicit_fraction;
  std::stringstream all(text);
  std::string item;
  while (std::getline(all, item, ',')) {
    std::vector<std::string> parts;
    std::stringstream one(item);
    std::string p;
    while (std::getline(one, p, ':')) parts.push_back(p);
    if (parts.size() < 2 || parts.size() > 3) throw ConfigError("bad schedule phase '" + item + "'");
    SearchPhase ph;
    try {
      ph.scale = std::stoi(parts[0]);
      ph.multiple = std::stoi(parts[1]);
      if (parts.size() == 3) ph.fraction = std::stod(parts[2]);
    } catch (...) {
      throw ConfigError("bad schedule phase '" + item + "'");
    }
    phases.push_back(ph);
    explicit_fraction.push_back(parts.size() == 3);
  }
  if (phases.empty()) throw ConfigError("empty schedule");
  const bool any = std::find(explicit_fraction.begin(), explicit_fraction.end(), true) != explicit_fraction.end();
  if (!any)
    for (auto& ph : phases) ph.fraction = 1.0 / static_cast<double>(phases.size());
  return phases;
}

[[noreturn]] void reject(const std::vector<Violation>& v) {
  std::string text = "solution is infeasible:";
  std::vector<std::string> lines;
  for (const auto& x : v) {
    lines.push_back(x.describe());
    text += "\n  " + lines.back();
  }
  throw FeasibilityError(text, lines);
}

int scale_of(const SolutionFile& sf) {
  auto it = sf.meta.find("scale");
  if (it == sf.meta.end()) return 1;
  try {
    return std::stoi(it->second);
  } catch (...) {
    throw ConfigError("solution has a malformed scale entry");
  }
}

// Moves a solution stored at `from` scale onto scale `to` (1 or from).
FirstStageSolution to_scale_one(const Instance& inst, const FirstStageSolution& sol, int from) {
  return rescale_checked(inst, sol, TimeScale{from, from});
}

void print_cost(const char* label, double v) { std::printf("%s %s\n", label, format_real(v).c_str()); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic vehicle routing with random requests and reveal times"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(SSVRP_VERSION));
  app.option_defaults()->always_capture_default();

  Manifest manifest;
  std::string manifest_path;
  app.add_option("--manifest", manifest_path, "Where to write the JSON run manifest");

  // ---- generate ----
  auto* gen = app.add_subcommand("generate", "Generate a benchmark instance");
  GeneratorParams gp;
  std::string gen_mode = "separated", gen_pool, gen_out, gen_capacity = "inf", gen_pool_out;
  bool gen_synthetic = false;
  SyntheticPoolParams spp;
  std::uint64_t pool_seed = 1;
  std::uint64_t gen_seed = 0;
  gen->add_option("--customers", gp.customers, "Number of customers")->check(CLI::PositiveNumber);
  gen->add_option("--waiting", gp.waiting, "Number of waiting vertices (separated mode)")->check(CLI::NonNegativeNumber);
  gen->add_option("--mode", gen_mode, "separated | colocated")->check(CLI::IsMember({"separated", "colocated"}));
  gen->add_option("--seed", gen_seed, "Instance seed")->required();
  gen->add_option("--vehicles", gp.vehicles, "Fleet size")->check(CLI::PositiveNumber);
  gen->add_option("--capacity", gen_capacity, "Vehicle capacity or 'inf'");
  gen->add_option("--sigma", gp.sigma, "Spread of the demand peaks, in slots")->check(CLI::PositiveNumber);
  gen->add_option("--pool", gen_pool, "Address pool file");
  gen->add_flag("--synthetic-pool", gen_synthetic, "Use a synthetic address pool");
  gen->add_option("--pool-size", spp.size, "Synthetic pool size")->check(CLI::PositiveNumber);
  gen->add_option("--pool-seed", pool_seed, "Synthetic pool seed");
  gen->add_option("--save-pool", gen_pool_out, "Also write the pool used");
  gen->add_option("--out", gen_out, "Instance file to write")->required();

  // ---- evaluate ----
  auto* eval = app.add_subcommand("evaluate", "Expected cost of a first-stage solution");
  std::string ev_instance, ev_solution, ev_strategy = "rq", ev_reveal = "successor";
  bool ev_true_cost = false;
  eval->add_option("--instance", ev_instance, "Instance file")->required();
  eval->add_option("--solution", ev_solution, "Solution file")->required();
  eval->add_option("--strategy", ev_strategy, "rinf | rq | rq+ | hybrid");
  eval->add_option("--next-reveal", ev_reveal, "successor | literal")->check(CLI::IsMember({"successor", "literal"}));
  eval->add_flag("--true-cost", ev_true_cost, "Rescale to scale 1 and evaluate under rq+");

  // ---- solve ----
  auto* solve = app.add_subcommand("solve", "Optimize a first-stage solution by simulated annealing");
  std::string so_instance, so_strategy = "hybrid", so_schedule = "1:10", so_out, so_log;
  SearchConfig so_cfg;
  std::uint64_t so_seed = 0;
  solve->add_option("--instance", so_instance, "Instance file")->required();
  solve->add_option("--strategy", so_strategy, "rinf | rq | rq+ | hybrid");
  solve->add_option("--schedule", so_schedule, "Phases scale:multiple[:fraction], comma separated");
  solve->add_option("--time-limit", so_cfg.time_limit, "Wall-clock seconds");
  solve->add_option("--iterations", so_cfg.max_iterations, "Iteration budget");
  solve->add_option("--t-init", so_cfg.t_init, "Initial temperature");
  solve->add_option("--t-min", so_cfg.t_min, "Restart threshold");
  solve->add_option("--alpha", so_cfg.alpha, "Cooling factor");
  solve->add_option("--seed", so_seed, "Search seed")->required();
  solve->add_option("--out", so_out, "Solution file to write")->required();
  solve->add_option("--log", so_log, "Iteration log (CSV)");

  // ---- exact ----
  auto* exact = app.add_subcommand("exact", "Exhaustive search on a small instance");
  std::string ex_instance, ex_strategy = "rq", ex_out;
  int ex_scale = 5, ex_multiple = 60;
  double ex_budget = kDefaultExactBudget;
  exact->add_option("--instance", ex_instance, "Instance file")->required();
  exact->add_option("--strategy", ex_strategy, "rinf | rq | rq+ | hybrid");
  exact->add_option("--scale", ex_scale, "Time scale")->check(CLI::PositiveNumber);
  exact->add_option("--multiple", ex_multiple, "Waiting-time multiple in minutes")->check(CLI::PositiveNumber);
  exact->add_option("--budget", ex_budget, "Largest search space accepted");
  exact->add_option("--out", ex_out, "Solution file to write");

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "Monte Carlo estimate of a policy's rejections");
  std::string si_instance, si_solution, si_policy = "ws", si_trace;
  std::int64_t si_samples = 100000;
  std::uint64_t si_seed = 0;
  int si_threads = 1;
  bool si_check = false;
  sim->add_option("--instance", si_instance, "Instance file")->required();
  sim->add_option("--solution", si_solution, "Solution file (not needed for ws)");
  sim->add_option("--policy", si_policy, "ws | rinf | rq | rq+")->check(CLI::IsMember({"ws", "rinf", "rq", "rq+"}));
  sim->add_option("--samples", si_samples, "Number of scenarios")->check(CLI::PositiveNumber);
  sim->add_option("--seed", si_seed, "Sampling seed")->required();
  sim->add_option("--threads", si_threads, "Worker threads")->check(CLI::PositiveNumber);
  sim->add_flag("--check", si_check, "Compare with the closed form (4 standard errors)");
  sim->add_option("--trace", si_trace, "Write the trace of the first sampled scenario");

  // ---- profile ----
  auto* prof = app.add_subcommand("profile", "Performance profiles from a results table");
  std::string pr_results, pr_out;
  prof->add_option("--results", pr_results, "Results CSV")->required();
  prof->add_option("--out", pr_out, "Profile CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  int code = kOk;
  auto* chosen = app.get_subcommands().front();
  manifest.command = chosen->get_name();
  for (const auto* opt : chosen->get_options()) {
    if (opt->get_name() == "--help") continue;
    const std::string key = opt->get_name(false, true);
    if (opt->count() > 0) manifest.params[key] = opt->as<std::string>();
    else if (!opt->get_default_str().empty()) manifest.params[key] = opt->get_default_str();
    if (key == "--seed" && opt->count() > 0) manifest.seed = opt->as<std::uint64_t>();
  }
  std::string primary_out;

  try {
    if (*gen) {
      primary_out = gen_out;
      gp.seed = gen_seed;
      gp.colocated = gen_mode == "colocated";
      gp.capacity = capacity_from(gen_capacity);
      AddressPool pool;
      if (!gen_pool.empty()) pool = load_pool(gen_pool);
      else if (gen_synthetic) pool = synthetic_pool(spp, pool_seed);
      else throw ConfigError("generate needs --pool FILE or --synthetic-pool");
      if (!gen_pool_out.empty()) {
        std::ofstream f(gen_pool_out);
        write_pool(f, pool);
        manifest.outputs.push_back(gen_pool_out);
      }
      const Instance inst = gen_instance(gp, pool);
      save_instance(gen_out, inst);
      manifest.outputs.push_back(gen_out);
      manifest.results["name"] = inst.name();
      manifest.results["requests"] = inst.num_requests();
      manifest.results["expected_requests"] = inst.expected_requests();
      std::printf("%s: %d potential requests, %.3f expected\n", inst.name().c_str(), inst.num_requests(),
                  inst.expected_requests());
    } else if (*eval) {
      const Instance inst = load_instance(ev_instance);
      const SolutionFile sf = load_solution(ev_solution, inst.num_waiting());
      const int scale = scale_of(sf);
      const Instance scaled = scale_instance(inst, TimeScale{scale, scale});
      const auto violations = validate_first_stage(scaled, sf.solution);
      if (!violations.empty()) reject(violations);
      EvalOptions opt;
      opt.next_reveal = ev_reveal == "literal" ? NextReveal::kLiteral : NextReveal::kSuccessor;
      const Strategy s = parse_strategy(ev_strategy);
      const double cost = expected_cost(scaled, sf.solution, working_strategy(s), opt);
      manifest.results["scale"] = scale;
      manifest.results["cost"] = cost;
      print_cost("expected_cost", cost);
      if (ev_true_cost) {
        const auto one = to_scale_one(inst, sf.solution, scale);
        const double truth = expected_cost(inst, one, Strategy::kRqPlus, opt);
        manifest.results["true_cost"] = truth;
        print_cost("true_cost", truth);
      }
    } else if (*solve) {
      primary_out = so_out;
      const Instance inst = load_instance(so_instance);
      so_cfg.strategy = parse_strategy(so_strategy);
      so_cfg.phases = parse_schedule(so_schedule);
      so_cfg.seed = so_seed;
      const auto res = scheduled_search(inst, so_cfg);
      SolutionFile sf;
      sf.solution = res.best;
      sf.meta = {{"scale", "1"},
                 {"strategy", std::string(to_string(res.reported_strategy))},
                 {"cost", format_real(res.reported_cost)},
                 {"search_strategy", std::string(to_string(so_cfg.strategy))},
                 {"schedule", so_schedule},
                 {"seed", std::to_string(so_seed)},
                 {"iterations", std::to_string(res.iterations)}};
      save_solution(so_out, sf);
      manifest.outputs.push_back(so_out);
      if (!so_log.empty()) {
        std::ofstream f(so_log);
        write_log(f, res.log);
        manifest.outputs.push_back(so_log);
      }
      manifest.results["reported_cost"] = res.reported_cost;
      manifest.results["reported_strategy"] = to_string(res.reported_strategy);
      manifest.results["best_cost_last_phase"] = res.best_cost;
      manifest.results["iterations"] = res.iterations;
      manifest.results["notes"] = res.notes;
      for (const auto& n : res.notes) std::fprintf(stderr, "%s\n", n.c_str());
      print_cost("reported_cost", res.reported_cost);
    } else if (*exact) {
      primary_out = ex_out;
      const Instance inst = load_instance(ex_instance);
      const TimeScale ts{ex_scale, ex_multiple};
      const Instance scaled = scale_instance(inst, ts);
      const Strategy s = parse_strategy(ex_strategy);
      try {
        const auto res = solve_exact(scaled, s, ts.wait_step(), ex_budget);
        manifest.results["cost"] = res.cost;
        manifest.results["evaluated"] = res.evaluated;
        manifest.results["space_size"] = res.space_size;
        if (!ex_out.empty()) {
          SolutionFile sf;
          sf.solution = res.best;
          sf.meta = {{"scale", std::to_string(ex_scale)},
                     {"multiple", std::to_string(ex_multiple)},
                     {"strategy", std::string(to_string(working_strategy(s)))},
                     {"cost", format_real(res.cost)}};
          save_solution(ex_out, sf);
          manifest.outputs.push_back(ex_out);
        }
        print_cost("optimal_cost", res.cost);
        std::printf("evaluated %lld\n", static_cast<long long>(res.evaluated));
      } catch (const BudgetError& e) {
        manifest.results["space_size"] = e.size();
        throw;
      }
    } else if (*sim) {
      const Instance inst = load_instance(si_instance);
      MonteCarloEstimate est;
      std::optional<double> closed;
      if (si_policy == "ws") {
        est = monte_carlo_wait_and_serve(inst, si_samples, si_seed, si_threads);
        if (!si_trace.empty()) {
          Rng rng = Rng::stream(si_seed, 0);
          const auto res = run_wait_and_serve(inst, sample_scenario(inst, rng), true);
          std::ofstream f(si_trace);
          write_trace(f, res.trace);
        }
      } else {
        if (si_solution.empty()) throw ConfigError("policy " + si_policy + " needs --solution");
        const SolutionFile sf = load_solution(si_solution, inst.num_waiting());
        const auto one = to_scale_one(inst, sf.solution, scale_of(sf));
        const auto violations = validate_first_stage(inst, one);
        if (!violations.empty()) reject(violations);
        const Strategy s = parse_strategy(si_policy);
        const Schedule sched = compute_schedule(inst, one);
        const Assignment asg = assign_requests(inst, sched);
        est = monte_carlo_cost(inst, sched, asg, s, si_samples, si_seed, si_threads);
        closed = expected_cost(inst, sched, asg, s);
        if (!si_trace.empty()) {
          Rng rng = Rng::stream(si_seed, 0);
          const auto res = run_recourse(inst, sched, asg, sample_scenario(inst, rng), s);
          std::ofstream f(si_trace);
          write_trace(f, res.trace);
        }
      }
      if (!si_trace.empty()) manifest.outputs.push_back(si_trace);
      manifest.results["mean"] = est.mean;
      manifest.results["std_error"] = est.std_error;
      manifest.results["samples"] = est.samples;
      print_cost("mean", est.mean);
      print_cost("std_error", est.std_error);
      std::printf("samples %lld\n", static_cast<long long>(est.samples));
      if (si_check) {
        if (!closed) throw ConfigError("--check needs a recourse policy");
        const double z = est.std_error > 0 ? std::abs(est.mean - *closed) / est.std_error
                                           : (std::abs(est.mean - *closed) < 1e-12 ? 0.0 : INFINITY);
        manifest.results["closed_form"] = *closed;
        manifest.results["z"] = z;
        print_cost("closed_form", *closed);
        std::printf("check %s (z = %.3f)\n", z <= 4.0 ? "ok" : "FAILED", z);
        if (z > 4.0) code = kOther;
      }
    } else if (*prof) {
      std::ifstream in(pr_results);
      if (!in) throw ParseError(pr_results, 0, 0, "cannot open file");
      const auto rows = read_results(in, pr_results);
      std::vector<std::string> approaches, instances;
      std::map<std::pair<std::string, std::string>, double> cost;
      for (const auto& r : rows) {
        if (std::find(approaches.begin(), approaches.end(), r.approach) == approaches.end())
          approaches.push_back(r.approach);
        if (std::find(instances.begin(), instances.end(), r.instance) == instances.end())
          instances.push_back(r.instance);
        cost[{r.approach, r.instance}] = r.cost;
      }
      std::vector<std::vector<double>> matrix(approaches.size(), std::vector<double>(instances.size(), INFINITY));
      for (std::size_t a = 0; a < approaches.size(); ++a)
        for (std::size_t i = 0; i < instances.size(); ++i) {
          auto it = cost.find({approaches[a], instances[i]});
          if (it != cost.end()) matrix[a][i] = it->second;
        }
      const auto curves = performance_profile(matrix);
      std::ofstream file;
      std::ostream* os = &std::cout;
      if (!pr_out.empty()) {
        file.open(pr_out);
        os = &file;
        manifest.outputs.push_back(pr_out);
      }
      *os << "approach,ratio,fraction\n";
      for (std::size_t a = 0; a < curves.size(); ++a)
        for (const auto& p : curves[a]) *os << approaches[a] << ',' << format_real(p.ratio) << ',' << format_real(p.fraction) << '\n';
      manifest.results["approaches"] = approaches;
      manifest.results["instances"] = instances.size();
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    code = kParse;
  } catch (const FeasibilityError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    code = kFeasibility;
  } catch (const StructuralError& e) {
    std::cerr << "invalid solution: " << e.what() << '\n';
    code = kFeasibility;
  } catch (const BudgetError& e) {
    std::cerr << "refused: " << e.what() << '\n';
    code = kBudget;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    code = kOther;
  }

  manifest.path = !manifest_path.empty() ? manifest_path
                  : !primary_out.empty() ? primary_out + ".manifest.json"
                                         : manifest.command + ".manifest.json";
  manifest.write(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), code);
  return code;
}
