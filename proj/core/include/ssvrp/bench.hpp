#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ssvrp/model.hpp"
#include "ssvrp/rng.hpp"

namespace ssvrp {

// Candidate addresses with a travel-time matrix in minutes.
struct AddressPool {
  std::vector<double> x, y;  // optional coordinates (may be empty)
  std::vector<Time> travel;  // size() * size(), row-major
  int size() const;
  Time at(int i, int j) const { return travel[static_cast<std::size_t>(i) * size() + j]; }
};

struct SyntheticPoolParams {
  int size = 255;
  double side = 40.0;         // square side, in minutes of straight-line travel
  double detour = 1.3;        // road network stretch
  double noise = 0.2;         // directional multiplicative noise, +/- this fraction
};

AddressPool synthetic_pool(const SyntheticPoolParams& params, std::uint64_t seed);

// Clusters the pool with a Voronoi-iteration k-means over the symmetrized
// matrix min(d_ij, d_ji) and returns each cluster's median address (member
// with the smallest mean distance to the rest of its cluster). Addresses in
// `excluded` are clustered but never returned.
std::vector<int> kmeans_waiting_vertices(const AddressPool& pool, int m, std::uint64_t seed,
                                         const std::vector<int>& excluded = {});

struct GeneratorParams {
  int customers = 10;
  int waiting = 5;
  bool colocated = false;  // waiting vertices sit on the customers
  std::uint64_t seed = 1;
  Time horizon = 480;
  Time slot = 5;
  int slots = 96;
  Time service = 5;
  int max_demand = 2;
  std::vector<Time> window_lengths{5, 10, 15, 20};
  double sigma = 8.0;  // spread of the two demand peaks, in slots
  int vehicles = 2;
  int capacity = kUnboundedCapacity;
};

// Per-slot request probabilities of one customer: index i in [1, slots].
std::vector<double> gen_request_probabilities(Rng& rng, int slots, double sigma);

// "<n>c-<m>w-<seed>" or "<n>c+w-<seed>".
std::string instance_name(const GeneratorParams& params);
Instance gen_instance(const GeneratorParams& params, const AddressPool& pool);

// Relative improvement over the baseline; nullopt when the baseline is 0.
std::optional<double> gain(double ws_avg, double expected);

struct ProfilePoint {
  double ratio = 1.0;
  double fraction = 0.0;
};

// costs[a][i] is approach a's cost on instance i (NaN or inf when missing).
// Instances whose best cost is 0 compare (cost + 1) / (best + 1).
std::vector<std::vector<ProfilePoint>> performance_profile(const std::vector<std::vector<double>>& costs);

// ----- file formats -----

inline constexpr int kFormatVersion = 1;

void write_instance(std::ostream& os, const Instance& inst);
Instance read_instance(std::istream& is, const std::string& source = "<input>");
Instance load_instance(const std::string& path);
void save_instance(const std::string& path, const Instance& inst);

struct SolutionFile {
  FirstStageSolution solution;
  std::map<std::string, std::string> meta;  // strategy, scale, multiple, cost, seed, ...
};

void write_solution(std::ostream& os, const SolutionFile& sol);
SolutionFile read_solution(std::istream& is, int num_waiting, const std::string& source = "<input>");
SolutionFile load_solution(const std::string& path, int num_waiting);
void save_solution(const std::string& path, const SolutionFile& sol);

void write_pool(std::ostream& os, const AddressPool& pool);
AddressPool read_pool(std::istream& is, const std::string& source = "<input>");
AddressPool load_pool(const std::string& path);

// Results table rows: instance, approach, strategy, scale, multiple, cost, gain.
struct ResultRow {
  std::string instance;
  std::string approach;
  std::string strategy;
  int scale = 1;
  int multiple = 0;
  double cost = 0.0;
  std::optional<double> gain;
};

void write_results_header(std::ostream& os);
void write_result_row(std::ostream& os, const ResultRow& row);
std::vector<ResultRow> read_results(std::istream& is, const std::string& source = "<input>");

// Formats a double so that reading it back gives the same value.
std::string format_real(double v);

}  // namespace ssvrp
