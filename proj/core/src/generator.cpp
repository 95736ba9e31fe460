#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "ssvrp/bench.hpp"
#include "ssvrp/error.hpp"

namespace ssvrp {

int AddressPool::size() const {
  return static_cast<int>(std::llround(std::sqrt(static_cast<double>(travel.size()))));
}

AddressPool synthetic_pool(const SyntheticPoolParams& params, std::uint64_t seed) {
  if (params.size < 1) throw ConfigError("pool needs at least one address");
  Rng rng(seed);
  AddressPool pool;
  const int n = params.size;
  for (int i = 0; i < n; ++i) {
    pool.x.push_back(rng.uniform() * params.side);
    pool.y.push_back(rng.uniform() * params.side);
  }
  pool.travel.assign(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double straight = std::hypot(pool.x[i] - pool.x[j], pool.y[i] - pool.y[j]);
      const double factor = 1.0 + params.noise * (2.0 * rng.uniform() - 1.0);
      pool.travel[static_cast<std::size_t>(i) * n + j] =
          std::max<Time>(1, static_cast<Time>(std::lround(straight * params.detour * factor)));
    }
  }
  return pool;
}

std::vector<int> kmeans_waiting_vertices(const AddressPool& pool, int m, std::uint64_t seed,
                                         const std::vector<int>& excluded) {
  const int n = pool.size();
  if (m < 0 || m > n) throw ConfigError("cannot pick " + std::to_string(m) + " waiting vertices from " +
                                        std::to_string(n) + " addresses");
  if (m == 0) return {};
  auto dist = [&](int i, int j) { return std::min(pool.at(i, j), pool.at(j, i)); };

  Rng rng(seed);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<int> centers(order.begin(), order.begin() + m);
  std::vector<int> cluster(n, -1);

  for (int iter = 0; iter < 100; ++iter) {
    for (int i = 0; i < n; ++i) {
      int best = 0;
      for (int c = 1; c < m; ++c)
        if (dist(i, centers[c]) < dist(i, centers[best])) best = c;
      cluster[i] = best;
    }
    bool changed = false;
    std::vector<std::vector<int>> members(m);
    for (int i = 0; i < n; ++i) members[cluster[i]].push_back(i);
    for (int c = 0; c < m; ++c) {
      int pick = -1;
      if (members[c].empty()) {
        // Re-seed from the point farthest from its own center.
        Time far = -1;
        for (int i = 0; i < n; ++i) {
          if (std::find(centers.begin(), centers.end(), i) != centers.end()) continue;
          if (dist(i, centers[cluster[i]]) > far) {
            far = dist(i, centers[cluster[i]]);
            pick = i;
          }
        }
        if (pick < 0) continue;
      } else {
        long long best_sum = std::numeric_limits<long long>::max();
        for (int a : members[c]) {
          long long sum = 0;
          for (int b : members[c]) sum += dist(a, b);
          if (sum < best_sum) {
            best_sum = sum;
            pick = a;
          }
        }
      }
      if (pick != centers[c]) {
        centers[c] = pick;
        changed = true;
      }
    }
    if (!changed) break;
  }

  // Median of each cluster, skipping excluded addresses.
  std::set<int> banned(excluded.begin(), excluded.end());
  std::vector<std::vector<int>> members(m);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    for (int c = 1; c < m; ++c)
      if (dist(i, centers[c]) < dist(i, centers[best])) best = c;
    members[best].push_back(i);
  }
  std::vector<int> out;
  for (int c = 0; c < m; ++c) {
    int pick = -1;
    long long best_sum = std::numeric_limits<long long>::max();
    for (int a : members[c]) {
      if (banned.count(a)) continue;
      long long sum = 0;
      for (int b : members[c]) sum += dist(a, b);
      if (sum < best_sum) {
        best_sum = sum;
        pick = a;
      }
    }
    if (pick < 0) {
      Time near = std::numeric_limits<Time>::max();
      for (int i = 0; i < n; ++i)
        if (!banned.count(i) && dist(i, centers[c]) < near) {
          near = dist(i, centers[c]);
          pick = i;
        }
    }
    if (pick < 0) throw ConfigError("address pool too small for the requested waiting vertices");
    banned.insert(pick);
    out.push_back(pick);
  }
  return out;
}

std::vector<double> gen_request_probabilities(Rng& rng, int slots, double sigma) {
  const int mu1 = rng.uniform_int(1, slots);
  const int mu2 = rng.uniform_int(1, slots);
  std::vector<int> count(static_cast<std::size_t>(slots) + 1, 0);
  for (int mu : {mu1, mu2}) {
    for (int i = 0; i < 100; ++i) {
      const long long v = std::llround(rng.normal(mu, sigma));
      if (v >= 1 && v <= slots) ++count[v];
    }
  }
  std::vector<double> p(static_cast<std::size_t>(slots) + 1, 0.0);
  for (int i = 1; i <= slots; ++i) p[i] = std::min(1.0, count[i] / 100.0);
  return p;
}

std::string instance_name(const GeneratorParams& params) {
  if (params.colocated) return std::to_string(params.customers) + "c+w-" + std::to_string(params.seed);
  return std::to_string(params.customers) + "c-" + std::to_string(params.waiting) + "w-" +
         std::to_string(params.seed);
}

Instance gen_instance(const GeneratorParams& params, const AddressPool& pool) {
  const int n = params.customers;
  const int m = params.colocated ? n : params.waiting;
  const int need = params.colocated ? n + 1 : n + m + 1;
  if (need > pool.size())
    throw ConfigError("address pool has " + std::to_string(pool.size()) + " addresses, need " + std::to_string(need));
  if (params.window_lengths.empty()) throw ConfigError("no window lengths given");

  // Depot and customers come from a seed-only permutation so both modes share them.
  std::vector<int> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  Rng pick = Rng::stream(params.seed, 0);
  pick.shuffle(order);
  const int depot = order[0];
  std::vector<int> customers(order.begin() + 1, order.begin() + 1 + n);

  std::vector<int> waiting;
  if (params.colocated) {
    waiting = customers;
  } else {
    std::vector<int> taken = customers;
    taken.push_back(depot);
    waiting = kmeans_waiting_vertices(pool, m, mix64(params.seed ^ 0x5EEDULL), taken);
  }

  std::vector<int> address{depot};
  address.insert(address.end(), waiting.begin(), waiting.end());
  address.insert(address.end(), customers.begin(), customers.end());
  const int nv = static_cast<int>(address.size());
  std::vector<Time> travel(static_cast<std::size_t>(nv) * nv, 0);
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nv; ++j)
      travel[static_cast<std::size_t>(i) * nv + j] = i == j ? 0 : pool.at(address[i], address[j]);

  std::vector<PotentialRequest> reqs;
  for (int c = 0; c < n; ++c) {
    Rng rng = Rng::stream(params.seed, 1000 + static_cast<std::uint64_t>(customers[c]));
    const auto probs = gen_request_probabilities(rng, params.slots, params.sigma);
    for (int i = 1; i <= params.slots; ++i) {
      if (probs[i] <= 0.0) continue;
      PotentialRequest r;
      r.id = static_cast<int>(reqs.size());
      r.customer = 1 + m + c;
      r.reveal = i * params.slot;
      r.demand = rng.uniform_int(0, params.max_demand);
      r.service = params.service;
      const Time len = params.window_lengths[rng.uniform_int(0, static_cast<int>(params.window_lengths.size()) - 1)];
      r.earliest = r.reveal;
      r.latest = std::min(r.reveal + len - 1, params.horizon);
      r.probability = probs[i];
      if (r.reveal > params.horizon) continue;
      reqs.push_back(r);
    }
  }
  return Instance(instance_name(params), m, n, std::move(travel), params.horizon, params.vehicles, params.capacity,
                  std::move(reqs));
}

}  // namespace ssvrp
