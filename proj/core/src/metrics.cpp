#include <algorithm>
#include <cmath>
#include <limits>

#include "ssvrp/bench.hpp"

namespace ssvrp {

std::optional<double> gain(double ws_avg, double expected) {
  if (ws_avg == 0.0) return std::nullopt;
  return (ws_avg - expected) / ws_avg;
}

std::vector<std::vector<ProfilePoint>> performance_profile(const std::vector<std::vector<double>>& costs) {
  std::vector<std::vector<ProfilePoint>> curves(costs.size());
  if (costs.empty()) return curves;
  const std::size_t ni = costs.front().size();
  std::vector<double> best(ni, std::numeric_limits<double>::infinity());
  for (const auto& row : costs)
    for (std::size_t i = 0; i < ni; ++i)
      if (std::isfinite(row[i])) best[i] = std::min(best[i], row[i]);

  for (std::size_t a = 0; a < costs.size(); ++a) {
    std::vector<double> ratios;
    for (std::size_t i = 0; i < ni; ++i) {
      const double c = costs[a][i];
      if (!std::isfinite(c) || !std::isfinite(best[i])) continue;
      ratios.push_back(best[i] > 0.0 ? c / best[i] : (c + 1.0) / (best[i] + 1.0));
    }
    std::sort(ratios.begin(), ratios.end());
    auto& curve = curves[a];
    for (std::size_t j = 0; j < ratios.size(); ++j) {
      const double frac = static_cast<double>(j + 1) / static_cast<double>(ni);
      if (!curve.empty() && curve.back().ratio == ratios[j]) curve.back().fraction = frac;
      else curve.push_back({ratios[j], frac});
    }
  }
  return curves;
}

}  // namespace ssvrp
