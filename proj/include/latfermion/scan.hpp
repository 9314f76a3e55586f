#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "latfermion/action.hpp"
#include "latfermion/configuration.hpp"
#include "latfermion/error.hpp"

namespace latfermion {

/// Action sampled on a (steps+1)×(steps+1) grid in the (τ_i, τ_j) plane with
/// all other τ held at their configuration values. values is row-major:
/// values[a·(steps+1) + b] is S at τ_i = tau_at(a), τ_j = tau_at(b).
struct ScanGrid {
  std::size_t axis_i = 0;
  std::size_t axis_j = 1;
  double tau_min = 0.0;
  double tau_max = 0.0;
  int steps = 1;
  std::vector<double> values;

  [[nodiscard]] std::size_t side() const { return static_cast<std::size_t>(steps) + 1; }
  [[nodiscard]] double tau_at(int a) const {
    return tau_min + (tau_max - tau_min) * static_cast<double>(a) / steps;
  }
  [[nodiscard]] double value(int a, int b) const {
    return values.at(static_cast<std::size_t>(a) * side() + static_cast<std::size_t>(b));
  }

  friend bool operator==(const ScanGrid&, const ScanGrid&) = default;
};

[[nodiscard]] inline ScanGrid scan_landscape(const Configuration& config, std::size_t i, std::size_t j,
                                             double tau_min, double tau_max, int steps) {
  if (config.size() < 2) throw InputError("scan needs a configuration with at least two states");
  if (i == j) throw InputError("scan axes must differ");
  if (i >= config.size() || j >= config.size()) throw InputError("scan axis index out of range");
  if (steps < 1) throw InputError("scan needs at least one step");
  if (!std::isfinite(tau_min) || !std::isfinite(tau_max) || !(tau_min < tau_max)) {
    throw InputError("scan range must satisfy tau_min < tau_max");
  }

  ScanGrid grid{i, j, tau_min, tau_max, steps, {}};
  const ActionKernel kernel(config);
  const auto phi = config.phis();
  auto tau = config.taus();
  grid.values.reserve(grid.side() * grid.side());
  for (int a = 0; a <= steps; ++a) {
    tau[i] = grid.tau_at(a);
    for (int b = 0; b <= steps; ++b) {
      tau[j] = grid.tau_at(b);
      grid.values.push_back(kernel.total(phi, tau));
    }
  }
  return grid;
}

/// Largest relative deviation |S(a,b) − S(steps−a, steps−b)| / max(|·|).
[[nodiscard]] inline double point_reflection_asymmetry(const ScanGrid& grid) {
  double worst = 0.0;
  for (int a = 0; a <= grid.steps; ++a) {
    for (int b = 0; b <= grid.steps; ++b) {
      const double x = grid.value(a, b);
      const double y = grid.value(grid.steps - a, grid.steps - b);
      const double denom = std::max(std::abs(x), std::abs(y));
      if (denom > 0.0) worst = std::max(worst, std::abs(x - y) / denom);
    }
  }
  return worst;
}

struct GridNode {
  int a = 0;
  int b = 0;
  friend bool operator==(const GridNode&, const GridNode&) = default;
};

/// Groups the nodes whose value lies within relative tolerance of the grid
/// minimum into 8-connected components. Each component is one global-minimum
/// basin; components are returned in row-major order of their first node.
[[nodiscard]] inline std::vector<std::vector<GridNode>> global_minimum_basins(const ScanGrid& grid,
                                                                              double rel_tol = 1e-9) {
  const double lowest = *std::min_element(grid.values.begin(), grid.values.end());
  const double cutoff = lowest + rel_tol * std::max(1.0, std::abs(lowest));
  const int side = static_cast<int>(grid.side());
  std::vector<int> label(grid.values.size(), -1);
  std::vector<std::vector<GridNode>> basins;
  for (int a = 0; a < side; ++a) {
    for (int b = 0; b < side; ++b) {
      const std::size_t idx = static_cast<std::size_t>(a * side + b);
      if (label[idx] >= 0 || grid.values[idx] > cutoff) continue;
      const int id = static_cast<int>(basins.size());
      basins.emplace_back();
      std::vector<GridNode> stack{{a, b}};
      label[idx] = id;
      while (!stack.empty()) {
        const GridNode node = stack.back();
        stack.pop_back();
        basins.back().push_back(node);
        for (int da = -1; da <= 1; ++da) {
          for (int db = -1; db <= 1; ++db) {
            const int na = node.a + da;
            const int nb = node.b + db;
            if (na < 0 || nb < 0 || na >= side || nb >= side) continue;
            const std::size_t nidx = static_cast<std::size_t>(na * side + nb);
            if (label[nidx] >= 0 || grid.values[nidx] > cutoff) continue;
            label[nidx] = id;
            stack.push_back({na, nb});
          }
        }
      }
    }
  }
  return basins;
}

}  // namespace latfermion
