#pragma once

#include <compare>
#include <numbers>
#include <string>
#include <vector>

#include "latfermion/error.hpp"

namespace latfermion {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Lattice dimensions. The position lattice has N_t·N_r points
/// (t, r) = (2πn/N_t, 2πm/N_r); the dual lattice has ω ∈ {−(N_t−1)..0},
/// k ∈ {1..N_r}. Spacings are scaled so that Δω = Δk = 1.
struct LatticeSpec {
  int n_t = 1;
  int n_r = 1;

  static constexpr int kMaxExtent = 1 << 14;

  void validate() const {
    if (n_t < 1 || n_r < 1) {
      throw InputError("lattice dimensions must be positive (got n_t=" +
                       std::to_string(n_t) + ", n_r=" + std::to_string(n_r) + ")");
    }
    if (n_t > kMaxExtent || n_r > kMaxExtent) {
      throw InputError("lattice dimension exceeds " + std::to_string(kMaxExtent));
    }
  }

  [[nodiscard]] int min_omega() const { return -(n_t - 1); }
  [[nodiscard]] int max_omega() const { return 0; }
  [[nodiscard]] int max_k() const { return n_r; }
  [[nodiscard]] int size() const { return n_t * n_r; }

  [[nodiscard]] double time(int n) const { return kTwoPi * n / n_t; }
  [[nodiscard]] double radius(int m) const { return kTwoPi * m / n_r; }

  friend bool operator==(const LatticeSpec&, const LatticeSpec&) = default;
};

struct PositionPoint {
  int n = 0;  // time index
  int m = 0;  // radial index
  double t = 0.0;
  double r = 0.0;
};

/// A point (ω, k) of the dual lattice. Ordered by (k, ω), the canonical order
/// used for configurations.
struct DualPoint {
  int omega = 0;
  int k = 1;

  friend bool operator==(const DualPoint&, const DualPoint&) = default;
  friend std::strong_ordering operator<=>(const DualPoint& a, const DualPoint& b) {
    if (auto c = a.k <=> b.k; c != 0) return c;
    return a.omega <=> b.omega;
  }
};

[[nodiscard]] inline bool contains(const LatticeSpec& spec, DualPoint p) {
  return p.omega >= spec.min_omega() && p.omega <= spec.max_omega() && p.k >= 1 &&
         p.k <= spec.max_k();
}

/// Maps any integer frequency onto its representative in {−(N_t−1)..0}.
[[nodiscard]] inline int wrap_omega(long long omega, int n_t) {
  const long long r = ((omega % n_t) + n_t) % n_t;
  return r == 0 ? 0 : static_cast<int>(r - n_t);
}

struct LatticePoints {
  std::vector<PositionPoint> positions;
  std::vector<DualPoint> duals;
};

/// Position points in row-major (n, m) order; dual points in row-major
/// (ω ascending, then k ascending) order.
[[nodiscard]] inline LatticePoints build_lattice(const LatticeSpec& spec) {
  spec.validate();
  LatticePoints out;
  out.positions.reserve(static_cast<std::size_t>(spec.size()));
  out.duals.reserve(static_cast<std::size_t>(spec.size()));
  for (int n = 0; n < spec.n_t; ++n) {
    for (int m = 0; m < spec.n_r; ++m) {
      out.positions.push_back({n, m, spec.time(n), spec.radius(m)});
    }
  }
  for (int omega = spec.min_omega(); omega <= spec.max_omega(); ++omega) {
    for (int k = 1; k <= spec.max_k(); ++k) {
      out.duals.push_back({omega, k});
    }
  }
  return out;
}

}  // namespace latfermion
