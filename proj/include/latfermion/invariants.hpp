#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "latfermion/action.hpp"
#include "latfermion/configuration.hpp"
#include "latfermion/optimize.hpp"
#include "latfermion/projector.hpp"

namespace latfermion {

struct InvariantCheck {
  std::string name;
  bool passed = false;
  double worst = 0.0;  // largest observed deviation in the check's own measure
  double tolerance = 0.0;
};

inline constexpr double kSymmetryTolerance = 1e-10;

/// |a − b| / max(|a|, |b|, floor); identical values (including 0 == 0) give 0.
[[nodiscard]] inline double relative_deviation(double a, double b, double floor = 0.0) {
  if (a == b) return 0.0;
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

/// S is unchanged by τ → −τ.
[[nodiscard]] inline InvariantCheck check_parity(const Configuration& config) {
  const double dev = relative_deviation(action_value(config), action_value(parity_transformed(config)));
  return {"parity invariance", dev <= kSymmetryTolerance, dev, kSymmetryTolerance};
}

/// S is unchanged by every gauge translation ω → ω + Ω mod N_t.
[[nodiscard]] inline InvariantCheck check_gauge(const Configuration& config) {
  const double s = action_value(config);
  double worst = 0.0;
  for (int shift = 1; shift < config.spec().n_t; ++shift) {
    worst = std::max(worst, relative_deviation(s, action_value(gauge_transformed(config, shift))));
  }
  return {"gauge invariance", worst <= kSymmetryTolerance, worst, kSymmetryTolerance};
}

/// S is unchanged by ω → u·ω for every unit u mod N_t.
[[nodiscard]] inline InvariantCheck check_frequency_dilation(const Configuration& config) {
  const double s = action_value(config);
  double worst = 0.0;
  for (int u : units_mod(config.spec().n_t)) {
    worst = std::max(worst, relative_deviation(s, action_value(frequency_mapped(config, u, 0))));
  }
  return {"frequency dilation invariance", worst <= kSymmetryTolerance, worst, kSymmetryTolerance};
}

/// L(t, r) = L(2π − t, r), relative to max(L, discriminant_scale).
[[nodiscard]] inline InvariantCheck check_time_reflection(const Configuration& config) {
  const auto& spec = config.spec();
  const LatticeProjector projector(config);
  const auto w = StateWeights::from(config);
  double worst = 0.0;
  for (int n = 1; n < spec.n_t; ++n) {
    for (int m = 0; m < spec.n_r; ++m) {
      const SpinMatrix a = closed_chain(projector.at(n, m, w));
      const SpinMatrix b = closed_chain(projector.at(spec.n_t - n, m, w));
      const double floor = std::max(discriminant_scale(a), discriminant_scale(b));
      worst = std::max(worst, relative_deviation(lagrangian(a), lagrangian(b), floor));
    }
  }
  return {"time reflection", worst <= kSymmetryTolerance, worst, kSymmetryTolerance};
}

/// L = 0 at every spacelike node, exactly.
[[nodiscard]] inline InvariantCheck check_causal_compatibility(const ActionReport& report) {
  double worst = 0.0;
  for (const auto& row : report.rows) {
    if (row.causal == CausalClass::spacelike) worst = std::max(worst, std::abs(row.lagrangian));
    if ((row.discriminant >= 0.0) != (row.causal == CausalClass::timelike)) worst = std::max(worst, 1.0);
  }
  return {"causal compatibility", worst == 0.0, worst, 0.0};
}

/// The (0,0) Lagrangian equals 4 f_loc² (Σ kΦ cosh τ)².
[[nodiscard]] inline InvariantCheck check_origin_closed_form(const Configuration& config,
                                                             const ActionReport& report) {
  const double dev = relative_deviation(report.at(0, 0).lagrangian, origin_lagrangian_closed_form(config));
  return {"origin closed form", dev <= kSymmetryTolerance, dev, kSymmetryTolerance};
}

/// At every node: D = ¼(λ+ − λ−)² when D ≥ 0, and λ+λ− is real and non-negative.
[[nodiscard]] inline InvariantCheck check_eigenvalues(const Configuration& config) {
  const auto& spec = config.spec();
  const LatticeProjector projector(config);
  const auto w = StateWeights::from(config);
  double worst = 0.0;
  for (int n = 0; n < spec.n_t; ++n) {
    for (int m = 0; m < spec.n_r; ++m) {
      const SpinMatrix p = projector.at(n, m, w);
      const SpinMatrix a = closed_chain(p);
      const double d = discriminant(a);
      const auto ev = chain_eigenvalues(p);
      const double scale = discriminant_scale(a);
      if (d >= 0.0) {
        const Complex diff = ev.plus - ev.minus;
        worst = std::max(worst, std::abs(0.25 * diff * diff - d) / scale);
      }
      const Complex product = ev.plus * ev.minus;
      if (product.real() < -1e-12) worst = std::max(worst, -product.real());
      if (std::abs(product.imag()) > 1e-12) worst = std::max(worst, std::abs(product.imag()));
    }
  }
  return {"eigenvalue cross-check", worst <= kSymmetryTolerance, worst, kSymmetryTolerance};
}

/// The reported total equals the weighted row sum.
[[nodiscard]] inline InvariantCheck check_total(const ActionReport& report) {
  const double dev = relative_deviation(report.total, recompute_total(report));
  return {"total recomputation", dev <= 1e-12, dev, 1e-12};
}

[[nodiscard]] inline std::vector<InvariantCheck> run_invariant_suite(const Configuration& config) {
  const ActionReport report = action(config);
  return {
      check_parity(config),
      check_gauge(config),
      check_frequency_dilation(config),
      check_time_reflection(config),
      check_causal_compatibility(report),
      check_origin_closed_form(config, report),
      check_eigenvalues(config),
      check_total(report),
  };
}

}  // namespace latfermion
