#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "latfermion/configuration.hpp"
#include "latfermion/error.hpp"
#include "latfermion/lattice.hpp"

namespace latfermion {

struct SeaParams {
  double mass = 1.0;
  LatticeSpec spec;

  void validate() const {
    spec.validate();
    if (!std::isfinite(mass) || mass <= 0.0) throw InputError("mass must be positive");
    if (mass >= spec.n_t - 1) {
      throw InputError("mass must be below N_t - 1 so that some frequency satisfies omega <= -m");
    }
  }
};

struct SeaResult {
  Configuration config;
  std::vector<int> skipped_omegas;  // ω ≤ −m with no admissible k in 1..N_r
};

/// Discretized Dirac sea: for every dual-lattice ω ≤ −m, occupies the k with
/// 0 ≤ k − √(ω² − m²) < 1, i.e. k = ⌈√(ω² − m²)⌉, with Φ = 1 and τ = 0.
/// Frequencies whose k would be 0 or exceed N_r are skipped and reported.
[[nodiscard]] inline SeaResult dirac_sea_config(const SeaParams& params) {
  params.validate();
  std::vector<OccupiedState> states;
  SeaResult out;
  for (int omega = params.spec.min_omega(); omega <= params.spec.max_omega(); ++omega) {
    if (omega > -params.mass) continue;
    const double shell = std::sqrt(static_cast<double>(omega) * omega - params.mass * params.mass);
    const double k = std::ceil(shell);
    if (k < 1.0 || k > params.spec.max_k()) {
      out.skipped_omegas.push_back(omega);
      continue;
    }
    states.push_back({omega, static_cast<int>(k), 1.0, 0.0});
  }
  if (states.empty()) {
    throw ConstraintError("empty sea: no frequency omega <= -" + std::to_string(params.mass) +
                          " admits a momentum on this lattice");
  }
  out.config = Configuration(params.spec, std::move(states));
  return out;
}

/// k − √(ω² − m²) for a state; the sea condition is 0 ≤ value < 1.
[[nodiscard]] inline double sea_offset(const OccupiedState& s, double mass) {
  return s.k - std::sqrt(static_cast<double>(s.omega) * s.omega - mass * mass);
}

}  // namespace latfermion
