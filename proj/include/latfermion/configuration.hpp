#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "latfermion/compensated_sum.hpp"
#include "latfermion/error.hpp"
#include "latfermion/lattice.hpp"

namespace latfermion {

/// One occupied dual-lattice point with weight Φ and boost parameter τ.
struct OccupiedState {
  int omega = 0;
  int k = 1;
  double phi = 1.0;
  double tau = 0.0;

  [[nodiscard]] DualPoint point() const { return {omega, k}; }

  friend bool operator==(const OccupiedState&, const OccupiedState&) = default;
};

/// Φ ∈ {0, 1} at every dual point.
struct StrictNormalization {
  friend bool operator==(const StrictNormalization&, const StrictNormalization&) = default;
};

/// Φ = 0 or Φ > ε at every dual point.
struct RelaxedNormalization {
  double epsilon = 0.0;
  friend bool operator==(const RelaxedNormalization&, const RelaxedNormalization&) = default;
};

using NormalizationMode = std::variant<StrictNormalization, RelaxedNormalization>;

/// The variational state: a lattice, the occupied points with their (Φ, τ),
/// and the normalization mode.
///
/// Construction validates and canonicalizes: states are sorted by (k, ω),
/// zero-weight entries are dropped, and any violation of the lattice range or
/// the normalization condition throws InputError. Instances are immutable.
class Configuration {
 public:
  Configuration() = default;

  explicit Configuration(LatticeSpec spec, std::vector<OccupiedState> states = {},
                         NormalizationMode mode = StrictNormalization{})
      : spec_(spec), states_(std::move(states)), mode_(mode) {
    spec_.validate();
    if (const auto* relaxed = std::get_if<RelaxedNormalization>(&mode_)) {
      if (!std::isfinite(relaxed->epsilon) || relaxed->epsilon <= 0.0) {
        throw InputError("relaxed normalization requires a positive finite epsilon");
      }
    }
    std::erase_if(states_, [](const OccupiedState& s) { return s.phi == 0.0; });
    for (const auto& s : states_) validate_state(s);
    std::sort(states_.begin(), states_.end(),
              [](const OccupiedState& a, const OccupiedState& b) { return a.point() < b.point(); });
    for (std::size_t i = 1; i < states_.size(); ++i) {
      if (states_[i - 1].point() == states_[i].point()) {
        throw InputError("dual point (" + std::to_string(states_[i].omega) + "," +
                         std::to_string(states_[i].k) + ") occupied twice");
      }
    }
  }

  [[nodiscard]] const LatticeSpec& spec() const { return spec_; }
  [[nodiscard]] std::span<const OccupiedState> states() const { return states_; }
  [[nodiscard]] const OccupiedState& state(std::size_t i) const { return states_.at(i); }
  [[nodiscard]] const NormalizationMode& mode() const { return mode_; }
  [[nodiscard]] std::size_t size() const { return states_.size(); }
  [[nodiscard]] bool empty() const { return states_.empty(); }

  [[nodiscard]] bool is_strict() const {
    return std::holds_alternative<StrictNormalization>(mode_);
  }
  [[nodiscard]] std::optional<double> epsilon() const {
    if (const auto* relaxed = std::get_if<RelaxedNormalization>(&mode_)) return relaxed->epsilon;
    return std::nullopt;
  }

  [[nodiscard]] std::vector<double> taus() const {
    std::vector<double> out;
    out.reserve(states_.size());
    for (const auto& s : states_) out.push_back(s.tau);
    return out;
  }
  [[nodiscard]] std::vector<double> phis() const {
    std::vector<double> out;
    out.reserve(states_.size());
    for (const auto& s : states_) out.push_back(s.phi);
    return out;
  }
  [[nodiscard]] std::vector<DualPoint> occupation() const {
    std::vector<DualPoint> out;
    out.reserve(states_.size());
    for (const auto& s : states_) out.push_back(s.point());
    return out;
  }

  /// Same occupation with τ replaced, in canonical state order.
  [[nodiscard]] Configuration with_taus(std::span<const double> taus) const {
    if (taus.size() != states_.size()) throw InputError("tau vector has wrong length");
    auto states = states_;
    for (std::size_t i = 0; i < states.size(); ++i) states[i].tau = taus[i];
    return Configuration(spec_, std::move(states), mode_);
  }

  [[nodiscard]] Configuration with_phis(std::span<const double> phis) const {
    if (phis.size() != states_.size()) throw InputError("phi vector has wrong length");
    auto states = states_;
    for (std::size_t i = 0; i < states.size(); ++i) states[i].phi = phis[i];
    return Configuration(spec_, std::move(states), mode_);
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  void validate_state(const OccupiedState& s) const {
    const std::string where = "state (" + std::to_string(s.omega) + "," + std::to_string(s.k) + ")";
    if (!contains(spec_, s.point())) {
      throw InputError(where + " lies outside the dual lattice");
    }
    if (!std::isfinite(s.phi) || s.phi < 0.0) {
      throw InputError(where + " has invalid phi");
    }
    if (!std::isfinite(s.tau)) {
      throw InputError(where + " has non-finite tau");
    }
    if (is_strict()) {
      if (s.phi != 1.0) throw InputError(where + " violates strict normalization (phi must be 0 or 1)");
    } else if (s.phi <= *epsilon()) {
      throw InputError(where + " violates relaxed normalization (phi must exceed epsilon)");
    }
  }

  LatticeSpec spec_{};
  std::vector<OccupiedState> states_;
  NormalizationMode mode_ = StrictNormalization{};
};

/// f_loc = Σ k·Φ over the occupied points.
[[nodiscard]] inline double local_trace(const Configuration& config) {
  CompensatedSum<double> sum;
  for (const auto& s : config.states()) sum += s.k * s.phi;
  return sum.value();
}

/// τ → −τ on every state.
[[nodiscard]] inline Configuration parity_transformed(const Configuration& config) {
  auto taus = config.taus();
  for (auto& t : taus) t = -t;
  return config.with_taus(taus);
}

/// ω → (u·ω + Ω) mod N_t, with Φ and τ carried along. Ω alone is the gauge
/// translation; u must be a unit mod N_t for the map to be a bijection.
[[nodiscard]] inline Configuration frequency_mapped(const Configuration& config, int unit,
                                                    int shift) {
  const int n_t = config.spec().n_t;
  std::vector<OccupiedState> states(config.states().begin(), config.states().end());
  for (auto& s : states) {
    s.omega = wrap_omega(static_cast<long long>(unit) * s.omega + shift, n_t);
  }
  return Configuration(config.spec(), std::move(states), config.mode());
}

[[nodiscard]] inline Configuration gauge_transformed(const Configuration& config, int shift) {
  return frequency_mapped(config, 1, shift);
}

}  // namespace latfermion
