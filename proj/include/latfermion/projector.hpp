#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "latfermion/compensated_sum.hpp"
#include "latfermion/configuration.hpp"
#include "latfermion/spin_matrix.hpp"

namespace latfermion {

namespace detail {

inline constexpr double kSeriesThreshold = 1e-4;

// sin(x)/x
inline double sinc(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// (cos x − sin(x)/x) / x, which vanishes linearly at the origin.
inline double bessel_like(double x) {
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return x * (-1.0 / 3.0 + x2 / 30.0);
  }
  return (std::cos(x) - std::sin(x) / x) / x;
}

}  // namespace detail

/// Radial profile of one dual point at radius r:
///   P_term = e^{iωt}·Φ·[ diagonal·(𝟙 − σ³ cosh τ) + off_diagonal·σ¹ sinh τ ].
/// For r ≠ 0, diagonal = sin(kr)/r and off_diagonal = (cos kr − sin(kr)/(kr))/r;
/// at r = 0 these reduce to k and 0.
struct RadialProfile {
  double diagonal = 0.0;
  double off_diagonal = 0.0;
};

[[nodiscard]] inline RadialProfile radial_profile(int k, double r) {
  if (r == 0.0) return {static_cast<double>(k), 0.0};
  const double x = k * r;
  return {k * detail::sinc(x), k * detail::bessel_like(x)};
}

namespace detail {

struct ProjectorAccumulator {
  CompensatedSum<Complex> s, a1, a3;

  void add(Complex phase, const RadialProfile& radial, double phi, double cosh_tau,
           double sinh_tau) {
    const Complex weight = phase * phi;
    s += weight * radial.diagonal;
    a3 += weight * (-radial.diagonal * cosh_tau);
    a1 += weight * (radial.off_diagonal * sinh_tau);
  }

  [[nodiscard]] SpinMatrix value() const { return {s.value(), a1.value(), 0.0, a3.value()}; }
};

inline double reduce_time(double t) {
  const double reduced = t - kTwoPi * std::floor(t / kTwoPi);
  return reduced >= kTwoPi ? 0.0 : reduced;
}

}  // namespace detail

/// P(t, r) at an arbitrary point with r ≥ 0 (not restricted to lattice nodes).
/// The r = 0 branch is the analytic limit of the r ≠ 0 formula.
[[nodiscard]] inline SpinMatrix evaluate_projector(const Configuration& config, double t, double r) {
  if (!(r >= 0.0)) throw InputError("evaluate_projector requires r >= 0");
  const double t_reduced = detail::reduce_time(t);
  detail::ProjectorAccumulator acc;
  for (const auto& s : config.states()) {
    acc.add(std::polar(1.0, s.omega * t_reduced), radial_profile(s.k, r), s.phi, std::cosh(s.tau),
            std::sinh(s.tau));
  }
  return acc.value();
}

/// A(t,r) = P·P*, with P* = σ³ P† σ³.
[[nodiscard]] inline SpinMatrix closed_chain(const SpinMatrix& p) { return p * p.spin_adjoint(); }

/// Per-state Φ together with cosh τ and sinh τ, in canonical state order.
struct StateWeights {
  std::vector<double> phi;
  std::vector<double> cosh_tau;
  std::vector<double> sinh_tau;

  static StateWeights from(std::span<const double> phi, std::span<const double> tau) {
    StateWeights w;
    w.phi.assign(phi.begin(), phi.end());
    w.cosh_tau.reserve(tau.size());
    w.sinh_tau.reserve(tau.size());
    for (double t : tau) {
      w.cosh_tau.push_back(std::cosh(t));
      w.sinh_tau.push_back(std::sinh(t));
    }
    return w;
  }
  static StateWeights from(const Configuration& config) {
    return from(config.phis(), config.taus());
  }
};

/// Precomputed phases and radial profiles for evaluating P on every lattice
/// node of a fixed occupation pattern while Φ and τ vary. Phases use the
/// integer index (ω·n mod N_t) so gauge-related patterns see identical values.
class LatticeProjector {
 public:
  explicit LatticeProjector(const Configuration& config)
      : spec_(config.spec()), n_states_(config.size()) {
    const auto states = config.states();
    phases_.resize(n_states_ * static_cast<std::size_t>(spec_.n_t));
    radial_.resize(n_states_ * static_cast<std::size_t>(spec_.n_r));
    for (std::size_t i = 0; i < n_states_; ++i) {
      for (int n = 0; n < spec_.n_t; ++n) {
        const long long index = (static_cast<long long>(states[i].omega) * n) % spec_.n_t;
        const long long wrapped = index < 0 ? index + spec_.n_t : index;
        phases_[i * spec_.n_t + n] = std::polar(1.0, kTwoPi * static_cast<double>(wrapped) / spec_.n_t);
      }
      for (int m = 0; m < spec_.n_r; ++m) {
        radial_[i * spec_.n_r + m] = radial_profile(states[i].k, spec_.radius(m));
      }
    }
  }

  [[nodiscard]] const LatticeSpec& spec() const { return spec_; }
  [[nodiscard]] std::size_t size() const { return n_states_; }

  /// P at lattice node (n, m).
  [[nodiscard]] SpinMatrix at(int n, int m, const StateWeights& w) const {
    detail::ProjectorAccumulator acc;
    for (std::size_t i = 0; i < n_states_; ++i) {
      acc.add(phases_[i * spec_.n_t + n], radial_[i * spec_.n_r + m], w.phi[i], w.cosh_tau[i],
              w.sinh_tau[i]);
    }
    return acc.value();
  }

 private:
  LatticeSpec spec_;
  std::size_t n_states_ = 0;
  std::vector<Complex> phases_;
  std::vector<RadialProfile> radial_;
};

}  // namespace latfermion
