#pragma once

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "latfermion/compensated_sum.hpp"
#include "latfermion/configuration.hpp"
#include "latfermion/error.hpp"
#include "latfermion/projector.hpp"
#include "latfermion/spin_matrix.hpp"

namespace latfermion {

enum class CausalClass { timelike, spacelike };

[[nodiscard]] inline const char* to_string(CausalClass c) {
  return c == CausalClass::timelike ? "timelike" : "spacelike";
}

/// Natural magnitude of D[A]: |tr A²|/2 + |tr A|²/4 + 1. Used for the
/// imaginary-residue check and for scale-aware comparisons of D and L.
[[nodiscard]] inline double discriminant_scale(const SpinMatrix& a) {
  const Complex tr_a = a.trace();
  const Complex tr_a2 = (a * a).trace();
  return std::abs(tr_a2) / 2.0 + std::norm(tr_a) / 4.0 + 1.0;
}

inline constexpr double kImaginaryResidueTolerance = 1e-10;

/// D[A] = ½ tr(A²) − ¼ (tr A)².
///
/// In the Pauli basis this is exactly a1² + a2² + a3² (the squared traceless
/// part), which is what gets evaluated. D is real for closed chains; an
/// imaginary part above 1e−10 relative to discriminant_scale throws
/// ConsistencyError.
[[nodiscard]] inline double discriminant(const SpinMatrix& a) {
  const Complex d = a.a1 * a.a1 + a.a2 * a.a2 + a.a3 * a.a3;
  // discriminant_scale ≥ 1, so small residues skip the extra product.
  if (std::abs(d.imag()) > kImaginaryResidueTolerance &&
      std::abs(d.imag()) > kImaginaryResidueTolerance * discriminant_scale(a)) {
    throw ConsistencyError("discriminant has imaginary part " + std::to_string(d.imag()) +
                           "; argument is not a closed chain");
  }
  return d.real();
}

/// L[A] = D·Θ(D).
[[nodiscard]] inline double lagrangian(const SpinMatrix& a) {
  const double d = discriminant(a);
  return d > 0.0 ? d : 0.0;
}

/// Timelike iff D ≥ 0.
[[nodiscard]] inline CausalClass causal_class(const SpinMatrix& a) {
  return discriminant(a) >= 0.0 ? CausalClass::timelike : CausalClass::spacelike;
}

struct ChainEigenvalues {
  Complex plus;
  Complex minus;
};

/// Eigenvalues λ± of the closed chain A = P·P* built from the projector
/// P = φ𝟙 + v₀σ³ + v_r γ^r (γ^r = −iσ¹, so v_r = i·a1), using
///   λ± = v_j v̄^j + φφ̄ ± √D,
///   D  = (v_j v̄^j)² − |v_j v^j|² + (v_j φ̄ + φ v̄_j)(v^j φ̄ + φ v̄^j),
/// with the two-dimensional Minkowski contraction v_j w^j = v₀w₀ − v_r w_r.
///
/// Takes P. For real roots the smaller one is λ+λ− / λ_large with
/// λ+λ− = |v_j v^j − φ²|².
[[nodiscard]] inline ChainEigenvalues chain_eigenvalues(const SpinMatrix& p) {
  if (p.a2 != Complex{}) {
    throw InputError("chain_eigenvalues expects a projector without σ² component");
  }
  const Complex i{0.0, 1.0};
  const Complex phi = p.s;
  const Complex v0 = p.a3;
  const Complex vr = i * p.a1;

  const double v_vbar = std::norm(v0) - std::norm(vr);
  const Complex v_v = v0 * v0 - vr * vr;
  const double w0 = 2.0 * (v0 * std::conj(phi)).real();
  const double wr = 2.0 * (vr * std::conj(phi)).real();
  // (v_j v̄^j)² − |v_j v^j|² = −4 (Im v₀v̄_r)²
  const double cross = (v0 * std::conj(vr)).imag();
  const double d = -4.0 * cross * cross + (w0 * w0 - wr * wr);
  const double mu = v_vbar + std::norm(phi);

  if (d < 0.0) {
    const double root = std::sqrt(-d);
    return {{mu, root}, {mu, -root}};
  }
  const double root = std::sqrt(d);
  const double product = std::norm(v_v - phi * phi);
  const double large = mu >= 0.0 ? mu + root : mu - root;
  const double small = large != 0.0 ? product / large : 0.0;
  return mu >= 0.0 ? ChainEigenvalues{large, small} : ChainEigenvalues{small, large};
}

/// ρ_t(2πn/N_t): 1 at n = 0, 2 otherwise (pairs t with 2π − t).
[[nodiscard]] inline double weight_rho_t(int n, int n_t) {
  if (n < 0 || n >= n_t) throw InputError("time index out of range");
  return n == 0 ? 1.0 : 2.0;
}

/// ρ_r(2πn/N_r): 1 at n = 0, otherwise the shell volume (2n+1)³ − (2n−1)³.
[[nodiscard]] inline double weight_rho_r(int n, int n_r) {
  if (n < 0 || n >= n_r) throw InputError("radial index out of range");
  if (n == 0) return 1.0;
  const double outer = 2.0 * n + 1.0;
  const double inner = 2.0 * n - 1.0;
  return outer * outer * outer - inner * inner * inner;
}

struct ActionRow {
  double t = 0.0;
  double r = 0.0;
  double discriminant = 0.0;
  double lagrangian = 0.0;
  CausalClass causal = CausalClass::timelike;
  double weight = 1.0;  // ρ_t·ρ_r

  friend bool operator==(const ActionRow&, const ActionRow&) = default;
};

/// Per-node Lagrangian values in row-major (n, m) order and the total
///   S = 1/(N_t N_r³) Σ ρ_t ρ_r L[A(t,r)].
struct ActionReport {
  LatticeSpec spec;
  std::vector<ActionRow> rows;
  double total = 0.0;

  [[nodiscard]] const ActionRow& at(int n, int m) const {
    return rows.at(static_cast<std::size_t>(n) * spec.n_r + m);
  }

  friend bool operator==(const ActionReport&, const ActionReport&) = default;
};

[[nodiscard]] inline double action_prefactor(const LatticeSpec& spec) {
  const double n_r = spec.n_r;
  return 1.0 / (spec.n_t * n_r * n_r * n_r);
}

/// Weighted sum over report rows in row order, times the prefactor.
[[nodiscard]] inline double recompute_total(const ActionReport& report) {
  CompensatedSum<double> sum;
  for (const auto& row : report.rows) sum += row.weight * row.lagrangian;
  return sum.value() * action_prefactor(report.spec);
}

/// Evaluates the action for one occupation pattern at many (Φ, τ) values.
class ActionKernel {
 public:
  explicit ActionKernel(const Configuration& config) : projector_(config) {
    const auto& spec = projector_.spec();
    weights_.reserve(static_cast<std::size_t>(spec.size()));
    for (int n = 0; n < spec.n_t; ++n) {
      for (int m = 0; m < spec.n_r; ++m) {
        weights_.push_back(weight_rho_t(n, spec.n_t) * weight_rho_r(m, spec.n_r));
      }
    }
  }

  [[nodiscard]] const LatticeSpec& spec() const { return projector_.spec(); }
  [[nodiscard]] std::size_t size() const { return projector_.size(); }

  [[nodiscard]] double total(const StateWeights& w) const {
    const auto& spec = projector_.spec();
    CompensatedSum<double> sum;
    std::size_t idx = 0;
    for (int n = 0; n < spec.n_t; ++n) {
      for (int m = 0; m < spec.n_r; ++m, ++idx) {
        sum += weights_[idx] * lagrangian(closed_chain(projector_.at(n, m, w)));
      }
    }
    return sum.value() * action_prefactor(spec);
  }

  [[nodiscard]] double total(std::span<const double> phi, std::span<const double> tau) const {
    return total(StateWeights::from(phi, tau));
  }

  [[nodiscard]] ActionReport report(const StateWeights& w) const {
    const auto& spec = projector_.spec();
    ActionReport out;
    out.spec = spec;
    out.rows.reserve(weights_.size());
    CompensatedSum<double> sum;
    std::size_t idx = 0;
    for (int n = 0; n < spec.n_t; ++n) {
      for (int m = 0; m < spec.n_r; ++m, ++idx) {
        const SpinMatrix a = closed_chain(projector_.at(n, m, w));
        const double d = discriminant(a);
        const double l = d > 0.0 ? d : 0.0;
        out.rows.push_back({spec.time(n), spec.radius(m), d, l,
                            d >= 0.0 ? CausalClass::timelike : CausalClass::spacelike,
                            weights_[idx]});
        sum += weights_[idx] * l;
      }
    }
    out.total = sum.value() * action_prefactor(spec);
    return out;
  }

 private:
  LatticeProjector projector_;
  std::vector<double> weights_;
};

[[nodiscard]] inline ActionReport action(const Configuration& config) {
  return ActionKernel(config).report(StateWeights::from(config));
}

[[nodiscard]] inline double action_value(const Configuration& config) {
  return ActionKernel(config).total(StateWeights::from(config));
}

/// Closed form of L[A(0,0)] = 4 f_loc² (Σ kΦ cosh τ)². Independent of the
/// lattice pipeline; the (0,0) row of action() must agree with it.
[[nodiscard]] inline double origin_lagrangian_closed_form(const Configuration& config) {
  CompensatedSum<double> boosted;
  for (const auto& s : config.states()) boosted += s.k * s.phi * std::cosh(s.tau);
  const double f_loc = local_trace(config);
  const double b = boosted.value();
  return 4.0 * f_loc * f_loc * b * b;
}

}  // namespace latfermion
