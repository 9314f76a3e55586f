#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Eigenvalues>

#include "latfermion/action.hpp"
#include "latfermion/configuration.hpp"
#include "latfermion/error.hpp"
#include "latfermion/nelder_mead.hpp"

namespace latfermion {

struct OptimizerSettings {
  double tau_bound = 10.0;
  int n_starts = 32;
  double tol_action = 1e-10;
  double tol_step = 1e-8;
  int max_evals = 20000;  // per start
  std::uint64_t seed = 0;

  // Random starts are drawn from [−start_range, start_range]^p.
  double start_range = 3.0;

  void validate() const {
    if (!(tau_bound >= 1.0)) throw InputError("tau_bound must be at least 1");
    if (n_starts < 1) throw InputError("n_starts must be positive");
    if (!(tol_action > 0.0) || !(tol_step > 0.0)) throw InputError("tolerances must be positive");
    if (max_evals < 1) throw InputError("max_evals must be positive");
    if (!(start_range > 0.0)) throw InputError("start_range must be positive");
  }
};

struct StartRecord {
  std::vector<double> start;
  std::vector<double> final_point;
  double value = 0.0;
  int evals = 0;
  bool converged = false;

  friend bool operator==(const StartRecord&, const StartRecord&) = default;
};

/// Outcome of optimizing one occupation class during a global search.
struct BranchRecord {
  std::vector<DualPoint> occupation;                // representative, canonical order
  std::vector<std::vector<DualPoint>> equivalents;  // every enumerated member of the class
  double action_value = 0.0;
  std::vector<double> tau;
  bool converged = false;
  int n_evals = 0;

  friend bool operator==(const BranchRecord&, const BranchRecord&) = default;
};

struct MinimizationResult {
  Configuration config;
  double action_value = 0.0;
  int n_evals = 0;
  bool converged = false;
  std::vector<StartRecord> starts_log;
  std::vector<BranchRecord> branches;  // filled by global_minimize, ranked

  friend bool operator==(const MinimizationResult&, const MinimizationResult&) = default;
};

/// Deterministic start schedule: τ = 0 first, then ⌈(n_starts−1)/2⌉ uniform
/// draws from [−range, range]^dim, each followed by its parity image.
[[nodiscard]] inline std::vector<std::vector<double>> start_schedule(std::size_t dim,
                                                                     const OptimizerSettings& settings) {
  std::mt19937_64 rng(settings.seed);
  const double range = std::min(settings.start_range, settings.tau_bound);
  std::uniform_real_distribution<double> uniform(-range, range);
  std::vector<std::vector<double>> starts;
  starts.emplace_back(dim, 0.0);
  const int pairs = settings.n_starts / 2;
  for (int p = 0; p < pairs; ++p) {
    std::vector<double> x(dim);
    for (auto& v : x) v = uniform(rng);
    std::vector<double> mirrored = x;
    for (auto& v : mirrored) v = -v;
    starts.push_back(std::move(x));
    starts.push_back(std::move(mirrored));
  }
  return starts;
}

struct MultiStartOutcome {
  std::vector<double> best_point;
  double best_value = std::numeric_limits<double>::infinity();
  int n_evals = 0;
  bool converged = false;  // best start converged
  std::vector<StartRecord> starts_log;
};

/// Runs Nelder–Mead from every start and keeps the lowest value. Ties go to
/// the earlier start.
template <class Objective>
MultiStartOutcome multi_start_minimize(Objective&& objective,
                                       const std::vector<std::vector<double>>& starts,
                                       const NelderMeadOptions& options) {
  MultiStartOutcome out;
  for (const auto& start : starts) {
    const NelderMeadResult r = nelder_mead(objective, start, options);
    out.n_evals += r.evals;
    out.starts_log.push_back({start, r.x, r.value, r.evals, r.converged});
    if (r.value < out.best_value || out.best_point.empty()) {
      out.best_value = r.value;
      out.best_point = r.x;
      out.converged = r.converged;
    }
  }
  return out;
}

/// Rescales every Φ by f_target / Σ kΦ so that the local trace equals
/// f_target. Relaxed mode only; a state pushed to Φ ≤ ε is a constraint
/// violation.
[[nodiscard]] inline Configuration project_trace(const Configuration& config, double f_target) {
  const auto eps = config.epsilon();
  if (!eps) throw InputError("project_trace applies to relaxed-normalization configurations only");
  if (!(f_target > 0.0) || !std::isfinite(f_target)) throw InputError("f_target must be positive");
  const double current = local_trace(config);
  if (!(current > 0.0)) throw ConstraintError("cannot rescale a configuration with zero local trace");
  const double scale = f_target / current;
  auto phis = config.phis();
  for (std::size_t i = 0; i < phis.size(); ++i) {
    phis[i] *= scale;
    if (!(phis[i] > *eps)) {
      const auto& s = config.state(i);
      throw ConstraintError("trace projection pushes phi at (" + std::to_string(s.omega) + "," +
                            std::to_string(s.k) + ") to " + std::to_string(phis[i]) +
                            ", not above epsilon " + std::to_string(*eps));
    }
  }
  return config.with_phis(phis);
}

namespace detail {

inline NelderMeadOptions nelder_mead_options(const OptimizerSettings& settings,
                                             std::size_t n_tau, std::size_t n_phi = 0,
                                             double phi_upper = 0.0) {
  NelderMeadOptions o;
  o.tol_value = settings.tol_action;
  o.tol_step = settings.tol_step;
  o.max_evals = settings.max_evals;
  o.lower.assign(n_tau, -settings.tau_bound);
  o.upper.assign(n_tau, settings.tau_bound);
  o.lower.insert(o.lower.end(), n_phi, 0.0);
  o.upper.insert(o.upper.end(), n_phi, phi_upper);
  return o;
}

}  // namespace detail

/// Minimizes the action over τ at fixed occupation.
///
/// Strict mode varies τ only. Relaxed mode varies (τ, Φ) jointly; every
/// candidate Φ is re-projected onto the original local trace, and candidates
/// that would push some Φ to ≤ ε are rejected (+∞).
[[nodiscard]] inline MinimizationResult minimize_tau(const Configuration& config,
                                                     const OptimizerSettings& settings = {}) {
  settings.validate();
  if (config.empty()) throw InputError("minimize_tau needs at least one occupied state");
  const std::size_t p = config.size();
  const ActionKernel kernel(config);
  const auto starts_tau = start_schedule(p, settings);

  MinimizationResult result;
  if (config.is_strict()) {
    const auto phi = config.phis();
    auto objective = [&](const std::vector<double>& tau) { return kernel.total(phi, tau); };
    auto outcome = multi_start_minimize(objective, starts_tau, detail::nelder_mead_options(settings, p));
    result.config = config.with_taus(outcome.best_point);
    result.n_evals = outcome.n_evals;
    result.converged = outcome.converged;
    result.starts_log = std::move(outcome.starts_log);
  } else {
    const double f_target = local_trace(config);
    const double eps = *config.epsilon();
    const auto phi0 = config.phis();
    std::vector<int> ks;
    for (const auto& s : config.states()) ks.push_back(s.k);
    auto project = [&](std::span<const double> raw, std::vector<double>& phi) {
      CompensatedSum<double> trace;
      for (std::size_t i = 0; i < p; ++i) trace += ks[i] * raw[i];
      if (!(trace.value() > 0.0)) return false;
      const double scale = f_target / trace.value();
      phi.resize(p);
      for (std::size_t i = 0; i < p; ++i) {
        phi[i] = raw[i] * scale;
        if (!(phi[i] > eps)) return false;
      }
      return true;
    };
    auto objective = [&](const std::vector<double>& x) {
      std::vector<double> phi;
      if (!project(std::span(x).subspan(p, p), phi)) return std::numeric_limits<double>::infinity();
      return kernel.total(phi, std::span(x).first(p));
    };
    std::vector<std::vector<double>> starts;
    for (const auto& tau : starts_tau) {
      auto x = tau;
      x.insert(x.end(), phi0.begin(), phi0.end());
      starts.push_back(std::move(x));
    }
    auto outcome = multi_start_minimize(objective, starts,
                                        detail::nelder_mead_options(settings, p, p, f_target));
    std::vector<double> phi;
    if (!project(std::span(outcome.best_point).subspan(p, p), phi)) {
      throw ConsistencyError("relaxed optimum left the feasible set");
    }
    result.config = project_trace(
        config.with_taus(std::span(outcome.best_point).first(p)).with_phis(phi), f_target);
    result.n_evals = outcome.n_evals;
    result.converged = outcome.converged;
    result.starts_log = std::move(outcome.starts_log);
  }
  result.action_value = action_value(result.config);
  return result;
}

// ---------------------------------------------------------------------------
// Occupation enumeration

using Occupation = std::vector<DualPoint>;

/// Calls visit(occupation) for every subset of the dual lattice whose k values
/// sum to f_loc (each point used at most once), optionally with exactly
/// n_particles points. Subsets are produced in lexicographic order of the
/// canonical (k, ω) point order, each exactly once. visit may return false to
/// stop early.
template <class Visitor>
void for_each_occupation(const LatticeSpec& spec, int f_loc, std::optional<int> n_particles,
                         Visitor&& visit) {
  spec.validate();
  if (f_loc < 1) throw InputError("f_loc must be positive");
  if (n_particles && *n_particles < 1) throw InputError("n_particles must be positive");

  std::vector<DualPoint> points;
  for (int k = 1; k <= spec.max_k(); ++k) {
    for (int omega = spec.min_omega(); omega <= spec.max_omega(); ++omega) points.push_back({omega, k});
  }

  Occupation current;
  bool stop = false;
  auto recurse = [&](auto&& self, std::size_t from, int remaining) -> void {
    if (stop) return;
    if (remaining == 0) {
      if (!n_particles || static_cast<int>(current.size()) == *n_particles) {
        if constexpr (std::is_same_v<std::invoke_result_t<Visitor, const Occupation&>, bool>) {
          if (!visit(static_cast<const Occupation&>(current))) stop = true;
        } else {
          visit(static_cast<const Occupation&>(current));
        }
      }
      return;
    }
    if (n_particles && static_cast<int>(current.size()) >= *n_particles) return;
    for (std::size_t i = from; i < points.size() && !stop; ++i) {
      // Points are sorted by k, so nothing further fits once k exceeds the remainder.
      if (points[i].k > remaining) break;
      current.push_back(points[i]);
      self(self, i + 1, remaining - points[i].k);
      current.pop_back();
    }
  };
  recurse(recurse, 0, f_loc);
}

[[nodiscard]] inline std::vector<Occupation> enumerate_occupations(const LatticeSpec& spec, int f_loc,
                                                                   std::optional<int> n_particles = {}) {
  std::vector<Occupation> out;
  for_each_occupation(spec, f_loc, n_particles, [&](const Occupation& o) { out.push_back(o); });
  return out;
}

// ---------------------------------------------------------------------------
// Occupation symmetries
//
// The action is invariant under ω → u·ω + Ω (mod N_t) for every integer Ω
// (gauge translation) and every unit u of Z/N_t: on lattice times t_n = 2πn/N_t
// the phase e^{i(uω)t_n} equals e^{iω t_{un}}, and n → un permutes the nonzero
// time indices, all of which carry the same weight ρ_t = 2. u = −1 is time
// reflection.

[[nodiscard]] inline std::vector<int> units_mod(int n) {
  std::vector<int> units;
  for (int u = 1; u <= std::max(1, n - 1); ++u) {
    if (std::gcd(u, n) == 1) units.push_back(u);
  }
  return units;
}

[[nodiscard]] inline Occupation map_occupation(const Occupation& occ, int unit, int shift, int n_t) {
  Occupation out;
  out.reserve(occ.size());
  for (const auto& p : occ) {
    out.push_back({wrap_omega(static_cast<long long>(unit) * p.omega + shift, n_t), p.k});
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// All distinct images of occ under the symmetry group, each in canonical order.
[[nodiscard]] inline std::vector<Occupation> occupation_orbit(const LatticeSpec& spec, const Occupation& occ) {
  std::vector<Occupation> orbit;
  for (int u : units_mod(spec.n_t)) {
    for (int shift = 0; shift < spec.n_t; ++shift) orbit.push_back(map_occupation(occ, u, shift, spec.n_t));
  }
  std::sort(orbit.begin(), orbit.end());
  orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
  return orbit;
}

/// Representative of the orbit: fewest states at ω = 0, then the
/// lexicographically smallest sequence of |ω| in canonical (k, ω) order.
[[nodiscard]] inline Occupation canonical_representative(const LatticeSpec& spec, const Occupation& occ) {
  auto key = [](const Occupation& o) {
    std::pair<int, std::vector<int>> k;
    for (const auto& p : o) {
      k.first += p.omega == 0 ? 1 : 0;
      k.second.push_back(-p.omega);
    }
    return k;
  };
  const auto orbit = occupation_orbit(spec, occ);
  return *std::min_element(orbit.begin(), orbit.end(),
                           [&](const Occupation& a, const Occupation& b) { return key(a) < key(b); });
}

/// Finds the symmetry map taking `from` onto `to` (both canonical), if any.
[[nodiscard]] inline std::optional<std::pair<int, int>> find_occupation_map(const LatticeSpec& spec,
                                                                            const Occupation& from,
                                                                            const Occupation& to) {
  for (int u : units_mod(spec.n_t)) {
    for (int shift = 0; shift < spec.n_t; ++shift) {
      if (map_occupation(from, u, shift, spec.n_t) == to) return std::make_pair(u, shift);
    }
  }
  return std::nullopt;
}

[[nodiscard]] inline Configuration strict_configuration(const LatticeSpec& spec, const Occupation& occ,
                                                        std::span<const double> tau = {}) {
  std::vector<OccupiedState> states;
  for (std::size_t i = 0; i < occ.size(); ++i) {
    states.push_back({occ[i].omega, occ[i].k, 1.0, tau.empty() ? 0.0 : tau[i]});
  }
  return Configuration(spec, std::move(states));
}

inline constexpr double kTieTolerance = 1e-9;

/// Enumerates every feasible occupation under (TC) and strict (NC), optimizes
/// one representative per symmetry class with minimize_tau, and ranks the
/// classes by minimal action. Classes within relative 1e−9 of each other are
/// ordered by canonical occupation order.
[[nodiscard]] inline MinimizationResult global_minimize(const LatticeSpec& spec, int f_loc,
                                                        std::optional<int> n_particles,
                                                        const OptimizerSettings& settings = {}) {
  spec.validate();
  settings.validate();
  if (f_loc == 0) throw ConstraintError("trivial system: f_loc = 0 admits only the empty configuration");
  if (f_loc < 0) throw InputError("f_loc must be positive");
  if (n_particles && *n_particles < 1) throw InputError("n_particles must be positive");

  std::map<Occupation, std::size_t> class_of;
  std::vector<BranchRecord> branches;
  for_each_occupation(spec, f_loc, n_particles, [&](const Occupation& occ) {
    const Occupation rep = canonical_representative(spec, occ);
    auto [it, inserted] = class_of.try_emplace(rep, branches.size());
    if (inserted) {
      BranchRecord b;
      b.occupation = rep;
      branches.push_back(std::move(b));
    }
    branches[it->second].equivalents.push_back(occ);
  });
  if (branches.empty()) {
    throw ConstraintError("no occupation satisfies the trace condition f_loc = " + std::to_string(f_loc) +
                          (n_particles ? " with " + std::to_string(*n_particles) + " particles" : ""));
  }

  std::vector<MinimizationResult> runs;
  runs.reserve(branches.size());
  int total_evals = 0;
  for (auto& b : branches) {
    runs.push_back(minimize_tau(strict_configuration(spec, b.occupation), settings));
    const auto& r = runs.back();
    b.action_value = r.action_value;
    b.tau = r.config.taus();
    b.converged = r.converged;
    b.n_evals = r.n_evals;
    total_evals += r.n_evals;
  }

  std::vector<std::size_t> order(branches.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (branches[a].action_value != branches[b].action_value) {
      return branches[a].action_value < branches[b].action_value;
    }
    return branches[a].occupation < branches[b].occupation;
  });
  // Within runs of ties, fall back to canonical occupation order.
  for (std::size_t start = 0; start < order.size();) {
    const double anchor = branches[order[start]].action_value;
    std::size_t end = start + 1;
    while (end < order.size() &&
           branches[order[end]].action_value - anchor <= kTieTolerance * std::max(1.0, std::abs(anchor))) {
      ++end;
    }
    std::sort(order.begin() + static_cast<std::ptrdiff_t>(start), order.begin() + static_cast<std::ptrdiff_t>(end),
              [&](std::size_t a, std::size_t b) { return branches[a].occupation < branches[b].occupation; });
    start = end;
  }

  MinimizationResult result = std::move(runs[order.front()]);
  result.n_evals = total_evals;
  result.branches.reserve(branches.size());
  for (std::size_t idx : order) result.branches.push_back(std::move(branches[idx]));
  return result;
}

// ---------------------------------------------------------------------------
// Local-minimum diagnostics

struct LocalMinimumReport {
  bool is_local_minimum = false;
  bool smooth_criterion = false;       // small FD gradient and PSD FD Hessian
  bool directional_criterion = false;  // no probed direction decreases S
  double action_value = 0.0;
  std::vector<double> gradient;
  std::vector<std::vector<double>> hessian;
  double min_hessian_eigenvalue = 0.0;
  double worst_directional_change = 0.0;  // min over probes of S(τ + h·d) − S(τ)
};

/// Finite-difference test of whether config's τ is a local minimum of S.
///
/// Smooth criterion: ‖central gradient‖∞ ≤ 10·h²·max(1, S) and the smallest
/// Hessian eigenvalue ≥ −1e−6. Directional criterion: for d ∈ {±e_i,
/// ±(e_i ± e_j)/√2}, S(τ + h·d) − S(τ) ≥ −1e−12·max(1, S). Either criterion
/// is sufficient.
[[nodiscard]] inline LocalMinimumReport check_local_minimum(const Configuration& config, double h = 1e-4) {
  if (config.empty()) throw InputError("check_local_minimum needs at least one occupied state");
  if (!(h > 0.0)) throw InputError("finite-difference step must be positive");
  const std::size_t p = config.size();
  const ActionKernel kernel(config);
  const auto phi = config.phis();
  const auto tau0 = config.taus();
  auto S = [&](const std::vector<double>& tau) { return kernel.total(phi, tau); };

  LocalMinimumReport rep;
  const double s0 = S(tau0);
  rep.action_value = s0;
  const double scale = std::max(1.0, std::abs(s0));

  auto shifted = [&](std::size_t i, double di, std::size_t j = 0, double dj = 0.0) {
    auto t = tau0;
    t[i] += di;
    if (dj != 0.0) t[j] += dj;
    return t;
  };

  rep.gradient.resize(p);
  rep.hessian.assign(p, std::vector<double>(p, 0.0));
  std::vector<double> plus(p), minus(p);
  for (std::size_t i = 0; i < p; ++i) {
    plus[i] = S(shifted(i, h));
    minus[i] = S(shifted(i, -h));
    rep.gradient[i] = (plus[i] - minus[i]) / (2.0 * h);
    rep.hessian[i][i] = (plus[i] - 2.0 * s0 + minus[i]) / (h * h);
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      const double pp = S(shifted(i, h, j, h));
      const double pm = S(shifted(i, h, j, -h));
      const double mp = S(shifted(i, -h, j, h));
      const double mm = S(shifted(i, -h, j, -h));
      rep.hessian[i][j] = rep.hessian[j][i] = (pp - pm - mp + mm) / (4.0 * h * h);
    }
  }
  Eigen::MatrixXd hess(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) hess(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rep.hessian[i][j];
  }
  rep.min_hessian_eigenvalue = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hess, Eigen::EigenvaluesOnly)
                                   .eigenvalues()
                                   .minCoeff();
  double grad_inf = 0.0;
  for (double g : rep.gradient) grad_inf = std::max(grad_inf, std::abs(g));
  rep.smooth_criterion = grad_inf <= 10.0 * h * h * scale && rep.min_hessian_eigenvalue >= -1e-6;

  double worst = std::min(*std::min_element(plus.begin(), plus.end()),
                          *std::min_element(minus.begin(), minus.end())) - s0;
  const double diag = h / std::sqrt(2.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      for (double si : {-1.0, 1.0}) {
        for (double sj : {-1.0, 1.0}) worst = std::min(worst, S(shifted(i, si * diag, j, sj * diag)) - s0);
      }
    }
  }
  rep.worst_directional_change = worst;
  rep.directional_criterion = worst >= -1e-12 * scale;
  rep.is_local_minimum = rep.smooth_criterion || rep.directional_criterion;
  return rep;
}

}  // namespace latfermion
