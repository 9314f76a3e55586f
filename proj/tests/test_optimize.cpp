#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "latfermion/latfermion.hpp"
#include "test_support.hpp"

namespace latfermion {
namespace {

// Minimizer of the two-particle problem at ω = (−1, −2), from an independent
// dense-grid plus simplex computation.
constexpr double kTau1 = 1.70099579;
constexpr double kTau2 = 0.84414625;
constexpr double kMinimalAction = 3.940534454853787;

const LatticeSpec kSpec{8, 6};

bool close_up_to_parity(const std::vector<double>& tau, double a, double b, double tol) {
  return (std::abs(tau[0] - a) <= tol && std::abs(tau[1] - b) <= tol) ||
         (std::abs(tau[0] + a) <= tol && std::abs(tau[1] + b) <= tol);
}

// --- minimize_tau ----------------------------------------------------------------

struct ScanMinimum {
  double tau;
  double value;
};

ScanMinimum brute_force_1d(const Configuration& c) {
  ScanMinimum best{0.0, std::numeric_limits<double>::infinity()};
  for (int i = -5000; i <= 5000; ++i) {
    const double tau = i * 1e-3;
    const double value = action_value(c.with_taus(std::vector{tau}));
    if (value < best.value) best = {tau, value};
  }
  return best;
}

TEST(MinimizeTau, SingleParticleMatchesBruteForceScan) {
  for (const OccupiedState s : {OccupiedState{-3, 2, 1.0, -1.1}, OccupiedState{-5, 4, 1.0, 2.0},
                                OccupiedState{0, 6, 1.0, 0.3}}) {
    const Configuration c(kSpec, {s});
    const auto oracle = brute_force_1d(c);
    EXPECT_LE(std::abs(oracle.tau), 1e-3) << "k = " << s.k;
    const auto result = minimize_tau(c);
    EXPECT_LE(std::abs(result.config.state(0).tau), 1e-3) << "k = " << s.k;
    EXPECT_LE(result.action_value, oracle.value * (1 + 1e-12));
  }
}

TEST(MinimizeTau, SingleParticleWithUnitMomentumBreaksParity) {
  // At k = 1 the r = 4π/6 shell turns spacelike once sinh τ exceeds about 0.95,
  // so the minimum leaves the origin.
  const Configuration c(kSpec, {{0, 1, 1.0, 0.0}});
  const auto oracle = brute_force_1d(c);
  EXPECT_GT(std::abs(oracle.tau), 1.0);
  EXPECT_LT(oracle.value, action_value(c));
  const auto result = minimize_tau(c);
  EXPECT_NEAR(std::abs(result.config.state(0).tau), std::abs(oracle.tau), 1e-3);
  EXPECT_LE(result.action_value, oracle.value * (1 + 1e-12));
}

TEST(MinimizeTau, TwoParticleProblem) {
  const auto result = minimize_tau(testing::two_particle_config(0.0, 0.0));
  EXPECT_TRUE(close_up_to_parity(result.config.taus(), kTau1, kTau2, 1e-5));
  EXPECT_NEAR(result.action_value, kMinimalAction, 1e-9);
  EXPECT_TRUE(result.converged);
  EXPECT_EQ(result.config.occupation(), (Occupation{{-1, 1}, {-2, 2}}));
}

TEST(MinimizeTau, DeterministicForFixedSeed) {
  const auto c = testing::two_particle_config(0.0, 0.0);
  OptimizerSettings settings;
  settings.seed = 99;
  settings.n_starts = 8;
  const auto a = minimize_tau(c, settings);
  const auto b = minimize_tau(c, settings);
  EXPECT_EQ(a.starts_log, b.starts_log);
  EXPECT_EQ(a, b);
  settings.seed = 100;
  EXPECT_NE(minimize_tau(c, settings).starts_log.at(1).start, a.starts_log.at(1).start);
}

TEST(MinimizeTau, StartScheduleHasOriginAndParityImages) {
  OptimizerSettings settings;
  settings.n_starts = 10;
  const auto starts = start_schedule(3, settings);
  ASSERT_EQ(starts.size(), 11u);
  EXPECT_EQ(starts[0], std::vector<double>(3, 0.0));
  for (std::size_t i = 1; i < starts.size(); i += 2) {
    for (std::size_t d = 0; d < 3; ++d) {
      EXPECT_EQ(starts[i][d], -starts[i + 1][d]);
      EXPECT_LE(std::abs(starts[i][d]), 3.0);
    }
  }
}

TEST(MinimizeTau, NeverWorseThanAnyStart) {
  std::mt19937_64 rng(51);
  OptimizerSettings settings;
  settings.n_starts = 6;
  for (int trial = 0; trial < 10; ++trial) {
    const Configuration c = testing::random_configuration(rng, 6, 3, false);
    const auto result = minimize_tau(c, settings);
    for (const auto& rec : result.starts_log) {
      EXPECT_LE(result.action_value, action_value(c.with_taus(rec.start)) * (1 + 1e-12));
      EXPECT_LE(rec.value, action_value(c.with_taus(rec.start)) * (1 + 1e-12));
    }
  }
}

TEST(MinimizeTau, ParityImageOfOptimumHasSameAction) {
  const auto result = minimize_tau(testing::two_particle_config(0.0, 0.0));
  const double mirrored = action_value(parity_transformed(result.config));
  EXPECT_NEAR(mirrored, result.action_value, 1e-10 * result.action_value);
}

TEST(MinimizeTau, GaugeTranslatedOccupationGivesSameMinimum) {
  const double base = minimize_tau(testing::two_particle_config(0.0, 0.0)).action_value;
  for (int shift : {1, 3, 6}) {
    const auto moved = gauge_transformed(testing::two_particle_config(0.0, 0.0), shift);
    EXPECT_NEAR(minimize_tau(moved).action_value, base, 1e-9 * base) << "shift " << shift;
  }
}

TEST(MinimizeTau, StrictModeKeepsTraceAndPhi) {
  const auto result = minimize_tau(testing::two_particle_config(0.3, 0.3));
  EXPECT_EQ(local_trace(result.config), 3.0);
  for (double phi : result.config.phis()) EXPECT_EQ(phi, 1.0);
}

TEST(MinimizeTau, RelaxedModeProjectsOntoTrace) {
  const Configuration c(kSpec, {{-1, 1, 1.0, 0.0}, {-2, 2, 1.0, 0.0}}, RelaxedNormalization{0.25});
  OptimizerSettings settings;
  settings.n_starts = 6;
  const auto result = minimize_tau(c, settings);
  EXPECT_NEAR(local_trace(result.config), 3.0, 1e-12);
  for (double phi : result.config.phis()) EXPECT_GT(phi, 0.25);
  EXPECT_FALSE(result.config.is_strict());
  EXPECT_LE(result.action_value, action_value(c) * (1 + 1e-12));
  EXPECT_EQ(result.action_value, action_value(result.config));
}

TEST(MinimizeTau, RejectsEmptyConfigurationAndBadSettings) {
  EXPECT_THROW((void)minimize_tau(Configuration(kSpec)), InputError);
  OptimizerSettings bad;
  bad.tau_bound = 0.5;
  EXPECT_THROW((void)minimize_tau(testing::two_particle_config(0, 0), bad), InputError);
  bad = {};
  bad.tol_action = 0.0;
  EXPECT_THROW((void)minimize_tau(testing::two_particle_config(0, 0), bad), InputError);
}

TEST(MinimizeTau, ReportsNonConvergenceWhenBudgetIsTiny) {
  OptimizerSettings settings;
  settings.max_evals = 5;
  settings.n_starts = 2;
  const auto result = minimize_tau(testing::two_particle_config(0.0, 0.0), settings);
  EXPECT_FALSE(result.converged);
  for (const auto& rec : result.starts_log) EXPECT_FALSE(rec.converged);
}

// --- project_trace -----------------------------------------------------------------

TEST(ProjectTrace, Examples) {
  const Configuration feasible(kSpec, {{0, 1, 1.0, 0.0}, {0, 2, 1.0, 0.0}}, RelaxedNormalization{0.5});
  EXPECT_EQ(project_trace(feasible, 3.0), feasible);

  const Configuration one(kSpec, {{0, 1, 2.0, 0.0}}, RelaxedNormalization{0.5});
  EXPECT_DOUBLE_EQ(project_trace(one, 3.0).state(0).phi, 3.0);

  const Configuration small(kSpec, {{0, 3, 0.2, 0.0}}, RelaxedNormalization{0.1});
  const auto projected = project_trace(small, 3.0);
  EXPECT_DOUBLE_EQ(projected.state(0).phi, 1.0);
  EXPECT_GT(projected.state(0).phi, 0.5);
}

TEST(ProjectTrace, ConstraintViolationIsAnError) {
  const Configuration c(kSpec, {{0, 1, 0.6, 0.0}, {0, 2, 2.0, 0.0}}, RelaxedNormalization{0.5});
  EXPECT_THROW((void)project_trace(c, 2.0), ConstraintError);
  EXPECT_THROW((void)project_trace(testing::two_particle_config(0, 0), 3.0), InputError);
}

// --- enumeration ----------------------------------------------------------------------

TEST(Enumerate, TinyLattice) {
  const auto sets = enumerate_occupations({1, 2}, 3);
  ASSERT_EQ(sets.size(), 1u);
  EXPECT_EQ(sets[0], (Occupation{{0, 1}, {0, 2}}));
}

TEST(Enumerate, TwoParticleProblemHasSixtyFourSets) {
  const auto sets = enumerate_occupations(kSpec, 3, 2);
  ASSERT_EQ(sets.size(), 64u);
  std::set<Occupation> unique(sets.begin(), sets.end());
  EXPECT_EQ(unique.size(), 64u);
  for (const auto& s : sets) {
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].k, 1);
    EXPECT_EQ(s[1].k, 2);
  }
  EXPECT_TRUE(std::is_sorted(sets.begin(), sets.end()));
}

TEST(Enumerate, WithoutParticleCount) {
  // {k=3}: 8, {k=1, k=2}: 64, {k=1, k=1, k=1}: C(8,3) = 56.
  EXPECT_EQ(enumerate_occupations(kSpec, 3).size(), 128u);
  const auto singles = enumerate_occupations(kSpec, 1);
  ASSERT_EQ(singles.size(), 8u);
  for (const auto& s : singles) EXPECT_EQ(s.size(), 1u);
  EXPECT_TRUE(enumerate_occupations({1, 2}, 4).empty());
}

TEST(Enumerate, EveryReportedSetSatisfiesTheTraceCondition) {
  for (int f = 1; f <= 6; ++f) {
    for (const auto& occ : enumerate_occupations({3, 4}, f)) {
      int sum = 0;
      for (const auto& p : occ) sum += p.k;
      EXPECT_EQ(sum, f);
      EXPECT_TRUE(std::is_sorted(occ.begin(), occ.end()));
      EXPECT_EQ(std::adjacent_find(occ.begin(), occ.end()), occ.end());
    }
  }
}

// --- symmetry classes --------------------------------------------------------------------

TEST(Symmetry, UnitsModN) {
  EXPECT_EQ(units_mod(8), (std::vector<int>{1, 3, 5, 7}));
  EXPECT_EQ(units_mod(1), (std::vector<int>{1}));
  EXPECT_EQ(units_mod(2), (std::vector<int>{1}));
  EXPECT_EQ(units_mod(6), (std::vector<int>{1, 5}));
}

TEST(Symmetry, RepresentativeOfTwoParticleWinner) {
  EXPECT_EQ(canonical_representative(kSpec, {{-4, 1}, {-5, 2}}), (Occupation{{-1, 1}, {-2, 2}}));
  EXPECT_EQ(canonical_representative(kSpec, {{-2, 1}, {-1, 2}}), (Occupation{{-1, 1}, {-2, 2}}));
  EXPECT_EQ(canonical_representative(kSpec, {{-3, 1}, {-3, 2}}), (Occupation{{-1, 1}, {-1, 2}}));
}

TEST(Symmetry, ClassMembersShareTheirMinimalAction) {
  const Occupation a{{-1, 1}, {-2, 2}}, b{{-6, 1}, {-3, 2}};
  ASSERT_TRUE(find_occupation_map(kSpec, a, b).has_value());
  const double sa = minimize_tau(strict_configuration(kSpec, a)).action_value;
  const double sb = minimize_tau(strict_configuration(kSpec, b)).action_value;
  EXPECT_NEAR(sa, sb, 1e-9 * sa);
}

// --- global search -----------------------------------------------------------------------

TEST(GlobalMinimize, TwoParticleProblem) {
  const auto result = global_minimize(kSpec, 3, 2);
  EXPECT_EQ(result.config.occupation(), (Occupation{{-1, 1}, {-2, 2}}));
  EXPECT_TRUE(close_up_to_parity(result.config.taus(), kTau1, kTau2, 1e-5));
  EXPECT_NEAR(result.action_value, kMinimalAction, 1e-9);

  std::size_t members = 0;
  for (std::size_t i = 0; i < result.branches.size(); ++i) {
    members += result.branches[i].equivalents.size();
    if (i > 0) {
      EXPECT_LE(result.branches[i - 1].action_value, result.branches[i].action_value * (1 + 1e-9));
    }
  }
  EXPECT_EQ(members, 64u);
  EXPECT_EQ(result.branches.front().occupation, result.config.occupation());
  EXPECT_EQ(result.branches.front().action_value, result.action_value);
}

TEST(GlobalMinimize, SingleTimeSliceEqualsDirectMinimization) {
  const LatticeSpec spec{1, 4};
  OptimizerSettings settings;
  settings.n_starts = 8;
  const auto global = global_minimize(spec, 3, 2, settings);
  ASSERT_EQ(global.branches.size(), 1u);
  const auto direct = minimize_tau(strict_configuration(spec, {{0, 1}, {0, 2}}), settings);
  EXPECT_EQ(global.config, direct.config);
  EXPECT_EQ(global.action_value, direct.action_value);
}

TEST(GlobalMinimize, TrivialAndInfeasibleSystems) {
  EXPECT_THROW((void)global_minimize(kSpec, 0, std::nullopt), ConstraintError);
  EXPECT_THROW((void)global_minimize({1, 1}, 2, std::nullopt), ConstraintError);
  EXPECT_THROW((void)global_minimize(kSpec, 3, 4), ConstraintError);
}

// --- local minimum diagnostics ------------------------------------------------------------

TEST(CheckLocalMinimum, TwoParticleLandscape) {
  EXPECT_TRUE(check_local_minimum(testing::two_particle_config(0.0, 0.0)).is_local_minimum);

  const auto polished = minimize_tau(testing::two_particle_config(1.5, 1.0));
  const auto at_optimum = check_local_minimum(polished.config);
  EXPECT_TRUE(at_optimum.is_local_minimum);
  EXPECT_GE(at_optimum.worst_directional_change, -1e-12 * at_optimum.action_value);

  const auto midpoint = check_local_minimum(testing::two_particle_config(0.75, 0.5));
  EXPECT_FALSE(midpoint.is_local_minimum);
  EXPECT_FALSE(midpoint.smooth_criterion);
}

TEST(CheckLocalMinimum, SmoothMinimumOfSingleParticle) {
  const auto rep = check_local_minimum(Configuration(kSpec, {{-2, 3, 1.0, 0.0}}));
  EXPECT_TRUE(rep.smooth_criterion);
  EXPECT_GT(rep.min_hessian_eigenvalue, 0.0);
  EXPECT_FALSE(check_local_minimum(Configuration(kSpec, {{-2, 3, 1.0, 0.4}})).is_local_minimum);
}

}  // namespace
}  // namespace latfermion
