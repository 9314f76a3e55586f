#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "latfermion/latfermion.hpp"
#include "test_support.hpp"

namespace latfermion {
namespace {

using testing::Dense;
using testing::to_dense;
using testing::operator*;

const SpinMatrix kOneMinusSigma3 = SpinMatrix::identity() - SpinMatrix::sigma3();

TEST(Discriminant, Examples) {
  EXPECT_EQ(discriminant(SpinMatrix::zero()), 0.0);
  EXPECT_DOUBLE_EQ(discriminant(2.0 * kOneMinusSigma3), 4.0);
  EXPECT_EQ(discriminant(Complex{3.5, -1.0} * SpinMatrix::identity()), 0.0);
}

TEST(Discriminant, MatchesDenseTraceFormulaForClosedChains) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    const SpinMatrix a = closed_chain(testing::random_spin_matrix(rng, false));
    const Complex expected = testing::dense_discriminant(to_dense(a));
    EXPECT_NEAR(discriminant(a), expected.real(), 1e-12 * discriminant_scale(a));
    EXPECT_LE(std::abs(expected.imag()), 1e-10 * discriminant_scale(a));
  }
}

TEST(Discriminant, FlagsComplexResidue) {
  // (1 + i)σ¹ is not a closed chain: D = (1 + i)² = 2i.
  const SpinMatrix bogus{0.0, Complex{1.0, 1.0}, 0.0, 0.0};
  EXPECT_THROW((void)discriminant(bogus), ConsistencyError);
}

TEST(Lagrangian, HeavisideCutoff) {
  EXPECT_DOUBLE_EQ(lagrangian(2.0 * kOneMinusSigma3), 4.0);
  // a1 = i/√2 gives D = a1² = −0.5 and A = s + a1σ¹ has the closed-chain form.
  const SpinMatrix negative{1.0, Complex{0.0, std::sqrt(0.5)}, 0.0, 0.0};
  EXPECT_NEAR(discriminant(negative), -0.5, 1e-15);
  EXPECT_EQ(lagrangian(negative), 0.0);
  EXPECT_EQ(lagrangian(SpinMatrix::identity()), 0.0);
}

TEST(CausalClass, BoundaryIsTimelike) {
  EXPECT_EQ(causal_class(2.0 * kOneMinusSigma3), CausalClass::timelike);
  EXPECT_EQ(causal_class(SpinMatrix{1.0, Complex{0.0, std::sqrt(0.5)}, 0.0, 0.0}), CausalClass::spacelike);
  EXPECT_EQ(causal_class(SpinMatrix::zero()), CausalClass::timelike);
  EXPECT_STREQ(to_string(CausalClass::spacelike), "spacelike");
}

TEST(ChainEigenvalues, Examples) {
  const auto id = chain_eigenvalues(SpinMatrix::identity());
  EXPECT_EQ(id.plus, Complex(1.0));
  EXPECT_EQ(id.minus, Complex(1.0));

  for (int k : {1, 3}) {
    // P(0,0) for a single particle at rest: kΦ(𝟙 − σ³).
    const auto ev = chain_eigenvalues(static_cast<double>(k) * kOneMinusSigma3);
    EXPECT_NEAR(std::abs(ev.plus - Complex(4.0 * k * k)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(ev.minus), 0.0, 1e-12);
  }
}

TEST(ChainEigenvalues, AgreeWithDenseCharacteristicRoots) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 2000; ++trial) {
    const SpinMatrix p = testing::random_spin_matrix(rng, false);
    const auto ev = chain_eigenvalues(p);
    const auto dense = testing::dense_eigenvalues(to_dense(closed_chain(p)));
    const double scale = 1.0 + std::abs(dense[0]) + std::abs(dense[1]);
    const bool direct = std::abs(ev.minus - dense[0]) + std::abs(ev.plus - dense[1]) <= 1e-10 * scale;
    const bool swapped = std::abs(ev.minus - dense[1]) + std::abs(ev.plus - dense[0]) <= 1e-10 * scale;
    EXPECT_TRUE(direct || swapped) << "trial " << trial;

    const Complex product = ev.plus * ev.minus;
    EXPECT_GE(product.real(), -1e-12 * scale * scale);
    EXPECT_LE(std::abs(product.imag()), 1e-12 * scale * scale);
  }
}

TEST(ChainEigenvalues, DiscriminantIsQuarterSquaredGap) {
  std::mt19937_64 rng(29);
  int timelike = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const SpinMatrix p = testing::random_spin_matrix(rng, false);
    const SpinMatrix a = closed_chain(p);
    const double d = discriminant(a);
    if (d < 0.0) continue;
    ++timelike;
    const auto ev = chain_eigenvalues(p);
    const Complex gap = ev.plus - ev.minus;
    EXPECT_NEAR((0.25 * gap * gap).real(), d, 1e-10 * std::max(1.0, d));
  }
  EXPECT_GT(timelike, 100);
}

TEST(ChainEigenvalues, RejectsSigmaTwoComponent) {
  EXPECT_THROW((void)chain_eigenvalues(SpinMatrix::sigma2()), InputError);
}

TEST(Weights, Table) {
  EXPECT_EQ(weight_rho_t(0, 8), 1.0);
  EXPECT_EQ(weight_rho_t(1, 8), 2.0);
  EXPECT_EQ(weight_rho_t(7, 8), 2.0);
  EXPECT_EQ(weight_rho_r(0, 6), 1.0);
  EXPECT_EQ(weight_rho_r(1, 6), 26.0);
  EXPECT_EQ(weight_rho_r(2, 6), 98.0);
  EXPECT_THROW((void)weight_rho_t(8, 8), InputError);
  EXPECT_THROW((void)weight_rho_t(-1, 8), InputError);
  EXPECT_THROW((void)weight_rho_r(6, 6), InputError);
}

TEST(Action, EmptyConfiguration) {
  const auto report = action(Configuration({5, 4}));
  EXPECT_EQ(report.total, 0.0);
  ASSERT_EQ(report.rows.size(), 20u);
  for (const auto& row : report.rows) {
    EXPECT_EQ(row.causal, CausalClass::timelike);
    EXPECT_EQ(row.lagrangian, 0.0);
  }
}

TEST(Action, SingleParticleAtRest) {
  for (int k : {1, 2, 5}) {
    for (int omega : {0, -3}) {
      const Configuration c({8, 6}, {{omega, k, 1.0, 0.0}});
      const auto report = action(c);
      for (int n = 0; n < 8; ++n) {
        EXPECT_NEAR(report.at(n, 0).lagrangian, 4.0 * std::pow(k, 4), 1e-10 * std::pow(k, 4));
        for (int m = 1; m < 6; ++m) {
          const double r = c.spec().radius(m);
          const double expected = 4.0 * std::pow(std::sin(k * r), 4) / std::pow(r, 4);
          EXPECT_NEAR(report.at(n, m).lagrangian, expected, 1e-12 * (1.0 + expected));
        }
      }
    }
  }
}

TEST(Action, RowsAreRowMajorAndWeighted) {
  const auto report = action(testing::two_particle_config(0.4, -0.2));
  const auto& spec = report.spec;
  for (int n = 0; n < spec.n_t; ++n) {
    for (int m = 0; m < spec.n_r; ++m) {
      const auto& row = report.rows[static_cast<std::size_t>(n * spec.n_r + m)];
      EXPECT_DOUBLE_EQ(row.t, spec.time(n));
      EXPECT_DOUBLE_EQ(row.r, spec.radius(m));
      EXPECT_EQ(row.weight, weight_rho_t(n, spec.n_t) * weight_rho_r(m, spec.n_r));
    }
  }
  EXPECT_NEAR(recompute_total(report), report.total, 1e-12 * report.total);
}

TEST(Action, MatchesDensePipeline) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Configuration c = testing::random_configuration(rng);
    const double expected = testing::dense_action(c);
    EXPECT_NEAR(action_value(c), expected, 1e-10 * (1.0 + expected)) << "trial " << trial;
  }
}

TEST(Action, KernelAgreesWithReport) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    const Configuration c = testing::random_configuration(rng);
    const ActionKernel kernel(c);
    const auto w = StateWeights::from(c);
    EXPECT_EQ(kernel.total(w), kernel.report(w).total);
    EXPECT_EQ(kernel.total(w), action_value(c));
  }
}

TEST(Action, MinimumOfTwoParticleProblemBeatsOrigin) {
  const double at_origin = action_value(testing::two_particle_config(0.0, 0.0));
  const double near_minimum = action_value(testing::two_particle_config(1.70099579, 0.84414625));
  EXPECT_LT(near_minimum, at_origin);
}

TEST(OriginClosedForm, Examples) {
  EXPECT_EQ(origin_lagrangian_closed_form(Configuration({3, 3})), 0.0);
  EXPECT_DOUBLE_EQ(origin_lagrangian_closed_form(Configuration({3, 3}, {{0, 1, 1.0, 0.0}})), 4.0);
  const double t1 = 0.7, t2 = -1.3;
  const double expected = 4.0 * 9.0 * std::pow(std::cosh(t1) + 2.0 * std::cosh(t2), 2);
  EXPECT_NEAR(origin_lagrangian_closed_form(testing::two_particle_config(t1, t2)), expected, 1e-12 * expected);
}

TEST(OriginClosedForm, AgreesWithActionReportOnRandomConfigurations) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 200; ++trial) {
    const Configuration c = testing::random_configuration(rng);
    const double closed = origin_lagrangian_closed_form(c);
    EXPECT_NEAR(action(c).at(0, 0).lagrangian, closed, 1e-10 * closed) << "trial " << trial;
  }
}

class ActionSymmetries : public ::testing::TestWithParam<int> {};

TEST_P(ActionSymmetries, HoldOnRandomConfigurations) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(1000 + GetParam()));
  for (int trial = 0; trial < 20; ++trial) {
    const Configuration c = testing::random_configuration(rng);
    const ActionReport report = action(c);
    EXPECT_TRUE(check_parity(c).passed);
    EXPECT_TRUE(check_gauge(c).passed);
    EXPECT_TRUE(check_frequency_dilation(c).passed);
    EXPECT_TRUE(check_time_reflection(c).passed);
    EXPECT_TRUE(check_causal_compatibility(report).passed);
    EXPECT_TRUE(check_eigenvalues(c).passed);
    EXPECT_TRUE(check_total(report).passed);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ActionSymmetries, ::testing::Range(0, 5));

TEST(ActionSymmetries, GaugeWithLargeShiftsWrapsModNt) {
  const Configuration c = testing::two_particle_config(0.9, -0.4);
  const double s = action_value(c);
  for (int shift : {8, -8, 17, -23, 1000}) {
    EXPECT_NEAR(action_value(gauge_transformed(c, shift)), s, 1e-10 * s);
  }
}

}  // namespace
}  // namespace latfermion
