#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "seriesderiv/linalg.hpp"
#include "seriesderiv/selection.hpp"
#include "seriesderiv/simulation.hpp"

using namespace seriesderiv;

namespace {

Sample simulated(TestFunctionId id, std::size_t n, double sigma, std::uint64_t seed) {
  auto rng = substream(seed, {static_cast<std::uint64_t>(id), n});
  return generate_sample(test_function(id), n, sigma, rng);
}

Sample uniform_sine(std::size_t n, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u;
  std::normal_distribution<double> z;
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = u(rng);
    y[i] = std::sin(2.0 * std::numbers::pi * x[i]) + sigma * z(rng);
  }
  return Sample(x, y);
}

GlConfig known_noise(double sigma2) {
  GlConfig c;
  c.sigma2 = sigma2;
  return c;
}

}  // namespace

TEST(PenaltyVHat, ConstantTrigBasisIsZero) {
  const Sample s = uniform_sine(100, 0.1, 1);
  EXPECT_EQ(penalty_v_hat(build_design(s, BasisSpec(BasisFamily::trigonometric_odd(), 1)), 1.0, 100), 0.0);
}

TEST(PenaltyVHat, LinearInSigma2) {
  const Sample s = simulated(TestFunctionId::B2, 500, 0.25, 2);
  const auto d = build_design(s, BasisSpec(BasisFamily::hermite(), 6));
  EXPECT_NEAR(penalty_v_hat(d, 0.125, 500), 2.0 * penalty_v_hat(d, 0.0625, 500), 1e-15);
}

TEST(PenaltyVHat, MatchesOperatorNormDefinition) {
  const Sample s = simulated(TestFunctionId::B1, 400, 0.25, 3);
  const auto d = build_design(s, BasisSpec(BasisFamily::hermite(), 7));
  const Eigen::MatrixXd product = (d.phi.transpose() * d.phi).inverse() * (d.phi_prime.transpose() * d.phi_prime);
  // The product is similar to a PSD matrix, so its spectral radius is the largest eigenvalue.
  const double radius = product.eigenvalues().cwiseAbs().maxCoeff();
  EXPECT_NEAR(penalty_v_hat(d, 0.5, 400), 0.5 * 7.0 / 400.0 * radius, 1e-9 * radius);
}

// Property: V_hat is nondecreasing over stable dimensions of a fixed sample.
TEST(PenaltyVHat, NondecreasingInDimension) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Sample s = simulated(TestFunctionId::B3, 300, 0.25, 100 + seed);
    const auto full = build_design(s, BasisSpec(BasisFamily::hermite(), 20));
    double previous = -1.0;
    for (std::size_t m = 1; m <= 20; ++m) {
      const auto d = full.leading(m);
      if (SymmetricFactor(d.psi_hat).singular()) break;
      const double v = penalty_v_hat(d, 0.0625, 300);
      EXPECT_GE(v, previous * (1.0 - 1e-10)) << "seed " << seed << " m " << m;
      previous = v;
    }
  }
}

TEST(PenaltyVHat, SingularThrows) {
  const Sample s({0.2, 0.2, 0.2}, {1.0, 2.0, 3.0});
  EXPECT_THROW(penalty_v_hat(build_design(s, BasisSpec(BasisFamily::legendre(), 2)), 1.0, 3), SingularGram);
}

TEST(GlSelect, SingletonCollection) {
  const Sample s = simulated(TestFunctionId::B1, 500, 0.25, 4);
  GlConfig c = known_noise(0.0625);
  c.m_grid = {5};
  const auto r = gl_select(s, BasisFamily::hermite(), c);
  EXPECT_EQ(r.trace.chosen_m, 5u);
  ASSERT_EQ(r.trace.records.size(), 1u);
  EXPECT_EQ(r.trace.records[0].a_value, 0.0);
  EXPECT_EQ(r.fit.m, 5u);
  EXPECT_EQ(r.fit.strategy, Strategy::DerivOfProjection);
}

TEST(GlSelect, TieGoesToSmallerDimension) {
  const Sample s = uniform_sine(400, 0.5, 5);
  GlConfig c = known_noise(0.25);
  c.kappa0 = 0.1;
  c.m_grid = {1, 3};
  const auto probe = gl_select(s, BasisFamily::trigonometric_odd(), c);
  const double a1 = probe.trace.records[0].a_value, v3 = probe.trace.records[1].v_hat;
  ASSERT_GT(a1, 0.0);
  ASSERT_GT(v3, 0.0);
  ASSERT_EQ(probe.trace.records[0].v_hat, 0.0);

  c.kappa1 = a1 / v3;
  ASSERT_GE(c.kappa1, c.kappa0);
  EXPECT_EQ(gl_select(s, BasisFamily::trigonometric_odd(), c).trace.chosen_m, 1u);
  c.kappa1 = a1 / v3 * (1.0 - 1e-6);
  EXPECT_EQ(gl_select(s, BasisFamily::trigonometric_odd(), c).trace.chosen_m, 3u);
  c.kappa1 = a1 / v3 * (1.0 + 1e-6);
  EXPECT_EQ(gl_select(s, BasisFamily::trigonometric_odd(), c).trace.chosen_m, 1u);
}

TEST(GlSelect, TraceInvariants) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Sample s = simulated(TestFunctionId::B4, 500, 0.25, 200 + seed);
    const auto r = gl_select(s, BasisFamily::hermite(), known_noise(0.0625));
    double best = std::numeric_limits<double>::infinity();
    double previous_v = -1.0;
    bool chosen_is_member = false;
    for (const auto& rec : r.trace.records) {
      if (!rec.in_collection) {
        EXPECT_TRUE(std::isnan(rec.criterion));
        continue;
      }
      EXPECT_GE(rec.a_value, 0.0);
      EXPECT_GE(rec.v_hat, previous_v * (1.0 - 1e-10));
      previous_v = rec.v_hat;
      best = std::min(best, rec.criterion);
      if (rec.m == r.trace.chosen_m) chosen_is_member = true;
    }
    EXPECT_TRUE(chosen_is_member);
    for (const auto& rec : r.trace.records) {
      if (rec.m == r.trace.chosen_m) {
        EXPECT_LE(rec.criterion, best * (1.0 + 1e-12) + 1e-15);
      }
    }
  }
}

TEST(GlSelect, PenaltiesScaleWithSigma2) {
  const Sample s = simulated(TestFunctionId::B2, 500, 0.25, 6);
  const auto a = gl_select(s, BasisFamily::hermite(), known_noise(0.0625));
  const auto b = gl_select(s, BasisFamily::hermite(), known_noise(0.25));
  ASSERT_EQ(a.trace.records.size(), b.trace.records.size());
  for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
    if (!a.trace.records[i].in_collection) continue;
    EXPECT_NEAR(b.trace.records[i].v_hat, 4.0 * a.trace.records[i].v_hat, 1e-12 * (1.0 + b.trace.records[i].v_hat));
  }
}

TEST(GlSelect, GaussianBumpSelectsSmallDimension) {
  int small = 0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Sample s = simulated(TestFunctionId::B2, 1000, 0.25, 300 + seed);
    if (gl_select(s, BasisFamily::hermite(), known_noise(0.0625)).trace.chosen_m <= 3) ++small;
  }
  EXPECT_GE(small, 40);
}

TEST(GlSelect, EmptyCollectionThrows) {
  const Sample s = simulated(TestFunctionId::B1, 500, 0.25, 7);
  GlConfig c = known_noise(0.0625);
  c.d_constant = 1e-9;
  EXPECT_THROW(gl_select(s, BasisFamily::hermite(), c), EmptyCollection);
  EXPECT_THROW(reuse_select(s, BasisFamily::hermite(), c), EmptyCollection);
}

TEST(GlSelect, TheoryDConstantLeavesNothingAtModerateN) {
  const Sample s = simulated(TestFunctionId::B1, 1000, 0.25, 8);
  GlConfig c = known_noise(0.0625);
  c.f_scale = kTheoryFScale;
  EXPECT_THROW(gl_select(s, BasisFamily::hermite(), c), EmptyCollection);
}

TEST(GlConfigValidation, Rejections) {
  GlConfig c;
  c.kappa0 = 2.0;
  c.kappa1 = 1.0;
  EXPECT_THROW(c.validate(BasisFamily::hermite()), std::invalid_argument);
  c = GlConfig{};
  c.kappa0 = 0.0;
  EXPECT_THROW(c.validate(BasisFamily::hermite()), std::invalid_argument);
  c = GlConfig{};
  c.m_grid = {1, 3, 3};
  EXPECT_THROW(c.validate(BasisFamily::hermite()), std::invalid_argument);
  c.m_grid = {1, 2, 3};
  EXPECT_THROW(c.validate(BasisFamily::trigonometric_odd()), std::invalid_argument);
  EXPECT_NO_THROW(c.validate(BasisFamily::hermite()));
  c.sigma2 = -1.0;
  EXPECT_THROW(c.validate(BasisFamily::hermite()), std::invalid_argument);
}

TEST(DefaultGrid, CapsAndParity) {
  EXPECT_EQ(default_m_grid(BasisFamily::hermite(), 250).back(), 25u);
  EXPECT_EQ(default_m_grid(BasisFamily::hermite(), 4000).back(), 40u);
  const auto trig = default_m_grid(BasisFamily::trigonometric_odd(), 100);
  for (std::size_t m : trig) EXPECT_EQ(m % 2, 1u);
  EXPECT_EQ(default_m_grid(BasisFamily::hermite(), 5), std::vector<std::size_t>{1});
}

TEST(EstimateSigma2, SimulatedNoiseLevel) {
  for (auto id : {TestFunctionId::B2, TestFunctionId::B3}) {
    const Sample s = simulated(id, 4000, 0.25, 9);
    const double est = estimate_sigma2(s, BasisFamily::hermite(), 20);
    EXPECT_GE(est, 0.055);
    EXPECT_LE(est, 0.07);
  }
}

TEST(EstimateSigma2, NoiselessInSpanIsZero) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> z;
  std::vector<double> x(300), y(300);
  const BasisSpec spec(BasisFamily::hermite(), 3);
  for (int i = 0; i < 300; ++i) {
    x[i] = z(rng);
    const auto v = eval_basis(spec, x[i]);
    y[i] = v(0) - 2.0 * v(2);
  }
  EXPECT_LE(estimate_sigma2(Sample(x, y), BasisFamily::hermite(), 8), 1e-20);
}

TEST(EstimateSigma2, ShiftInvariantWhenConstantsAreInSpan) {
  const Sample s = uniform_sine(500, 0.3, 11);
  std::vector<double> shifted(s.y());
  for (auto& v : shifted) v += 7.5;
  const double a = estimate_sigma2(s, BasisFamily::trigonometric_odd(), 11);
  const double b = estimate_sigma2(Sample(s.x(), shifted), BasisFamily::trigonometric_odd(), 11);
  EXPECT_NEAR(a, b, 1e-9 * a);
}

TEST(EstimateSigma2, RequiresEnoughObservations) {
  const Sample s = uniform_sine(20, 0.3, 12);
  EXPECT_THROW(estimate_sigma2(s, BasisFamily::trigonometric_odd(), 10), std::invalid_argument);
}

TEST(OracleSelect, NoiselessBasisElement) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const BasisSpec spec(BasisFamily::legendre(), 3);
  std::vector<double> x(200), y(200);
  for (int i = 0; i < 200; ++i) {
    x[i] = u(rng);
    y[i] = eval_basis(spec, x[i])(2);
  }
  const std::vector<std::size_t> grid{1, 2, 3, 4, 5, 6};
  const auto truth = [&](double t) { return eval_basis_derivative(spec, t)(2); };
  const auto r = oracle_select(Sample(x, y), BasisFamily::legendre(), grid, truth, {-0.9, 0.9});
  EXPECT_EQ(r.m, 3u);
  EXPECT_LE(r.error, 1e-20);
  EXPECT_EQ(r.errors.size(), 6u);
  EXPECT_GT(r.errors[1].second, 1.0);
}

TEST(OracleSelect, RegressionTarget) {
  const Sample s = simulated(TestFunctionId::B2, 2000, 0.0, 14);
  const std::vector<std::size_t> grid{1, 2, 3};
  const auto r = oracle_select(s, BasisFamily::hermite(), grid, test_function(TestFunctionId::B2).b, {-2.0, 2.0},
                               Target::Regression);
  EXPECT_EQ(r.m, 1u);
  EXPECT_LE(r.error, 1e-20);
}

TEST(OracleSelect, GridDoublingChangesErrorByLessThanOnePercent) {
  const Sample s = simulated(TestFunctionId::B1, 1000, 0.25, 15);
  const Interval trimmed = trim_interval(s);
  const auto grid = default_m_grid(BasisFamily::hermite(), 1000);
  const auto fine = oracle_select(s, BasisFamily::hermite(), grid, test_function(TestFunctionId::B1).b_prime, trimmed,
                                  Target::Derivative, 1024);
  const auto base = oracle_select(s, BasisFamily::hermite(), grid, test_function(TestFunctionId::B1).b_prime, trimmed);
  EXPECT_EQ(fine.m, base.m);
  EXPECT_LE(std::abs(fine.error - base.error), 0.01 * fine.error);
}

TEST(OracleSelect, Errors) {
  const Sample s({0.2, 0.2, 0.2}, {1.0, 2.0, 3.0});
  const std::vector<std::size_t> grid{2, 3};
  EXPECT_THROW(oracle_select(s, BasisFamily::legendre(), grid, [](double) { return 0.0; }, {-1.0, 1.0}),
               EmptyCollection);
  EXPECT_THROW(oracle_select(s, BasisFamily::legendre(), std::vector<std::size_t>{}, [](double) { return 0.0; },
                             {-1.0, 1.0}),
               std::invalid_argument);
}

TEST(ReuseSelect, NoiselessBasisElementPicksItsDimension) {
  std::mt19937_64 rng(16);
  std::normal_distribution<double> z;
  const BasisSpec spec(BasisFamily::hermite(), 4);
  std::vector<double> x(400), y(400);
  for (int i = 0; i < 400; ++i) {
    x[i] = z(rng);
    y[i] = eval_basis(spec, x[i])(3);
  }
  const auto r = reuse_select(Sample(x, y), BasisFamily::hermite(), known_noise(0.01));
  EXPECT_EQ(r.m_for_b, 4u);
  EXPECT_EQ(r.fit.m, 4u);
}

TEST(ReuseSelect, TracksTheDerivativeOracleOnQuadratic) {
  int close = 0;
  const auto fn = test_function(TestFunctionId::B3);
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Sample s = simulated(TestFunctionId::B3, 1000, 0.25, 400 + seed);
    const auto reuse = reuse_select(s, BasisFamily::hermite(), known_noise(0.0625));
    bool member = false;
    for (const auto& rec : reuse.trace.records) member = member || (rec.m == reuse.m_for_b && rec.in_collection);
    EXPECT_TRUE(member);
    const auto grid = default_m_grid(BasisFamily::hermite(), 1000);
    const auto oracle = oracle_select(s, BasisFamily::hermite(), grid, fn.b_prime, trim_interval(s));
    const long gap = static_cast<long>(reuse.m_for_b) - static_cast<long>(oracle.m);
    if (std::abs(gap) <= 2) ++close;
  }
  EXPECT_GE(close, 35);
}

TEST(Quadrature, TrapezoidDistance) {
  const auto grid = uniform_grid({0.0, 2.0}, 5);
  EXPECT_DOUBLE_EQ(grid[1], 0.5);
  EXPECT_DOUBLE_EQ(grid.back(), 2.0);
  const std::vector<double> fit{1, 1, 1, 1, 1}, truth{0, 0, 0, 0, 0};
  EXPECT_DOUBLE_EQ(squared_l2_distance(fit, truth, {0.0, 2.0}), 2.0);
  EXPECT_THROW(uniform_grid({0.0, 1.0}, 1), std::invalid_argument);
}
