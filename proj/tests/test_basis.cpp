#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "seriesderiv/basis.hpp"

using namespace seriesderiv;

namespace {

const double kSqrt2 = std::numbers::sqrt2;
const double kPi = std::numbers::pi;

std::vector<double> values(const BasisSpec& spec, double x) {
  std::vector<double> out(spec.m());
  eval_basis_into(spec, x, out);
  return out;
}

std::vector<double> derivatives(const BasisSpec& spec, double x) {
  std::vector<double> out(spec.m());
  eval_basis_derivative_into(spec, x, out);
  return out;
}

std::vector<BasisFamily> all_families() {
  return {BasisFamily::trigonometric_odd(), BasisFamily::half_trigonometric(-1.5, 2.5), BasisFamily::laguerre(),
          BasisFamily::hermite(), BasisFamily::legendre()};
}

// A point drawn well inside the support, away from the boundary.
double random_interior(const BasisFamily& family, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  switch (family.kind()) {
    case FamilyKind::Hermite: return -6.0 + 12.0 * u(rng);
    case FamilyKind::Laguerre: return 0.01 + 30.0 * u(rng);
    default: {
      const Interval s = family.support();
      return s.lo + (0.001 + 0.998 * u(rng)) * s.length();
    }
  }
}

}  // namespace

TEST(BasisEval, TrigOddAtZero) {
  const auto v = values(BasisSpec(BasisFamily::trigonometric_odd(), 3), 0.0);
  EXPECT_DOUBLE_EQ(v[0], 1.0);
  EXPECT_DOUBLE_EQ(v[1], kSqrt2);
  EXPECT_NEAR(v[2], 0.0, 1e-15);
}

TEST(BasisEval, LaguerreAtZeroIsSqrt2) {
  const auto v = values(BasisSpec(BasisFamily::laguerre(), 2), 0.0);
  EXPECT_NEAR(v[0], kSqrt2, 1e-15);
  EXPECT_NEAR(v[1], kSqrt2, 1e-15);
}

TEST(BasisEval, LegendreAtZero) {
  const auto v = values(BasisSpec(BasisFamily::legendre(), 2), 0.0);
  EXPECT_NEAR(v[0], 1.0 / kSqrt2, 1e-15);
  EXPECT_NEAR(v[1], 0.0, 1e-15);
}

TEST(BasisEval, HermiteAtZero) {
  const auto v = values(BasisSpec(BasisFamily::hermite(), 1), 0.0);
  EXPECT_NEAR(v[0], std::pow(kPi, -0.25), 1e-15);
}

TEST(BasisEval, ZeroOutsideSupport) {
  for (double x : {-0.1, 1.1}) {
    for (double v : values(BasisSpec(BasisFamily::trigonometric_odd(), 5), x)) EXPECT_EQ(v, 0.0);
  }
  for (double v : values(BasisSpec(BasisFamily::laguerre(), 4), -0.5)) EXPECT_EQ(v, 0.0);
  for (double v : values(BasisSpec(BasisFamily::legendre(), 4), 1.5)) EXPECT_EQ(v, 0.0);
  for (double v : values(BasisSpec(BasisFamily::half_trigonometric(0.0, 2.0), 4), 2.5)) EXPECT_EQ(v, 0.0);
}

TEST(BasisEval, MatchesExplicitPolynomialFormulas) {
  for (int j = 0; j < 11; ++j) {
    const BasisSpec herm(BasisFamily::hermite(), 11), lag(BasisFamily::laguerre(), 11), leg(BasisFamily::legendre(), 11);
    for (double x = -4.0; x <= 4.0; x += 0.37) {
      EXPECT_NEAR(values(herm, x)[j], oracle::hermite_function(j, x), 1e-10) << "j=" << j << " x=" << x;
    }
    for (double x = 0.0; x <= 10.0; x += 0.41) {
      EXPECT_NEAR(values(lag, x)[j], oracle::laguerre_function(j, x), 1e-9) << "j=" << j << " x=" << x;
    }
    for (double x = -1.0; x <= 1.0; x += 0.05) {
      EXPECT_NEAR(values(leg, x)[j], oracle::legendre_function(j, x), 1e-10) << "j=" << j << " x=" << x;
    }
  }
}

TEST(BasisEval, HalfTrigDefinition) {
  const double a = -1.5, b = 2.5, len = b - a;
  const BasisSpec spec(BasisFamily::half_trigonometric(a, b), 5);
  for (double x : {-1.5, -0.3, 0.7, 2.5}) {
    const double u = (x - a) / len;
    const auto v = values(spec, x);
    EXPECT_NEAR(v[0], 1.0 / std::sqrt(len), 1e-15);
    EXPECT_NEAR(v[1], std::sqrt(2.0 / len) * std::sin(kPi * u), 1e-14);
    EXPECT_NEAR(v[2], std::sqrt(2.0 / len) * std::cos(kPi * u), 1e-14);
    EXPECT_NEAR(v[3], std::sqrt(2.0 / len) * std::sin(2.0 * kPi * u), 1e-14);
    EXPECT_NEAR(v[4], std::sqrt(2.0 / len) * std::cos(2.0 * kPi * u), 1e-14);
  }
}

TEST(BasisEval, ExtendedHalfTrigEvaluatesOutsideInterval) {
  const BasisFamily family = BasisFamily::half_trigonometric(0.0, 2.0).extended_beyond_interval();
  EXPECT_TRUE(family.extends_beyond_interval());
  EXPECT_FALSE(family.support().bounded());
  EXPECT_EQ(family.scale_interval(), (Interval{0.0, 2.0}));
  const BasisSpec spec(family, 3);
  const auto v = values(spec, 3.0);
  EXPECT_NEAR(v[1], std::sin(kPi * 1.5), 1e-14);
  EXPECT_NEAR(v[2], std::cos(kPi * 1.5), 1e-14);
  EXPECT_EQ(family.with_interval(1.0, 3.0).scale_interval(), (Interval{1.0, 3.0}));
  EXPECT_TRUE(family.with_interval(1.0, 3.0).extends_beyond_interval());
  EXPECT_THROW((void)BasisFamily::hermite().extended_beyond_interval(), std::invalid_argument);
}

TEST(BasisDerivative, Examples) {
  EXPECT_NEAR(derivatives(BasisSpec(BasisFamily::laguerre(), 1), 0.0)[0], -kSqrt2, 1e-15);
  EXPECT_NEAR(derivatives(BasisSpec(BasisFamily::hermite(), 1), 0.0)[0], 0.0, 1e-15);
  const auto t = derivatives(BasisSpec(BasisFamily::trigonometric_odd(), 3), 0.0);
  EXPECT_NEAR(t[0], 0.0, 1e-15);
  EXPECT_NEAR(t[1], 0.0, 1e-12);
  EXPECT_NEAR(t[2], 2.0 * kPi * kSqrt2, 1e-12);
}

TEST(BasisDerivative, OutsideSupportThrows) {
  EXPECT_THROW(derivatives(BasisSpec(BasisFamily::laguerre(), 2), -1e-3), std::domain_error);
  EXPECT_THROW(derivatives(BasisSpec(BasisFamily::legendre(), 2), 1.01), std::domain_error);
  EXPECT_NO_THROW(derivatives(BasisSpec(BasisFamily::laguerre(), 2), 0.0));
}

// Property: recursions agree with central differences (step 1e-5) to 1e-6
// relative to the size of the derivative vector.
TEST(BasisDerivative, MatchesFiniteDifferences) {
  std::mt19937_64 rng(11);
  const double h = 1e-5;
  for (const auto& family : all_families()) {
    const std::size_t m = family.kind() == FamilyKind::TrigonometricOdd ? 21 : 20;
    const BasisSpec spec(family, m);
    for (int trial = 0; trial < 200; ++trial) {
      const double x = random_interior(family, rng);
      const auto d = derivatives(spec, x);
      const auto plus = values(spec, x + h), minus = values(spec, x - h);
      double scale = 1.0;
      for (double v : d) scale = std::max(scale, std::abs(v));
      for (std::size_t j = 0; j < m; ++j) {
        const double fd = (plus[j] - minus[j]) / (2.0 * h);
        ASSERT_LE(std::abs(d[j] - fd), 1e-6 * scale)
            << family.name() << " j=" << j << " x=" << x << " rec=" << d[j] << " fd=" << fd;
      }
    }
  }
}

TEST(DeltaMatrix, Examples) {
  const auto lag = delta_matrix(BasisSpec(BasisFamily::laguerre(), 2)).entries;
  ASSERT_EQ(lag.rows(), 2);
  ASSERT_EQ(lag.cols(), 2);
  EXPECT_DOUBLE_EQ(lag(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(lag(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(lag(1, 0), -2.0);
  EXPECT_DOUBLE_EQ(lag(1, 1), -1.0);

  const auto herm = delta_matrix(BasisSpec(BasisFamily::hermite(), 2)).entries;
  ASSERT_EQ(herm.rows(), 2);
  ASSERT_EQ(herm.cols(), 3);
  const Eigen::Matrix<double, 2, 3> herm_expected{{0.0, -1.0 / kSqrt2, 0.0}, {1.0 / kSqrt2, 0.0, -1.0}};
  EXPECT_LE((herm - herm_expected).cwiseAbs().maxCoeff(), 1e-15);

  const auto trig = delta_matrix(BasisSpec(BasisFamily::trigonometric_odd(), 3)).entries;
  const Eigen::Matrix3d trig_expected{{0, 0, 0}, {0, 0, -2 * kPi}, {0, 2 * kPi, 0}};
  EXPECT_LE((trig - trig_expected).cwiseAbs().maxCoeff(), 1e-15);

  const auto leg = delta_matrix(BasisSpec(BasisFamily::legendre(), 2)).entries;
  const Eigen::Matrix2d leg_expected{{0, 0}, {std::sqrt(3.0), 0}};
  EXPECT_LE((leg - leg_expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DeltaMatrix, Shapes) {
  for (const auto& family : all_families()) {
    for (std::size_t m = 1; m <= 9; m += 2) {
      const BasisSpec spec(family, m);
      const auto d = delta_matrix(spec);
      EXPECT_EQ(d.entries.rows(), static_cast<Eigen::Index>(m));
      EXPECT_EQ(d.entries.cols(), static_cast<Eigen::Index>(m + spec.p()));
      EXPECT_EQ(d.m, m);
    }
  }
}

TEST(DeltaMatrix, StructuralInvariants) {
  const auto lag = delta_matrix(BasisSpec(BasisFamily::laguerre(), 8)).entries;
  const auto leg = delta_matrix(BasisSpec(BasisFamily::legendre(), 8)).entries;
  for (int i = 0; i < 8; ++i) {
    for (int j = i + 1; j < 8; ++j) {
      EXPECT_EQ(lag(i, j), 0.0);
      EXPECT_EQ(leg(i, j), 0.0);
    }
    EXPECT_EQ(leg(i, i), 0.0);
  }
  // Hermite: only the two off-diagonals next to the main one.
  const auto herm = delta_matrix(BasisSpec(BasisFamily::hermite(), 8)).entries;
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 9; ++j) {
      if (std::abs(i - j) != 1) {
        EXPECT_EQ(herm(i, j), 0.0) << i << "," << j;
      }
    }
  }
  // Odd-m trig: zero first row, antisymmetric 2x2 blocks.
  const auto trig = delta_matrix(BasisSpec(BasisFamily::trigonometric_odd(), 9)).entries;
  EXPECT_EQ(trig.row(0).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_LE((trig + trig.transpose()).cwiseAbs().maxCoeff(), 0.0);
  for (int i = 1; i < 9; ++i) {
    for (int j = 1; j < 9; ++j) {
      const bool same_block = (i + 1) / 2 == (j + 1) / 2 && i != j;
      if (!same_block) {
        EXPECT_EQ(trig(i, j), 0.0);
      }
    }
  }
}

// Property: Phi'_m = Delta applied to Phi_{m+p}, 1000 random points, m <= 30.
TEST(DeltaMatrix, LinkExactness) {
  std::mt19937_64 rng(7);
  for (const auto& family : all_families()) {
    for (std::size_t m : {1u, 2u, 5u, 12u, 19u, 29u, 30u}) {
      if (!family.admits(m)) continue;
      const BasisSpec spec(family, m);
      const auto delta = delta_matrix(spec).entries;
      for (int trial = 0; trial < 1000; ++trial) {
        const double x = random_interior(family, rng);
        const Eigen::VectorXd via_delta = delta * eval_basis(spec.extended(), x);
        const Eigen::VectorXd direct = eval_basis_derivative(spec, x);
        const double tol = 1e-9 * (1.0 + via_delta.cwiseAbs().maxCoeff());
        ASSERT_LE((direct - via_delta).cwiseAbs().maxCoeff(), tol) << family.name() << " m=" << m << " x=" << x;
      }
    }
  }
}

TEST(BasisSpecValidation, RejectsInvalidDimensions) {
  EXPECT_THROW(BasisSpec(BasisFamily::hermite(), 0), std::invalid_argument);
  EXPECT_THROW(BasisSpec(BasisFamily::trigonometric_odd(), 4), std::invalid_argument);
  EXPECT_NO_THROW(BasisSpec(BasisFamily::half_trigonometric(0, 1), 4));
  EXPECT_THROW(BasisFamily::half_trigonometric(1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(BasisFamily::from_name("fourier"), std::invalid_argument);
}

TEST(BasisSpecValidation, Overflow) {
  EXPECT_EQ(BasisSpec(BasisFamily::hermite(), 4).p(), 1u);
  EXPECT_EQ(BasisSpec(BasisFamily::laguerre(), 4).p(), 0u);
  EXPECT_EQ(BasisSpec(BasisFamily::legendre(), 4).p(), 0u);
  EXPECT_EQ(BasisSpec(BasisFamily::trigonometric_odd(), 5).p(), 0u);
  EXPECT_EQ(BasisSpec(BasisFamily::half_trigonometric(0, 1), 4).p(), 1u);
  EXPECT_EQ(BasisSpec(BasisFamily::half_trigonometric(0, 1), 5).p(), 0u);
}

TEST(BasisSpecValidation, FromName) {
  EXPECT_EQ(BasisFamily::from_name("hermite").kind(), FamilyKind::Hermite);
  EXPECT_EQ(BasisFamily::from_name("half-trig").kind(), FamilyKind::HalfTrigonometric);
  EXPECT_EQ(BasisFamily::from_name("trig").kind(), FamilyKind::TrigonometricOdd);
  EXPECT_EQ(BasisFamily::from_name("laguerre").name(), "laguerre");
  EXPECT_EQ(BasisFamily::from_name("legendre").support(), (Interval{-1.0, 1.0}));
}

TEST(LFactor, Examples) {
  EXPECT_DOUBLE_EQ(l_factor(BasisSpec(BasisFamily::trigonometric_odd(), 5)), 5.0);
  EXPECT_DOUBLE_EQ(l_factor(BasisSpec(BasisFamily::laguerre(), 3)), 6.0);
  EXPECT_DOUBLE_EQ(l_factor(BasisSpec(BasisFamily::legendre(), 4)), 8.0);
}

TEST(LFactor, HermiteIsAGridSupremumBelowTheAnalyticBound) {
  std::mt19937_64 rng(3);
  for (std::size_t m : {1u, 2u, 5u, 10u, 20u, 40u}) {
    const BasisSpec spec(BasisFamily::hermite(), m);
    const double l = l_factor(spec);
    EXPECT_LE(l, hermite_l_factor_bound(m) * (1.0 + 1e-12));
    for (int trial = 0; trial < 300; ++trial) {
      const double x = random_interior(spec.family(), rng);
      EXPECT_LE(eval_basis(spec, x).squaredNorm(), l * (1.0 + 1e-3));
    }
  }
  EXPECT_NEAR(l_factor(BasisSpec(BasisFamily::hermite(), 1)), 1.0 / std::sqrt(kPi), 1e-9);
}

TEST(LFactor, HalfTrigIsTheSumSupremum) {
  const BasisSpec odd(BasisFamily::half_trigonometric(0.0, 4.0), 5);
  EXPECT_DOUBLE_EQ(l_factor(odd), 5.0 / 4.0);
  const BasisSpec even(BasisFamily::half_trigonometric(0.0, 4.0), 4);
  EXPECT_DOUBLE_EQ(l_factor(even), 5.0 / 4.0);
}

TEST(LPrimeFactor, Examples) {
  std::vector<double> grid;
  for (int i = 0; i <= 2000; ++i) grid.push_back(i / 2000.0);
  EXPECT_EQ(l_prime_factor(BasisSpec(BasisFamily::trigonometric_odd(), 1), grid), 0.0);
  EXPECT_NEAR(l_prime_factor(BasisSpec(BasisFamily::trigonometric_odd(), 3), grid), 8.0 * kPi * kPi,
              8.0 * kPi * kPi * 1e-3);

  // Hermite m=2: grid value against an independent grid maximum at double resolution.
  std::vector<double> coarse, fine;
  for (int i = 0; i <= 1200; ++i) coarse.push_back(-6.0 + i * 0.01);
  for (int i = 0; i <= 2400; ++i) fine.push_back(-6.0 + i * 0.005);
  double fine_max = 0.0;
  for (double x : fine) {
    const double d0 = -x * oracle::hermite_function(0, x);
    const double d1 = std::sqrt(2.0) * oracle::hermite_function(0, x) - x * oracle::hermite_function(1, x);
    fine_max = std::max(fine_max, d0 * d0 + d1 * d1);
  }
  const double value = l_prime_factor(BasisSpec(BasisFamily::hermite(), 2), coarse);
  EXPECT_LE(value, fine_max * (1.0 + 1e-12));
  EXPECT_GE(value, fine_max * (1.0 - 1e-3));
}

TEST(LPrimeFactor, Errors) {
  EXPECT_THROW(l_prime_factor(BasisSpec(BasisFamily::hermite(), 2), std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(l_prime_factor(BasisSpec(BasisFamily::legendre(), 2), std::vector<double>{2.0, 3.0}),
               std::invalid_argument);
}

TEST(BasisBounds, HermiteUniformBound) {
  const BasisSpec spec(BasisFamily::hermite(), 31);
  const double bound = std::pow(kPi, -0.25);
  for (double x = -12.0; x <= 12.0; x += 0.013) {
    for (double v : values(spec, x)) ASSERT_LE(std::abs(v), bound * (1.0 + 1e-12)) << x;
  }
}

TEST(BasisBounds, LaguerreUniformBound) {
  const BasisSpec spec(BasisFamily::laguerre(), 31);
  for (double x = 0.0; x <= 150.0; x += 0.029) {
    for (double v : values(spec, x)) ASSERT_LE(std::abs(v), kSqrt2 * (1.0 + 1e-12)) << x;
  }
}

// Property: <phi_j, phi_k> = delta_jk within 1e-6 for j, k <= 20.
TEST(Orthonormality, WholeFamilies) {
  struct Case {
    BasisFamily family;
    double lo, hi;
    int panels;
  };
  const std::vector<Case> cases{{BasisFamily::trigonometric_odd(), 0.0, 1.0, 40},
                                {BasisFamily::laguerre(), 0.0, 160.0, 800},
                                {BasisFamily::hermite(), -20.0, 20.0, 400},
                                {BasisFamily::legendre(), -1.0, 1.0, 20}};
  for (const auto& c : cases) {
    const std::size_t m = c.family.kind() == FamilyKind::TrigonometricOdd ? 21 : 20;
    const BasisSpec spec(c.family, m);
    for (std::size_t j = 0; j < 20; ++j) {
      for (std::size_t k = j; k < 20; ++k) {
        const double ip = oracle::integrate(
            [&](double x) {
              const auto v = values(spec, x);
              return v[j] * v[k];
            },
            c.lo, c.hi, c.panels);
        EXPECT_NEAR(ip, j == k ? 1.0 : 0.0, 1e-6) << c.family.name() << " j=" << j << " k=" << k;
      }
    }
  }
}

// The half-trig family mixes sines and cosines of pi j u; each subfamily is
// orthonormal on [a, b], the union is not.
TEST(Orthonormality, HalfTrigSubfamilies) {
  const double a = -1.5, b = 2.5;
  const BasisSpec spec(BasisFamily::half_trigonometric(a, b), 21);
  auto inner = [&](std::size_t j, std::size_t k) {
    return oracle::integrate(
        [&](double x) {
          const auto v = values(spec, x);
          return v[j] * v[k];
        },
        a, b, 40);
  };
  std::vector<std::size_t> cosines{0}, sines;
  for (std::size_t i = 1; i < 21; ++i) (i % 2 == 0 ? cosines : sines).push_back(i);
  for (const auto* group : {&cosines, &sines}) {
    for (std::size_t p = 0; p < group->size(); ++p) {
      for (std::size_t q = p; q < group->size(); ++q) {
        EXPECT_NEAR(inner((*group)[p], (*group)[q]), p == q ? 1.0 : 0.0, 1e-6);
      }
    }
  }
  // sin(pi u) against cos(2 pi u): (1/pi)(1/3 - 1) * 2 / L * L / 2 scaled = -4/(3 pi)
  EXPECT_NEAR(inner(1, 4), -4.0 / (3.0 * kPi), 1e-9);
}
