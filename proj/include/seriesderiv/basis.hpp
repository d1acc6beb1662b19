#pragma once

/**
 * @file basis.hpp
 * @brief Orthonormal series bases with exact derivative links.
 *
 * Every family exposes phi_1..phi_m on its support I and the derivatives
 * phi'_1..phi'_m. The derivatives stay inside a slightly larger space:
 * phi'_j lies in span{phi_1, ..., phi_{j+p}}, so there is a link matrix
 * Delta of shape m x (m+p) whose row j expands phi'_j.
 *
 *   family             support   p               L(m)
 *   TrigonometricOdd   [0,1]     0 (odd m only)  m
 *   HalfTrigonometric  [a,b]     0 / 1 (parity)  (m + [m even]) / (b-a)
 *   Laguerre           [0,inf)   0               2m
 *   Hermite            R         1               sup sum h_j^2 (grid, cached)
 *   Legendre           [-1,1]    0               m^2 / 2
 *
 * Functions are treated as phi_j * 1_I: values outside I are zero.
 * Polynomial families are evaluated with normalized three-term recurrences.
 */

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace seriesderiv {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double x) const { return x >= lo && x <= hi; }
  double length() const { return hi - lo; }
  bool bounded() const {
    return lo > -std::numeric_limits<double>::infinity() &&
           hi < std::numeric_limits<double>::infinity();
  }
  bool operator==(const Interval&) const = default;
};

enum class FamilyKind { TrigonometricOdd, HalfTrigonometric, Laguerre, Hermite, Legendre };

/// A basis family; HalfTrigonometric also carries its rescaling interval.
class BasisFamily {
 public:
  static BasisFamily trigonometric_odd();
  static BasisFamily half_trigonometric(double a, double b);
  static BasisFamily laguerre();
  static BasisFamily hermite();
  static BasisFamily legendre();

  /// Parses "trig", "half-trig", "laguerre", "hermite", "legendre".
  /// half-trig defaults to [0,1]; use with_interval to rescale.
  static BasisFamily from_name(std::string_view name);

  FamilyKind kind() const { return kind_; }
  Interval support() const;
  std::string name() const;

  /// Whether dimension m is admissible (odd m only for TrigonometricOdd).
  bool admits(std::size_t m) const;

  /// Derivative overflow p for dimension m.
  std::size_t overflow(std::size_t m) const;

  /// Same family on a new interval; only meaningful for HalfTrigonometric.
  BasisFamily with_interval(double a, double b) const;

  /// HalfTrigonometric only: keep the scaling to [a, b] but evaluate the
  /// sines and cosines on the whole line, so design points outside [a, b]
  /// still enter the fit. The support becomes (-inf, inf).
  BasisFamily extended_beyond_interval() const;
  bool extends_beyond_interval() const { return beyond_; }

  /// Interval the basis is scaled to ([a, b] for HalfTrigonometric, else the support).
  Interval scale_interval() const { return interval_; }

  bool operator==(const BasisFamily&) const = default;

 private:
  BasisFamily(FamilyKind kind, Interval interval) : kind_(kind), interval_(interval) {}

  FamilyKind kind_;
  Interval interval_;
  bool beyond_ = false;
};

/// A family together with a dimension m >= 1.
class BasisSpec {
 public:
  /// Throws std::invalid_argument if m is not admissible for the family.
  BasisSpec(BasisFamily family, std::size_t m);

  const BasisFamily& family() const { return family_; }
  FamilyKind kind() const { return family_.kind(); }
  std::size_t m() const { return m_; }
  std::size_t p() const { return family_.overflow(m_); }
  Interval support() const { return family_.support(); }

  /// The (m + p)-dimensional spec of the same family, hosting the derivatives.
  BasisSpec extended() const { return BasisSpec(family_, m_ + p()); }

  /// Same family with another dimension; the caller must respect admissibility.
  BasisSpec with_dimension(std::size_t m) const { return BasisSpec(family_, m); }

  bool operator==(const BasisSpec&) const = default;

 private:
  BasisFamily family_;
  std::size_t m_;
};

/// Writes (phi_1(x), ..., phi_m(x)) into out (size m). Zero outside the support.
void eval_basis_into(const BasisSpec& spec, double x, std::span<double> out);

/// Writes (phi'_1(x), ..., phi'_m(x)) into out. Throws std::domain_error if x
/// is outside the closed support. At a boundary the one-sided value is returned.
void eval_basis_derivative_into(const BasisSpec& spec, double x, std::span<double> out);

Eigen::VectorXd eval_basis(const BasisSpec& spec, double x);
Eigen::VectorXd eval_basis_derivative(const BasisSpec& spec, double x);

/// Row j holds the coefficients of phi'_j in (phi_1, ..., phi_{m+p}).
struct DerivativeLinkMatrix {
  Eigen::MatrixXd entries;
  FamilyKind kind;
  std::size_t m;
};

DerivativeLinkMatrix delta_matrix(const BasisSpec& spec);

/// L(m) = sup_x sum_j phi_j(x)^2, per family.
double l_factor(const BasisSpec& spec);

/// Analytic Hermite bound m / sqrt(pi), valid since |h_j| <= pi^{-1/4}.
double hermite_l_factor_bound(std::size_t m);

/// Grid maximum of sum_j phi'_j(x)^2. A lower bound on the true supremum.
/// Grid points outside the support are skipped. Throws on an empty grid.
double l_prime_factor(const BasisSpec& spec, std::span<const double> probe_grid);

}  // namespace seriesderiv
