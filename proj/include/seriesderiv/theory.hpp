#pragma once

/**
 * @file theory.hpp
 * @brief Quadrature-backed population quantities used as test oracles.
 *
 * Projection coefficients <b, phi_j>, the population Gram Psi_m = (<phi_j, phi_k>_f),
 * the weighted link matrices
 *     Delta^{f,1} = Psi_{m+p}^{1/2}  Delta^T Psi_m^{-1/2}
 *     Delta^{f,2} = Psi_{m+p}^{-1/2} Delta^T Psi_m^{1/2}
 * and the gap ||b'_m - (b')_m||^2 between the derivative of the projection and
 * the projection of the derivative, with per-family closed forms.
 *
 * Infinite supports are truncated where the basis weight (e^{-x}, e^{-x^2/2})
 * has decayed far below double precision.
 */

#include <cstddef>
#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "seriesderiv/basis.hpp"
#include "seriesderiv/quadrature.hpp"

namespace seriesderiv {

/// A bounded probability density. The constructor checks by quadrature over
/// `window` (the support, clipped to a finite range) that it integrates to 1.
class DensitySpec {
 public:
  DensitySpec(std::function<double(double)> pdf, Interval support, double sup_bound, Interval window);

  static DensitySpec standard_normal();
  static DensitySpec uniform(double a, double b);

  double operator()(double x) const { return support_.contains(x) ? pdf_(x) : 0.0; }
  const Interval& support() const { return support_; }
  const Interval& window() const { return window_; }
  double sup_bound() const { return sup_bound_; }

 private:
  std::function<double(double)> pdf_;
  Interval support_;
  double sup_bound_;
  Interval window_;
};

/// Finite integration range covering the first `count` basis functions.
Interval integration_domain(const BasisFamily& family, std::size_t count);

/// <b, phi_j> (Lebesgue measure on the support) for j = 1..j_max.
Eigen::VectorXd projection_coefficients(const std::function<double(double)>& b, const BasisFamily& family,
                                        std::size_t j_max, const QuadratureOptions& options = {});

/// (<phi_j, phi_k>) in L2(I, dx); the identity for an orthonormal family.
Eigen::MatrixXd lebesgue_gram(const BasisSpec& spec, const QuadratureOptions& options = {});

struct TheoreticalGram {
  Eigen::MatrixXd psi;
  DensitySpec density;
};

TheoreticalGram theoretical_gram(const BasisSpec& spec, const DensitySpec& density,
                                 const QuadratureOptions& options = {});

/// Delta^{f,1} (which = 1) or Delta^{f,2} (which = 2), shape (m+p) x m. The
/// gram must cover at least m + p functions. Throws std::domain_error when
/// Psi_m or Psi_{m+p} is not positive definite.
Eigen::MatrixXd weighted_delta(const BasisSpec& spec, const TheoreticalGram& gram, int which);

/// V(m) = (sigma^2 m / n) ||Delta^{f,1}||_op^2.
double theoretical_penalty(const BasisSpec& spec, const TheoreticalGram& gram, double sigma2, std::size_t n);

struct ProjectionGap {
  double numeric = 0.0;
  /// Family closed form: 0 (trig, odd m), (m/2)(<b,h_{m-1}>^2 + <b,h_m>^2) (Hermite),
  /// 4m (sum_{k<m} <b,l_k>)^2 (Laguerre), the even-m display (Legendre).
  std::optional<double> closed_form;
  /// Laguerre only: 4m (sum_{k>=m} <b,l_k>)^2, valid when b(0) = 0.
  std::optional<double> closed_form_tail;
  /// Legendre only, any m: S_odd^2 sum_{even i<m}(2i+1) + S_even^2 sum_{odd i<m}(2i+1)
  /// with S_odd = sum_{odd j<m} sqrt(2j+1) <b,g_j>, S_even likewise.
  std::optional<double> closed_form_parity;
};

struct GapOptions {
  bool laguerre_tail = false;
  /// Number of Laguerre coefficients used to approximate the infinite tail.
  std::size_t tail_terms = 80;
  QuadratureOptions quadrature{};
};

/// numeric = integral over I of (sum_{j<=m} <b,phi_j> phi'_j - sum_{k<=m} <b',phi_k> phi_k)^2,
/// computed pointwise from the basis recursions, independent of Delta.
/// The caller asserts the boundary condition b phi_j(inf I) = b phi_j(sup I).
/// HalfTrigonometric is not orthonormal and is rejected.
ProjectionGap projection_gap(const std::function<double(double)>& b,
                             const std::function<double(double)>& b_prime, const BasisSpec& spec,
                             const GapOptions& options = {});

}  // namespace seriesderiv
