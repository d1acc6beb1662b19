#pragma once

/**
 * @file design.hpp
 * @brief Empirical design matrices and the stability gates built on them.
 *
 * For a sample X_1..X_n and a basis spec of dimension m:
 *   phi       = (phi_j(X_i))              n x m
 *   phi_prime = (phi'_j(X_i))             n x m
 *   psi_hat   = phi^T phi / n             m x m   (empirical Gram)
 */

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "seriesderiv/basis.hpp"

namespace seriesderiv {

/// Paired observations (X_i, Y_i). Lengths match, n >= 1, all values finite.
class Sample {
 public:
  Sample(std::vector<double> x, std::vector<double> y);

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }
  std::size_t size() const { return x_.size(); }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

struct DesignSet {
  Eigen::MatrixXd phi;
  Eigen::MatrixXd phi_prime;
  Eigen::MatrixXd psi_hat;
  BasisSpec spec;

  std::size_t n() const { return static_cast<std::size_t>(phi.rows()); }

  /// The nested design of dimension m <= spec.m(): leading columns and block.
  DesignSet leading(std::size_t m) const;
};

/// Rows for points outside the support are zero (phi_j 1_I convention).
DesignSet build_design(std::span<const double> x, const BasisSpec& spec);
DesignSet build_design(const Sample& sample, const BasisSpec& spec);

/// c = (3 log(3/2) - 1) / 9, the stability constant of the truncation set.
double stability_constant();

/// Theory value of the f-scale in d = 1 / [f_scale (||f||_inf v 1 + 1/3)].
inline constexpr double kTheoryFScale = 192.0;

/// Histogram estimate (ceil(sqrt n) bins over the sample range) of sup f.
double density_sup_estimate(std::span<const double> x);

/// d = 1 / [f_scale * (max(fsup, 1) + 1/3)].
double d_constant_from_density_sup(double fsup, double f_scale);

/// Plug-in default for d using density_sup_estimate on x.
double default_d_constant(std::span<const double> x, double f_scale);

struct StabilityVerdict {
  bool in_lambda = false;       ///< L(m)(||psi^{-1}|| v 1) <= c n / log n
  bool in_collection = false;   ///< L(m)(||psi^{-1}||^2 v 1) <= d n / log n
  double op_norm_psi_inv = 0.0; ///< +inf when psi_hat is singular
  double l_factor = 0.0;
};

/// Checks both gates on the supplied design; pass the (m+p)-dimensional design
/// to gate a dimension-m estimator. A singular Gram fails both gates.
StabilityVerdict stability_check(const DesignSet& design, std::size_t n, double d_constant);

/// ||u||_n = sqrt(mean(u_i^2)).
double empirical_norm(std::span<const double> values);

/// <u, v>_n = mean(u_i v_i). Throws std::invalid_argument on length mismatch.
double empirical_inner(std::span<const double> u, std::span<const double> v);

/// Tr[(phi^T phi)^{-1} phi'^T phi']; the variance proxy that grows with m.
/// Throws std::domain_error when psi_hat is singular.
double variance_trace(const DesignSet& design);

}  // namespace seriesderiv
