#pragma once

/**
 * @file estimators.hpp
 * @brief Least-squares regression fit and the two derivative estimators.
 *
 * Strategy 1 differentiates the projection estimator:
 *     b'_1(x) = sum_j theta1_j phi'_j(x),   theta1 = psi^{-1} phi^T Y / n.
 * Strategy 2 projects the derivative through the link matrix:
 *     b'_2(x) = sum_j theta2_j phi_j(x),    theta2 = -Delta theta1_{m+p}.
 * Strategy 2 is only meaningful when b phi_j agrees at both ends of I.
 */

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "seriesderiv/basis.hpp"
#include "seriesderiv/design.hpp"

namespace seriesderiv {

/// The empirical Gram matrix is not numerically invertible at this dimension.
class SingularGram : public std::runtime_error {
 public:
  explicit SingularGram(std::size_t m)
      : std::runtime_error("singular empirical Gram matrix at dimension " + std::to_string(m)),
        m_(m) {}
  std::size_t dimension() const { return m_; }

 private:
  std::size_t m_;
};

enum class Strategy { DerivOfProjection = 1, ProjectionOfDeriv = 2 };

struct RegressionFit {
  Eigen::VectorXd theta;
  BasisSpec spec;
};

struct DerivativeFit {
  Eigen::VectorXd theta;
  Strategy strategy;
  std::size_t m;
  bool truncated_to_zero = false;
  BasisSpec spec;
};

RegressionFit fit_regression(const DesignSet& design, std::span<const double> y);
RegressionFit fit_regression(const Sample& sample, const BasisSpec& spec);

DerivativeFit fit_derivative_1(const DesignSet& design, std::span<const double> y);
DerivativeFit fit_derivative_1(const Sample& sample, const BasisSpec& spec);

/// `extended` must be the (m+p)-dimensional design for the target spec.
DerivativeFit fit_derivative_2(const DesignSet& extended, const BasisSpec& spec,
                               std::span<const double> y);
DerivativeFit fit_derivative_2(const Sample& sample, const BasisSpec& spec);

/// Zeroes the fit unless the verdict (taken at index m+p) is in the truncation set.
DerivativeFit truncate_fit(DerivativeFit fit, const StabilityVerdict& verdict);

std::vector<double> evaluate_fit(const DerivativeFit& fit, std::span<const double> grid);
std::vector<double> evaluate_regression(const RegressionFit& fit, std::span<const double> grid);

/// phi' theta1 at the design points (the strategy-1 fit at X_1..X_n).
Eigen::VectorXd derivative_at_design(const DesignSet& design, const Eigen::VectorXd& theta);

}  // namespace seriesderiv
