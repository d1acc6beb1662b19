#pragma once

// Small dense linear-algebra helpers built on Eigen's symmetric eigensolver.

#include <Eigen/Dense>

namespace seriesderiv {

/// Relative eigenvalue floor below which a symmetric matrix counts as singular.
inline constexpr double kSingularRelTol = 1e-10;

/// Largest singular value, from the eigenvalues of M^T M (or M M^T).
double operator_norm(const Eigen::MatrixXd& m);

double frobenius_norm(const Eigen::MatrixXd& m);

/// Eigendecomposition of a symmetric matrix A = V diag(lambda) V^T with
/// ascending eigenvalues.
class SymmetricFactor {
 public:
  explicit SymmetricFactor(const Eigen::MatrixXd& a, double rel_tol = kSingularRelTol);

  /// lambda_min <= rel_tol * lambda_max, or lambda_max <= 0.
  bool singular() const { return singular_; }

  const Eigen::VectorXd& eigenvalues() const { return values_; }
  const Eigen::MatrixXd& eigenvectors() const { return vectors_; }

  double lambda_min() const { return values_.size() ? values_(0) : 0.0; }
  double lambda_max() const { return values_.size() ? values_(values_.size() - 1) : 0.0; }

  /// ||A^{-1}||_op = 1 / lambda_min. Requires !singular().
  double inverse_op_norm() const;

  // The functions below require !singular().
  Eigen::MatrixXd inverse() const;
  Eigen::MatrixXd inverse_sqrt() const;
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  /// PSD square root; negative rounding noise in the spectrum is clipped to 0.
  Eigen::MatrixXd sqrt() const;

 private:
  void require_regular() const;

  Eigen::VectorXd values_;
  Eigen::MatrixXd vectors_;
  bool singular_ = true;
};

}  // namespace seriesderiv
