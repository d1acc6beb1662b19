#include "seriesderiv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace seriesderiv {

double operator_norm(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  const Eigen::MatrixXd gram =
      (m.rows() <= m.cols()) ? Eigen::MatrixXd(m * m.transpose()) : Eigen::MatrixXd(m.transpose() * m);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram, Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

double frobenius_norm(const Eigen::MatrixXd& m) { return m.norm(); }

SymmetricFactor::SymmetricFactor(const Eigen::MatrixXd& a, double rel_tol) {
  if (a.rows() != a.cols()) throw std::invalid_argument("SymmetricFactor: matrix is not square");
  if (a.size() == 0) throw std::invalid_argument("SymmetricFactor: empty matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("SymmetricFactor: eigendecomposition failed");
  }
  values_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
  const double top = lambda_max();
  singular_ = !(top > 0.0) || !(lambda_min() > rel_tol * top);
}

void SymmetricFactor::require_regular() const {
  if (singular_) throw std::domain_error("SymmetricFactor: matrix is numerically singular");
}

double SymmetricFactor::inverse_op_norm() const {
  require_regular();
  return 1.0 / lambda_min();
}

Eigen::MatrixXd SymmetricFactor::inverse() const {
  require_regular();
  return vectors_ * values_.cwiseInverse().asDiagonal() * vectors_.transpose();
}

Eigen::MatrixXd SymmetricFactor::inverse_sqrt() const {
  require_regular();
  return vectors_ * values_.cwiseSqrt().cwiseInverse().asDiagonal() * vectors_.transpose();
}

Eigen::VectorXd SymmetricFactor::solve(const Eigen::VectorXd& rhs) const {
  require_regular();
  return vectors_ * (vectors_.transpose() * rhs).cwiseQuotient(values_);
}

Eigen::MatrixXd SymmetricFactor::sqrt() const {
  const Eigen::VectorXd roots = values_.cwiseMax(0.0).cwiseSqrt();
  return vectors_ * roots.asDiagonal() * vectors_.transpose();
}

}  // namespace seriesderiv
