#include "seriesderiv/estimators.hpp"

#include "seriesderiv/linalg.hpp"

namespace seriesderiv {

namespace {

Eigen::Map<const Eigen::VectorXd> as_vector(std::span<const double> y) {
  return {y.data(), static_cast<Eigen::Index>(y.size())};
}

void require_length(const DesignSet& design, std::span<const double> y) {
  if (y.size() != design.n()) {
    throw std::invalid_argument("response has " + std::to_string(y.size()) + " values, design has " +
                                std::to_string(design.n()) + " rows");
  }
}

}  // namespace

RegressionFit fit_regression(const DesignSet& design, std::span<const double> y) {
  require_length(design, y);
  const SymmetricFactor factor(design.psi_hat);
  if (factor.singular()) throw SingularGram(design.spec.m());
  const Eigen::VectorXd rhs = design.phi.transpose() * as_vector(y) / static_cast<double>(design.n());
  return RegressionFit{factor.solve(rhs), design.spec};
}

RegressionFit fit_regression(const Sample& sample, const BasisSpec& spec) {
  return fit_regression(build_design(sample, spec), sample.y());
}

DerivativeFit fit_derivative_1(const DesignSet& design, std::span<const double> y) {
  RegressionFit reg = fit_regression(design, y);
  return DerivativeFit{std::move(reg.theta), Strategy::DerivOfProjection, design.spec.m(), false,
                       design.spec};
}

DerivativeFit fit_derivative_1(const Sample& sample, const BasisSpec& spec) {
  return fit_derivative_1(build_design(sample, spec), sample.y());
}

DerivativeFit fit_derivative_2(const DesignSet& extended, const BasisSpec& spec,
                               std::span<const double> y) {
  if (!(extended.spec == spec.extended())) {
    throw std::invalid_argument("fit_derivative_2: design dimension must be m + p");
  }
  const RegressionFit wide = fit_regression(extended, y);
  const DerivativeLinkMatrix delta = delta_matrix(spec);
  Eigen::VectorXd theta = -(delta.entries * wide.theta);
  return DerivativeFit{std::move(theta), Strategy::ProjectionOfDeriv, spec.m(), false, spec};
}

DerivativeFit fit_derivative_2(const Sample& sample, const BasisSpec& spec) {
  return fit_derivative_2(build_design(sample, spec.extended()), spec, sample.y());
}

DerivativeFit truncate_fit(DerivativeFit fit, const StabilityVerdict& verdict) {
  if (!verdict.in_lambda) fit.truncated_to_zero = true;
  return fit;
}

std::vector<double> evaluate_fit(const DerivativeFit& fit, std::span<const double> grid) {
  std::vector<double> out(grid.size(), 0.0);
  if (fit.truncated_to_zero) return out;
  const Interval support = fit.spec.support();
  std::vector<double> row(fit.spec.m());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!support.contains(grid[i])) continue;
    if (fit.strategy == Strategy::DerivOfProjection) {
      eval_basis_derivative_into(fit.spec, grid[i], row);
    } else {
      eval_basis_into(fit.spec, grid[i], row);
    }
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += fit.theta(static_cast<Eigen::Index>(j)) * row[j];
    out[i] = acc;
  }
  return out;
}

std::vector<double> evaluate_regression(const RegressionFit& fit, std::span<const double> grid) {
  std::vector<double> out(grid.size(), 0.0);
  std::vector<double> row(fit.spec.m());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    eval_basis_into(fit.spec, grid[i], row);
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j) acc += fit.theta(static_cast<Eigen::Index>(j)) * row[j];
    out[i] = acc;
  }
  return out;
}

Eigen::VectorXd derivative_at_design(const DesignSet& design, const Eigen::VectorXd& theta) {
  return design.phi_prime * theta;
}

}  // namespace seriesderiv
