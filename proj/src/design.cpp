#include "seriesderiv/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "seriesderiv/linalg.hpp"

namespace seriesderiv {

Sample::Sample(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) {
    throw std::invalid_argument("sample: x has " + std::to_string(x_.size()) + " values but y has " +
                                std::to_string(y_.size()));
  }
  if (x_.empty()) throw std::invalid_argument("sample: at least one observation is required");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i]) || !std::isfinite(y_[i])) {
      throw std::invalid_argument("sample: non-finite value at index " + std::to_string(i));
    }
  }
}

DesignSet DesignSet::leading(std::size_t m) const {
  if (m == 0 || m > spec.m()) {
    throw std::invalid_argument("DesignSet::leading: dimension " + std::to_string(m) +
                                " outside 1.." + std::to_string(spec.m()));
  }
  const auto k = static_cast<Eigen::Index>(m);
  return DesignSet{phi.leftCols(k), phi_prime.leftCols(k), psi_hat.topLeftCorner(k, k),
                   spec.with_dimension(m)};
}

DesignSet build_design(std::span<const double> x, const BasisSpec& spec) {
  const auto n = static_cast<Eigen::Index>(x.size());
  const auto m = static_cast<Eigen::Index>(spec.m());
  Eigen::MatrixXd phi = Eigen::MatrixXd::Zero(n, m);
  Eigen::MatrixXd phi_prime = Eigen::MatrixXd::Zero(n, m);
  std::vector<double> row(spec.m());
  const Interval support = spec.support();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = x[static_cast<std::size_t>(i)];
    if (!support.contains(xi)) continue;
    eval_basis_into(spec, xi, row);
    for (Eigen::Index j = 0; j < m; ++j) phi(i, j) = row[static_cast<std::size_t>(j)];
    eval_basis_derivative_into(spec, xi, row);
    for (Eigen::Index j = 0; j < m; ++j) phi_prime(i, j) = row[static_cast<std::size_t>(j)];
  }
  Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(m, m);
  psi.selfadjointView<Eigen::Lower>().rankUpdate(phi.transpose(), 1.0 / static_cast<double>(n));
  psi = psi.selfadjointView<Eigen::Lower>();
  return DesignSet{std::move(phi), std::move(phi_prime), std::move(psi), spec};
}

DesignSet build_design(const Sample& sample, const BasisSpec& spec) {
  return build_design(std::span<const double>(sample.x()), spec);
}

double stability_constant() { return (3.0 * std::log(1.5) - 1.0) / 9.0; }

double density_sup_estimate(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("density_sup_estimate: empty sample");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (!(hi > lo)) return std::numeric_limits<double>::infinity();
  const auto bins = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(x.size()))));
  const double width = (hi - lo) / static_cast<double>(bins);
  std::vector<std::size_t> counts(bins, 0);
  for (double v : x) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    counts[std::min(b, bins - 1)]++;
  }
  const auto top = *std::max_element(counts.begin(), counts.end());
  return static_cast<double>(top) / (static_cast<double>(x.size()) * width);
}

double d_constant_from_density_sup(double fsup, double f_scale) {
  if (!(f_scale > 0.0)) throw std::invalid_argument("d constant: f_scale must be positive");
  return 1.0 / (f_scale * (std::max(fsup, 1.0) + 1.0 / 3.0));
}

double default_d_constant(std::span<const double> x, double f_scale) {
  return d_constant_from_density_sup(density_sup_estimate(x), f_scale);
}

StabilityVerdict stability_check(const DesignSet& design, std::size_t n, double d_constant) {
  StabilityVerdict verdict;
  verdict.l_factor = l_factor(design.spec);
  const SymmetricFactor factor(design.psi_hat);
  if (factor.singular()) {
    verdict.op_norm_psi_inv = std::numeric_limits<double>::infinity();
    return verdict;
  }
  const double nd = static_cast<double>(n);
  // log(1) = 0 makes the budget infinite; n = 1 passes any finite left side.
  const double budget = nd / std::log(nd);
  const double inv = factor.inverse_op_norm();
  verdict.op_norm_psi_inv = inv;
  verdict.in_lambda = verdict.l_factor * std::max(inv, 1.0) <= stability_constant() * budget;
  verdict.in_collection = verdict.l_factor * std::max(inv * inv, 1.0) <= d_constant * budget;
  return verdict;
}

double empirical_norm(std::span<const double> values) {
  return std::sqrt(empirical_inner(values, values));
}

double empirical_inner(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) {
    throw std::invalid_argument("empirical_inner: lengths " + std::to_string(u.size()) + " and " +
                                std::to_string(v.size()) + " differ");
  }
  if (u.empty()) throw std::invalid_argument("empirical_inner: empty vectors");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
  return acc / static_cast<double>(u.size());
}

double variance_trace(const DesignSet& design) {
  const SymmetricFactor factor(design.psi_hat);
  if (factor.singular()) throw std::domain_error("variance_trace: singular Gram matrix");
  // (phi^T phi)^{-1} phi'^T phi' = psi^{-1} psi' with psi' = phi'^T phi' / n
  const double n = static_cast<double>(design.n());
  const Eigen::MatrixXd psi_prime = design.phi_prime.transpose() * design.phi_prime / n;
  return (factor.inverse() * psi_prime).trace();
}

}  // namespace seriesderiv
