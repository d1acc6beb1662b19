#include "seriesderiv/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "seriesderiv/linalg.hpp"

namespace seriesderiv {

namespace {

Interval intersect(const Interval& a, const Interval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

Eigen::MatrixXd require_pd_root(const Eigen::MatrixXd& psi, bool inverse) {
  const SymmetricFactor factor(psi);
  if (factor.singular() || factor.lambda_min() <= 0.0) {
    throw std::domain_error("weighted_delta: Gram matrix is not positive definite");
  }
  return inverse ? factor.inverse_sqrt() : factor.sqrt();
}

}  // namespace

DensitySpec::DensitySpec(std::function<double(double)> pdf, Interval support, double sup_bound,
                         Interval window)
    : pdf_(std::move(pdf)), support_(support), sup_bound_(sup_bound), window_(intersect(support, window)) {
  if (!window_.bounded() || !(window_.hi > window_.lo)) {
    throw std::invalid_argument("DensitySpec: integration window must be a bounded subset of the support");
  }
  const double mass = integrate(pdf_, window_, QuadratureOptions{1e-10, 0.5});
  if (std::abs(mass - 1.0) > 1e-6) {
    throw std::invalid_argument("DensitySpec: density integrates to " + std::to_string(mass));
  }
}

DensitySpec DensitySpec::standard_normal() {
  const double inf = std::numeric_limits<double>::infinity();
  return DensitySpec([](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); },
                     {-inf, inf}, 1.0 / std::sqrt(2.0 * std::numbers::pi), {-40.0, 40.0});
}

DensitySpec DensitySpec::uniform(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("uniform density needs a < b");
  const double h = 1.0 / (b - a);
  return DensitySpec([h](double) { return h; }, {a, b}, h, {a, b});
}

Interval integration_domain(const BasisFamily& family, std::size_t count) {
  const double c = static_cast<double>(count);
  switch (family.kind()) {
    case FamilyKind::Hermite: {
      const double r = std::sqrt(2.0 * c + 1.0) + 14.0;
      return {-r, r};
    }
    case FamilyKind::Laguerre: return {0.0, 4.0 * c + 80.0};
    case FamilyKind::HalfTrigonometric: return family.scale_interval();
    default: return family.support();
  }
}

Eigen::VectorXd projection_coefficients(const std::function<double(double)>& b, const BasisFamily& family,
                                        std::size_t j_max, const QuadratureOptions& options) {
  std::size_t dim = j_max;
  while (!family.admits(dim)) ++dim;
  const BasisSpec spec(family, dim);
  auto integrand = [&](double x) -> Eigen::VectorXd {
    return b(x) * eval_basis(spec, x).head(static_cast<Eigen::Index>(j_max));
  };
  return integrate_vector(integrand, j_max, integration_domain(family, j_max), options);
}

Eigen::MatrixXd lebesgue_gram(const BasisSpec& spec, const QuadratureOptions& options) {
  const std::size_t m = spec.m();
  auto integrand = [&](double x) -> Eigen::VectorXd {
    const Eigen::VectorXd v = eval_basis(spec, x);
    const Eigen::MatrixXd outer = v * v.transpose();
    return Eigen::Map<const Eigen::VectorXd>(outer.data(), outer.size());
  };
  const Eigen::VectorXd flat = integrate_vector(integrand, m * m, integration_domain(spec.family(), m), options);
  return Eigen::Map<const Eigen::MatrixXd>(flat.data(), static_cast<Eigen::Index>(m),
                                           static_cast<Eigen::Index>(m));
}

TheoreticalGram theoretical_gram(const BasisSpec& spec, const DensitySpec& density,
                                 const QuadratureOptions& options) {
  const std::size_t m = spec.m();
  const Interval domain = intersect(integration_domain(spec.family(), m), density.window());
  auto integrand = [&](double x) -> Eigen::VectorXd {
    const Eigen::VectorXd v = eval_basis(spec, x);
    const Eigen::MatrixXd outer = density(x) * v * v.transpose();
    return Eigen::Map<const Eigen::VectorXd>(outer.data(), outer.size());
  };
  Eigen::MatrixXd psi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  if (domain.hi > domain.lo) {
    const Eigen::VectorXd flat = integrate_vector(integrand, m * m, domain, options);
    psi = Eigen::Map<const Eigen::MatrixXd>(flat.data(), static_cast<Eigen::Index>(m),
                                            static_cast<Eigen::Index>(m));
    psi = 0.5 * (psi + psi.transpose()).eval();
  }
  return TheoreticalGram{std::move(psi), density};
}

Eigen::MatrixXd weighted_delta(const BasisSpec& spec, const TheoreticalGram& gram, int which) {
  if (which != 1 && which != 2) throw std::invalid_argument("weighted_delta: which must be 1 or 2");
  const auto m = static_cast<Eigen::Index>(spec.m());
  const auto wide = static_cast<Eigen::Index>(spec.m() + spec.p());
  if (gram.psi.rows() < wide) {
    throw std::invalid_argument("weighted_delta: Gram covers fewer than m + p functions");
  }
  const Eigen::MatrixXd psi_m = gram.psi.topLeftCorner(m, m);
  const Eigen::MatrixXd psi_wide = gram.psi.topLeftCorner(wide, wide);
  const Eigen::MatrixXd delta_t = delta_matrix(spec).entries.transpose();
  if (which == 1) return require_pd_root(psi_wide, false) * delta_t * require_pd_root(psi_m, true);
  return require_pd_root(psi_wide, true) * delta_t * require_pd_root(psi_m, false);
}

double theoretical_penalty(const BasisSpec& spec, const TheoreticalGram& gram, double sigma2, std::size_t n) {
  const double op = operator_norm(weighted_delta(spec, gram, 1));
  return sigma2 * static_cast<double>(spec.m()) / static_cast<double>(n) * op * op;
}

ProjectionGap projection_gap(const std::function<double(double)>& b,
                             const std::function<double(double)>& b_prime, const BasisSpec& spec,
                             const GapOptions& options) {
  if (spec.kind() == FamilyKind::HalfTrigonometric) {
    throw std::invalid_argument("projection_gap: the half-trigonometric family is not orthonormal");
  }
  const std::size_t m = spec.m();
  const BasisFamily& family = spec.family();
  const std::size_t coef_count =
      (spec.kind() == FamilyKind::Laguerre && options.laguerre_tail) ? std::max(options.tail_terms, m + 1)
                                                                     : m + 1;
  const Eigen::VectorXd a = projection_coefficients(b, family, coef_count, options.quadrature);
  const Eigen::VectorXd c = projection_coefficients(b_prime, family, m, options.quadrature);
  const Eigen::VectorXd a_m = a.head(static_cast<Eigen::Index>(m));

  auto squared_gap = [&](double x) {
    const double deriv_of_proj = eval_basis_derivative(spec, x).dot(a_m);
    const double proj_of_deriv = eval_basis(spec, x).dot(c);
    const double d = deriv_of_proj - proj_of_deriv;
    return d * d;
  };

  ProjectionGap gap;
  gap.numeric = integrate(squared_gap, integration_domain(family, m + 1), options.quadrature);

  const double md = static_cast<double>(m);
  switch (spec.kind()) {
    case FamilyKind::TrigonometricOdd: gap.closed_form = 0.0; break;
    case FamilyKind::Hermite: {
      const double lo = a(static_cast<Eigen::Index>(m - 1));
      const double hi = a(static_cast<Eigen::Index>(m));
      gap.closed_form = md / 2.0 * (lo * lo + hi * hi);
      break;
    }
    case FamilyKind::Laguerre: {
      const double head = a.head(static_cast<Eigen::Index>(m)).sum();
      gap.closed_form = 4.0 * md * head * head;
      if (options.laguerre_tail) {
        const double tail = a.tail(a.size() - static_cast<Eigen::Index>(m)).sum();
        gap.closed_form_tail = 4.0 * md * tail * tail;
      }
      break;
    }
    case FamilyKind::Legendre: {
      auto coef = [&](std::size_t j) { return a(static_cast<Eigen::Index>(j)); };
      auto root = [](double v) { return std::sqrt(v); };
      double s_odd = 0.0, s_even = 0.0, w_even = 0.0, w_odd = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double jd = static_cast<double>(j);
        if (j % 2 == 1) {
          s_odd += root(2.0 * jd + 1.0) * coef(j);
          w_odd += 2.0 * jd + 1.0;
        } else {
          s_even += root(2.0 * jd + 1.0) * coef(j);
          w_even += 2.0 * jd + 1.0;
        }
      }
      gap.closed_form_parity = s_odd * s_odd * w_even + s_even * s_even * w_odd;

      if (m % 2 == 0) {
        // Even-m display, term by term.
        const std::size_t p = m / 2;
        double odd_sum = 0.0, even_sum = 0.0;
        for (std::size_t k = 0; k < p; ++k) {
          const double kd = static_cast<double>(k);
          odd_sum += root(4.0 * kd + 3.0) * coef(2 * k + 1);
          even_sum += root(4.0 * kd + 1.0) * coef(2 * k);
        }
        double total = 3.0 * odd_sum * odd_sum + (4.0 * static_cast<double>(p) - 1.0) * even_sum * even_sum;
        for (std::size_t j = 0; j < p; ++j) {
          const double jd = static_cast<double>(j);
          double upper = 0.0, lower = 0.0;
          for (std::size_t k = j; k < p; ++k) upper += root(4.0 * static_cast<double>(k) + 3.0) * coef(2 * k + 1);
          for (std::size_t k = 0; k <= j; ++k) lower += root(4.0 * static_cast<double>(k) + 3.0) * coef(2 * k + 1);
          const double term = root(4.0 * jd + 3.0) * upper + root(4.0 * jd + 1.0) * lower;
          total += term * term;
        }
        for (std::size_t j = 0; j + 1 < p; ++j) {
          const double jd = static_cast<double>(j);
          double upper = 0.0, lower = 0.0;
          for (std::size_t k = j + 1; k < p; ++k) upper += root(4.0 * static_cast<double>(k) + 1.0) * coef(2 * k);
          for (std::size_t k = 0; k <= j; ++k) lower += root(4.0 * static_cast<double>(k) + 1.0) * coef(2 * k);
          const double term = root(4.0 * jd + 5.0) * upper + root(4.0 * jd + 2.0) * lower;
          total += term * term;
        }
        gap.closed_form = total;
      }
      break;
    }
    case FamilyKind::HalfTrigonometric: break;
  }
  return gap;
}

}  // namespace seriesderiv
