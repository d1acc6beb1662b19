#include "seriesderiv/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "seriesderiv/linalg.hpp"

namespace seriesderiv {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTieTolerance = 1e-12;

std::size_t widest(const BasisFamily& family, std::span<const std::size_t> grid) {
  std::size_t top = 0;
  for (std::size_t m : grid) top = std::max(top, m + family.overflow(m));
  return top;
}

// Smallest admissible dimension >= m (TrigonometricOdd needs odd m).
std::size_t admissible_at_least(const BasisFamily& family, std::size_t m) {
  while (!family.admits(m)) ++m;
  return m;
}

struct Member {
  std::size_t m;
  Eigen::VectorXd theta;
  Eigen::VectorXd fitted_derivative;  // at the sample points
  double v_hat;
};

double resolve_d_constant(const Sample& sample, const GlConfig& config) {
  return config.d_constant ? *config.d_constant
                           : default_d_constant(std::span<const double>(sample.x()), config.f_scale);
}

double resolve_sigma2(const Sample& sample, const BasisFamily& family, const GlConfig& config,
                      std::span<const std::size_t> grid) {
  if (config.sigma2) return *config.sigma2;
  // estimate_sigma2 needs n > 2 m_max; shrink the ceiling for small samples.
  std::size_t ceiling = *std::max_element(grid.begin(), grid.end());
  const std::size_t n = sample.size();
  if (2 * ceiling >= n) ceiling = (n - 1) / 2;
  return estimate_sigma2(sample, family, std::max<std::size_t>(ceiling, 1));
}

bool better(double candidate, double incumbent) {
  if (std::isinf(incumbent)) return candidate < incumbent;
  return candidate < incumbent - kTieTolerance * std::max({1.0, std::abs(candidate), std::abs(incumbent)});
}

}  // namespace

void GlConfig::validate(const BasisFamily& family) const {
  if (!(kappa0 > 0.0) || !(kappa1 > 0.0)) throw std::invalid_argument("kappa0 and kappa1 must be positive");
  if (kappa0 > kappa1) throw std::invalid_argument("kappa0 must not exceed kappa1");
  if (sigma2 && !(*sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  if (d_constant && !(*d_constant > 0.0)) throw std::invalid_argument("d constant must be positive");
  if (!(f_scale > 0.0)) throw std::invalid_argument("f_scale must be positive");
  for (std::size_t i = 0; i < m_grid.size(); ++i) {
    if (!family.admits(m_grid[i])) {
      throw std::invalid_argument("grid dimension " + std::to_string(m_grid[i]) +
                                  " is not admissible for the " + family.name() + " basis");
    }
    if (i > 0 && m_grid[i] <= m_grid[i - 1]) throw std::invalid_argument("m grid must be increasing");
  }
}

std::vector<std::size_t> default_m_grid(const BasisFamily& family, std::size_t n) {
  const std::size_t cap = std::min<std::size_t>(40, n / 10);
  std::vector<std::size_t> grid;
  for (std::size_t m = 1; m <= cap; ++m) {
    if (family.admits(m)) grid.push_back(m);
  }
  if (grid.empty()) grid.push_back(admissible_at_least(family, 1));
  return grid;
}

std::vector<double> uniform_grid(const Interval& interval, std::size_t points) {
  if (!interval.bounded() || !(interval.hi >= interval.lo)) {
    throw std::invalid_argument("uniform_grid: interval must be bounded with lo <= hi");
  }
  if (points < 2) throw std::invalid_argument("uniform_grid: at least two points required");
  std::vector<double> grid(points);
  const double step = interval.length() / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) grid[i] = interval.lo + step * static_cast<double>(i);
  grid.back() = interval.hi;
  return grid;
}

double squared_l2_distance(std::span<const double> fit, std::span<const double> truth,
                           const Interval& interval) {
  if (fit.size() != truth.size() || fit.size() < 2) {
    throw std::invalid_argument("squared_l2_distance: need two equally long grids of size >= 2");
  }
  const double step = interval.length() / static_cast<double>(fit.size() - 1);
  double acc = 0.0;
  for (std::size_t i = 0; i < fit.size(); ++i) {
    const double d = fit[i] - truth[i];
    const double w = (i == 0 || i + 1 == fit.size()) ? 0.5 : 1.0;
    acc += w * d * d;
  }
  return acc * step;
}

double penalty_v_hat(const DesignSet& design, double sigma2, std::size_t n) {
  const SymmetricFactor factor(design.psi_hat);
  if (factor.singular()) throw SingularGram(design.spec.m());
  const double rows = static_cast<double>(design.n());
  const Eigen::MatrixXd psi_prime = design.phi_prime.transpose() * design.phi_prime / rows;
  const Eigen::MatrixXd root = factor.inverse_sqrt();
  Eigen::MatrixXd sym = root * psi_prime * root;
  sym = 0.5 * (sym + sym.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  const double top = std::max(0.0, solver.eigenvalues().maxCoeff());
  return sigma2 * static_cast<double>(design.spec.m()) / static_cast<double>(n) * top;
}

double estimate_sigma2(const Sample& sample, const BasisFamily& family, std::size_t m_max) {
  const std::size_t n = sample.size();
  if (n <= 2 * m_max) {
    throw std::invalid_argument("estimate_sigma2 needs n > 2 m_max (n = " + std::to_string(n) +
                                ", m_max = " + std::to_string(m_max) + ")");
  }
  std::size_t top = m_max;
  while (top > 0 && !family.admits(top)) --top;
  if (top == 0) throw std::invalid_argument("estimate_sigma2: no admissible dimension <= m_max");
  const DesignSet wide = build_design(sample, BasisSpec(family, top));
  const Interval support = family.support();
  std::size_t inside = 0;
  for (double v : sample.x()) inside += support.contains(v) ? 1 : 0;

  for (std::size_t m = top; m >= 1; --m) {
    if (!family.admits(m)) continue;
    if (inside <= m) continue;
    const DesignSet design = wide.leading(m);
    const SymmetricFactor factor(design.psi_hat);
    if (factor.singular()) continue;
    const Eigen::Map<const Eigen::VectorXd> y(sample.y().data(), static_cast<Eigen::Index>(n));
    const Eigen::VectorXd theta = factor.solve(design.phi.transpose() * y / static_cast<double>(n));
    const Eigen::VectorXd fitted = design.phi * theta;
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!support.contains(sample.x()[i])) continue;
      const double r = sample.y()[i] - fitted(static_cast<Eigen::Index>(i));
      rss += r * r;
    }
    return rss / static_cast<double>(inside - m);
  }
  throw EmptyCollection("estimate_sigma2: no non-singular dimension available");
}

GlResult gl_select(const Sample& sample, const BasisFamily& family, const GlConfig& config) {
  config.validate(family);
  const std::size_t n = sample.size();
  const std::vector<std::size_t> grid = config.m_grid.empty() ? default_m_grid(family, n) : config.m_grid;
  const double d_constant = resolve_d_constant(sample, config);
  const double sigma2 = resolve_sigma2(sample, family, config, grid);

  const DesignSet wide = build_design(sample, BasisSpec(family, widest(family, grid)));
  const Eigen::Map<const Eigen::VectorXd> y(sample.y().data(), static_cast<Eigen::Index>(n));

  SelectionTrace trace;
  trace.strategy = "gl";
  trace.sigma2 = sigma2;
  trace.d_constant = d_constant;

  std::vector<Member> members;
  for (std::size_t m : grid) {
    SelectionRecord rec{m, false, kNaN, kNaN, kNaN};
    const StabilityVerdict verdict = stability_check(wide.leading(m + family.overflow(m)), n, d_constant);
    if (verdict.in_collection) {
      const DesignSet design = wide.leading(m);
      const SymmetricFactor factor(design.psi_hat);
      Eigen::VectorXd theta = factor.solve(design.phi.transpose() * y / static_cast<double>(n));
      Eigen::VectorXd fitted = design.phi_prime * theta;
      const double v = penalty_v_hat(design, sigma2, n);
      members.push_back({m, std::move(theta), std::move(fitted), v});
      rec.in_collection = true;
      rec.v_hat = v;
    }
    trace.records.push_back(rec);
  }
  if (members.empty()) {
    throw EmptyCollection("gl_select: no grid dimension passes the collection gate (d = " +
                          std::to_string(d_constant) + ")");
  }

  // A(m): only m' > m contribute; m' <= m gives a non-positive bracket.
  std::size_t best = 0;
  double best_criterion = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < members.size(); ++a) {
    double sup = 0.0;
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const double dist = (members[a].fitted_derivative - members[b].fitted_derivative).squaredNorm() /
                          static_cast<double>(n);
      sup = std::max(sup, dist - config.kappa0 * members[b].v_hat);
    }
    const double criterion = sup + config.kappa1 * members[a].v_hat;
    for (auto& rec : trace.records) {
      if (rec.m == members[a].m) {
        rec.a_value = sup;
        rec.criterion = criterion;
      }
    }
    if (better(criterion, best_criterion)) {
      best_criterion = criterion;
      best = a;
    }
  }

  trace.chosen_m = members[best].m;
  DerivativeFit fit{members[best].theta, Strategy::DerivOfProjection, members[best].m, false,
                    BasisSpec(family, members[best].m)};
  return GlResult{std::move(trace), std::move(fit)};
}

OracleResult oracle_select(const Sample& sample, const BasisFamily& family,
                           std::span<const std::size_t> m_grid, const RealFunction& truth,
                           const Interval& eval_interval, Target target, std::size_t grid_points) {
  if (m_grid.empty()) throw std::invalid_argument("oracle_select: empty dimension grid");
  const std::size_t n = sample.size();
  const std::size_t top = *std::max_element(m_grid.begin(), m_grid.end());
  const DesignSet wide = build_design(sample, BasisSpec(family, top));
  const Eigen::Map<const Eigen::VectorXd> y(sample.y().data(), static_cast<Eigen::Index>(n));

  const std::vector<double> grid = uniform_grid(eval_interval, grid_points);
  std::vector<double> truth_values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) truth_values[i] = truth(grid[i]);

  // Basis (or derivative) values on the evaluation grid, outside-support rows zero.
  const BasisSpec wide_spec(family, top);
  Eigen::MatrixXd on_grid = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(grid.size()),
                                                  static_cast<Eigen::Index>(top));
  std::vector<double> row(top);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!wide_spec.support().contains(grid[i])) continue;
    if (target == Target::Derivative) {
      eval_basis_derivative_into(wide_spec, grid[i], row);
    } else {
      eval_basis_into(wide_spec, grid[i], row);
    }
    for (std::size_t j = 0; j < top; ++j) on_grid(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = row[j];
  }

  OracleResult result;
  result.error = std::numeric_limits<double>::infinity();
  for (std::size_t m : m_grid) {
    if (!family.admits(m)) throw std::invalid_argument("oracle_select: inadmissible dimension");
    const DesignSet design = wide.leading(m);
    const SymmetricFactor factor(design.psi_hat);
    if (factor.singular()) continue;
    const Eigen::VectorXd theta = factor.solve(design.phi.transpose() * y / static_cast<double>(n));
    const Eigen::VectorXd values = on_grid.leftCols(static_cast<Eigen::Index>(m)) * theta;
    const double err = squared_l2_distance(std::span<const double>(values.data(), grid.size()),
                                           truth_values, eval_interval);
    result.errors.emplace_back(m, err);
    if (better(err, result.error)) {
      result.error = err;
      result.m = m;
    }
  }
  if (result.errors.empty()) throw EmptyCollection("oracle_select: every fit is singular");
  return result;
}

ReuseResult reuse_select(const Sample& sample, const BasisFamily& family, const GlConfig& config) {
  config.validate(family);
  const std::size_t n = sample.size();
  const std::vector<std::size_t> grid = config.m_grid.empty() ? default_m_grid(family, n) : config.m_grid;
  if (grid.empty()) throw EmptyCollection("reuse_select: empty dimension grid");
  const double d_constant = resolve_d_constant(sample, config);
  const double sigma2 = resolve_sigma2(sample, family, config, grid);

  const DesignSet wide = build_design(sample, BasisSpec(family, widest(family, grid)));
  const Eigen::Map<const Eigen::VectorXd> y(sample.y().data(), static_cast<Eigen::Index>(n));

  ReuseResult result{0, DerivativeFit{Eigen::VectorXd(), Strategy::DerivOfProjection, 0, false,
                                      BasisSpec(family, grid.front())},
                     SelectionTrace{}};
  result.trace.strategy = "reuse";
  result.trace.sigma2 = sigma2;
  result.trace.d_constant = d_constant;

  double best_criterion = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_theta;
  for (std::size_t m : grid) {
    SelectionRecord rec{m, false, kNaN, kNaN, kNaN};
    const StabilityVerdict verdict = stability_check(wide.leading(m + family.overflow(m)), n, d_constant);
    if (verdict.in_collection) {
      const DesignSet design = wide.leading(m);
      const SymmetricFactor factor(design.psi_hat);
      Eigen::VectorXd theta = factor.solve(design.phi.transpose() * y / static_cast<double>(n));
      const double contrast = (y - design.phi * theta).squaredNorm() / static_cast<double>(n);
      const double criterion = contrast + 2.0 * sigma2 * static_cast<double>(m) / static_cast<double>(n);
      rec.in_collection = true;
      rec.criterion = criterion;
      if (better(criterion, best_criterion)) {
        best_criterion = criterion;
        best_theta = std::move(theta);
        result.m_for_b = m;
      }
    }
    result.trace.records.push_back(rec);
  }
  if (result.m_for_b == 0) {
    throw EmptyCollection("reuse_select: no grid dimension passes the collection gate (d = " +
                          std::to_string(d_constant) + ")");
  }
  result.trace.chosen_m = result.m_for_b;
  result.fit = DerivativeFit{std::move(best_theta), Strategy::DerivOfProjection, result.m_for_b, false,
                             BasisSpec(family, result.m_for_b)};
  return result;
}

}  // namespace seriesderiv
