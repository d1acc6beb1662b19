#pragma once

/**
 * @file selection.hpp
 * @brief Dimension selection: oracle, Goldenshluger-Lepski, and reuse of the
 * dimension selected for the regression function.
 *
 * GL selection over the random collection M (dimensions whose (m+p) Gram
 * passes the squared-norm gate):
 *
 *   V(m)  = (sigma^2 m / n) lambda_max(psi^{-1/2} psi' psi^{-1/2}),
 *           psi' = phi'^T phi' / n
 *   A(m)  = max_{m' in M} ( ||b'_{min(m,m')} - b'_{m'}||_n^2 - kappa0 V(m') )_+
 *   m_hat = argmin_{m in M} A(m) + kappa1 V(m)    (ties go to the smaller m)
 *
 * Fits are strategy 1 (derivative of the least-squares projection).
 */

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "seriesderiv/basis.hpp"
#include "seriesderiv/design.hpp"
#include "seriesderiv/estimators.hpp"

namespace seriesderiv {

/// No dimension of the grid passes the collection gate (or all are singular).
class EmptyCollection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using RealFunction = std::function<double(double)>;

/// Practical default for the f-scale in d = 1/[f_scale (||f||_inf v 1 + 1/3)],
/// set by the calibrate sweep so the collection gate stops binding before the
/// Gram matrix turns singular; kTheoryFScale is the value the risk bound is
/// proved with.
inline constexpr double kDefaultFScale = 1e-10;

struct GlConfig {
  double kappa0 = 1.0;
  double kappa1 = 1.0;
  std::optional<double> sigma2;      ///< empty: estimate_sigma2
  std::optional<double> d_constant;  ///< empty: plug-in default with f_scale
  double f_scale = kDefaultFScale;
  std::vector<std::size_t> m_grid;   ///< empty: default_m_grid

  /// Throws std::invalid_argument on kappa0 > kappa1, non-positive values,
  /// a non-increasing grid or a dimension the family does not admit.
  void validate(const BasisFamily& family) const;
};

struct SelectionRecord {
  std::size_t m = 0;
  bool in_collection = false;
  double v_hat = 0.0;      ///< NaN for non-members
  double a_value = 0.0;    ///< NaN for non-members
  double criterion = 0.0;  ///< A(m) + kappa1 V(m); NaN for non-members
};

struct SelectionTrace {
  std::vector<SelectionRecord> records;
  std::size_t chosen_m = 0;
  std::string strategy;
  double sigma2 = 0.0;
  double d_constant = 0.0;
};

/// Admissible m in 1..min(40, floor(n/10)) (at least the smallest admissible m).
std::vector<std::size_t> default_m_grid(const BasisFamily& family, std::size_t n);

/// 512-point (by default) uniform grid over a bounded interval.
std::vector<double> uniform_grid(const Interval& interval, std::size_t points = 512);

/// Trapezoid rule for integral of (fit - truth)^2 on a uniform grid spanning `interval`.
double squared_l2_distance(std::span<const double> fit, std::span<const double> truth,
                           const Interval& interval);

/// V(m) for the design of dimension m. Throws SingularGram.
double penalty_v_hat(const DesignSet& design, double sigma2, std::size_t n);

/// Residual mean square at the largest non-singular admissible m <= m_max,
/// over the observations inside the basis support: RSS / (n_in - m).
/// Requires n > 2 m_max. Throws EmptyCollection when no m is usable.
double estimate_sigma2(const Sample& sample, const BasisFamily& family, std::size_t m_max);

struct GlResult {
  SelectionTrace trace;
  DerivativeFit fit;
};

GlResult gl_select(const Sample& sample, const BasisFamily& family, const GlConfig& config);

enum class Target { Regression, Derivative };

struct OracleResult {
  std::size_t m = 0;
  double error = 0.0;
  /// (m, squared L2 error) for every non-singular grid dimension.
  std::vector<std::pair<std::size_t, double>> errors;
};

/// Chooses the grid dimension whose fit is closest in L2(eval_interval) to the
/// truth: the strategy-1 derivative fit for Target::Derivative, the regression
/// fit for Target::Regression. Throws EmptyCollection if every fit is singular.
OracleResult oracle_select(const Sample& sample, const BasisFamily& family,
                           std::span<const std::size_t> m_grid, const RealFunction& truth,
                           const Interval& eval_interval, Target target = Target::Derivative,
                           std::size_t grid_points = 512);

struct ReuseResult {
  std::size_t m_for_b = 0;
  DerivativeFit fit;
  SelectionTrace trace;  ///< criterion = ||Y - b_m||_n^2 + 2 sigma^2 m / n
};

/// Penalized least-squares choice of m for b over the collection members,
/// then the strategy-1 derivative fit at that m.
ReuseResult reuse_select(const Sample& sample, const BasisFamily& family, const GlConfig& config);

}  // namespace seriesderiv
