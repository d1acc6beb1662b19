#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature, scalar and vector valued.

#include <cstddef>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

#include "seriesderiv/basis.hpp"

namespace seriesderiv {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
  double abs_tol = 1e-11;
  /// Initial panels are no wider than this; refinement bisects from there.
  double panel_width = 0.5;
  std::size_t max_subdivisions = 100000;
};

/// Integral over a bounded interval. Throws QuadratureError when the summed
/// error estimate is still above abs_tol after max_subdivisions bisections.
double integrate(const std::function<double(double)>& f, const Interval& interval,
                 const QuadratureOptions& options = {});

/// Componentwise integral of a vector-valued integrand of fixed size `dim`.
Eigen::VectorXd integrate_vector(const std::function<Eigen::VectorXd(double)>& f, std::size_t dim,
                                 const Interval& interval, const QuadratureOptions& options = {});

}  // namespace seriesderiv
