#include "seriesderiv/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <vector>
#include <string>

namespace seriesderiv {

namespace {

// Kronrod abscissae (descending, last is the centre) and weights; Gauss weights
// belong to the odd-indexed abscissae and the centre.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEstimate {
  Eigen::VectorXd kronrod;
  double error;
};

PanelEstimate gk15(const std::function<Eigen::VectorXd(double)>& f, std::size_t dim, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Eigen::VectorXd k = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  const Eigen::VectorXd fc = f(centre);
  k += kWgk[7] * fc;
  g += kWg[3] * fc;
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kXgk[i];
    const Eigen::VectorXd sum = f(centre - dx) + f(centre + dx);
    k += kWgk[i] * sum;
    if (i % 2 == 1) g += kWg[i / 2] * sum;
  }
  k *= half;
  g *= half;
  return {k, (k - g).cwiseAbs().maxCoeff()};
}

struct Panel {
  double a;
  double b;
  PanelEstimate estimate;
  double excess;  // error above the rounding-noise floor
};

Panel make_panel(const std::function<Eigen::VectorXd(double)>& f, std::size_t dim, double a, double b) {
  PanelEstimate est = gk15(f, dim, a, b);
  if (!std::isfinite(est.error) || !est.kronrod.allFinite()) {
    throw QuadratureError("quadrature: non-finite integrand on [" + std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  // below this the G7/K15 difference is rounding noise
  const double noise = 1e-14 * est.kronrod.cwiseAbs().maxCoeff() + 1e-16 * (b - a);
  const double excess = est.error > noise ? est.error : 0.0;
  return {a, b, std::move(est), excess};
}

}  // namespace

Eigen::VectorXd integrate_vector(const std::function<Eigen::VectorXd(double)>& f, std::size_t dim,
                                 const Interval& interval, const QuadratureOptions& options) {
  if (!interval.bounded()) throw std::invalid_argument("integrate: interval must be bounded");
  Eigen::VectorXd total = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  const double length = interval.length();
  if (!(length > 0.0)) return total;
  const auto panels = static_cast<std::size_t>(std::max(1.0, std::ceil(length / options.panel_width)));
  const double width = length / static_cast<double>(panels);

  // Global adaptivity: always bisect the panel with the largest error until the
  // summed error meets the tolerance.
  auto cmp = [](const Panel& x, const Panel& y) { return x.excess < y.excess; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> open(cmp);
  std::vector<Panel> done;
  double error = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = interval.lo + width * static_cast<double>(p);
    const double b = (p + 1 == panels) ? interval.hi : a + width;
    Panel panel = make_panel(f, dim, a, b);
    error += panel.excess;
    if (panel.excess > 0.0) {
      open.push(std::move(panel));
    } else {
      done.push_back(std::move(panel));
    }
  }
  std::size_t subdivisions = 0;
  while (!open.empty() && error > options.abs_tol) {
    if (++subdivisions > options.max_subdivisions) {
      throw QuadratureError("quadrature did not converge on [" + std::to_string(interval.lo) + ", " +
                            std::to_string(interval.hi) + "], error estimate " + std::to_string(error));
    }
    Panel worst = open.top();
    open.pop();
    error -= worst.excess;
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw QuadratureError("quadrature: panel at " + std::to_string(worst.a) + " cannot be bisected further");
    }
    for (Panel half : {make_panel(f, dim, worst.a, mid), make_panel(f, dim, mid, worst.b)}) {
      error += half.excess;
      if (half.excess > 0.0) {
        open.push(std::move(half));
      } else {
        done.push_back(std::move(half));
      }
    }
  }
  while (!open.empty()) {
    done.push_back(open.top());
    open.pop();
  }
  std::sort(done.begin(), done.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const Panel& panel : done) total += panel.estimate.kronrod;
  return total;
}

double integrate(const std::function<double(double)>& f, const Interval& interval,
                 const QuadratureOptions& options) {
  auto wrapped = [&f](double x) {
    Eigen::VectorXd v(1);
    v(0) = f(x);
    return v;
  };
  return integrate_vector(wrapped, 1, interval, options)(0);
}

}  // namespace seriesderiv
