#include "seriesderiv/basis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace seriesderiv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

// Hermite L(m) is cached up to this dimension; larger m are computed on demand.
constexpr std::size_t kHermiteCacheDim = 256;

void require_size(std::span<double> out, std::size_t m) {
  if (out.size() != m) {
    throw std::invalid_argument("basis: output span has size " + std::to_string(out.size()) +
                                ", expected " + std::to_string(m));
  }
}

// t_1 = 1, t_{2j} = sqrt2 cos(2 pi j x), t_{2j+1} = sqrt2 sin(2 pi j x)
void trig_odd_values(double x, std::span<double> out) {
  out[0] = 1.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double freq = 2.0 * kPi * static_cast<double>((i + 1) / 2);
    out[i] = std::numbers::sqrt2 * ((i % 2 == 1) ? std::cos(freq * x) : std::sin(freq * x));
  }
}

void trig_odd_derivatives(double x, std::span<double> out) {
  out[0] = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double freq = 2.0 * kPi * static_cast<double>((i + 1) / 2);
    out[i] = std::numbers::sqrt2 * freq *
             ((i % 2 == 1) ? -std::sin(freq * x) : std::cos(freq * x));
  }
}

// 1/sqrt(L), then sqrt(2/L) sin(pi j u), sqrt(2/L) cos(pi j u) with u = (x-a)/L
void half_trig_values(const Interval& iv, double x, std::span<double> out) {
  const double len = iv.length();
  const double u = (x - iv.lo) / len;
  const double amp = std::sqrt(2.0 / len);
  out[0] = 1.0 / std::sqrt(len);
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double freq = kPi * static_cast<double>((i + 1) / 2);
    out[i] = amp * ((i % 2 == 1) ? std::sin(freq * u) : std::cos(freq * u));
  }
}

void half_trig_derivatives(const Interval& iv, double x, std::span<double> out) {
  const double len = iv.length();
  const double u = (x - iv.lo) / len;
  const double amp = std::sqrt(2.0 / len);
  out[0] = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double freq = kPi * static_cast<double>((i + 1) / 2);
    const double scale = amp * freq / len;
    out[i] = scale * ((i % 2 == 1) ? std::cos(freq * u) : -std::sin(freq * u));
  }
}

// l_j(x) = sqrt2 L_j(2x) e^{-x}; the Laguerre recurrence is linear so the
// weight can be folded into the starting values.
void laguerre_values(double x, std::span<double> out) {
  const double t = 2.0 * x;
  out[0] = std::numbers::sqrt2 * std::exp(-x);
  if (out.size() > 1) out[1] = (1.0 - t) * out[0];
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kd = static_cast<double>(k);
    out[k + 1] = ((2.0 * kd + 1.0 - t) * out[k] - kd * out[k - 1]) / (kd + 1.0);
  }
}

// l'_0 = -l_0, l'_j = -l_j - 2 sum_{k<j} l_k
void laguerre_derivatives(double x, std::span<double> out) {
  laguerre_values(x, out);
  double running = 0.0;
  for (double& v : out) {
    const double value = v;
    v = -value - 2.0 * running;
    running += value;
  }
}

// h_0 = pi^{-1/4} e^{-x^2/2}, h_{k+1} = sqrt(2/(k+1)) x h_k - sqrt(k/(k+1)) h_{k-1}
void hermite_values(double x, std::span<double> out) {
  out[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (out.size() > 1) out[1] = std::numbers::sqrt2 * x * out[0];
  for (std::size_t k = 1; k + 1 < out.size(); ++k) {
    const double kd = static_cast<double>(k);
    out[k + 1] = std::sqrt(2.0 / (kd + 1.0)) * x * out[k] - std::sqrt(kd / (kd + 1.0)) * out[k - 1];
  }
}

// h'_j = (sqrt(j) h_{j-1} - sqrt(j+1) h_{j+1}) / sqrt2
void hermite_derivatives(double x, std::span<double> out) {
  std::vector<double> h(out.size() + 1);
  hermite_values(x, h);
  for (std::size_t j = 0; j < out.size(); ++j) {
    const double jd = static_cast<double>(j);
    const double below = (j == 0) ? 0.0 : std::sqrt(jd) * h[j - 1];
    out[j] = (below - std::sqrt(jd + 1.0) * h[j + 1]) / std::numbers::sqrt2;
  }
}

// Unnormalized G_k by Bonnet's recurrence, then scaled by sqrt((2k+1)/2).
void legendre_values(double x, std::span<double> out) {
  double prev = 0.0;
  double cur = 1.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double kd = static_cast<double>(k);
    out[k] = std::sqrt((2.0 * kd + 1.0) / 2.0) * cur;
    const double next = ((2.0 * kd + 1.0) * x * cur - kd * prev) / (kd + 1.0);
    prev = cur;
    cur = next;
  }
}

// G'_{k+1} = G'_{k-1} + (2k+1) G_k
void legendre_derivatives(double x, std::span<double> out) {
  double g_prev = 0.0;
  double g_cur = 1.0;
  double d_prev = 0.0;  // G'_{k-1}
  double d_cur = 0.0;   // G'_k
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double kd = static_cast<double>(k);
    out[k] = std::sqrt((2.0 * kd + 1.0) / 2.0) * d_cur;
    const double d_next = d_prev + (2.0 * kd + 1.0) * g_cur;
    const double g_next = ((2.0 * kd + 1.0) * x * g_cur - kd * g_prev) / (kd + 1.0);
    d_prev = d_cur;
    d_cur = d_next;
    g_prev = g_cur;
    g_cur = g_next;
  }
}

// sup_x sum_{j<m} h_j(x)^2 on a fine grid; the sum is even in x.
std::vector<double> hermite_grid_sup(std::size_t max_dim) {
  std::vector<double> sup(max_dim + 1, 0.0);
  const double reach = std::sqrt(2.0 * static_cast<double>(max_dim) + 1.0) + 6.0;
  const double step = 1e-3;
  std::vector<double> h(max_dim);
  for (double x = 0.0; x <= reach; x += step) {
    hermite_values(x, h);
    double acc = 0.0;
    for (std::size_t j = 0; j < max_dim; ++j) {
      acc += h[j] * h[j];
      sup[j + 1] = std::max(sup[j + 1], acc);
    }
  }
  return sup;
}

double hermite_l_factor(std::size_t m) {
  static const std::vector<double> table = hermite_grid_sup(kHermiteCacheDim);
  if (m <= kHermiteCacheDim) return table[m];
  return hermite_grid_sup(m)[m];
}

}  // namespace

BasisFamily BasisFamily::trigonometric_odd() {
  return BasisFamily(FamilyKind::TrigonometricOdd, {0.0, 1.0});
}

BasisFamily BasisFamily::half_trigonometric(double a, double b) {
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw std::invalid_argument("half-trigonometric basis needs a finite interval a < b");
  }
  return BasisFamily(FamilyKind::HalfTrigonometric, {a, b});
}

BasisFamily BasisFamily::laguerre() { return BasisFamily(FamilyKind::Laguerre, {0.0, kInf}); }
BasisFamily BasisFamily::hermite() { return BasisFamily(FamilyKind::Hermite, {-kInf, kInf}); }
BasisFamily BasisFamily::legendre() { return BasisFamily(FamilyKind::Legendre, {-1.0, 1.0}); }

BasisFamily BasisFamily::from_name(std::string_view name) {
  if (name == "trig" || name == "trigonometric") return trigonometric_odd();
  if (name == "half-trig" || name == "half_trig" || name == "trigo") return half_trigonometric(0.0, 1.0);
  if (name == "laguerre") return laguerre();
  if (name == "hermite" || name == "herm") return hermite();
  if (name == "legendre") return legendre();
  throw std::invalid_argument("unknown basis family '" + std::string(name) + "'");
}

Interval BasisFamily::support() const { return beyond_ ? Interval{-kInf, kInf} : interval_; }

std::string BasisFamily::name() const {
  switch (kind_) {
    case FamilyKind::TrigonometricOdd: return "trig";
    case FamilyKind::HalfTrigonometric: return "half-trig";
    case FamilyKind::Laguerre: return "laguerre";
    case FamilyKind::Hermite: return "hermite";
    case FamilyKind::Legendre: return "legendre";
  }
  return "unknown";
}

bool BasisFamily::admits(std::size_t m) const {
  if (m == 0) return false;
  if (kind_ == FamilyKind::TrigonometricOdd) return m % 2 == 1;
  return true;
}

std::size_t BasisFamily::overflow(std::size_t m) const {
  switch (kind_) {
    case FamilyKind::Hermite: return 1;
    // an even dimension ends on a sine whose derivative is the next cosine
    case FamilyKind::HalfTrigonometric: return (m % 2 == 0) ? 1 : 0;
    default: return 0;
  }
}

BasisFamily BasisFamily::with_interval(double a, double b) const {
  if (kind_ != FamilyKind::HalfTrigonometric) return *this;
  BasisFamily out = half_trigonometric(a, b);
  out.beyond_ = beyond_;
  return out;
}

BasisFamily BasisFamily::extended_beyond_interval() const {
  if (kind_ != FamilyKind::HalfTrigonometric) {
    throw std::invalid_argument("only the half-trigonometric basis can be extended beyond its interval");
  }
  BasisFamily out = *this;
  out.beyond_ = true;
  return out;
}

BasisSpec::BasisSpec(BasisFamily family, std::size_t m) : family_(family), m_(m) {
  if (m == 0) throw std::invalid_argument("basis dimension m must be at least 1");
  if (!family_.admits(m)) {
    throw std::invalid_argument("dimension " + std::to_string(m) + " is not admissible for the " +
                                family_.name() + " basis (odd m required)");
  }
}

void eval_basis_into(const BasisSpec& spec, double x, std::span<double> out) {
  require_size(out, spec.m());
  if (!spec.support().contains(x)) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  switch (spec.kind()) {
    case FamilyKind::TrigonometricOdd: trig_odd_values(x, out); break;
    case FamilyKind::HalfTrigonometric: half_trig_values(spec.family().scale_interval(), x, out); break;
    case FamilyKind::Laguerre: laguerre_values(x, out); break;
    case FamilyKind::Hermite: hermite_values(x, out); break;
    case FamilyKind::Legendre: legendre_values(x, out); break;
  }
}

void eval_basis_derivative_into(const BasisSpec& spec, double x, std::span<double> out) {
  require_size(out, spec.m());
  if (!spec.support().contains(x)) {
    throw std::domain_error("derivative requested at x = " + std::to_string(x) +
                            " outside the support of the " + spec.family().name() + " basis");
  }
  switch (spec.kind()) {
    case FamilyKind::TrigonometricOdd: trig_odd_derivatives(x, out); break;
    case FamilyKind::HalfTrigonometric: half_trig_derivatives(spec.family().scale_interval(), x, out); break;
    case FamilyKind::Laguerre: laguerre_derivatives(x, out); break;
    case FamilyKind::Hermite: hermite_derivatives(x, out); break;
    case FamilyKind::Legendre: legendre_derivatives(x, out); break;
  }
}

Eigen::VectorXd eval_basis(const BasisSpec& spec, double x) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(spec.m()));
  eval_basis_into(spec, x, std::span<double>(v.data(), spec.m()));
  return v;
}

Eigen::VectorXd eval_basis_derivative(const BasisSpec& spec, double x) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(spec.m()));
  eval_basis_derivative_into(spec, x, std::span<double>(v.data(), spec.m()));
  return v;
}

DerivativeLinkMatrix delta_matrix(const BasisSpec& spec) {
  const auto m = static_cast<Eigen::Index>(spec.m());
  const auto cols = static_cast<Eigen::Index>(spec.m() + spec.p());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m, cols);

  switch (spec.kind()) {
    case FamilyKind::TrigonometricOdd:
    case FamilyKind::HalfTrigonometric: {
      // TrigonometricOdd rows (cos, sin); HalfTrigonometric rows (sin, cos).
      const bool half = spec.kind() == FamilyKind::HalfTrigonometric;
      const double len = half ? spec.family().scale_interval().length() : 1.0;
      const double base = half ? kPi / len : 2.0 * kPi;
      for (Eigen::Index i = 1; i < m; ++i) {
        const double w = base * static_cast<double>((i + 1) / 2);
        const bool first_of_pair = (i % 2 == 1);
        // first_of_pair: cos (trig) / sin (half); derivative lands on the partner
        const Eigen::Index partner = first_of_pair ? i + 1 : i - 1;
        const double sign = half ? (first_of_pair ? 1.0 : -1.0) : (first_of_pair ? -1.0 : 1.0);
        d(i, partner) = sign * w;
      }
      break;
    }
    case FamilyKind::Laguerre:
      for (Eigen::Index j = 0; j < m; ++j) {
        d(j, j) = -1.0;
        for (Eigen::Index k = 0; k < j; ++k) d(j, k) = -2.0;
      }
      break;
    case FamilyKind::Hermite:
      for (Eigen::Index j = 0; j < m; ++j) {
        const double jd = static_cast<double>(j);
        if (j > 0) d(j, j - 1) = std::sqrt(jd) / std::numbers::sqrt2;
        d(j, j + 1) = -std::sqrt(jd + 1.0) / std::numbers::sqrt2;
      }
      break;
    case FamilyKind::Legendre:
      // g'_j = sqrt(2j+1) sum_{i<j, j-i odd} sqrt(2i+1) g_i
      for (Eigen::Index j = 1; j < m; ++j) {
        for (Eigen::Index i = j - 1; i >= 0; i -= 2) {
          d(j, i) = std::sqrt(2.0 * static_cast<double>(j) + 1.0) *
                    std::sqrt(2.0 * static_cast<double>(i) + 1.0);
        }
      }
      break;
  }
  return {std::move(d), spec.kind(), spec.m()};
}

double l_factor(const BasisSpec& spec) {
  const double m = static_cast<double>(spec.m());
  switch (spec.kind()) {
    case FamilyKind::TrigonometricOdd: return m;
    case FamilyKind::HalfTrigonometric:
      return (m + ((spec.m() % 2 == 0) ? 1.0 : 0.0)) / spec.family().scale_interval().length();
    case FamilyKind::Laguerre: return 2.0 * m;
    case FamilyKind::Hermite: return hermite_l_factor(spec.m());
    case FamilyKind::Legendre: return m * m / 2.0;
  }
  return m;
}

double hermite_l_factor_bound(std::size_t m) {
  return static_cast<double>(m) / std::sqrt(kPi);
}

double l_prime_factor(const BasisSpec& spec, std::span<const double> probe_grid) {
  if (probe_grid.empty()) throw std::invalid_argument("l_prime_factor: empty probe grid");
  std::vector<double> d(spec.m());
  double best = 0.0;
  bool any = false;
  for (double x : probe_grid) {
    if (!spec.support().contains(x)) continue;
    eval_basis_derivative_into(spec, x, d);
    double acc = 0.0;
    for (double v : d) acc += v * v;
    best = std::max(best, acc);
    any = true;
  }
  if (!any) throw std::invalid_argument("l_prime_factor: no probe point inside the support");
  return best;
}

}  // namespace seriesderiv
