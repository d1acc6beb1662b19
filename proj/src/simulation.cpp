#include "seriesderiv/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace seriesderiv {

namespace {

double b1(double x) { return 2.0 * std::sin(std::numbers::pi * x); }
double b1_prime(double x) { return 2.0 * std::numbers::pi * std::cos(std::numbers::pi * x); }
double b2(double x) { return std::exp(-0.5 * x * x); }
double b2_prime(double x) { return -x * std::exp(-0.5 * x * x); }
double b3(double x) { return x * x; }
double b3_prime(double x) { return 2.0 * x; }
double b4(double x) { return 4.0 * x / (1.0 + x * x); }
double b4_prime(double x) {
  const double s = 1.0 + x * x;
  return 4.0 * (1.0 - x * x) / (s * s);
}

}  // namespace

std::string TestFunction::name() const { return "b" + std::to_string(static_cast<int>(id)); }

TestFunction test_function(TestFunctionId id) {
  switch (id) {
    case TestFunctionId::B1: return {id, b1, b1_prime};
    case TestFunctionId::B2: return {id, b2, b2_prime};
    case TestFunctionId::B3: return {id, b3, b3_prime};
    case TestFunctionId::B4: return {id, b4, b4_prime};
  }
  throw std::invalid_argument("unknown test function id");
}

TestFunction test_function_from_name(std::string_view name) {
  if (name == "b1") return test_function(TestFunctionId::B1);
  if (name == "b2") return test_function(TestFunctionId::B2);
  if (name == "b3") return test_function(TestFunctionId::B3);
  if (name == "b4") return test_function(TestFunctionId::B4);
  throw std::invalid_argument("unknown test function '" + std::string(name) + "' (expected b1..b4)");
}

std::mt19937_64 substream(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
  std::vector<std::uint32_t> words;
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (std::uint64_t v : stream) push(v);
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

Sample generate_sample(const TestFunction& fn, std::size_t n, double sigma, std::mt19937_64& rng) {
  if (n == 0) throw std::invalid_argument("generate_sample: n must be positive");
  if (!(sigma >= 0.0)) throw std::invalid_argument("generate_sample: sigma must be non-negative");
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = normal(rng);
    const double z = normal(rng);
    y[i] = sigma == 0.0 ? fn.b(x[i]) : fn.b(x[i]) + sigma * z;
  }
  return Sample(std::move(x), std::move(y));
}

double empirical_quantile(std::vector<double> x, double q) {
  if (x.empty()) throw std::invalid_argument("empirical_quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("empirical_quantile: q must lie in [0, 1]");
  std::sort(x.begin(), x.end());
  const double h = static_cast<double>(x.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= x.size()) return x.back();
  const double frac = h - static_cast<double>(lo);
  return x[lo] + frac * (x[lo + 1] - x[lo]);
}

Interval trim_interval(const Sample& sample) {
  if (sample.size() < 2) throw std::invalid_argument("trim_interval: need at least two observations");
  return {empirical_quantile(sample.x(), 0.03), empirical_quantile(sample.x(), 0.97)};
}

}  // namespace seriesderiv
