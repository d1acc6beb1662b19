#pragma once

/**
 * @file simulation.hpp
 * @brief Test functions and the Gaussian-design sample generator.
 */

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "seriesderiv/basis.hpp"
#include "seriesderiv/design.hpp"

namespace seriesderiv {

enum class TestFunctionId { B1 = 1, B2 = 2, B3 = 3, B4 = 4 };

/// b1 = 2 sin(pi x), b2 = exp(-x^2/2), b3 = x^2, b4 = 4x/(1+x^2).
struct TestFunction {
  TestFunctionId id;
  double (*b)(double);
  double (*b_prime)(double);

  std::string name() const;
};

TestFunction test_function(TestFunctionId id);
/// Accepts "b1".."b4". Throws std::invalid_argument otherwise.
TestFunction test_function_from_name(std::string_view name);

/// Generator for one repetition: mt19937_64 seeded through std::seed_seq with
/// the words of (seed, stream...). Distinct streams give unrelated sequences.
std::mt19937_64 substream(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);

/// X_i ~ N(0,1), Y_i = b(X_i) + sigma * Z_i with Z_i ~ N(0,1), drawn in the
/// order X_1, Z_1, X_2, Z_2, ...
Sample generate_sample(const TestFunction& fn, std::size_t n, double sigma, std::mt19937_64& rng);

/// Type-7 empirical quantile: for sorted x, h = (n-1) q and
/// Q = x_(floor h) + (h - floor h)(x_(floor h + 1) - x_(floor h)), 0-based.
double empirical_quantile(std::vector<double> x, double q);

/// [Q(0.03), Q(0.97)] of the design points.
Interval trim_interval(const Sample& sample);

}  // namespace seriesderiv
