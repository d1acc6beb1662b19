#pragma once

/**
 * @file experiment.hpp
 * @brief Monte Carlo runner for the simulation table and the kappa calibration sweep.
 *
 * A cell is one (function, family, n). Every repetition of a cell draws its
 * sample from substream(seed, {function, n, repetition}), so the families of
 * a given (function, n) see the same samples and repetitions can run on any
 * thread without changing the report.
 */

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seriesderiv/basis.hpp"
#include "seriesderiv/selection.hpp"
#include "seriesderiv/simulation.hpp"

namespace seriesderiv {

enum class SelectionMode { Oracle, Gl, Reuse };

/// Which dimensions are candidates in oracle mode: numerically non-singular
/// Gram (Gram), the Lambda gate on the (m+p) design (Lambda), or the squared
/// collection gate (Collection).
enum class StabilityFilter { Gram, Lambda, Collection };

/// How the half-trig basis is placed in each repetition. Trimmed: scaled to
/// the trimmed interval and zero outside it, so outlying design points drop
/// out of the fit. Extended: scaled to the trimmed interval, evaluated at
/// every design point. Range: scaled to [min X, max X].
enum class HalfTrigSpan { Trimmed, Extended, Range };

HalfTrigSpan halftrig_span_from_name(const std::string& name);
std::string to_string(HalfTrigSpan span);
SelectionMode selection_mode_from_name(const std::string& name);
std::string to_string(SelectionMode mode);
StabilityFilter stability_filter_from_name(const std::string& name);
std::string to_string(StabilityFilter filter);

struct ExperimentConfig {
  std::vector<TestFunctionId> functions{TestFunctionId::B1, TestFunctionId::B2, TestFunctionId::B3,
                                        TestFunctionId::B4};
  std::vector<std::string> families{"hermite", "half-trig"};
  std::vector<std::size_t> n_values{250, 1000, 4000};
  double sigma = 0.25;
  std::size_t repetitions = 100;
  std::uint64_t seed = 20240601;
  std::size_t m_min = 1;
  std::size_t m_max = 0;  ///< 0: min(40, n/10)
  SelectionMode mode = SelectionMode::Oracle;
  StabilityFilter stability = StabilityFilter::Gram;
  HalfTrigSpan halftrig_span = HalfTrigSpan::Extended;
  double kappa0 = 1.0;
  double kappa1 = 1.0;
  bool estimate_sigma2 = false;         ///< gl/reuse: estimate sigma^2 instead of using sigma
  std::optional<double> d_constant;     ///< gl/reuse collection gate; empty: plug-in with f_scale
  double f_scale = kDefaultFScale;
  std::size_t threads = 0;              ///< 0: hardware concurrency
  std::string report_path;              ///< empty: no file written by the CLI

  /// Throws std::invalid_argument on K = 0, sigma <= 0, empty lists,
  /// unknown family names or m_min > m_max.
  void validate() const;

  /// Candidate dimensions for a family at sample size n.
  std::vector<std::size_t> m_grid(const BasisFamily& family, std::size_t n) const;
};

/// One repetition: chosen dimensions and squared L2 errors on the trimmed interval.
struct RepetitionOutcome {
  bool excluded = false;  ///< no usable dimension (singular or empty collection)
  std::size_t dim_b = 0;
  double err_b = 0.0;
  std::size_t dim_db = 0;
  double err_db = 0.0;
};

struct CellResult {
  TestFunctionId function;
  std::string family;
  std::size_t n = 0;
  std::vector<RepetitionOutcome> repetitions;
  std::size_t excluded = 0;
};

struct ReportRow {
  std::string function;
  std::string family;
  std::size_t n = 0;
  std::string target;  ///< "b" or "b'"
  double mse100_mean = 0.0;
  double mse100_std = 0.0;
  double dim_mean = 0.0;
  double dim_std = 0.0;
  std::size_t k = 0;  ///< repetitions that entered the averages
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::vector<CellResult> cells;
};

/// Runs one repetition of a cell; exposed for tests.
RepetitionOutcome run_repetition(const ExperimentConfig& config, const TestFunction& fn,
                                 const std::string& family_name, std::size_t n, std::size_t repetition);

ExperimentReport run_experiment(const ExperimentConfig& config);

/// Mean and sample standard deviation (n - 1 denominator; 0 for one value).
std::pair<double, double> mean_and_std(const std::vector<double>& values);

struct CalibrationConfig {
  ExperimentConfig base;  ///< functions, families, n, sigma, repetitions, seed
  std::vector<double> kappa0{0.5, 1.0, 2.0};
  std::vector<double> kappa1{0.5, 1.0, 2.0, 4.0};
  std::vector<double> f_scales{kDefaultFScale};
};

struct CalibrationRow {
  std::string function;
  std::string family;
  std::size_t n = 0;
  double kappa0 = 0.0;
  double kappa1 = 0.0;
  double f_scale = 0.0;
  double median_ratio = 0.0;  ///< median over seeds of GL risk / oracle risk for b'
  double dim_mean = 0.0;
  std::size_t k = 0;
};

struct CalibrationReport {
  std::vector<CalibrationRow> rows;
  /// Setting with the smallest worst-cell median ratio (ties: first in sweep order).
  double best_kappa0 = 0.0;
  double best_kappa1 = 0.0;
  double best_f_scale = 0.0;
  double best_worst_ratio = 0.0;
};

/// Sweeps kappa0 <= kappa1 pairs and f-scales; GL is compared with the
/// oracle on the same samples.
CalibrationReport run_calibration(const CalibrationConfig& config);

double median(std::vector<double> values);

}  // namespace seriesderiv
