#pragma once

/**
 * @file io.hpp
 * @brief CSV samples, report and curve files, and the key = value config format.
 *
 * Numbers are written with %.17g so a save/load round trip is bit-exact.
 */

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "seriesderiv/design.hpp"
#include "seriesderiv/estimators.hpp"
#include "seriesderiv/experiment.hpp"

namespace seriesderiv {

/// Malformed input file; the message names the file and line.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration (unknown key, bad value). Maps to a usage error.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two numeric columns x,y with an optional "x,y" header. Blank lines are skipped.
Sample load_csv(const std::string& path);
void save_sample(const Sample& sample, const std::string& path);

std::string format_double(double v);

void save_report(const ExperimentReport& report, const std::string& path);
std::string report_csv(const ExperimentReport& report);
std::string calibration_csv(const CalibrationReport& report);

/// Writes "x,estimate" rows.
void emit_curve(std::span<const double> grid, std::span<const double> values, const std::string& path);
void emit_curve(const DerivativeFit& fit, std::span<const double> grid, const std::string& path);
void emit_curve(const RegressionFit& fit, std::span<const double> grid, const std::string& path);

/// Flat `key = value` text; '#' starts a comment. Duplicate keys are an error.
std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& origin = "config");
std::vector<std::string> split_list(const std::string& value);

/// Keys: functions, families, n, sigma, repetitions, seed, m_min, m_max, mode,
/// stability, halftrig_span, kappa0, kappa1, estimate_sigma2, d_const, f_scale, threads, report,
/// and for calibration kappa0_grid, kappa1_grid, f_scale_grid.
ExperimentConfig experiment_config_from_text(const std::string& text, const std::string& origin = "config");
CalibrationConfig calibration_config_from_text(const std::string& text, const std::string& origin = "config");

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace seriesderiv
