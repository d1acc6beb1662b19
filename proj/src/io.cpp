#include "seriesderiv/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "seriesderiv/simulation.hpp"

namespace seriesderiv {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_number(const std::string& text, double& out) {
  const char* begin = text.data();
  const char* end = begin + text.size();
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && begin != end;
}

template <typename T>
T parse_unsigned(const std::string& key, const std::string& value, const std::string& origin) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() || value.empty()) {
    throw ConfigError(origin + ": " + key + " expects a non-negative integer, got '" + value + "'");
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value, const std::string& origin) {
  double out = 0.0;
  if (!parse_number(value, out) || !std::isfinite(out)) {
    throw ConfigError(origin + ": " + key + " expects a finite number, got '" + value + "'");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value, const std::string& origin) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError(origin + ": " + key + " expects true or false, got '" + value + "'");
}

std::vector<double> parse_real_list(const std::string& key, const std::string& value, const std::string& origin) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(parse_real(key, item, origin));
  if (out.empty()) throw ConfigError(origin + ": " + key + " must not be empty");
  return out;
}

void apply_experiment_key(ExperimentConfig& cfg, const std::string& key, const std::string& value,
                          const std::string& origin) {
  try {
    if (key == "functions") {
      cfg.functions.clear();
      for (const auto& name : split_list(value)) cfg.functions.push_back(test_function_from_name(name).id);
    } else if (key == "families") {
      cfg.families = split_list(value);
      for (const auto& f : cfg.families) (void)BasisFamily::from_name(f);
    } else if (key == "n") {
      cfg.n_values.clear();
      for (const auto& item : split_list(value)) cfg.n_values.push_back(parse_unsigned<std::size_t>(key, item, origin));
    } else if (key == "sigma") {
      cfg.sigma = parse_real(key, value, origin);
    } else if (key == "repetitions") {
      cfg.repetitions = parse_unsigned<std::size_t>(key, value, origin);
    } else if (key == "seed") {
      cfg.seed = parse_unsigned<std::uint64_t>(key, value, origin);
    } else if (key == "m_min") {
      cfg.m_min = parse_unsigned<std::size_t>(key, value, origin);
    } else if (key == "m_max") {
      cfg.m_max = parse_unsigned<std::size_t>(key, value, origin);
    } else if (key == "mode") {
      cfg.mode = selection_mode_from_name(value);
    } else if (key == "stability") {
      cfg.stability = stability_filter_from_name(value);
    } else if (key == "halftrig_span") {
      cfg.halftrig_span = halftrig_span_from_name(value);
    } else if (key == "kappa0") {
      cfg.kappa0 = parse_real(key, value, origin);
    } else if (key == "kappa1") {
      cfg.kappa1 = parse_real(key, value, origin);
    } else if (key == "estimate_sigma2") {
      cfg.estimate_sigma2 = parse_bool(key, value, origin);
    } else if (key == "d_const") {
      cfg.d_constant = parse_real(key, value, origin);
    } else if (key == "f_scale") {
      cfg.f_scale = parse_real(key, value, origin);
    } else if (key == "threads") {
      cfg.threads = parse_unsigned<std::size_t>(key, value, origin);
    } else if (key == "report") {
      cfg.report_path = value;
    } else {
      throw ConfigError(origin + ": unknown key '" + key + "'");
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + key + ": " + e.what());
  }
}

}  // namespace

Sample load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path + ": cannot open file");
  std::vector<double> x, y;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty()) continue;
    const std::vector<std::string> fields = split_fields(body);
    const bool first = !seen_content;
    seen_content = true;
    if (fields.size() > 2) {
      throw DataError(path + ": line " + std::to_string(line_no) + ": unexpected third column '" + fields[2] +
                      "' (expected two columns x,y)");
    }
    if (first && fields.size() == 2 && fields[0] == "x" && fields[1] == "y") continue;
    if (fields.size() < 2) {
      throw DataError(path + ": line " + std::to_string(line_no) + ": expected two columns x,y");
    }
    double vx = 0.0, vy = 0.0;
    for (int c = 0; c < 2; ++c) {
      double& target = c == 0 ? vx : vy;
      if (!parse_number(fields[c], target)) {
        throw DataError(path + ": line " + std::to_string(line_no) + ": column " + std::to_string(c + 1) +
                        " is not a number: '" + fields[c] + "'");
      }
      if (!std::isfinite(target)) {
        throw DataError(path + ": line " + std::to_string(line_no) + ": column " + std::to_string(c + 1) +
                        " is not finite: '" + fields[c] + "'");
      }
    }
    x.push_back(vx);
    y.push_back(vy);
  }
  if (x.empty()) throw DataError(path + ": line " + std::to_string(line_no) + ": no data rows");
  return Sample(std::move(x), std::move(y));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void save_sample(const Sample& sample, const std::string& path) {
  std::string out = "x,y\n";
  for (std::size_t i = 0; i < sample.size(); ++i) {
    out += format_double(sample.x()[i]) + "," + format_double(sample.y()[i]) + "\n";
  }
  write_file(path, out);
}

std::string report_csv(const ExperimentReport& report) {
  std::string out = "function,family,n,target,mse100_mean,mse100_std,dim_mean,dim_std,K\n";
  for (const auto& r : report.rows) {
    out += r.function + "," + r.family + "," + std::to_string(r.n) + "," + r.target + "," +
           format_double(r.mse100_mean) + "," + format_double(r.mse100_std) + "," + format_double(r.dim_mean) + "," +
           format_double(r.dim_std) + "," + std::to_string(r.k) + "\n";
  }
  return out;
}

void save_report(const ExperimentReport& report, const std::string& path) { write_file(path, report_csv(report)); }

std::string calibration_csv(const CalibrationReport& report) {
  std::string out = "function,family,n,kappa0,kappa1,f_scale,median_ratio,dim_mean,K\n";
  for (const auto& r : report.rows) {
    out += r.function + "," + r.family + "," + std::to_string(r.n) + "," + format_double(r.kappa0) + "," +
           format_double(r.kappa1) + "," + format_double(r.f_scale) + "," + format_double(r.median_ratio) + "," +
           format_double(r.dim_mean) + "," + std::to_string(r.k) + "\n";
  }
  return out;
}

void emit_curve(std::span<const double> grid, std::span<const double> values, const std::string& path) {
  if (grid.size() != values.size()) throw std::invalid_argument("emit_curve: grid and values differ in length");
  std::string out = "x,estimate\n";
  for (std::size_t i = 0; i < grid.size(); ++i) out += format_double(grid[i]) + "," + format_double(values[i]) + "\n";
  write_file(path, out);
}

void emit_curve(const DerivativeFit& fit, std::span<const double> grid, const std::string& path) {
  emit_curve(grid, evaluate_fit(fit, grid), path);
}

void emit_curve(const RegressionFit& fit, std::span<const double> grid, const std::string& path) {
  emit_curve(grid, evaluate_regression(fit, grid), path);
}

std::map<std::string, std::string> parse_key_values(const std::string& text, const std::string& origin) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ": line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError(origin + ": line " + std::to_string(line_no) + ": empty key");
    if (!out.emplace(key, value).second) {
      throw ConfigError(origin + ": line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return out;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> out;
  for (auto& item : split_fields(value)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

ExperimentConfig experiment_config_from_text(const std::string& text, const std::string& origin) {
  ExperimentConfig cfg;
  for (const auto& [key, value] : parse_key_values(text, origin)) apply_experiment_key(cfg, key, value, origin);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

CalibrationConfig calibration_config_from_text(const std::string& text, const std::string& origin) {
  CalibrationConfig cfg;
  cfg.base.mode = SelectionMode::Gl;
  for (const auto& [key, value] : parse_key_values(text, origin)) {
    if (key == "kappa0_grid") {
      cfg.kappa0 = parse_real_list(key, value, origin);
    } else if (key == "kappa1_grid") {
      cfg.kappa1 = parse_real_list(key, value, origin);
    } else if (key == "f_scale_grid") {
      cfg.f_scales = parse_real_list(key, value, origin);
    } else {
      apply_experiment_key(cfg.base, key, value, origin);
    }
  }
  try {
    cfg.base.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(path + ": cannot open for writing");
  out << content;
  if (!out) throw DataError(path + ": write failed");
}

}  // namespace seriesderiv
