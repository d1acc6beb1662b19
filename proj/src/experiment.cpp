#include "seriesderiv/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "seriesderiv/estimators.hpp"

namespace seriesderiv {

namespace {

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

struct PreparedRepetition {
  Sample sample;
  Interval trimmed;
  BasisFamily family;
  std::vector<std::size_t> grid;
};

PreparedRepetition prepare(const ExperimentConfig& config, const TestFunction& fn, const std::string& family_name,
                           std::size_t n, std::size_t repetition) {
  std::mt19937_64 rng = substream(config.seed, {static_cast<std::uint64_t>(fn.id), n, repetition});
  Sample sample = generate_sample(fn, n, config.sigma, rng);
  const Interval trimmed = trim_interval(sample);
  BasisFamily family = BasisFamily::from_name(family_name);
  if (family.kind() == FamilyKind::HalfTrigonometric) {
    switch (config.halftrig_span) {
      case HalfTrigSpan::Trimmed: family = family.with_interval(trimmed.lo, trimmed.hi); break;
      case HalfTrigSpan::Extended:
        family = family.with_interval(trimmed.lo, trimmed.hi).extended_beyond_interval();
        break;
      case HalfTrigSpan::Range: {
        const auto [lo, hi] = std::minmax_element(sample.x().begin(), sample.x().end());
        family = family.with_interval(*lo, *hi);
        break;
      }
    }
  }
  std::vector<std::size_t> grid = config.m_grid(family, n);
  return {std::move(sample), trimmed, family, std::move(grid)};
}

double grid_error(const std::vector<double>& estimate, const RealFunction& truth, const std::vector<double>& grid,
                  const Interval& interval) {
  std::vector<double> truth_values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) truth_values[i] = truth(grid[i]);
  return squared_l2_distance(estimate, truth_values, interval);
}

std::vector<std::size_t> filter_grid(const PreparedRepetition& rep, StabilityFilter filter, double d_constant) {
  if (filter == StabilityFilter::Gram) return rep.grid;
  std::size_t top = 0;
  for (std::size_t m : rep.grid) top = std::max(top, m + rep.family.overflow(m));
  const DesignSet wide = build_design(rep.sample, BasisSpec(rep.family, top));
  std::vector<std::size_t> kept;
  for (std::size_t m : rep.grid) {
    const StabilityVerdict v = stability_check(wide.leading(m + rep.family.overflow(m)), rep.sample.size(), d_constant);
    if (filter == StabilityFilter::Lambda ? v.in_lambda : v.in_collection) kept.push_back(m);
  }
  return kept;
}

GlConfig gl_config(const ExperimentConfig& config, const std::vector<std::size_t>& grid) {
  GlConfig gl;
  gl.kappa0 = config.kappa0;
  gl.kappa1 = config.kappa1;
  if (!config.estimate_sigma2) gl.sigma2 = config.sigma * config.sigma;
  gl.d_constant = config.d_constant;
  gl.f_scale = config.f_scale;
  gl.m_grid = grid;
  return gl;
}

}  // namespace

SelectionMode selection_mode_from_name(const std::string& name) {
  if (name == "oracle") return SelectionMode::Oracle;
  if (name == "gl") return SelectionMode::Gl;
  if (name == "reuse") return SelectionMode::Reuse;
  throw std::invalid_argument("unknown selection mode '" + name + "' (expected oracle, gl or reuse)");
}

std::string to_string(SelectionMode mode) {
  switch (mode) {
    case SelectionMode::Oracle: return "oracle";
    case SelectionMode::Gl: return "gl";
    case SelectionMode::Reuse: return "reuse";
  }
  return "?";
}

HalfTrigSpan halftrig_span_from_name(const std::string& name) {
  if (name == "trimmed") return HalfTrigSpan::Trimmed;
  if (name == "extended") return HalfTrigSpan::Extended;
  if (name == "range") return HalfTrigSpan::Range;
  throw std::invalid_argument("unknown half-trig span '" + name + "' (expected trimmed, extended or range)");
}

std::string to_string(HalfTrigSpan span) {
  switch (span) {
    case HalfTrigSpan::Trimmed: return "trimmed";
    case HalfTrigSpan::Extended: return "extended";
    case HalfTrigSpan::Range: return "range";
  }
  return "?";
}

StabilityFilter stability_filter_from_name(const std::string& name) {
  if (name == "gram") return StabilityFilter::Gram;
  if (name == "lambda") return StabilityFilter::Lambda;
  if (name == "collection") return StabilityFilter::Collection;
  throw std::invalid_argument("unknown stability filter '" + name + "' (expected gram, lambda or collection)");
}

std::string to_string(StabilityFilter filter) {
  switch (filter) {
    case StabilityFilter::Gram: return "gram";
    case StabilityFilter::Lambda: return "lambda";
    case StabilityFilter::Collection: return "collection";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (functions.empty() || families.empty() || n_values.empty()) {
    throw std::invalid_argument("experiment needs at least one function, family and sample size");
  }
  if (repetitions == 0) throw std::invalid_argument("repetitions must be at least 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (m_min == 0) throw std::invalid_argument("m_min must be at least 1");
  if (m_max != 0 && m_min > m_max) throw std::invalid_argument("m_min exceeds m_max");
  for (const auto& f : families) (void)BasisFamily::from_name(f);
  for (std::size_t n : n_values) {
    if (n < 2) throw std::invalid_argument("sample sizes must be at least 2");
  }
  if (!(kappa0 > 0.0) || !(kappa1 > 0.0) || kappa0 > kappa1) {
    throw std::invalid_argument("need 0 < kappa0 <= kappa1");
  }
  if (d_constant && !(*d_constant > 0.0)) throw std::invalid_argument("d constant must be positive");
  if (!(f_scale > 0.0)) throw std::invalid_argument("f_scale must be positive");
}

std::vector<std::size_t> ExperimentConfig::m_grid(const BasisFamily& family, std::size_t n) const {
  const std::size_t top = m_max != 0 ? m_max : std::max<std::size_t>(1, std::min<std::size_t>(40, n / 10));
  std::vector<std::size_t> grid;
  for (std::size_t m = m_min; m <= top; ++m) {
    if (family.admits(m)) grid.push_back(m);
  }
  return grid;
}

RepetitionOutcome run_repetition(const ExperimentConfig& config, const TestFunction& fn,
                                 const std::string& family_name, std::size_t n, std::size_t repetition) {
  RepetitionOutcome out;
  try {
    const PreparedRepetition rep = prepare(config, fn, family_name, n, repetition);
    if (rep.grid.empty() || !(rep.trimmed.hi > rep.trimmed.lo)) {
      out.excluded = true;
      return out;
    }
    const std::vector<double> grid = uniform_grid(rep.trimmed);

    switch (config.mode) {
      case SelectionMode::Oracle: {
        const double d = config.d_constant ? *config.d_constant
                                           : default_d_constant(rep.sample.x(), config.f_scale);
        const std::vector<std::size_t> candidates = filter_grid(rep, config.stability, d);
        if (candidates.empty()) throw EmptyCollection("no candidate dimension");
        const OracleResult for_b =
            oracle_select(rep.sample, rep.family, candidates, fn.b, rep.trimmed, Target::Regression);
        const OracleResult for_db =
            oracle_select(rep.sample, rep.family, candidates, fn.b_prime, rep.trimmed, Target::Derivative);
        out.dim_b = for_b.m;
        out.err_b = for_b.error;
        out.dim_db = for_db.m;
        out.err_db = for_db.error;
        break;
      }
      case SelectionMode::Gl:
      case SelectionMode::Reuse: {
        const GlConfig gl = gl_config(config, rep.grid);
        const ReuseResult reuse = reuse_select(rep.sample, rep.family, gl);
        const RegressionFit fit_b = fit_regression(rep.sample, BasisSpec(rep.family, reuse.m_for_b));
        out.dim_b = reuse.m_for_b;
        out.err_b = grid_error(evaluate_regression(fit_b, grid), fn.b, grid, rep.trimmed);
        if (config.mode == SelectionMode::Reuse) {
          out.dim_db = reuse.m_for_b;
          out.err_db = grid_error(evaluate_fit(reuse.fit, grid), fn.b_prime, grid, rep.trimmed);
        } else {
          const GlResult selected = gl_select(rep.sample, rep.family, gl);
          out.dim_db = selected.fit.m;
          out.err_db = grid_error(evaluate_fit(selected.fit, grid), fn.b_prime, grid, rep.trimmed);
        }
        break;
      }
    }
  } catch (const SingularGram&) {
    out = RepetitionOutcome{true};
  } catch (const EmptyCollection&) {
    out = RepetitionOutcome{true};
  }
  return out;
}

std::pair<double, double> mean_and_std(const std::vector<double>& values) {
  if (values.empty()) return {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  if (values.size() == 1) return {mean, 0.0};
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  ExperimentReport report;
  for (TestFunctionId id : config.functions) {
    for (const auto& family : config.families) {
      for (std::size_t n : config.n_values) {
        report.cells.push_back(CellResult{id, family, n, std::vector<RepetitionOutcome>(config.repetitions), 0});
      }
    }
  }

  const std::size_t k = config.repetitions;
  parallel_for(report.cells.size() * k, config.threads, [&](std::size_t task) {
    CellResult& cell = report.cells[task / k];
    cell.repetitions[task % k] =
        run_repetition(config, test_function(cell.function), cell.family, cell.n, task % k);
  });

  for (CellResult& cell : report.cells) {
    std::vector<double> err_b, err_db, dim_b, dim_db;
    for (const auto& r : cell.repetitions) {
      if (r.excluded) {
        ++cell.excluded;
        continue;
      }
      err_b.push_back(100.0 * r.err_b);
      err_db.push_back(100.0 * r.err_db);
      dim_b.push_back(static_cast<double>(r.dim_b));
      dim_db.push_back(static_cast<double>(r.dim_db));
    }
    const std::string fn_name = test_function(cell.function).name();
    auto row = [&](const std::string& target, const std::vector<double>& err, const std::vector<double>& dim) {
      const auto [mse_mean, mse_std] = mean_and_std(err);
      const auto [dim_mean, dim_std] = mean_and_std(dim);
      report.rows.push_back({fn_name, cell.family, cell.n, target, mse_mean, mse_std, dim_mean, dim_std, err.size()});
    };
    row("b", err_b, dim_b);
    row("b'", err_db, dim_db);
  }
  return report;
}

CalibrationReport run_calibration(const CalibrationConfig& config) {
  config.base.validate();
  if (config.kappa0.empty() || config.kappa1.empty() || config.f_scales.empty()) {
    throw std::invalid_argument("calibration needs non-empty kappa0, kappa1 and f_scale lists");
  }
  struct Setting {
    double kappa0, kappa1, f_scale;
  };
  std::vector<Setting> settings;
  for (double fs : config.f_scales) {
    for (double k0 : config.kappa0) {
      for (double k1 : config.kappa1) {
        if (k0 <= k1) settings.push_back({k0, k1, fs});
      }
    }
  }
  if (settings.empty()) throw std::invalid_argument("calibration sweep has no pair with kappa0 <= kappa1");

  struct Cell {
    TestFunctionId function;
    std::string family;
    std::size_t n;
  };
  std::vector<Cell> cells;
  for (TestFunctionId id : config.base.functions) {
    for (const auto& family : config.base.families) {
      for (std::size_t n : config.base.n_values) cells.push_back({id, family, n});
    }
  }

  const std::size_t k = config.base.repetitions;
  // ratios[cell][setting][rep]; +inf when GL has no admissible dimension.
  std::vector<std::vector<std::vector<double>>> ratios(
      cells.size(), std::vector<std::vector<double>>(settings.size(), std::vector<double>(k, 0.0)));
  std::vector<std::vector<std::vector<double>>> dims = ratios;
  std::vector<std::vector<char>> usable(cells.size(), std::vector<char>(k, 0));

  parallel_for(cells.size() * k, config.base.threads, [&](std::size_t task) {
    const std::size_t c = task / k, r = task % k;
    const TestFunction fn = test_function(cells[c].function);
    try {
      const PreparedRepetition rep = prepare(config.base, fn, cells[c].family, cells[c].n, r);
      const std::vector<double> grid = uniform_grid(rep.trimmed);
      const OracleResult oracle =
          oracle_select(rep.sample, rep.family, rep.grid, fn.b_prime, rep.trimmed, Target::Derivative);
      usable[c][r] = 1;
      for (std::size_t s = 0; s < settings.size(); ++s) {
        ExperimentConfig local = config.base;
        local.kappa0 = settings[s].kappa0;
        local.kappa1 = settings[s].kappa1;
        local.f_scale = settings[s].f_scale;
        try {
          const GlResult gl = gl_select(rep.sample, rep.family, gl_config(local, rep.grid));
          const double err = grid_error(evaluate_fit(gl.fit, grid), fn.b_prime, grid, rep.trimmed);
          ratios[c][s][r] = err / oracle.error;
          dims[c][s][r] = static_cast<double>(gl.fit.m);
        } catch (const EmptyCollection&) {
          ratios[c][s][r] = std::numeric_limits<double>::infinity();
          dims[c][s][r] = std::numeric_limits<double>::quiet_NaN();
        }
      }
    } catch (const SingularGram&) {
    } catch (const EmptyCollection&) {
    }
  });

  CalibrationReport report;
  report.best_worst_ratio = std::numeric_limits<double>::infinity();
  std::vector<double> worst(settings.size(), 0.0);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    for (std::size_t s = 0; s < settings.size(); ++s) {
      std::vector<double> rs, ds;
      for (std::size_t r = 0; r < k; ++r) {
        if (!usable[c][r]) continue;
        rs.push_back(ratios[c][s][r]);
        if (std::isfinite(dims[c][s][r])) ds.push_back(dims[c][s][r]);
      }
      const double med = rs.empty() ? std::numeric_limits<double>::infinity() : median(rs);
      worst[s] = std::max(worst[s], med);
      report.rows.push_back({test_function(cells[c].function).name(), cells[c].family, cells[c].n,
                             settings[s].kappa0, settings[s].kappa1, settings[s].f_scale, med,
                             mean_and_std(ds).first, rs.size()});
    }
  }
  for (std::size_t s = 0; s < settings.size(); ++s) {
    if (worst[s] < report.best_worst_ratio) {
      report.best_worst_ratio = worst[s];
      report.best_kappa0 = settings[s].kappa0;
      report.best_kappa1 = settings[s].kappa1;
      report.best_f_scale = settings[s].f_scale;
    }
  }
  return report;
}

}  // namespace seriesderiv
