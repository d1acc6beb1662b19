// Command-line front end: simulate, fit, select, bench, calibrate.
//
// Exit codes: 0 success, 1 usage or configuration, 2 data, 3 numerical failure.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "seriesderiv/basis.hpp"
#include "seriesderiv/design.hpp"
#include "seriesderiv/estimators.hpp"
#include "seriesderiv/experiment.hpp"
#include "seriesderiv/io.hpp"
#include "seriesderiv/quadrature.hpp"
#include "seriesderiv/selection.hpp"
#include "seriesderiv/simulation.hpp"

namespace sd = seriesderiv;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumerical = 3;

struct FamilyArgs {
  std::string name = "hermite";
  std::optional<double> lo;
  std::optional<double> hi;
};

void add_family_options(CLI::App* cmd, FamilyArgs& args) {
  cmd->add_option("--family", args.name, "trig, half-trig, laguerre, hermite or legendre")->capture_default_str();
  cmd->add_option("--lo", args.lo, "half-trig interval start (default: 3% quantile of x)");
  cmd->add_option("--hi", args.hi, "half-trig interval end (default: 97% quantile of x)");
}

sd::BasisFamily resolve_family(const FamilyArgs& args, const sd::Sample& sample) {
  sd::BasisFamily family = sd::BasisFamily::from_name(args.name);
  if (family.kind() == sd::FamilyKind::HalfTrigonometric) {
    const sd::Interval trimmed = sd::trim_interval(sample);
    family = family.with_interval(args.lo.value_or(trimmed.lo), args.hi.value_or(trimmed.hi));
  } else if (args.lo || args.hi) {
    throw std::invalid_argument("--lo/--hi apply to the half-trig family only");
  }
  return family;
}

// Grid for curve output: the trimmed design range clipped to the support.
std::vector<double> curve_grid(const sd::Sample& sample, const sd::BasisFamily& family, std::size_t points) {
  sd::Interval range = sd::trim_interval(sample);
  const sd::Interval support = family.support();
  range.lo = std::max(range.lo, support.lo);
  range.hi = std::min(range.hi, support.hi);
  if (range.hi < range.lo) throw std::invalid_argument("design range does not meet the basis support");
  return sd::uniform_grid(range, points);
}

void print_trace(const sd::SelectionTrace& trace) {
  std::cout << "m,in_collection,v_hat,a_value,criterion\n";
  for (const auto& r : trace.records) {
    std::cout << r.m << "," << (r.in_collection ? 1 : 0) << "," << sd::format_double(r.v_hat) << ","
              << sd::format_double(r.a_value) << "," << sd::format_double(r.criterion) << "\n";
  }
  std::cout << "# strategy=" << trace.strategy << " chosen_m=" << trace.chosen_m
            << " sigma2=" << sd::format_double(trace.sigma2) << " d_const=" << sd::format_double(trace.d_constant)
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Series estimators of a regression function and its derivative"};
  app.require_subcommand(1);

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Draw a sample Y = b(X) + sigma eps with X ~ N(0,1)");
  std::string sim_function = "b1";
  std::size_t sim_n = 250;
  double sim_sigma = 0.25;
  std::uint64_t sim_seed = 1;
  std::string sim_out;
  simulate->add_option("--function", sim_function, "b1, b2, b3 or b4")->capture_default_str();
  simulate->add_option("--n", sim_n, "sample size")->capture_default_str();
  simulate->add_option("--sigma", sim_sigma, "noise standard deviation")->capture_default_str();
  simulate->add_option("--seed", sim_seed, "random seed")->capture_default_str();
  simulate->add_option("--out", sim_out, "output CSV")->required();

  // fit
  auto* fit = app.add_subcommand("fit", "Fit one dimension and write the estimated curve");
  std::string fit_input, fit_out;
  FamilyArgs fit_family;
  std::size_t fit_m = 5;
  int fit_strategy = 1;
  bool fit_truncate = false;
  bool fit_regression_target = false;
  double fit_d_const = 0.0;
  std::size_t fit_points = 512;
  fit->add_option("--input", fit_input, "sample CSV (x,y)")->required();
  add_family_options(fit, fit_family);
  fit->add_option("--m", fit_m, "dimension")->capture_default_str();
  fit->add_option("--strategy", fit_strategy, "1: derivative of projection, 2: projection of derivative")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  fit->add_flag("--truncate", fit_truncate, "zero the derivative fit outside the stability set");
  fit->add_option("--d-const", fit_d_const, "collection constant for --truncate (default: plug-in)");
  fit->add_flag("--regression", fit_regression_target, "write the fit of b instead of b'");
  fit->add_option("--points", fit_points, "curve grid points")->capture_default_str();
  fit->add_option("--out", fit_out, "curve CSV (x,estimate)")->required();

  // select
  auto* select = app.add_subcommand("select", "Choose the dimension and write the derivative curve");
  std::string sel_input, sel_out, sel_mode = "gl", sel_truth;
  FamilyArgs sel_family;
  double sel_kappa0 = 1.0, sel_kappa1 = 1.0;
  std::optional<double> sel_sigma2, sel_d_const;
  double sel_f_scale = sd::kDefaultFScale;
  std::size_t sel_points = 512;
  select->add_option("--input", sel_input, "sample CSV (x,y)")->required();
  add_family_options(select, sel_family);
  select->add_option("--mode", sel_mode, "oracle, gl or reuse")
      ->check(CLI::IsMember({"oracle", "gl", "reuse"}))
      ->capture_default_str();
  select->add_option("--kappa0", sel_kappa0)->capture_default_str();
  select->add_option("--kappa1", sel_kappa1)->capture_default_str();
  select->add_option("--sigma2", sel_sigma2, "noise variance (default: residual estimate)");
  select->add_option("--d-const", sel_d_const, "collection constant d (default: plug-in)");
  select->add_option("--f-scale", sel_f_scale, "scale in the plug-in d")->capture_default_str();
  select->add_option("--truth", sel_truth, "oracle mode: true function b1..b4");
  select->add_option("--points", sel_points, "curve grid points")->capture_default_str();
  select->add_option("--out", sel_out, "curve CSV for the selected derivative fit");

  // bench
  auto* bench = app.add_subcommand("bench", "Run a Monte Carlo experiment from a config file");
  std::string bench_config, bench_out;
  std::optional<std::size_t> bench_threads;
  bench->add_option("--config", bench_config, "key = value config file")->required();
  bench->add_option("--out", bench_out, "report CSV (overrides the config 'report' key)");
  bench->add_option("--threads", bench_threads, "worker threads (0: all cores)");

  // calibrate
  auto* calibrate = app.add_subcommand("calibrate", "Sweep kappa0, kappa1 and f-scale against the oracle");
  std::string cal_config, cal_out;
  calibrate->add_option("--config", cal_config, "key = value config file")->required();
  calibrate->add_option("--out", cal_out, "sweep CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*simulate) {
      auto rng = sd::substream(sim_seed, {});
      const sd::Sample sample =
          sd::generate_sample(sd::test_function_from_name(sim_function), sim_n, sim_sigma, rng);
      sd::save_sample(sample, sim_out);
    } else if (*fit) {
      const sd::Sample sample = sd::load_csv(fit_input);
      const sd::BasisFamily family = resolve_family(fit_family, sample);
      const sd::BasisSpec spec(family, fit_m);
      const std::vector<double> grid = curve_grid(sample, family, fit_points);
      if (fit_regression_target) {
        sd::emit_curve(sd::fit_regression(sample, spec), grid, fit_out);
      } else {
        const sd::DesignSet extended = sd::build_design(sample, spec.extended());
        sd::DerivativeFit d = fit_strategy == 1 ? sd::fit_derivative_1(extended.leading(fit_m), sample.y())
                                                : sd::fit_derivative_2(extended, spec, sample.y());
        if (fit_truncate) {
          const double d_const = fit_d_const > 0.0 ? fit_d_const
                                                   : sd::default_d_constant(sample.x(), sd::kDefaultFScale);
          const sd::StabilityVerdict verdict = sd::stability_check(extended, sample.size(), d_const);
          d = sd::truncate_fit(std::move(d), verdict);
          if (d.truncated_to_zero) std::cerr << "note: fit truncated to zero (outside the stability set)\n";
        }
        sd::emit_curve(d, grid, fit_out);
      }
    } else if (*select) {
      const sd::Sample sample = sd::load_csv(sel_input);
      const sd::BasisFamily family = resolve_family(sel_family, sample);
      const std::vector<double> grid = curve_grid(sample, family, sel_points);
      sd::GlConfig config;
      config.kappa0 = sel_kappa0;
      config.kappa1 = sel_kappa1;
      config.sigma2 = sel_sigma2;
      config.d_constant = sel_d_const;
      config.f_scale = sel_f_scale;
      if (sel_mode == "oracle") {
        if (sel_truth.empty()) throw std::invalid_argument("oracle mode needs --truth");
        const sd::TestFunction truth = sd::test_function_from_name(sel_truth);
        const std::vector<std::size_t> m_grid = sd::default_m_grid(family, sample.size());
        const sd::OracleResult result = sd::oracle_select(sample, family, m_grid, truth.b_prime,
                                                          sd::Interval{grid.front(), grid.back()});
        std::cout << "m,squared_l2_error\n";
        for (const auto& [m, err] : result.errors) std::cout << m << "," << sd::format_double(err) << "\n";
        std::cout << "# strategy=oracle chosen_m=" << result.m << "\n";
        if (!sel_out.empty()) sd::emit_curve(sd::fit_derivative_1(sample, sd::BasisSpec(family, result.m)), grid, sel_out);
      } else if (sel_mode == "gl") {
        const sd::GlResult result = sd::gl_select(sample, family, config);
        print_trace(result.trace);
        if (!sel_out.empty()) sd::emit_curve(result.fit, grid, sel_out);
      } else {
        const sd::ReuseResult result = sd::reuse_select(sample, family, config);
        print_trace(result.trace);
        if (!sel_out.empty()) sd::emit_curve(result.fit, grid, sel_out);
      }
    } else if (*bench) {
      sd::ExperimentConfig config = sd::experiment_config_from_text(sd::read_file(bench_config), bench_config);
      if (bench_threads) config.threads = *bench_threads;
      const std::string out = bench_out.empty() ? config.report_path : bench_out;
      const sd::ExperimentReport report = sd::run_experiment(config);
      for (const auto& cell : report.cells) {
        if (cell.excluded > 0) {
          std::cerr << "note: " << sd::test_function(cell.function).name() << "/" << cell.family << "/n=" << cell.n
                    << ": " << cell.excluded << " repetition(s) excluded (no usable dimension)\n";
        }
      }
      if (out.empty()) {
        std::cout << sd::report_csv(report);
      } else {
        sd::save_report(report, out);
      }
    } else if (*calibrate) {
      const sd::CalibrationConfig config = sd::calibration_config_from_text(sd::read_file(cal_config), cal_config);
      const sd::CalibrationReport report = sd::run_calibration(config);
      if (cal_out.empty()) {
        std::cout << sd::calibration_csv(report);
      } else {
        sd::write_file(cal_out, sd::calibration_csv(report));
      }
      std::cout << "# best kappa0=" << sd::format_double(report.best_kappa0)
                << " kappa1=" << sd::format_double(report.best_kappa1)
                << " f_scale=" << sd::format_double(report.best_f_scale)
                << " worst_median_ratio=" << sd::format_double(report.best_worst_ratio) << "\n";
    }
  } catch (const sd::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const sd::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const sd::SingularGram& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const sd::EmptyCollection& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const sd::QuadratureError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return 0;
}
