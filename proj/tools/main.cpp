#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sgdcert/analysis.hpp"
#include "sgdcert/harness.hpp"
#include "sgdcert/kvfile.hpp"
#include "sgdcert/numfmt.hpp"
#include "sgdcert/objective.hpp"
#include "sgdcert/problems.hpp"
#include "sgdcert/rng.hpp"

namespace {

using namespace sgdcert;

int cmd_generate(const KvFile& params, const std::string& out_path) {
  const ProblemSpec spec = ProblemSpec::from_kv(params);
  if (spec.family == Family::kLeastSquaresData) {
    throw ConfigError(
        "generate supports the scaled_quadratic and "
        "consistent_least_squares families");
  }
  spec.instantiate();  // validates the parameters end to end
  KvFile kv;
  spec.to_kv(kv);
  kv.save(out_path);
  return 0;
}

int cmd_verify(const std::string& config_path, std::uint64_t seed,
               bool quiet) {
  const KvFile kv = KvFile::load(config_path);
  const ProblemSpec pspec = ProblemSpec::from_kv(kv);
  StepSpec step;  // defaults to the reference step
  if (kv.has_section("experiment") && kv.has("experiment", "step")) {
    step = StepSpec::parse(kv.get("experiment", "step"));
  }
  const ProblemInstance instance = pspec.instantiate();
  const FiniteSumObjective& obj = *instance.objective;

  bool all_ok = true;
  const auto check = [&](const std::string& name, bool ok,
                         const std::string& detail) {
    all_ok = all_ok && ok;
    if (!quiet) {
      std::cout << (ok ? "[ ok ] " : "[FAIL] ") << name
                << (detail.empty() ? "" : ": " + detail) << "\n";
    }
  };

  ProblemConstants constants;
  try {
    constants = compute_constants(instance);
  } catch (const NumericFailure& e) {
    check("constants", false, e.what());
    return 1;
  }
  const double alpha =
      step.resolve(constants.lipschitz, constants.growth);
  if (!quiet) {
    std::cout << "constants: L = " << format_real(constants.lipschitz)
              << ", mu = " << format_real(constants.strong_convexity)
              << ", B = " << format_real(constants.growth)
              << ", alpha = " << format_real(alpha) << "\n";
  }

  Rng rng(seed);
  const Index dim = obj.dimension();

  double worst_grad = 0.0;
  for (int s = 0; s < 20; ++s) {
    const DenseVector x = instance.minimizer + gaussian_vector(rng, dim);
    worst_grad =
        std::max(worst_grad, check_gradient(obj, x, 1e-5).max_rel_error);
  }
  check("gradient-check", worst_grad < 1e-6,
        "max relative error " + format_real(worst_grad));

  double worst_component = 0.0;
  for (Index i = 0; i < obj.component_count(); ++i) {
    worst_component = std::max(
        worst_component, obj.component_gradient(i, instance.minimizer).norm());
  }
  bool interpolates = worst_component <= stationarity_tol(instance.minimizer);
  std::string interp_detail =
      "max component gradient norm at x*: " + format_real(worst_component);
  try {
    growth_ratio(obj, instance.minimizer);
  } catch (const GrowthViolation& e) {
    interpolates = false;
    interp_detail = e.what();
  }
  check("interpolation", interpolates, interp_detail);

  bool growth_ok = true;
  std::string growth_detail;
  try {
    const double estimate =
        estimate_growth_constant(obj, instance.minimizer, 1000, 1.0,
                                 rng.next_u64());
    growth_ok = estimate <= constants.growth + 1e-9;
    growth_detail = "empirical " + format_real(estimate) + " vs certified " +
                    format_real(constants.growth);
  } catch (const GrowthViolation& e) {
    growth_ok = false;
    growth_detail = e.what();
  }
  check("growth-certificate", growth_ok, growth_detail);

  double worst_lipschitz = 0.0;
  for (int s = 0; s < 100; ++s) {
    const DenseVector x = gaussian_vector(rng, dim);
    const DenseVector y = gaussian_vector(rng, dim);
    const double lhs = (full_gradient(obj, x) - full_gradient(obj, y)).norm();
    const double rhs = constants.lipschitz * (x - y).norm();
    worst_lipschitz = std::max(worst_lipschitz, lhs - rhs);
  }
  check("lipschitz-certificate", worst_lipschitz <= 1e-9,
        "worst excess " + format_real(worst_lipschitz));

  if (constants.strong_convexity > 0.0) {
    double worst_pl = 0.0;
    for (int s = 0; s < 100; ++s) {
      const DenseVector x =
          instance.minimizer + gaussian_vector(rng, dim);
      const double grad_sq = full_gradient(obj, x).squaredNorm();
      const double gap = full_value(obj, x) - instance.optimal_value;
      const double lhs = 2.0 * constants.strong_convexity * gap;
      worst_pl = std::max(worst_pl, lhs - grad_sq * (1.0 + 1e-9) - 1e-12);
    }
    check("pl-inequality", worst_pl <= 0.0,
          "worst excess " + format_real(worst_pl));
  } else if (!quiet) {
    std::cout << "[skip] pl-inequality (mu = 0)\n";
  }

  const double window =
      max_stable_step(constants.lipschitz, constants.growth);
  check("step-window", alpha > 0.0 && alpha < window,
        "alpha = " + format_real(alpha) + ", window (0, " +
            format_real(window) + ")");

  const DescentCheckReport descent =
      verify_descent(obj, constants, alpha, 100, rng.next_u64());
  check("descent-bound",
        descent.descent_violations == 0 && descent.decrease_violations == 0,
        descent.decrease_violations > 0
            ? "no expected decrease at " +
                  format_int(descent.decrease_violations) + " of " +
                  format_int(descent.points_checked) + " points"
            : "worst slack " + format_real(descent.worst_slack));
  check("variance-bound", descent.variance_violations == 0,
        descent.variance_violations > 0
            ? format_int(descent.variance_violations) + " of " +
                  format_int(descent.points_checked) + " points exceed the bound"
            : "");

  return all_ok ? 0 : 1;
}

int cmd_run(ExperimentConfig config, const std::string& out_override,
            bool quiet, int threads) {
  if (!out_override.empty()) config.output_path = out_override;
  if (config.output_path.empty()) {
    throw ConfigError(
        "no output path: set 'output' in [experiment] or pass --out");
  }
  const ExperimentReport report = run_experiment(config, threads);
  emit_csv(report, config.output_path);
  const std::string summary_path =
      std::filesystem::path(config.output_path)
          .replace_extension(".report")
          .string();
  write_summary(report, summary_path);
  if (!quiet) {
    std::cout << render_summary(report);
    std::cout << "csv: " << config.output_path << "\n"
              << "summary: " << summary_path << "\n";
  }
  return 0;
}

int cmd_report(const std::string& csv_path, const std::string& out_path,
               bool quiet) {
  const ExperimentReport report = parse_csv(csv_path);
  const std::string summary = render_summary(report);
  if (!out_path.empty()) {
    write_summary(report, out_path);
  }
  if (!quiet) std::cout << summary;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-sum SGD harness: problem generation, certificate "
               "verification, replica experiments, rate reports"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand(
      "generate", "write a problem file from family parameters");
  std::string gen_family, gen_curvatures, gen_minimizer, gen_out;
  std::int64_t gen_components = 0, gen_dimension = 0, gen_rank = 0;
  double gen_condition = 1.0;
  std::uint64_t gen_seed = 0;
  gen->add_option("--family", gen_family,
                  "scaled_quadratic or consistent_least_squares")
      ->required();
  gen->add_option("--curvatures", gen_curvatures,
                  "comma-separated component curvatures (scaled_quadratic)");
  gen->add_option("--minimizer", gen_minimizer,
                  "comma-separated minimizer coordinates (scaled_quadratic)");
  gen->add_option("--components", gen_components,
                  "number of components (consistent_least_squares)");
  gen->add_option("--dimension", gen_dimension,
                  "ambient dimension (consistent_least_squares)");
  gen->add_option("--rank", gen_rank,
                  "matrix rank (consistent_least_squares)");
  gen->add_option("--condition", gen_condition,
                  "singular-value spread sigma_1/sigma_r, >= 1");
  gen->add_option("--seed", gen_seed, "generation seed");
  gen->add_option("--out", gen_out, "problem file to write")->required();

  // verify
  auto* ver = app.add_subcommand(
      "verify", "check certificates and exact bounds for a problem file");
  std::string ver_config;
  std::uint64_t ver_seed = 2024081101ULL;
  bool ver_quiet = false;
  ver->add_option("--config", ver_config,
                  "problem or experiment file to verify")
      ->required();
  ver->add_option("--seed", ver_seed, "sampling seed for the checks");
  ver->add_flag("--quiet", ver_quiet, "suppress per-check output");

  // run
  auto* run = app.add_subcommand(
      "run", "run an experiment config, write CSV and summary");
  std::string run_config, run_out;
  std::int64_t run_replicas = -1, run_iters = -1;
  std::uint64_t run_seed = 0;
  bool run_seed_set = false, run_quiet = false;
  int run_threads = 1;
  run->add_option("--config", run_config, "experiment config file")
      ->required();
  run->add_option("--out", run_out, "CSV output path (overrides the config)");
  run->add_option("--seed", run_seed, "master seed override")
      ->each([&](const std::string&) { run_seed_set = true; });
  run->add_option("--replicas", run_replicas, "replica count override");
  run->add_option("--iters", run_iters, "iteration count override");
  run->add_option("--threads", run_threads, "worker threads (default 1)");
  run->add_flag("--quiet", run_quiet, "suppress the summary on stdout");

  // report
  auto* rep = app.add_subcommand(
      "report", "recompute fitted rates and violations from a CSV");
  std::string rep_csv, rep_out;
  bool rep_quiet = false;
  rep->add_option("csv", rep_csv, "CSV produced by run")->required();
  rep->add_option("--out", rep_out, "write the summary to this path");
  rep->add_flag("--quiet", rep_quiet, "suppress the summary on stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      KvFile params;
      params.set("problem", "family", gen_family);
      if (gen->count("--seed") > 0 || gen_family != "least_squares_data") {
        params.set_u64("problem", "seed", gen_seed);
      }
      if (!gen_curvatures.empty()) {
        params.set("problem", "curvatures", gen_curvatures);
      }
      if (!gen_minimizer.empty()) {
        params.set("problem", "minimizer", gen_minimizer);
      }
      if (gen->count("--components") > 0) {
        params.set_int("problem", "components", gen_components);
      }
      if (gen->count("--dimension") > 0) {
        params.set_int("problem", "dimension", gen_dimension);
      }
      if (gen->count("--rank") > 0) {
        params.set_int("problem", "rank", gen_rank);
      }
      if (gen->count("--condition") > 0) {
        params.set_real("problem", "condition", gen_condition);
      }
      return cmd_generate(params, gen_out);
    }
    if (ver->parsed()) {
      return cmd_verify(ver_config, ver_seed, ver_quiet);
    }
    if (run->parsed()) {
      ExperimentConfig config = ExperimentConfig::load(run_config);
      if (run_seed_set) config.master_seed = run_seed;
      if (run_replicas >= 0) {
        if (run_replicas < 1) throw ConfigError("--replicas must be >= 1");
        config.replicas = static_cast<Index>(run_replicas);
      }
      if (run_iters >= 0) config.iterations = static_cast<Index>(run_iters);
      if (run_threads < 1) throw ConfigError("--threads must be >= 1");
      return cmd_run(std::move(config), run_out, run_quiet, run_threads);
    }
    if (rep->parsed()) {
      return cmd_report(rep_csv, rep_out, rep_quiet);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
