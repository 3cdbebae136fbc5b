#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "doekit/criteria.hpp"
#include "doekit/design.hpp"
#include "doekit/errors.hpp"
#include "doekit/experiments.hpp"
#include "doekit/gp.hpp"
#include "doekit/io.hpp"
#include "doekit/optimize.hpp"
#include "doekit/testfns.hpp"
#include "doekit/validate.hpp"

#ifndef DOEKIT_VERSION
#define DOEKIT_VERSION "0.0.0"
#endif

namespace doekit::cli {

namespace exit_code {
constexpr int ok = 0;
constexpr int argument = 2;
constexpr int data = 3;
constexpr int numerical = 4;
}  // namespace exit_code

namespace detail {

/// Per-run reproducibility record written next to every primary output.
class Manifest {
 public:
  Manifest(std::string subcommand)
      : start_(std::chrono::steady_clock::now()), subcommand_(std::move(subcommand)) {}

  io::json& config() { return config_; }

  void add_input(const std::filesystem::path& path) {
    inputs_[path.string()] = io::file_digest(path);
  }

  void set_seed(std::uint64_t seed) { seed_ = seed; }

  void write(const std::filesystem::path& path) const {
    io::json j;
    j["subcommand"] = subcommand_;
    j["version"] = DOEKIT_VERSION;
    j["config"] = config_;
    if (seed_)
      j["seed"] = *seed_;
    else
      j["seed"] = nullptr;
    io::json inputs = io::json::object();
    for (const auto& [file, digest] : inputs_) inputs[file] = digest;
    j["inputs"] = inputs;
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    j["duration_seconds"] =
        std::chrono::duration_cast<std::chrono::duration<double>>(elapsed).count();
    io::write_file_atomic(path, j.dump(2) + "\n");
  }

 private:
  std::chrono::steady_clock::time_point start_;
  std::string subcommand_;
  io::json config_ = io::json::object();
  std::map<std::string, std::string> inputs_;
  std::optional<std::uint64_t> seed_;
};

/// Resolves the master seed: an explicit value, otherwise one drawn from the
/// system entropy source and recorded in the manifest so the run stays
/// reproducible after the fact.
inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, Manifest& manifest) {
  std::uint64_t seed;
  if (flag) {
    seed = *flag;
  } else {
    std::random_device device;
    seed = (static_cast<std::uint64_t>(device()) << 32) ^ device();
  }
  manifest.set_seed(seed);
  return seed;
}

/// Parses "lo:hi,lo:hi,..." into a box.
inline Box parse_domain(const std::string& text, Eigen::Index expected_dims) {
  Box box;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) {
    const auto colon = part.find(':');
    if (colon == std::string::npos)
      throw ArgumentError("domain intervals use lo:hi, got " + part);
    Interval iv;
    try {
      iv.lo = std::stod(part.substr(0, colon));
      iv.hi = std::stod(part.substr(colon + 1));
    } catch (const std::exception&) {
      throw ArgumentError("invalid domain interval: " + part);
    }
    box.push_back(iv);
  }
  if (expected_dims > 0 && static_cast<Eigen::Index>(box.size()) == 1)
    box.assign(static_cast<std::size_t>(expected_dims), box.front());
  if (expected_dims > 0 && static_cast<Eigen::Index>(box.size()) != expected_dims)
    throw ArgumentError("domain dimension mismatch");
  check_box(box);
  return box;
}

struct FitFlags {
  std::optional<double> fixed_exponent;
  int starts = 0;
  int max_evals = 0;
  double nugget = 1e-8;
  unsigned threads = 0;

  FitOptions to_options(std::uint64_t seed) const {
    FitOptions options;
    options.fixed_exponent = fixed_exponent;
    options.starts = starts;
    options.max_evals_per_start = max_evals;
    options.initial_nugget = nugget;
    options.seed = seed;
    options.threads = threads;
    return options;
  }

  void attach(CLI::App* app) {
    app->add_option("--starts", starts, "Multi-start count (0: 10 per coordinate)");
    app->add_option("--max-evals", max_evals, "Likelihood evaluations per start (0: auto)");
    app->add_option("--nugget", nugget, "Initial diagonal regularization")
        ->capture_default_str();
    app->add_option("--fixed-p", fixed_exponent,
                    "Pin every correlation exponent to this value");
  }
};

inline void attach_schedule_flags(CLI::App* app, AnnealConfig& config,
                                  std::string& schedule_path) {
  app->add_option("--schedule", schedule_path, "JSON schedule file (overrides defaults)");
  app->add_option_function<double>(
      "--initial-temperature",
      [&config](const double& v) { config.initial_temperature = v; },
      "Fixed starting temperature (default: calibrated from probe moves)");
  app->add_option("--cooling", config.cooling_factor, "Geometric cooling factor")
      ->capture_default_str();
  app->add_option("--iterations", config.iterations_per_temperature,
                  "Moves per temperature step")
      ->capture_default_str();
  app->add_option("--steps", config.temperature_steps, "Temperature steps")
      ->capture_default_str();
  app->add_option_function<long long>(
      "--jitter", [&config](const long long& v) { config.initial_jitter = v; },
      "Random pre-moves on the initial design (default: 2n)");
}

inline std::string anneal_trace_csv(const std::vector<AnnealTraceEntry>& trace) {
  std::string out = "step,temperature,current,best,accepted\n";
  for (const AnnealTraceEntry& entry : trace) {
    out += std::to_string(entry.step) + ',' + io::format_double(entry.temperature) + ',' +
           io::format_double(entry.current) + ',' + io::format_double(entry.best) + ',' +
           (entry.accepted ? "1" : "0") + '\n';
  }
  return out;
}

inline std::string q2_trace_csv(const ValidationReport& report) {
  std::string out = "n_test,q2\n";
  for (const auto& entry : report.trace)
    out += std::to_string(entry.first) + ',' + io::format_double(entry.second) + '\n';
  return out;
}

}  // namespace detail

/// Entry point behind main(); takes arguments in natural order (no program
/// name) and returns the process exit code.
inline int run(std::vector<std::string> args) {
  CLI::App app{"Space-filling designs, Gaussian-process metamodels and their validation"};
  app.set_version_flag("--version", DOEKIT_VERSION);
  app.require_subcommand(1);

  unsigned threads = 0;
  app.add_option("--threads", threads,
                 "Worker threads (0: DOE_THREADS env, then hardware concurrency)");

  // ---- design ----------------------------------------------------------
  auto* design_cmd = app.add_subcommand("design", "Generate a raw design");
  std::string design_kind = "lhs";
  Eigen::Index design_n = 0, design_d = 0;
  std::optional<std::uint64_t> design_seed;
  std::string design_fn, design_domain, design_out;
  design_cmd->add_option("--kind", design_kind, "srs | lhs | hammersley")
      ->capture_default_str();
  design_cmd->add_option("--n", design_n, "Number of points")->required();
  design_cmd->add_option("--d", design_d, "Dimension (or use --fn)");
  design_cmd->add_option("--seed", design_seed, "Generator seed");
  design_cmd->add_option("--fn", design_fn, "Adopt a test function's dimension and bounds");
  design_cmd->add_option("--domain", design_domain, "Physical bounds lo:hi[,lo:hi...]");
  design_cmd->add_option("--out", design_out, "Output CSV path")->required();

  // ---- optimize --------------------------------------------------------
  auto* optimize_cmd = app.add_subcommand("optimize", "Anneal an LHS under a criterion");
  std::string optimize_criterion = "wraparound";
  Eigen::Index optimize_n = 0, optimize_d = 0;
  std::optional<std::uint64_t> optimize_seed;
  std::string optimize_in, optimize_out, optimize_trace, optimize_schedule;
  AnnealConfig optimize_config;
  optimize_cmd->add_option("--criterion", optimize_criterion, "maximin | centered | wraparound")
      ->capture_default_str();
  optimize_cmd->add_option("--in", optimize_in, "Initial LHS CSV (default: random LHS)");
  optimize_cmd->add_option("--n", optimize_n, "Points for the random initial LHS");
  optimize_cmd->add_option("--d", optimize_d, "Dimension for the random initial LHS");
  optimize_cmd->add_option("--seed", optimize_seed, "Seed (initial design and annealing)");
  optimize_cmd->add_option("--out", optimize_out, "Output CSV path")->required();
  optimize_cmd->add_option("--trace-csv", optimize_trace, "Annealing trace CSV path");
  detail::attach_schedule_flags(optimize_cmd, optimize_config, optimize_schedule);

  // ---- criteria --------------------------------------------------------
  auto* criteria_cmd = app.add_subcommand("criteria", "Score a design");
  std::string criteria_in;
  std::vector<std::string> criteria_kinds;
  criteria_cmd->add_option("--in", criteria_in, "Design CSV path")->required();
  criteria_cmd
      ->add_option("--kind", criteria_kinds, "maximin | centered | wraparound (repeatable)")
      ->required();

  // ---- eval ------------------------------------------------------------
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a test function on points");
  std::string eval_fn, eval_in, eval_out;
  eval_cmd->add_option("--fn", eval_fn, "Test function name")->required();
  eval_cmd->add_option("--in", eval_in, "Points CSV path")->required();
  eval_cmd->add_option("--out", eval_out, "Values CSV path")->required();

  // ---- fit -------------------------------------------------------------
  auto* fit_cmd = app.add_subcommand("fit", "Fit a Gaussian-process metamodel");
  std::string fit_design, fit_outputs, fit_out;
  std::optional<std::uint64_t> fit_seed;
  detail::FitFlags fit_flags;
  fit_cmd->add_option("--design", fit_design, "Learning design CSV")->required();
  fit_cmd->add_option("--outputs", fit_outputs, "Learning outputs CSV")->required();
  fit_cmd->add_option("--out", fit_out, "Model JSON path")->required();
  fit_cmd->add_option("--seed", fit_seed, "Multi-start seed");
  fit_flags.attach(fit_cmd);

  // ---- predict ----------------------------------------------------------
  auto* predict_cmd = app.add_subcommand("predict", "Predict mean and variance at points");
  std::string predict_model, predict_in, predict_out;
  predict_cmd->add_option("--model", predict_model, "Model JSON path")->required();
  predict_cmd->add_option("--in", predict_in, "Points CSV path")->required();
  predict_cmd->add_option("--out", predict_out, "Output CSV path (mean,variance)")->required();

  // ---- validate ----------------------------------------------------------
  auto* validate_cmd = app.add_subcommand("validate", "Estimate metamodel predictivity");
  std::string validate_model, validate_method = "mc", validate_fn, validate_out, validate_trace;
  Eigen::Index validate_n_test = 50, validate_pool = 10000, validate_folds = 5;
  std::optional<std::uint64_t> validate_seed;
  detail::FitFlags validate_fit_flags;
  validate_cmd->add_option("--model", validate_model, "Model JSON path")->required();
  validate_cmd->add_option("--method", validate_method, "mc | lhs | loo | cv | sequential")
      ->capture_default_str();
  validate_cmd->add_option("--fn", validate_fn, "Test function (mc, lhs, sequential)");
  validate_cmd->add_option("--n-test", validate_n_test, "Test sample size")
      ->capture_default_str();
  validate_cmd->add_option("--pool-size", validate_pool, "Sequential candidate pool size")
      ->capture_default_str();
  validate_cmd->add_option("--folds", validate_folds, "Cross-validation folds")
      ->capture_default_str();
  validate_cmd->add_option("--seed", validate_seed, "Seed (test design or fold shuffle)");
  validate_cmd->add_option("--out", validate_out, "Report JSON path")->required();
  validate_cmd->add_option("--trace-csv", validate_trace, "Running-Q2 trace CSV path");
  validate_fit_flags.attach(validate_cmd);

  // ---- bench -------------------------------------------------------------
  auto* bench_cmd = app.add_subcommand("bench", "Replicated benchmark studies");
  bench_cmd->require_subcommand(1);
  std::string bench_config, bench_out_dir;
  bool paper_scale = false;
  std::optional<std::uint64_t> bench_seed;
  auto* bench_fitcmp = bench_cmd->add_subcommand("fit-comparison", "Design kind vs Q2");
  auto* bench_projection = bench_cmd->add_subcommand("projection", "2D projection degradation");
  auto* bench_validation = bench_cmd->add_subcommand("validation", "Validation method study");
  for (CLI::App* study : {bench_fitcmp, bench_projection, bench_validation}) {
    study->add_option("--config", bench_config, "Study config JSON");
    study->add_option("--out", bench_out_dir, "Output directory");
    study->add_flag("--paper-scale", paper_scale, "Raise repetitions to the reported scale");
    study->add_option("--seed", bench_seed, "Master seed");
  }

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code::argument;
  }

  try {
    // ---- design ----
    if (design_cmd->parsed()) {
      detail::Manifest manifest("design");
      Box domain;
      if (!design_fn.empty()) {
        const TestFunction& fn = find_test_function(design_fn);
        if (design_d == 0) design_d = fn.dimension;
        if (design_d != fn.dimension) throw ArgumentError("--d conflicts with --fn dimension");
        domain = fn.bounds;
      }
      if (design_d == 0) throw ArgumentError("specify --d or --fn");
      if (!design_domain.empty()) domain = detail::parse_domain(design_domain, design_d);

      Design design;
      std::optional<std::uint64_t> used_seed;
      if (design_kind == "hammersley") {
        design = generate_hammersley(design_n, design_d);
      } else if (design_kind == "srs" || design_kind == "lhs") {
        const std::uint64_t seed = detail::resolve_seed(design_seed, manifest);
        used_seed = seed;
        Rng rng(seed);
        design = design_kind == "srs" ? generate_srs(design_n, design_d, rng)
                                      : generate_lhs(design_n, design_d, rng);
      } else {
        throw ArgumentError("unknown design kind: " + design_kind);
      }
      if (!domain.empty()) design = scale_to_domain(design, domain);
      io::write_design_csv(design_out, design, used_seed);
      manifest.config() = {{"kind", design_kind},
                           {"n", design_n},
                           {"d", design_d},
                           {"fn", design_fn},
                           {"domain", io::box_to_json(design.domain)},
                           {"out", design_out}};
      manifest.write(design_out + ".manifest.json");
      return exit_code::ok;
    }

    // ---- optimize ----
    if (optimize_cmd->parsed()) {
      detail::Manifest manifest("optimize");
      optimize_config.criterion = criterion_from_string(optimize_criterion);
      if (!optimize_schedule.empty()) {
        const AnnealConfig file_config =
            anneal_config_from_json(io::json::parse(io::read_file(optimize_schedule)));
        const AnnealConfig flag_overrides = optimize_config;
        optimize_config = file_config;
        optimize_config.criterion = flag_overrides.criterion;
        manifest.add_input(optimize_schedule);
      }
      const std::uint64_t seed = detail::resolve_seed(optimize_seed, manifest);
      optimize_config.seed = Rng(seed).split("anneal").seed();

      Design initial;
      if (!optimize_in.empty()) {
        initial = io::read_design_csv(optimize_in);
        manifest.add_input(optimize_in);
      } else {
        if (optimize_n == 0 || optimize_d == 0)
          throw ArgumentError("provide --in or both --n and --d");
        Rng rng = Rng(seed).split("initial-lhs");
        initial = generate_lhs(optimize_n, optimize_d, rng);
      }

      const AnnealResult result = anneal_lhs(initial, optimize_config);
      io::write_design_csv(optimize_out, result.design, seed);
      if (!optimize_trace.empty())
        io::write_file_atomic(optimize_trace, detail::anneal_trace_csv(result.trace));
      manifest.config() = {{"criterion", optimize_criterion},
                           {"schedule", anneal_config_to_json(optimize_config)},
                           {"initial_value", result.initial_value},
                           {"best_value", result.best_value},
                           {"out", optimize_out}};
      manifest.write(optimize_out + ".manifest.json");
      return exit_code::ok;
    }

    // ---- criteria ----
    if (criteria_cmd->parsed()) {
      const Design design = io::read_design_csv(criteria_in);
      Design unit = design;
      unit.points = unit_coordinates(design);
      unit.domain = unit_box(design.dim());
      for (const std::string& kind_name : criteria_kinds) {
        const CriterionValue value =
            evaluate_criterion(unit, criterion_from_string(kind_name));
        io::json line = {{"kind", to_string(value.kind)},
                         {"value", value.value},
                         {"n", value.n},
                         {"d", value.d}};
        std::cout << line.dump() << "\n";
      }
      return exit_code::ok;
    }

    // ---- eval ----
    if (eval_cmd->parsed()) {
      detail::Manifest manifest("eval");
      const TestFunction& fn = find_test_function(eval_fn);
      Design design = io::read_design_csv(eval_in);
      manifest.add_input(eval_in);
      if (design.dim() != fn.dimension) throw ArgumentError("points dimension mismatch");
      // Unit-cube designs are mapped onto the function's box; designs already
      // carrying the function's bounds pass through.
      bool scaled = false;
      if (is_unit_box(design.domain) && !is_unit_box(fn.bounds)) {
        design = scale_to_domain(design, fn.bounds);
        scaled = true;
      }
      Eigen::MatrixXd values(design.size(), 1);
      for (Eigen::Index i = 0; i < design.size(); ++i)
        values(i, 0) = fn(design.points.row(i).transpose());
      io::write_file_atomic(eval_out, io::matrix_to_csv(values, {"y"}));
      manifest.config() = {{"fn", eval_fn}, {"scaled_to_bounds", scaled}, {"out", eval_out}};
      manifest.write(eval_out + ".manifest.json");
      return exit_code::ok;
    }

    // ---- fit ----
    if (fit_cmd->parsed()) {
      detail::Manifest manifest("fit");
      const Design design = io::read_design_csv(fit_design);
      const io::Csv outputs_csv = io::read_csv(fit_outputs);
      manifest.add_input(fit_design);
      manifest.add_input(fit_outputs);
      if (outputs_csv.values.cols() != 1)
        throw DataError("outputs CSV must contain a single column");
      const std::uint64_t seed = detail::resolve_seed(fit_seed, manifest);
      fit_flags.threads = threads;
      const GpModel model = fit_gp(design, outputs_csv.values.col(0), fit_flags.to_options(seed));
      io::write_model_json(fit_out, model);
      manifest.config() = {{"design", fit_design},
                           {"outputs", fit_outputs},
                           {"starts", fit_flags.starts},
                           {"nugget", fit_flags.nugget},
                           {"log_likelihood", model.log_likelihood},
                           {"out", fit_out}};
      manifest.write(fit_out + ".manifest.json");
      return exit_code::ok;
    }

    // ---- predict ----
    if (predict_cmd->parsed()) {
      detail::Manifest manifest("predict");
      const GpModel model = io::read_model_json(predict_model);
      const io::Csv points = io::read_csv(predict_in);
      manifest.add_input(predict_model);
      manifest.add_input(predict_in);
      if (points.values.cols() != model.dim())
        throw ArgumentError("points dimension differs from the model");
      Eigen::MatrixXd out(points.values.rows(), 2);
      for (Eigen::Index i = 0; i < points.values.rows(); ++i) {
        const Eigen::VectorXd x = points.values.row(i).transpose();
        out(i, 0) = predict_mean(model, x);
        out(i, 1) = predict_variance(model, x);
      }
      io::write_file_atomic(predict_out, io::matrix_to_csv(out, {"mean", "variance"}));
      manifest.config() = {{"model", predict_model}, {"in", predict_in}, {"out", predict_out}};
      manifest.write(predict_out + ".manifest.json");
      return exit_code::ok;
    }

    // ---- validate ----
    if (validate_cmd->parsed()) {
      detail::Manifest manifest("validate");
      const GpModel model = io::read_model_json(validate_model);
      manifest.add_input(validate_model);
      const std::uint64_t seed = detail::resolve_seed(validate_seed, manifest);
      validate_fit_flags.threads = threads;

      ValidationReport report;
      if (validate_method == "mc" || validate_method == "lhs") {
        if (validate_fn.empty()) throw ArgumentError("--fn is required for test-sample methods");
        const TestFunction& fn = find_test_function(validate_fn);
        Rng rng = Rng(seed).split("test-design");
        Design unit = validate_method == "mc"
                          ? generate_srs(validate_n_test, model.dim(), rng)
                          : generate_lhs(validate_n_test, model.dim(), rng);
        report = q2_test_sample(model, fn, scale_to_domain(unit, model.domain));
      } else if (validate_method == "sequential") {
        if (validate_fn.empty()) throw ArgumentError("--fn is required for test-sample methods");
        const TestFunction& fn = find_test_function(validate_fn);
        report = q2_sequential(model, fn, validate_pool, validate_n_test);
      } else if (validate_method == "loo" || validate_method == "cv") {
        Design learning;
        learning.points = model.inputs;
        learning.domain = unit_box(model.dim());
        learning = scale_to_domain(learning, model.domain);
        const FitOptions options = validate_fit_flags.to_options(Rng(seed).split("cv").seed());
        if (validate_method == "loo") {
          report = q2_loo(learning, model.outputs, options);
        } else {
          Rng rng = Rng(seed).split("folds");
          report = q2_cross_validation(learning, model.outputs, options, validate_folds, rng);
        }
      } else {
        throw ArgumentError("unknown validation method: " + validate_method);
      }

      io::write_file_atomic(validate_out, io::report_to_json(report).dump(2) + "\n");
      if (!validate_trace.empty())
        io::write_file_atomic(validate_trace, detail::q2_trace_csv(report));
      manifest.config() = {{"method", validate_method},
                           {"fn", validate_fn},
                           {"n_test", validate_n_test},
                           {"pool_size", validate_pool},
                           {"folds", validate_folds},
                           {"q2", report.q2},
                           {"out", validate_out}};
      manifest.write(validate_out + ".manifest.json");
      return exit_code::ok;
    }

    // ---- bench ----
    if (bench_cmd->parsed()) {
      detail::Manifest manifest("bench");
      io::json config_json = io::json::object();
      if (!bench_config.empty()) {
        config_json = io::json::parse(io::read_file(bench_config));
        manifest.add_input(bench_config);
      }
      // Precedence: --seed flag, then the config file, then fresh entropy.
      if (bench_seed) {
        config_json["seed"] = *bench_seed;
        manifest.set_seed(*bench_seed);
      } else if (config_json.contains("seed")) {
        manifest.set_seed(config_json["seed"].get<std::uint64_t>());
      } else {
        config_json["seed"] = detail::resolve_seed(bench_seed, manifest);
      }
      if (!config_json.contains("threads")) config_json["threads"] = threads;

      std::string study;
      if (bench_fitcmp->parsed()) study = "fit-comparison";
      if (bench_projection->parsed()) study = "projection";
      if (bench_validation->parsed()) study = "validation";
      const std::filesystem::path out_dir =
          bench_out_dir.empty() ? std::filesystem::path("bench-" + study)
                                : std::filesystem::path(bench_out_dir);
      std::filesystem::create_directories(out_dir);

      StudyResult result;
      if (study == "fit-comparison") {
        FitComparisonConfig config = fit_comparison_config_from_json(config_json);
        if (paper_scale) config.repetitions = 100;
        result = run_fit_comparison(config, &out_dir);
      } else if (study == "projection") {
        ProjectionConfig config = projection_config_from_json(config_json);
        if (paper_scale) config.repetitions = 100;
        result = run_projection_degradation(config, &out_dir);
      } else {
        ValidationComparisonConfig config = validation_comparison_config_from_json(config_json);
        if (paper_scale) {
          config.repetitions = 100;
          config.reference_samples = 100;
        }
        result = run_validation_comparison(config, &out_dir);
      }
      manifest.config() = {{"study", study},
                           {"config", config_json},
                           {"paper_scale", paper_scale},
                           {"records", result.records.size()},
                           {"out", out_dir.string()}};
      manifest.write(out_dir / "manifest.json");
      return exit_code::ok;
    }
  } catch (const ArgumentError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return exit_code::argument;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return exit_code::data;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return exit_code::numerical;
  } catch (const io::json::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return exit_code::data;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code::data;
  }
  return exit_code::argument;
}

inline int run(int argc, const char* const* argv) {
  return run(std::vector<std::string>(argv + 1, argv + argc));
}

}  // namespace doekit::cli
