#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doekit/design.hpp"
#include "doekit/errors.hpp"
#include "doekit/gp.hpp"
#include "doekit/io.hpp"
#include "doekit/optimize.hpp"
#include "doekit/parallel.hpp"
#include "doekit/rng.hpp"
#include "doekit/testfns.hpp"
#include "doekit/validate.hpp"

namespace doekit {

/// One long-format benchmark record. `size` is the study's grid value:
/// the learning-sample size for fit and validation studies, the input
/// dimension for the projection study.
struct StudyRecord {
  int replicate = 0;
  std::string kind;
  Eigen::Index size = 0;
  std::string metric;
  double value = 0.0;
  std::string note;
};

struct StudyResult {
  std::string study;
  std::vector<StudyRecord> records;
};

struct FitComparisonConfig {
  std::string function = "gsobol5";
  std::vector<std::string> design_kinds = {"lhs", "wlhs"};
  std::vector<Eigen::Index> sizes = {22, 24, 26, 28, 30, 32, 34, 36, 38, 40};
  int repetitions = 20;
  Eigen::Index test_size = 10000;
  std::uint64_t seed = 0;
  FitOptions fit;
  AnnealConfig anneal;
  unsigned threads = 0;
};

struct ProjectionConfig {
  Eigen::Index n = 100;
  std::vector<Eigen::Index> dims = {2, 3, 4, 5, 10, 15};
  std::vector<std::string> design_kinds = {"maximin-lhs", "wlhs"};
  int repetitions = 20;
  std::uint64_t seed = 0;
  AnnealConfig anneal;
  unsigned threads = 0;
};

struct ValidationComparisonConfig {
  std::string function = "cosin2";
  std::vector<Eigen::Index> learning_sizes = {10, 15, 20, 25, 30, 35, 40};
  std::vector<Eigen::Index> test_sizes = {10, 20, 30, 40, 50};
  std::vector<std::string> test_kinds = {"mc", "lhs"};
  int repetitions = 20;
  int reference_samples = 100;
  Eigen::Index reference_size = 1000;
  Eigen::Index pool_size = 10000;
  Eigen::Index augment_pool_size = 10000;
  std::uint64_t seed = 0;
  FitOptions fit;
  AnnealConfig anneal;       // initial maximin learning design
  AnnealConfig test_anneal;  // optimized-LHS test designs (light schedule)
  unsigned threads = 0;
};

/// Generates one design of the named kind: "srs", "lhs", "hammersley", or an
/// annealed LHS ("wlhs", "maximin-lhs", "centered-lhs"). Annealed kinds draw
/// their annealing seed from the stream.
inline Design make_design_of_kind(std::string_view kind, Eigen::Index n, Eigen::Index d,
                                  Rng& rng, const AnnealConfig& schedule) {
  if (kind == "srs") return generate_srs(n, d, rng);
  if (kind == "lhs") return generate_lhs(n, d, rng);
  if (kind == "hammersley") return generate_hammersley(n, d);
  CriterionKind criterion;
  if (kind == "wlhs")
    criterion = CriterionKind::WrapAroundL2;
  else if (kind == "maximin-lhs")
    criterion = CriterionKind::Maximin;
  else if (kind == "centered-lhs")
    criterion = CriterionKind::CenteredL2;
  else
    throw ArgumentError("unknown design kind: " + std::string(kind));
  const Design initial = generate_lhs(n, d, rng);
  AnnealConfig config = schedule;
  config.criterion = criterion;
  config.seed = rng.engine()();
  return anneal_lhs(initial, config).design;
}

namespace detail {

inline void check_grid(const std::vector<Eigen::Index>& grid, const char* what) {
  if (grid.empty()) throw ArgumentError(std::string(what) + " grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (grid[i] <= grid[i - 1])
      throw ArgumentError(std::string(what) + " grid must be strictly increasing");
}

inline std::string record_key(const StudyRecord& r) {
  return std::to_string(r.replicate) + '|' + r.kind + '|' + std::to_string(r.size) + '|' +
         r.metric;
}

inline bool record_order(const StudyRecord& a, const StudyRecord& b) {
  return std::tie(a.kind, a.size, a.replicate, a.metric) <
         std::tie(b.kind, b.size, b.replicate, b.metric);
}

inline std::string sanitize_note(std::string note) {
  for (char& c : note)
    if (c == ',' || c == '\n' || c == '\r') c = ' ';
  return note;
}

inline std::string records_to_csv(const std::vector<StudyRecord>& records) {
  std::string out = "replicate,kind,size,metric,value,note\n";
  for (const StudyRecord& r : records) {
    out += std::to_string(r.replicate);
    out += ',';
    out += r.kind;
    out += ',';
    out += std::to_string(r.size);
    out += ',';
    out += r.metric;
    out += ',';
    out += io::format_double(r.value);
    out += ',';
    out += r.note;
    out += '\n';
  }
  return out;
}

inline std::vector<StudyRecord> records_from_csv(const std::string& text) {
  std::vector<StudyRecord> records;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) return records;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::istringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) cells.push_back(cell);
    while (cells.size() < 6) cells.emplace_back();
    StudyRecord r;
    r.replicate = std::stoi(cells[0]);
    r.kind = cells[1];
    r.size = static_cast<Eigen::Index>(std::stoll(cells[2]));
    r.metric = cells[3];
    r.value = std::stod(cells[4]);
    r.note = cells[5];
    records.push_back(std::move(r));
  }
  return records;
}

struct StudyJob {
  std::vector<std::string> expected_keys;
  std::function<std::vector<StudyRecord>()> run;
};

inline double quantile(std::vector<double> sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline std::string summary_csv(const std::vector<StudyRecord>& records) {
  std::map<std::tuple<std::string, Eigen::Index, std::string>, std::vector<double>> cells;
  for (const StudyRecord& r : records)
    if (std::isfinite(r.value)) cells[{r.kind, r.size, r.metric}].push_back(r.value);
  std::string out = "kind,size,metric,count,mean,sd,min,q05,q25,q50,q75,q95,max\n";
  for (auto& [key, values] : cells) {
    std::sort(values.begin(), values.end());
    const auto m = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= m;
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    const double sd = values.size() > 1 ? std::sqrt(var / (m - 1.0)) : 0.0;
    out += std::get<0>(key) + ',' + std::to_string(std::get<1>(key)) + ',' + std::get<2>(key) +
           ',' + std::to_string(values.size()) + ',' + io::format_double(mean) + ',' +
           io::format_double(sd) + ',' + io::format_double(values.front()) + ',' +
           io::format_double(quantile(values, 0.05)) + ',' +
           io::format_double(quantile(values, 0.25)) + ',' +
           io::format_double(quantile(values, 0.50)) + ',' +
           io::format_double(quantile(values, 0.75)) + ',' +
           io::format_double(quantile(values, 0.95)) + ',' +
           io::format_double(values.back()) + '\n';
  }
  return out;
}

/// Executes jobs on a bounded pool, skipping jobs whose records are already
/// present in `out_dir`/results.csv. Output order is canonical regardless of
/// completion order; snapshots are written as jobs finish so interrupted
/// studies resume where they stopped.
inline StudyResult run_jobs(const std::string& study, std::vector<StudyJob> jobs,
                            unsigned threads, const std::filesystem::path* out_dir) {
  std::vector<StudyRecord> existing;
  if (out_dir) {
    const auto results_path = *out_dir / "results.csv";
    if (std::filesystem::exists(results_path))
      existing = records_from_csv(io::read_file(results_path));
  }
  std::set<std::string> existing_keys;
  for (const StudyRecord& r : existing) existing_keys.insert(record_key(r));

  std::vector<std::size_t> todo;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const bool done = std::all_of(
        jobs[j].expected_keys.begin(), jobs[j].expected_keys.end(),
        [&](const std::string& key) { return existing_keys.count(key) > 0; });
    if (!done) todo.push_back(j);
  }

  std::vector<std::vector<StudyRecord>> fresh(jobs.size());
  std::mutex snapshot_mutex;
  std::size_t completed = 0;
  const std::size_t snapshot_every = std::max<std::size_t>(1, todo.size() / 16);

  const auto write_outputs = [&](const std::vector<StudyRecord>& records) {
    if (!out_dir) return;
    io::write_file_atomic(*out_dir / "results.csv", records_to_csv(records));
    io::write_file_atomic(*out_dir / "summary.csv", summary_csv(records));
  };
  const auto merged_records = [&] {
    std::vector<StudyRecord> all = existing;
    for (const auto& batch : fresh) all.insert(all.end(), batch.begin(), batch.end());
    // Fresh results win over stale duplicates of the same key.
    std::map<std::string, StudyRecord> by_key;
    for (const StudyRecord& r : all) by_key[record_key(r)] = r;
    std::vector<StudyRecord> unique;
    unique.reserve(by_key.size());
    for (auto& [key, r] : by_key) unique.push_back(std::move(r));
    std::sort(unique.begin(), unique.end(), record_order);
    return unique;
  };

  parallel_for_index(todo.size(), threads, [&](std::size_t t) {
    fresh[todo[t]] = jobs[todo[t]].run();
    std::lock_guard<std::mutex> lock(snapshot_mutex);
    if (++completed % snapshot_every == 0 && completed < todo.size())
      write_outputs(merged_records());
  });

  StudyResult result;
  result.study = study;
  result.records = merged_records();
  write_outputs(result.records);
  return result;
}

inline Rng cell_rng(std::uint64_t seed, const std::string& study, const std::string& kind,
                    Eigen::Index size, int replicate) {
  return Rng(seed)
      .split(study)
      .split(kind)
      .split(static_cast<std::uint64_t>(size))
      .split(static_cast<std::uint64_t>(replicate));
}

}  // namespace detail

/// Fit-quality study: per (design kind, size, replicate), generate a design,
/// run the simulator, fit the metamodel and score Q2 on a large Monte Carlo
/// test sample. Fit failures yield NaN records with a diagnostic note.
inline StudyResult run_fit_comparison(const FitComparisonConfig& config,
                                      const std::filesystem::path* out_dir = nullptr) {
  const TestFunction& fn = find_test_function(config.function);
  detail::check_grid(config.sizes, "size");
  if (config.repetitions < 1) throw ArgumentError("repetitions must be >= 1");
  std::vector<detail::StudyJob> jobs;
  for (const std::string& kind : config.design_kinds)
    for (const Eigen::Index n : config.sizes)
      for (int rep = 0; rep < config.repetitions; ++rep) {
        detail::StudyJob job;
        StudyRecord proto{rep, kind, n, "q2", 0.0, ""};
        job.expected_keys = {detail::record_key(proto)};
        job.run = [&, kind, n, rep, proto]() -> std::vector<StudyRecord> {
          StudyRecord record = proto;
          try {
            Rng rng = detail::cell_rng(config.seed, "fit-comparison", kind, n, rep);
            const Design unit = make_design_of_kind(kind, n, fn.dimension, rng, config.anneal);
            const Design design = scale_to_domain(unit, fn.bounds);
            Eigen::VectorXd y(n);
            for (Eigen::Index i = 0; i < n; ++i) y(i) = fn(design.points.row(i).transpose());
            FitOptions fit = config.fit;
            fit.seed = rng.engine()();
            fit.threads = 1;
            const GpModel model = fit_gp(design, y, fit);
            Rng test_rng = rng.split("test");
            const Design test =
                scale_to_domain(generate_srs(config.test_size, fn.dimension, test_rng), fn.bounds);
            record.value = q2_test_sample(model, fn, test).q2;
          } catch (const std::exception& e) {
            record.value = std::numeric_limits<double>::quiet_NaN();
            record.note = detail::sanitize_note(e.what());
          }
          return {record};
        };
        jobs.push_back(std::move(job));
      }
  return detail::run_jobs("fit-comparison", std::move(jobs), config.threads, out_dir);
}

/// Projection-robustness study: optimize an LHS in dimension d, then score
/// every two-dimensional coordinate projection with the design's own
/// criterion; records the full-design value, the worst projection and the
/// mean projection.
inline StudyResult run_projection_degradation(const ProjectionConfig& config,
                                              const std::filesystem::path* out_dir = nullptr) {
  detail::check_grid(config.dims, "dimension");
  if (config.repetitions < 1) throw ArgumentError("repetitions must be >= 1");
  std::vector<detail::StudyJob> jobs;
  for (const std::string& kind : config.design_kinds)
    for (const Eigen::Index d : config.dims)
      for (int rep = 0; rep < config.repetitions; ++rep) {
        detail::StudyJob job;
        const StudyRecord proto{rep, kind, d, "", 0.0, ""};
        for (const char* metric : {"full", "proj2-worst", "proj2-mean"}) {
          StudyRecord r = proto;
          r.metric = metric;
          job.expected_keys.push_back(detail::record_key(r));
        }
        job.run = [&, kind, d, rep]() -> std::vector<StudyRecord> {
          StudyRecord full{rep, kind, d, "full", 0.0, ""};
          StudyRecord worst{rep, kind, d, "proj2-worst", 0.0, ""};
          StudyRecord mean{rep, kind, d, "proj2-mean", 0.0, ""};
          try {
            Rng rng = detail::cell_rng(config.seed, "projection", kind, d, rep);
            const Design design = make_design_of_kind(kind, config.n, d, rng, config.anneal);
            const CriterionKind criterion = kind == "maximin-lhs"
                                                ? CriterionKind::Maximin
                                                : kind == "wlhs" ? CriterionKind::WrapAroundL2
                                                                 : CriterionKind::CenteredL2;
            full.value = evaluate_criterion(design, criterion).value;
            const bool maximize = criterion_maximizes(criterion);
            double worst_value = maximize ? std::numeric_limits<double>::infinity()
                                          : -std::numeric_limits<double>::infinity();
            long double sum = 0.0L;
            int count = 0;
            for (Eigen::Index a = 0; a < d; ++a)
              for (Eigen::Index b = a + 1; b < d; ++b) {
                const double v =
                    evaluate_criterion(project(design, {a, b}), criterion).value;
                worst_value = maximize ? std::min(worst_value, v) : std::max(worst_value, v);
                sum += v;
                ++count;
              }
            if (d == 2) {
              worst_value = full.value;
              sum = full.value;
              count = 1;
            }
            worst.value = worst_value;
            mean.value = static_cast<double>(sum / count);
          } catch (const std::exception& e) {
            const std::string note = detail::sanitize_note(e.what());
            for (StudyRecord* r : {&full, &worst, &mean}) {
              r->value = std::numeric_limits<double>::quiet_NaN();
              r->note = note;
            }
          }
          return {full, worst, mean};
        };
        jobs.push_back(std::move(job));
      }
  return detail::run_jobs("projection", std::move(jobs), config.threads, out_dir);
}

/// Validation-method study. One deterministic learning-design sequence
/// (annealed maximin LHS grown by mean-distance augmentation) feeds, per
/// learning size: the reference Q2 (mean over repeated large Monte Carlo
/// samples), leave-one-out, the sequential validation design's running Q2,
/// and per-replicate Monte Carlo / optimized-LHS test designs of each size.
/// Deterministic kinds repeat the same value across replicates so the record
/// grid stays rectangular.
inline StudyResult run_validation_comparison(const ValidationComparisonConfig& config,
                                             const std::filesystem::path* out_dir = nullptr) {
  const TestFunction& fn = find_test_function(config.function);
  detail::check_grid(config.learning_sizes, "learning size");
  detail::check_grid(config.test_sizes, "test size");
  if (config.repetitions < 1) throw ArgumentError("repetitions must be >= 1");
  const Eigen::Index max_test = *std::max_element(config.test_sizes.begin(),
                                                  config.test_sizes.end());

  // Learning designs grow deterministically from the master seed; prefixes
  // of the grown design realize every requested size.
  const Eigen::Index n0 = config.learning_sizes.front();
  const Eigen::Index n_max = config.learning_sizes.back();
  Rng learn_rng = Rng(config.seed).split("validation-learning");
  const Design initial =
      make_design_of_kind("maximin-lhs", n0, fn.dimension, learn_rng, config.anneal);
  Design grown = initial;
  if (n_max > n0) {
    const Design pool = generate_hammersley(config.augment_pool_size, fn.dimension);
    grown = augment_by_mean_distance(initial, pool, n_max - n0);
  }

  const auto metric_at = [](Eigen::Index t) { return "q2@" + std::to_string(t); };
  const auto trace_value = [](const ValidationReport& report, Eigen::Index t) {
    for (const auto& entry : report.trace)
      if (entry.first == t) return entry.second;
    return std::numeric_limits<double>::quiet_NaN();
  };

  // One model per learning size, shared by every job below.
  struct LearnCell {
    Design design;
    Eigen::VectorXd outputs;
    std::optional<GpModel> model;
    std::string note;
  };
  std::map<Eigen::Index, LearnCell> cells;
  for (const Eigen::Index n_learn : config.learning_sizes) {
    LearnCell cell;
    try {
      Rng rng = detail::cell_rng(config.seed, "validation-model", "model", n_learn, 0);
      Design unit_prefix;
      unit_prefix.points = grown.points.topRows(n_learn);
      unit_prefix.domain = unit_box(fn.dimension);
      unit_prefix.kind = n_learn == n0 ? DesignKind::Lhs : DesignKind::Augmented;
      cell.design = scale_to_domain(unit_prefix, fn.bounds);
      cell.outputs.resize(n_learn);
      for (Eigen::Index i = 0; i < n_learn; ++i)
        cell.outputs(i) = fn(cell.design.points.row(i).transpose());
      FitOptions fit = config.fit;
      fit.seed = rng.engine()();
      cell.model = fit_gp(cell.design, cell.outputs, fit);
    } catch (const std::exception& e) {
      cell.note = detail::sanitize_note(e.what());
    }
    cells.emplace(n_learn, std::move(cell));
  }

  std::vector<detail::StudyJob> jobs;
  for (const Eigen::Index n_learn : config.learning_sizes) {
    // Deterministic kinds: reference, leave-one-out, sequential.
    detail::StudyJob job;
    for (const char* kind : {"reference", "loo", "sequential"})
      for (int rep = 0; rep < config.repetitions; ++rep)
        for (const Eigen::Index t : config.test_sizes)
          job.expected_keys.push_back(
              detail::record_key({rep, kind, n_learn, metric_at(t), 0.0, ""}));
    job.run = [&, n_learn]() -> std::vector<StudyRecord> {
      const LearnCell& c = cells.at(n_learn);
      std::vector<StudyRecord> records;
      double q2_ref = std::numeric_limits<double>::quiet_NaN();
      double q2_loo_value = std::numeric_limits<double>::quiet_NaN();
      ValidationReport seq_report;
      std::string note = c.note;
      if (c.model) {
        try {
          Rng rng = detail::cell_rng(config.seed, "validation-model", "ref", n_learn, 0);
          long double ref_sum = 0.0L;
          for (int s = 0; s < config.reference_samples; ++s) {
            Rng ref_rng = rng.split(static_cast<std::uint64_t>(s));
            const Design test = scale_to_domain(
                generate_srs(config.reference_size, fn.dimension, ref_rng), fn.bounds);
            ref_sum += q2_test_sample(*c.model, fn, test).q2;
          }
          q2_ref = static_cast<double>(ref_sum / config.reference_samples);

          FitOptions fold_fit = config.fit;
          fold_fit.seed = Rng(config.seed).split("validation-loo").split(
              static_cast<std::uint64_t>(n_learn)).engine()();
          q2_loo_value = q2_loo(c.design, c.outputs, fold_fit).q2;
          seq_report = q2_sequential(*c.model, fn, config.pool_size, max_test);
        } catch (const std::exception& e) {
          note = detail::sanitize_note(e.what());
        }
      }
      for (int rep = 0; rep < config.repetitions; ++rep)
        for (const Eigen::Index t : config.test_sizes) {
          records.push_back({rep, "reference", n_learn, metric_at(t), q2_ref, note});
          records.push_back({rep, "loo", n_learn, metric_at(t), q2_loo_value, note});
          records.push_back({rep, "sequential", n_learn, metric_at(t),
                             note.empty() ? trace_value(seq_report, t)
                                          : std::numeric_limits<double>::quiet_NaN(),
                             note});
        }
      return records;
    };
    jobs.push_back(std::move(job));

    for (const std::string& kind : config.test_kinds) {
      if (kind != "mc" && kind != "lhs")
        throw ArgumentError("unknown validation test kind: " + kind);
      for (int rep = 0; rep < config.repetitions; ++rep) {
        detail::StudyJob test_job;
        for (const Eigen::Index t : config.test_sizes)
          test_job.expected_keys.push_back(
              detail::record_key({rep, kind, n_learn, metric_at(t), 0.0, ""}));
        test_job.run = [&, kind, n_learn, rep]() -> std::vector<StudyRecord> {
          const LearnCell& c = cells.at(n_learn);
          std::vector<StudyRecord> records;
          try {
            if (!c.model) throw DataError(c.note.empty() ? "model fit failed" : c.note);
            Rng rng = detail::cell_rng(config.seed, "validation-test", kind, n_learn, rep);
            if (kind == "mc") {
              // One growing sample per replicate; prefixes give every size.
              const Design test =
                  scale_to_domain(generate_srs(max_test, fn.dimension, rng), fn.bounds);
              const ValidationReport report = q2_test_sample(*c.model, fn, test);
              for (const Eigen::Index t : config.test_sizes)
                records.push_back(
                    {rep, kind, n_learn, metric_at(t), trace_value(report, t), ""});
            } else {
              for (const Eigen::Index t : config.test_sizes) {
                Rng lhs_rng = rng.split(static_cast<std::uint64_t>(t));
                const Design unit_test =
                    make_design_of_kind(t >= 2 ? "wlhs" : "lhs", t, fn.dimension, lhs_rng,
                                        config.test_anneal);
                const Design test = scale_to_domain(unit_test, fn.bounds);
                records.push_back({rep, kind, n_learn, metric_at(t),
                                   q2_test_sample(*c.model, fn, test).q2, ""});
              }
            }
          } catch (const std::exception& e) {
            records.clear();
            const std::string note = detail::sanitize_note(e.what());
            for (const Eigen::Index t : config.test_sizes)
              records.push_back({rep, kind, n_learn, metric_at(t),
                                 std::numeric_limits<double>::quiet_NaN(), note});
          }
          return records;
        };
        jobs.push_back(std::move(test_job));
      }
    }
  }
  return detail::run_jobs("validation", std::move(jobs), config.threads, out_dir);
}

inline FitOptions fit_options_from_json(const io::json& j) {
  FitOptions options;
  if (j.contains("fixed_exponent") && !j.at("fixed_exponent").is_null())
    options.fixed_exponent = j.at("fixed_exponent").get<double>();
  if (j.contains("active_dims"))
    for (const auto& v : j.at("active_dims")) options.active_dims.push_back(v.get<Eigen::Index>());
  options.starts = j.value("starts", options.starts);
  options.max_evals_per_start = j.value("max_evals_per_start", options.max_evals_per_start);
  options.initial_nugget = j.value("initial_nugget", options.initial_nugget);
  options.seed = j.value("seed", options.seed);
  options.threads = j.value("threads", options.threads);
  return options;
}

inline AnnealConfig anneal_config_from_json(const io::json& j) {
  AnnealConfig config;
  if (j.contains("criterion")) config.criterion = criterion_from_string(j.at("criterion").get<std::string>());
  if (j.contains("initial_temperature") && !j.at("initial_temperature").is_null())
    config.initial_temperature = j.at("initial_temperature").get<double>();
  config.cooling_factor = j.value("cooling_factor", config.cooling_factor);
  config.iterations_per_temperature =
      j.value("iterations_per_temperature", config.iterations_per_temperature);
  config.temperature_steps = j.value("temperature_steps", config.temperature_steps);
  if (j.contains("initial_jitter") && !j.at("initial_jitter").is_null())
    config.initial_jitter = j.at("initial_jitter").get<Eigen::Index>();
  config.seed = j.value("seed", config.seed);
  return config;
}

inline io::json anneal_config_to_json(const AnnealConfig& config) {
  io::json j;
  j["criterion"] = to_string(config.criterion);
  if (config.initial_temperature)
    j["initial_temperature"] = *config.initial_temperature;
  else
    j["initial_temperature"] = nullptr;
  j["cooling_factor"] = config.cooling_factor;
  j["iterations_per_temperature"] = config.iterations_per_temperature;
  j["temperature_steps"] = config.temperature_steps;
  if (config.initial_jitter)
    j["initial_jitter"] = *config.initial_jitter;
  else
    j["initial_jitter"] = nullptr;
  j["seed"] = config.seed;
  return j;
}

inline FitComparisonConfig fit_comparison_config_from_json(const io::json& j) {
  FitComparisonConfig config;
  config.function = j.value("function", config.function);
  if (j.contains("design_kinds"))
    config.design_kinds = j.at("design_kinds").get<std::vector<std::string>>();
  if (j.contains("sizes")) {
    config.sizes.clear();
    for (const auto& v : j.at("sizes")) config.sizes.push_back(v.get<Eigen::Index>());
  }
  config.repetitions = j.value("repetitions", config.repetitions);
  config.test_size = j.value("test_size", config.test_size);
  config.seed = j.value("seed", config.seed);
  if (j.contains("fit")) config.fit = fit_options_from_json(j.at("fit"));
  if (j.contains("anneal")) config.anneal = anneal_config_from_json(j.at("anneal"));
  config.threads = j.value("threads", config.threads);
  return config;
}

inline ProjectionConfig projection_config_from_json(const io::json& j) {
  ProjectionConfig config;
  config.n = j.value("n", config.n);
  if (j.contains("dims")) {
    config.dims.clear();
    for (const auto& v : j.at("dims")) config.dims.push_back(v.get<Eigen::Index>());
  }
  if (j.contains("design_kinds"))
    config.design_kinds = j.at("design_kinds").get<std::vector<std::string>>();
  config.repetitions = j.value("repetitions", config.repetitions);
  config.seed = j.value("seed", config.seed);
  if (j.contains("anneal")) config.anneal = anneal_config_from_json(j.at("anneal"));
  config.threads = j.value("threads", config.threads);
  return config;
}

inline ValidationComparisonConfig validation_comparison_config_from_json(const io::json& j) {
  ValidationComparisonConfig config;
  config.function = j.value("function", config.function);
  if (j.contains("learning_sizes")) {
    config.learning_sizes.clear();
    for (const auto& v : j.at("learning_sizes"))
      config.learning_sizes.push_back(v.get<Eigen::Index>());
  }
  if (j.contains("test_sizes")) {
    config.test_sizes.clear();
    for (const auto& v : j.at("test_sizes")) config.test_sizes.push_back(v.get<Eigen::Index>());
  }
  if (j.contains("test_kinds"))
    config.test_kinds = j.at("test_kinds").get<std::vector<std::string>>();
  config.repetitions = j.value("repetitions", config.repetitions);
  config.reference_samples = j.value("reference_samples", config.reference_samples);
  config.reference_size = j.value("reference_size", config.reference_size);
  config.pool_size = j.value("pool_size", config.pool_size);
  config.augment_pool_size = j.value("augment_pool_size", config.augment_pool_size);
  config.seed = j.value("seed", config.seed);
  if (j.contains("fit")) config.fit = fit_options_from_json(j.at("fit"));
  if (j.contains("anneal")) config.anneal = anneal_config_from_json(j.at("anneal"));
  if (j.contains("test_anneal")) config.test_anneal = anneal_config_from_json(j.at("test_anneal"));
  config.threads = j.value("threads", config.threads);
  return config;
}

}  // namespace doekit
