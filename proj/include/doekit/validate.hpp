#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "doekit/criteria.hpp"
#include "doekit/design.hpp"
#include "doekit/errors.hpp"
#include "doekit/gp.hpp"
#include "doekit/parallel.hpp"
#include "doekit/rng.hpp"
#include "doekit/testfns.hpp"

namespace doekit {

enum class ValidationMethod { TestSample, CrossValidation, LeaveOneOut, Sequential };

inline const char* to_string(ValidationMethod method) {
  switch (method) {
    case ValidationMethod::TestSample: return "test-sample";
    case ValidationMethod::CrossValidation: return "cross-validation";
    case ValidationMethod::LeaveOneOut: return "leave-one-out";
    case ValidationMethod::Sequential: return "sequential";
  }
  return "test-sample";
}

/// Predictivity estimate with its residuals and, for ordered test points,
/// the running-Q2 convergence trace.
struct ValidationReport {
  ValidationMethod method = ValidationMethod::TestSample;
  DesignKind test_kind = DesignKind::External;
  Eigen::Index folds = 0;
  double q2 = 0.0;
  Eigen::Index n_test = 0;
  std::vector<std::array<double, 2>> residuals;  // (truth, prediction) pairs
  std::vector<std::pair<Eigen::Index, double>> trace;
};

/// 1 - sum((y - yhat)^2) / sum((y - mean(y))^2).
inline double q2(const Eigen::VectorXd& truth, const Eigen::VectorXd& predicted) {
  if (truth.size() != predicted.size()) throw ArgumentError("q2 vectors differ in length");
  if (truth.size() < 2) throw ArgumentError("q2 requires at least two test values");
  const double mean = truth.mean();
  const double total = (truth.array() - mean).square().sum();
  if (total == 0.0) throw DataError("q2 undefined: constant true values");
  const double residual = (truth - predicted).squaredNorm();
  return 1.0 - residual / total;
}

namespace detail {

/// Streaming Q2 over (truth, prediction) pairs: Welford for the output
/// variance, running sum for the squared residuals. Every trace entry comes
/// from this accumulator, so traces are prefix-consistent by construction.
class RunningQ2 {
 public:
  void add(double truth, double predicted) {
    ++count_;
    const double delta = truth - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (truth - mean_);
    const double r = truth - predicted;
    sse_ += r * r;
  }

  bool defined() const { return count_ >= 2 && m2_ > 0.0; }
  double value() const { return 1.0 - sse_ / m2_; }
  Eigen::Index count() const { return count_; }

 private:
  Eigen::Index count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double sse_ = 0.0;
};

inline ValidationReport report_from_pairs(const std::vector<std::array<double, 2>>& pairs,
                                          ValidationMethod method, bool with_trace) {
  ValidationReport report;
  report.method = method;
  report.residuals = pairs;
  report.n_test = static_cast<Eigen::Index>(pairs.size());
  RunningQ2 running;
  for (const auto& pair : pairs) {
    running.add(pair[0], pair[1]);
    if (with_trace && running.defined()) report.trace.push_back({running.count(), running.value()});
  }
  if (!running.defined()) throw DataError("q2 undefined on this test sample");
  report.q2 = running.value();
  return report;
}

}  // namespace detail

/// Q2 of a model against the true function on an explicit test design
/// (physical coordinates). The trace follows the test-point order.
inline ValidationReport q2_test_sample(const GpModel& model, const TestFunction& fn,
                                       const Design& test_design) {
  if (test_design.dim() != model.dim()) throw ArgumentError("test design dimension mismatch");
  for (Eigen::Index l = 0; l < test_design.dim(); ++l) {
    const Interval& a = test_design.domain[static_cast<std::size_t>(l)];
    const Interval& b = model.domain[static_cast<std::size_t>(l)];
    if (a.lo != b.lo || a.hi != b.hi)
      throw ArgumentError("test design domain differs from the model domain");
  }
  std::vector<std::array<double, 2>> pairs(static_cast<std::size_t>(test_design.size()));
  for (Eigen::Index i = 0; i < test_design.size(); ++i) {
    const Eigen::VectorXd x = test_design.points.row(i).transpose();
    pairs[static_cast<std::size_t>(i)] = {fn(x), predict_mean(model, x)};
  }
  ValidationReport report = detail::report_from_pairs(pairs, ValidationMethod::TestSample, true);
  report.test_kind = test_design.kind;
  return report;
}

namespace detail {

inline ValidationReport q2_holdout(const Design& design, const Eigen::VectorXd& outputs,
                                   const FitOptions& options,
                                   const std::vector<Eigen::Index>& fold_of_row,
                                   Eigen::Index n_folds, ValidationMethod method) {
  const Eigen::Index n = design.size();
  std::vector<std::array<double, 2>> pairs(static_cast<std::size_t>(n));
  FitOptions fold_options = options;
  fold_options.threads = 1;
  parallel_for_index(static_cast<std::size_t>(n_folds), options.threads, [&](std::size_t fold) {
    std::vector<Eigen::Index> keep;
    keep.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
      if (fold_of_row[static_cast<std::size_t>(i)] != static_cast<Eigen::Index>(fold))
        keep.push_back(i);
    Design learn;
    learn.points.resize(static_cast<Eigen::Index>(keep.size()), design.dim());
    Eigen::VectorXd y(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t r = 0; r < keep.size(); ++r) {
      learn.points.row(static_cast<Eigen::Index>(r)) = design.points.row(keep[r]);
      y(static_cast<Eigen::Index>(r)) = outputs(keep[r]);
    }
    learn.domain = design.domain;
    learn.kind = design.kind;
    const GpModel model = fit_gp(learn, y, fold_options);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (fold_of_row[static_cast<std::size_t>(i)] != static_cast<Eigen::Index>(fold)) continue;
      const Eigen::VectorXd x = design.points.row(i).transpose();
      pairs[static_cast<std::size_t>(i)] = {outputs(i), predict_mean(model, x)};
    }
  });
  ValidationReport report = report_from_pairs(pairs, method, false);
  report.folds = n_folds;
  return report;
}

}  // namespace detail

/// k-fold cross-validation with full hyperparameter refits per fold; all
/// held-out residuals pool into one Q2 (rows keep their original order).
inline ValidationReport q2_cross_validation(const Design& design, const Eigen::VectorXd& outputs,
                                            const FitOptions& options, Eigen::Index k, Rng& rng) {
  const Eigen::Index n = design.size();
  if (k < 2 || k > n) throw ArgumentError("fold count must lie in [2, n]");
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  for (Eigen::Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  std::vector<Eigen::Index> fold_of_row(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < n; ++r)
    fold_of_row[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r % k;
  return detail::q2_holdout(design, outputs, options, fold_of_row, k,
                            ValidationMethod::CrossValidation);
}

/// Leave-one-out: n refits, each omitting one learning point.
inline ValidationReport q2_loo(const Design& design, const Eigen::VectorXd& outputs,
                               const FitOptions& options) {
  const Eigen::Index n = design.size();
  if (n < 3) throw ArgumentError("leave-one-out requires at least three points");
  std::vector<Eigen::Index> fold_of_row(static_cast<std::size_t>(n));
  std::iota(fold_of_row.begin(), fold_of_row.end(), Eigen::Index{0});
  ValidationReport report = detail::q2_holdout(design, outputs, options, fold_of_row, n,
                                               ValidationMethod::LeaveOneOut);
  report.method = ValidationMethod::LeaveOneOut;
  return report;
}

/// Result of the greedy validation-design selection: chosen points in unit
/// coordinates, in selection order, with their original pool indices.
struct SequentialSelection {
  Eigen::MatrixXd points;
  std::vector<Eigen::Index> pool_indices;
};

/// Greedy test-point selection: at each step, picks the pool point whose
/// addition to the learning design yields the smallest squared discrepancy
/// (the design-only term is common to all candidates, so this minimizes the
/// discrepancy difference). The chosen point joins the design and leaves the
/// pool. Ties break to the lowest original pool index; the sequence is fully
/// deterministic for fixed inputs.
inline SequentialSelection sequential_validation_design(
    const Design& learning, const Design& pool, Eigen::Index n_test,
    CriterionKind discrepancy = CriterionKind::CenteredL2) {
  if (pool.dim() != learning.dim()) throw ArgumentError("pool dimension mismatch");
  if (n_test < 0 || n_test > pool.size())
    throw ArgumentError("requested test count exceeds the pool size");

  const Eigen::MatrixXd pool_unit = unit_coordinates(pool);
  Design learning_unit;
  learning_unit.points = unit_coordinates(learning);
  learning_unit.domain = unit_box(learning.dim());

  SequentialSelection selection;
  selection.points.resize(n_test, learning.dim());
  if (n_test == 0) return selection;

  AddPointEvaluator evaluator(learning_unit, discrepancy);
  std::vector<char> used(static_cast<std::size_t>(pool.size()), 0);
  for (Eigen::Index step = 0; step < n_test; ++step) {
    Eigen::Index best = -1;
    double best_value = std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < pool.size(); ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      const double value = evaluator.with_added(pool_unit.row(c).transpose());
      if (value < best_value) {
        best_value = value;
        best = c;
      }
    }
    used[static_cast<std::size_t>(best)] = 1;
    selection.points.row(step) = pool_unit.row(best);
    selection.pool_indices.push_back(best);
    evaluator.add(pool_unit.row(best).transpose());
  }
  return selection;
}

/// Sequential validation of a fitted model: build a Hammersley candidate
/// pool, select test points against the model's learning design, then
/// evaluate the running Q2 in selection order.
inline ValidationReport q2_sequential(const GpModel& model, const TestFunction& fn,
                                      Eigen::Index pool_size, Eigen::Index n_test,
                                      CriterionKind discrepancy = CriterionKind::CenteredL2) {
  if (pool_size < 1) throw ArgumentError("pool size must be >= 1");
  Design learning;
  learning.points = model.inputs;
  learning.domain = unit_box(model.dim());
  const Design pool = generate_hammersley(pool_size, model.dim());
  const SequentialSelection selection =
      sequential_validation_design(learning, pool, n_test, discrepancy);

  std::vector<std::array<double, 2>> pairs(static_cast<std::size_t>(n_test));
  for (Eigen::Index i = 0; i < n_test; ++i) {
    const Eigen::VectorXd x = scale_point(selection.points.row(i).transpose(), model.domain);
    pairs[static_cast<std::size_t>(i)] = {fn(x), predict_mean(model, x)};
  }
  ValidationReport report = detail::report_from_pairs(pairs, ValidationMethod::Sequential, true);
  report.test_kind = DesignKind::Hammersley;
  return report;
}

}  // namespace doekit
