#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <utility>
#include <vector>

#include "doekit/criteria.hpp"
#include "doekit/design.hpp"
#include "doekit/errors.hpp"
#include "doekit/rng.hpp"

namespace doekit {

/// Simulated-annealing schedule. A missing initial temperature is calibrated
/// from probe moves so that roughly half of the worsening moves would be
/// accepted at the start; a missing jitter count defaults to 2n.
struct AnnealConfig {
  CriterionKind criterion = CriterionKind::WrapAroundL2;
  std::optional<double> initial_temperature;
  double cooling_factor = 0.95;
  Eigen::Index iterations_per_temperature = 50;
  Eigen::Index temperature_steps = 200;
  std::optional<Eigen::Index> initial_jitter;
  std::uint64_t seed = 0;
};

struct AnnealTraceEntry {
  Eigen::Index step = 0;
  double temperature = 0.0;
  double current = 0.0;
  double best = 0.0;
  bool accepted = false;
};

struct AnnealResult {
  Design design;
  std::vector<AnnealTraceEntry> trace;
  double best_value = 0.0;
  double initial_value = 0.0;
  double initial_temperature = 0.0;
};

namespace detail {

struct ExchangeDraw {
  Eigen::Index col = 0;
  Eigen::Index row_a = 0;
  Eigen::Index row_b = 0;
};

inline ExchangeDraw draw_exchange(Rng& rng, Eigen::Index n, Eigen::Index d) {
  ExchangeDraw draw;
  draw.col = static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(d)));
  draw.row_a = static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n)));
  draw.row_b = static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(n) - 1));
  if (draw.row_b >= draw.row_a) ++draw.row_b;
  return draw;
}

/// Incremental criterion evaluation under column-wise pair swaps.
/// propose() prices a swap without committing it; commit() applies the last
/// proposal. Cached quantities are rebuilt from scratch periodically to stop
/// floating-point drift from the rank-two updates.
class ExchangeScorer {
 public:
  virtual ~ExchangeScorer() = default;

  const Eigen::MatrixXd& points() const { return pts_; }

  /// Criterion value of the current state.
  double current() const { return current_; }

  /// Criterion value if pts(a,col) and pts(b,col) were swapped.
  virtual double propose(const ExchangeDraw& draw) = 0;

  /// Applies the proposal most recently priced.
  void commit() {
    apply_pending();
    pts_(pending_.row_a, pending_.col) = std::exchange(
        pts_(pending_.row_b, pending_.col), pts_(pending_.row_a, pending_.col));
    if (++commits_since_rebuild_ >= kRebuildEvery) {
      rebuild();
      commits_since_rebuild_ = 0;
    }
  }

 protected:
  explicit ExchangeScorer(Eigen::MatrixXd pts) : pts_(std::move(pts)) {}

  virtual void apply_pending() = 0;
  virtual void rebuild() = 0;

  static constexpr int kRebuildEvery = 512;
  Eigen::MatrixXd pts_;
  double current_ = 0.0;
  ExchangeDraw pending_;
  int commits_since_rebuild_ = 0;
};

class MaximinScorer final : public ExchangeScorer {
 public:
  explicit MaximinScorer(Eigen::MatrixXd pts) : ExchangeScorer(std::move(pts)) { rebuild(); }

  double propose(const ExchangeDraw& draw) override {
    pending_ = draw;
    const Eigen::Index n = pts_.rows();
    const double va = pts_(draw.row_a, draw.col);
    const double vb = pts_(draw.row_b, draw.col);
    new_row_a_.resize(n);
    new_row_b_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == draw.row_a || i == draw.row_b) continue;
      const double vi = pts_(i, draw.col);
      new_row_a_(i) = dist2_(draw.row_a, i) - (va - vi) * (va - vi) + (vb - vi) * (vb - vi);
      new_row_b_(i) = dist2_(draw.row_b, i) - (vb - vi) * (vb - vi) + (va - vi) * (va - vi);
    }
    double min2 = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        double v = dist2_(i, j);
        if (i == draw.row_a || i == draw.row_b) {
          if (j != draw.row_a && j != draw.row_b) v = (i == draw.row_a ? new_row_a_ : new_row_b_)(j);
        } else if (j == draw.row_a || j == draw.row_b) {
          v = (j == draw.row_a ? new_row_a_ : new_row_b_)(i);
        }
        min2 = std::min(min2, v);
      }
    proposed_value_ = std::sqrt(std::max(0.0, min2));
    return proposed_value_;
  }

 private:
  void apply_pending() override {
    const Eigen::Index n = pts_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == pending_.row_a || i == pending_.row_b) continue;
      dist2_(pending_.row_a, i) = dist2_(i, pending_.row_a) = new_row_a_(i);
      dist2_(pending_.row_b, i) = dist2_(i, pending_.row_b) = new_row_b_(i);
    }
    current_ = proposed_value_;
  }

  void rebuild() override {
    const Eigen::Index n = pts_.rows();
    dist2_.resize(n, n);
    double min2 = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      dist2_(i, i) = 0.0;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double v = (pts_.row(i) - pts_.row(j)).squaredNorm();
        dist2_(i, j) = dist2_(j, i) = v;
        min2 = std::min(min2, v);
      }
    }
    current_ = std::sqrt(std::max(0.0, min2));
  }

  Eigen::MatrixXd dist2_;
  Eigen::VectorXd new_row_a_, new_row_b_;
  double proposed_value_ = 0.0;
};

/// Shared machinery for the two discrepancy scorers: a cached matrix of
/// cross-sum products and running totals, updated by reweighting the two
/// affected rows (every factor is >= 1 for centered and >= 5/4 for
/// wrap-around, so the divisions are safe).
class DiscrepancyScorer : public ExchangeScorer {
 public:
  double propose(const ExchangeDraw& draw) override {
    pending_ = draw;
    const Eigen::Index n = pts_.rows();
    const double va = pts_(draw.row_a, draw.col);
    const double vb = pts_(draw.row_b, draw.col);
    new_row_a_.resize(n);
    new_row_b_.resize(n);
    long double delta_cross = 0.0L;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == draw.row_a || i == draw.row_b) continue;
      const double vi = pts_(i, draw.col);
      new_row_a_(i) = cross_(draw.row_a, i) / cross_factor(va, vi) * cross_factor(vb, vi);
      new_row_b_(i) = cross_(draw.row_b, i) / cross_factor(vb, vi) * cross_factor(va, vi);
      delta_cross += 2.0L * (static_cast<long double>(new_row_a_(i)) - cross_(draw.row_a, i));
      delta_cross += 2.0L * (static_cast<long double>(new_row_b_(i)) - cross_(draw.row_b, i));
    }
    new_diag_a_ = cross_(draw.row_a, draw.row_a) / cross_factor(va, va) * cross_factor(vb, vb);
    new_diag_b_ = cross_(draw.row_b, draw.row_b) / cross_factor(vb, vb) * cross_factor(va, va);
    delta_cross += (new_diag_a_ - cross_(draw.row_a, draw.row_a)) +
                   (new_diag_b_ - cross_(draw.row_b, draw.row_b));
    new_single_a_ = single_(draw.row_a) / self_factor(va) * self_factor(vb);
    new_single_b_ = single_(draw.row_b) / self_factor(vb) * self_factor(va);
    const long double delta_single =
        (new_single_a_ - single_(draw.row_a)) + (new_single_b_ - single_(draw.row_b));
    proposed_value_ = assemble(single_sum_ + delta_single, cross_sum_ + delta_cross);
    pending_delta_single_ = delta_single;
    pending_delta_cross_ = delta_cross;
    return proposed_value_;
  }

 protected:
  explicit DiscrepancyScorer(Eigen::MatrixXd pts) : ExchangeScorer(std::move(pts)) {}

  virtual double cross_factor(double u, double v) const = 0;
  virtual double self_factor(double u) const = 0;
  virtual double assemble(long double single_sum, long double cross_sum) const = 0;

  void apply_pending() override {
    const Eigen::Index n = pts_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == pending_.row_a || i == pending_.row_b) continue;
      cross_(pending_.row_a, i) = cross_(i, pending_.row_a) = new_row_a_(i);
      cross_(pending_.row_b, i) = cross_(i, pending_.row_b) = new_row_b_(i);
    }
    cross_(pending_.row_a, pending_.row_a) = new_diag_a_;
    cross_(pending_.row_b, pending_.row_b) = new_diag_b_;
    single_(pending_.row_a) = new_single_a_;
    single_(pending_.row_b) = new_single_b_;
    single_sum_ += pending_delta_single_;
    cross_sum_ += pending_delta_cross_;
    current_ = proposed_value_;
  }

  void rebuild() override {
    const Eigen::Index n = pts_.rows();
    const Eigen::Index d = pts_.cols();
    cross_.resize(n, n);
    single_.resize(n);
    single_sum_ = 0.0L;
    cross_sum_ = 0.0L;
    for (Eigen::Index i = 0; i < n; ++i) {
      double self = 1.0;
      for (Eigen::Index k = 0; k < d; ++k) self *= self_factor(pts_(i, k));
      single_(i) = self;
      single_sum_ += self;
      for (Eigen::Index j = i; j < n; ++j) {
        double prod = 1.0;
        for (Eigen::Index k = 0; k < d; ++k) prod *= cross_factor(pts_(i, k), pts_(j, k));
        cross_(i, j) = cross_(j, i) = prod;
        cross_sum_ += (i == j) ? static_cast<long double>(prod)
                               : 2.0L * static_cast<long double>(prod);
      }
    }
    current_ = assemble(single_sum_, cross_sum_);
  }

  Eigen::MatrixXd cross_;
  Eigen::VectorXd single_;
  Eigen::VectorXd new_row_a_, new_row_b_;
  long double single_sum_ = 0.0L, cross_sum_ = 0.0L;
  long double pending_delta_single_ = 0.0L, pending_delta_cross_ = 0.0L;
  double new_diag_a_ = 0.0, new_diag_b_ = 0.0;
  double new_single_a_ = 0.0, new_single_b_ = 0.0;
  double proposed_value_ = 0.0;
};

class CenteredL2Scorer final : public DiscrepancyScorer {
 public:
  explicit CenteredL2Scorer(Eigen::MatrixXd pts) : DiscrepancyScorer(std::move(pts)) {
    rebuild();
  }

 private:
  double cross_factor(double u, double v) const override {
    return centered_cross_factor(u, v);
  }
  double self_factor(double u) const override { return centered_self_factor(u); }
  double assemble(long double single_sum, long double cross_sum) const override {
    const auto n = static_cast<long double>(pts_.rows());
    return static_cast<double>(std::pow(13.0L / 12.0L, static_cast<long double>(pts_.cols())) -
                               2.0L / n * single_sum + cross_sum / (n * n));
  }
};

class WrapAroundL2Scorer final : public DiscrepancyScorer {
 public:
  explicit WrapAroundL2Scorer(Eigen::MatrixXd pts) : DiscrepancyScorer(std::move(pts)) {
    rebuild();
  }

 private:
  double cross_factor(double u, double v) const override {
    return wraparound_cross_factor(u, v);
  }
  double self_factor(double) const override { return 1.0; }
  double assemble(long double, long double cross_sum) const override {
    const auto n = static_cast<long double>(pts_.rows());
    return static_cast<double>(std::pow(4.0L / 3.0L, static_cast<long double>(pts_.cols())) +
                               cross_sum / (n * n));
  }
};

inline std::unique_ptr<ExchangeScorer> make_scorer(CriterionKind kind, Eigen::MatrixXd pts) {
  switch (kind) {
    case CriterionKind::Maximin: return std::make_unique<MaximinScorer>(std::move(pts));
    case CriterionKind::CenteredL2: return std::make_unique<CenteredL2Scorer>(std::move(pts));
    case CriterionKind::WrapAroundL2:
      return std::make_unique<WrapAroundL2Scorer>(std::move(pts));
  }
  throw ArgumentError("unknown criterion kind");
}

}  // namespace detail

/// Swaps one uniformly chosen column's values between two uniformly chosen
/// distinct rows. The stratum assignment is permuted, so the LHS invariant
/// is preserved structurally.
inline Design exchange_move(const Design& design, Rng& rng) {
  if (design.size() < 2) throw ArgumentError("exchange move requires at least two points");
  if (!is_lhs(design)) throw ArgumentError("exchange move expects an LHS design");
  const auto draw = detail::draw_exchange(rng, design.size(), design.dim());
  Design out = design;
  out.points(draw.row_a, draw.col) =
      std::exchange(out.points(draw.row_b, draw.col), out.points(draw.row_a, draw.col));
  return out;
}

/// Simulated annealing over LHS designs with geometric cooling and
/// column-wise pair-swap moves. Improving moves are always accepted;
/// worsening moves are accepted with probability exp(-|delta|/T).
/// Coordinate values travel with their stratum cell, so every visited state
/// is an LHS. Returns the best design encountered, which includes the
/// pre-jitter initial state.
inline AnnealResult anneal_lhs(const Design& initial, const AnnealConfig& config) {
  if (!is_lhs(initial)) throw ArgumentError("anneal_lhs requires an LHS design");
  if (!is_unit_box(initial.domain)) throw ArgumentError("anneal_lhs expects unit-domain designs");
  if (initial.size() < 2) throw ArgumentError("anneal_lhs requires at least two points");
  if (!(config.cooling_factor > 0.0 && config.cooling_factor < 1.0))
    throw ArgumentError("cooling factor must lie strictly inside (0,1)");
  if (config.iterations_per_temperature < 1)
    throw ArgumentError("iterations per temperature must be >= 1");
  if (config.temperature_steps < 0) throw ArgumentError("temperature step count must be >= 0");
  if (config.initial_temperature && !(*config.initial_temperature > 0.0))
    throw ArgumentError("initial temperature must be > 0");
  const Eigen::Index n = initial.size();
  const Eigen::Index d = initial.dim();

  // Minimization convention: maximin distances are negated.
  const double sign = criterion_maximizes(config.criterion) ? -1.0 : 1.0;

  Rng rng(config.seed);
  Eigen::MatrixXd working = initial.points;
  const Eigen::Index jitter = config.initial_jitter.value_or(2 * n);
  if (jitter < 0) throw ArgumentError("initial jitter must be >= 0");
  for (Eigen::Index j = 0; j < jitter; ++j) {
    const auto draw = detail::draw_exchange(rng, n, d);
    working(draw.row_a, draw.col) =
        std::exchange(working(draw.row_b, draw.col), working(draw.row_a, draw.col));
  }

  auto scorer = detail::make_scorer(config.criterion, std::move(working));

  AnnealResult result;
  result.initial_value = evaluate_criterion(initial, config.criterion).value;
  Eigen::MatrixXd best_points = initial.points;
  double best_score = sign * result.initial_value;
  if (sign * scorer->current() < best_score) {
    best_points = scorer->points();
    best_score = sign * scorer->current();
  }

  double t0;
  if (config.initial_temperature) {
    t0 = *config.initial_temperature;
  } else {
    // Probe moves estimate the worsening-step scale; exp(-mean/t0) = 1/2.
    long double worsening = 0.0L;
    int count = 0;
    for (int probe = 0; probe < 100; ++probe) {
      const auto draw = detail::draw_exchange(rng, n, d);
      const double delta = sign * (scorer->propose(draw) - scorer->current());
      if (delta > 0.0) {
        worsening += delta;
        ++count;
      }
    }
    t0 = count > 0 ? static_cast<double>(worsening / count) / std::numbers::ln2
                   : std::max(1e-8, 1e-3 * std::abs(scorer->current()));
  }
  result.initial_temperature = t0;

  // Trace values are reported in criterion units; best_score carries the
  // minimization sign internally.
  result.trace.push_back({0, t0, scorer->current(), sign * best_score, true});

  Eigen::Index step_index = 0;
  double temperature = t0;
  for (Eigen::Index t = 0; t < config.temperature_steps; ++t) {
    for (Eigen::Index it = 0; it < config.iterations_per_temperature; ++it) {
      const auto draw = detail::draw_exchange(rng, n, d);
      const double proposed = scorer->propose(draw);
      const double delta = sign * (proposed - scorer->current());
      bool accept = delta <= 0.0;
      if (!accept && rng.next_unit() < std::exp(-delta / temperature)) accept = true;
      if (accept) {
        scorer->commit();
        if (sign * scorer->current() < best_score) {
          best_score = sign * scorer->current();
          best_points = scorer->points();
        }
      }
      ++step_index;
      result.trace.push_back({step_index, temperature, scorer->current(), sign * best_score,
                              accept});
    }
    temperature *= config.cooling_factor;
  }

  result.design.points = std::move(best_points);
  result.design.domain = unit_box(d);
  result.design.kind = DesignKind::Lhs;
  result.best_value = evaluate_criterion(result.design, config.criterion).value;
  return result;
}

/// Greedy augmentation: appends `count` pool points, each maximizing the
/// mean Euclidean distance to all points already in the design. Ties break
/// to the lowest pool index. Selected points leave the pool.
inline Design augment_by_mean_distance(const Design& design, const Design& candidates,
                                       Eigen::Index count) {
  if (candidates.size() < 1) throw ArgumentError("candidate pool is empty");
  if (candidates.dim() != design.dim()) throw ArgumentError("candidate dimension mismatch");
  if (count < 0 || count > candidates.size())
    throw ArgumentError("requested count exceeds the candidate pool");
  const Eigen::Index n0 = design.size();
  const Eigen::Index d = design.dim();

  Design out;
  out.points.resize(n0 + count, d);
  out.points.topRows(n0) = design.points;
  out.domain = design.domain;
  out.kind = DesignKind::Augmented;

  std::vector<char> used(static_cast<std::size_t>(candidates.size()), 0);
  Eigen::VectorXd dist_sums(candidates.size());
  for (Eigen::Index c = 0; c < candidates.size(); ++c) {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n0; ++i)
      sum += (candidates.points.row(c) - design.points.row(i)).norm();
    dist_sums(c) = sum;
  }

  for (Eigen::Index step = 0; step < count; ++step) {
    const double m = static_cast<double>(n0 + step);
    Eigen::Index best = -1;
    double best_mean = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < candidates.size(); ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      const double mean = dist_sums(c) / m;
      if (mean > best_mean) {
        best_mean = mean;
        best = c;
      }
    }
    used[static_cast<std::size_t>(best)] = 1;
    out.points.row(n0 + step) = candidates.points.row(best);
    for (Eigen::Index c = 0; c < candidates.size(); ++c) {
      if (used[static_cast<std::size_t>(c)]) continue;
      dist_sums(c) += (candidates.points.row(c) - candidates.points.row(best)).norm();
    }
  }
  return out;
}

}  // namespace doekit
