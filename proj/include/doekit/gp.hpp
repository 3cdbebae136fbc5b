#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <numbers>
#include <optional>
#include <vector>

#include "doekit/design.hpp"
#include "doekit/detail/nelder_mead.hpp"
#include "doekit/errors.hpp"
#include "doekit/parallel.hpp"
#include "doekit/rng.hpp"

namespace doekit {

/// Anisotropic power-exponential correlation parameters: inverse ranges
/// theta_l >= 0 and exponents p_l in (0, 2].
struct CorrelationParams {
  Eigen::VectorXd theta;
  Eigen::VectorXd p;
};

inline void check_correlation_params(const CorrelationParams& corr) {
  if (corr.theta.size() != corr.p.size())
    throw ArgumentError("theta and p must have matching dimensions");
  for (Eigen::Index l = 0; l < corr.theta.size(); ++l) {
    if (!(corr.theta(l) >= 0.0)) throw ArgumentError("theta must be >= 0");
    if (!(corr.p(l) > 0.0 && corr.p(l) <= 2.0)) throw ArgumentError("p must lie in (0, 2]");
  }
}

/// prod_l exp(-theta_l |x_l - u_l|^{p_l}), in (0, 1].
inline double correlation(const Eigen::VectorXd& x, const Eigen::VectorXd& u,
                          const CorrelationParams& corr) {
  if (x.size() != u.size() || x.size() != corr.theta.size())
    throw ArgumentError("correlation dimension mismatch");
  double exponent = 0.0;
  for (Eigen::Index l = 0; l < x.size(); ++l) {
    const double dist = std::abs(x(l) - u(l));
    if (dist > 0.0) exponent += corr.theta(l) * std::pow(dist, corr.p(l));
  }
  return std::exp(-exponent);
}

struct FitOptions {
  /// Pin every exponent to this value instead of estimating it (e.g. 2 for
  /// the Gaussian kernel, 1 for the exponential one).
  std::optional<double> fixed_exponent;
  /// Restrict the correlation to these coordinates; theta is frozen at 0
  /// elsewhere. Empty means all coordinates.
  std::vector<Eigen::Index> active_dims;
  /// Multi-start count; 0 means 10 * (number of optimized coordinates).
  int starts = 0;
  /// Likelihood evaluation budget per start; 0 picks a dimension-based default.
  int max_evals_per_start = 0;
  /// Maximize the penalized likelihood (inverse-range prior). Plain maximum
  /// likelihood tends to drop active coordinates and over-sharpen the rest
  /// once d exceeds a handful with small samples.
  bool penalized = true;
  double initial_nugget = 1e-8;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Fitted Gaussian-process metamodel. Learning inputs are kept normalized
/// to the unit cube; `domain` maps them back to physical coordinates.
/// Predictions accept physical-domain points.
struct GpModel {
  Eigen::MatrixXd inputs;       // n x d, unit-cube coordinates
  Eigen::VectorXd outputs;      // n
  Box domain;                   // physical bounds of the inputs
  Eigen::VectorXd beta;         // trend coefficients (intercept, then one per coordinate)
  double sigma2 = 0.0;          // process variance
  CorrelationParams corr;
  double nugget = 0.0;
  double log_likelihood = 0.0;
  Eigen::MatrixXd chol_lower;   // L with L L^T = R + nugget I
  Eigen::VectorXd alpha;        // (R + nugget I)^{-1} (y - F beta)

  Eigen::Index size() const { return inputs.rows(); }
  Eigen::Index dim() const { return inputs.cols(); }
};

namespace detail {

inline Eigen::MatrixXd trend_matrix(const Eigen::MatrixXd& inputs) {
  Eigen::MatrixXd f(inputs.rows(), inputs.cols() + 1);
  f.col(0).setOnes();
  f.rightCols(inputs.cols()) = inputs;
  return f;
}

inline Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& inputs,
                                          const CorrelationParams& corr) {
  const Eigen::Index n = inputs.rows();
  Eigen::MatrixXd r(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    r(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double exponent = 0.0;
      for (Eigen::Index l = 0; l < inputs.cols(); ++l) {
        const double dist = std::abs(inputs(i, l) - inputs(j, l));
        if (dist > 0.0) exponent += corr.theta(l) * std::pow(dist, corr.p(l));
      }
      r(i, j) = r(j, i) = std::exp(-exponent);
    }
  }
  return r;
}

struct GlsSolve {
  Eigen::MatrixXd chol_lower;
  Eigen::VectorXd beta;
  Eigen::VectorXd alpha;
  double sigma2 = 0.0;
  double log_likelihood = 0.0;
};

/// Factors R + nugget I, profiles out the trend (GLS) and the process
/// variance, and evaluates the profiled log-likelihood
///   -(n/2) log(sigma2_hat) - (1/2) log det(R + nugget I) - (n/2)(log 2pi + 1).
inline GlsSolve gls_solve(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& outputs,
                          const CorrelationParams& corr, double nugget) {
  const Eigen::Index n = inputs.rows();
  Eigen::MatrixXd c = correlation_matrix(inputs, corr);
  c.diagonal().array() += nugget;
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() != Eigen::Success)
    throw NumericalError("correlation matrix factorization failed");

  GlsSolve solve;
  solve.chol_lower = llt.matrixL();
  const Eigen::MatrixXd f = trend_matrix(inputs);
  const Eigen::MatrixXd f_white = solve.chol_lower.triangularView<Eigen::Lower>().solve(f);
  const Eigen::VectorXd y_white = solve.chol_lower.triangularView<Eigen::Lower>().solve(outputs);
  solve.beta = f_white.colPivHouseholderQr().solve(y_white);
  const Eigen::VectorXd resid_white = y_white - f_white * solve.beta;
  solve.sigma2 = resid_white.squaredNorm() / static_cast<double>(n);

  Eigen::VectorXd half = resid_white;
  solve.chol_lower.transpose().triangularView<Eigen::Upper>().solveInPlace(half);
  solve.alpha = half;

  const double log_det = 2.0 * solve.chol_lower.diagonal().array().log().sum();
  const double floored_sigma2 = std::max(solve.sigma2, 1e-300);
  solve.log_likelihood = -0.5 * static_cast<double>(n) * std::log(floored_sigma2) -
                         0.5 * log_det -
                         0.5 * static_cast<double>(n) * (std::log(2.0 * std::numbers::pi) + 1.0);
  return solve;
}

/// Log prior of the fit's penalized likelihood, three parts.
///
/// Inverse ranges beta_l = theta_l^(1/p_l) carry a jointly-robust-form term
/// a*log(S) - b*S with S = n^(-1/d) sum_l beta_l, a = 0.2 and
/// b = n^(-1/d) (a + d): S -> 0 is the all-ones correlation corner, large S
/// the no-correlation corner, and both are where small-sample likelihood
/// maximization degenerates (it drops active coordinates and over-sharpens
/// the rest once d exceeds a handful).
///
/// Exponents carry a smoothness term -sum_l (2 - p_l)^2: deterministic
/// simulator output is modeled as at least exponential-kernel smooth, and
/// rough exponents act as a likelihood sink at small n.
///
/// Log ranges carry an exchangeability term -w sum_l (log theta_l - mean)^2:
/// coordinates are a priori interchangeable, so anisotropy has to be earned
/// from the data rather than granted to whichever likelihood ridge the
/// optimizer hits first.
inline double correlation_log_prior(const CorrelationParams& corr, Eigen::Index n,
                                    Eigen::Index active_count) {
  constexpr double a = 0.2;
  constexpr double spread_weight = 0.5;
  const double scale =
      std::pow(static_cast<double>(n), -1.0 / static_cast<double>(active_count));
  double sum = 0.0;
  double roughness = 0.0;
  double log_sum = 0.0;
  int live = 0;
  for (Eigen::Index l = 0; l < corr.theta.size(); ++l) {
    if (corr.theta(l) <= 0.0) continue;
    sum += std::pow(corr.theta(l), 1.0 / corr.p(l));
    roughness += (2.0 - corr.p(l)) * (2.0 - corr.p(l));
    log_sum += std::log(corr.theta(l));
    ++live;
  }
  const double s = scale * sum;
  const double b = scale * (a + static_cast<double>(active_count));
  if (s <= 0.0 || live == 0) return -std::numeric_limits<double>::infinity();
  const double log_mean = log_sum / live;
  double spread = 0.0;
  for (Eigen::Index l = 0; l < corr.theta.size(); ++l) {
    if (corr.theta(l) <= 0.0) continue;
    const double dev = std::log(corr.theta(l)) - log_mean;
    spread += dev * dev;
  }
  return a * std::log(s) - b * s - roughness - spread_weight * spread;
}

inline void check_learning_data(const Eigen::MatrixXd& inputs, const Eigen::VectorXd& outputs) {
  const Eigen::Index n = inputs.rows();
  const Eigen::Index d = inputs.cols();
  if (outputs.size() != n) throw ArgumentError("outputs length must match the design size");
  if (n <= d + 1) throw DataError("need more than d + 1 points to identify the linear trend");
  if (!outputs.allFinite()) throw DataError("outputs must be finite");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (inputs.row(i) == inputs.row(j)) throw DataError("duplicate design points");
}

}  // namespace detail

/// Profiled log-likelihood of the correlation parameters on a learning set;
/// the trend and the process variance are concentrated out in closed form.
inline double log_likelihood(const Design& design, const Eigen::VectorXd& outputs,
                             const CorrelationParams& corr, double nugget) {
  check_correlation_params(corr);
  if (corr.theta.size() != design.dim()) throw ArgumentError("correlation dimension mismatch");
  const Eigen::MatrixXd inputs = unit_coordinates(design);
  detail::check_learning_data(inputs, outputs);
  return detail::gls_solve(inputs, outputs, corr, nugget).log_likelihood;
}

/// Builds the model at the given correlation parameters: factorization,
/// GLS trend, profiled variance. The nugget escalates by decades from
/// `initial_nugget` until the factorization succeeds (at most 1e-2).
inline GpModel build_gp_model(const Design& design, const Eigen::VectorXd& outputs,
                              const CorrelationParams& corr, double initial_nugget = 1e-8) {
  check_correlation_params(corr);
  if (corr.theta.size() != design.dim()) throw ArgumentError("correlation dimension mismatch");
  check_box(design.domain);
  GpModel model;
  model.inputs = unit_coordinates(design);
  detail::check_learning_data(model.inputs, outputs);
  model.outputs = outputs;
  model.domain = design.domain;
  model.corr = corr;

  double nugget = std::max(initial_nugget, 0.0);
  for (;;) {
    try {
      const detail::GlsSolve solve = detail::gls_solve(model.inputs, outputs, corr, nugget);
      model.nugget = nugget;
      model.beta = solve.beta;
      model.sigma2 = solve.sigma2;
      model.log_likelihood = solve.log_likelihood;
      model.chol_lower = solve.chol_lower;
      model.alpha = solve.alpha;
      return model;
    } catch (const NumericalError&) {
      if (nugget >= 1e-2) throw;
      nugget = nugget <= 0.0 ? 1e-12 : nugget * 10.0;
    }
  }
}

/// Maximum-likelihood fit: multi-start downhill simplex over (log theta, p),
/// merged by best likelihood with ties to the lowest start index.
inline GpModel fit_gp(const Design& design, const Eigen::VectorXd& outputs,
                      const FitOptions& options = {}) {
  const Eigen::Index d = design.dim();
  check_box(design.domain);
  {
    const Eigen::MatrixXd inputs = unit_coordinates(design);
    detail::check_learning_data(inputs, outputs);
  }
  if (options.fixed_exponent && !(*options.fixed_exponent > 0.0 && *options.fixed_exponent <= 2.0))
    throw ArgumentError("fixed exponent must lie in (0, 2]");

  std::vector<Eigen::Index> active = options.active_dims;
  if (active.empty()) {
    active.resize(static_cast<std::size_t>(d));
    std::iota(active.begin(), active.end(), Eigen::Index{0});
  }
  for (Eigen::Index l : active)
    if (l < 0 || l >= d) throw ArgumentError("active dimension index out of range");

  const auto n_active = static_cast<Eigen::Index>(active.size());
  const bool estimate_p = !options.fixed_exponent.has_value();
  const Eigen::Index n_vars = estimate_p ? 2 * n_active : n_active;

  const double log_theta_lo = std::log(1e-3);
  const double log_theta_hi = std::log(1e3);
  Eigen::VectorXd lower(n_vars), upper(n_vars);
  lower.head(n_active).setConstant(log_theta_lo);
  upper.head(n_active).setConstant(log_theta_hi);
  if (estimate_p) {
    lower.tail(n_active).setConstant(1.0);
    upper.tail(n_active).setConstant(2.0);
  }

  const auto params_from = [&](const Eigen::VectorXd& vars) {
    CorrelationParams corr;
    corr.theta = Eigen::VectorXd::Zero(d);
    corr.p = Eigen::VectorXd::Constant(d, options.fixed_exponent.value_or(2.0));
    for (Eigen::Index a = 0; a < n_active; ++a) {
      corr.theta(active[static_cast<std::size_t>(a)]) = std::exp(vars(a));
      if (estimate_p) corr.p(active[static_cast<std::size_t>(a)]) = vars(n_active + a);
    }
    return corr;
  };

  const Design unit_design{unit_coordinates(design), unit_box(d), design.kind};
  const Eigen::Index n = design.size();
  const auto objective = [&](const Eigen::VectorXd& vars) {
    try {
      const CorrelationParams corr = params_from(vars);
      double value = detail::gls_solve(unit_design.points, outputs, corr,
                                       options.initial_nugget)
                         .log_likelihood;
      if (options.penalized) value += detail::correlation_log_prior(corr, n, n_active);
      return -value;
    } catch (const NumericalError&) {
      return std::numeric_limits<double>::infinity();
    }
  };

  const int starts = options.starts > 0 ? options.starts : static_cast<int>(10 * n_active);
  detail::NelderMeadOptions nm_options;
  nm_options.max_evals = options.max_evals_per_start > 0
                             ? options.max_evals_per_start
                             : static_cast<int>(60 * n_vars + 120);

  // Start points: a few fixed isotropic patterns spanning the smooth-to-rough
  // and long-to-short range corners of the box, then a Latin hypercube over
  // the full search box.
  std::vector<Eigen::VectorXd> start_points;
  for (const double theta0 : {0.01, 0.1, 1.0, 10.0})
    for (const double p0 : {1.5, 2.0}) {
      Eigen::VectorXd x0(n_vars);
      x0.head(n_active).setConstant(std::log(theta0));
      if (estimate_p) x0.tail(n_active).setConstant(p0);
      start_points.push_back(std::move(x0));
      if (static_cast<int>(start_points.size()) >= starts) break;
    }
  Rng rng = Rng(options.seed).split("gp-fit-starts");
  if (static_cast<int>(start_points.size()) < starts) {
    const auto sampled = starts - static_cast<int>(start_points.size());
    const Design start_lhs = generate_lhs(sampled, n_vars, rng);
    for (int s = 0; s < sampled; ++s) {
      Eigen::VectorXd x0(n_vars);
      for (Eigen::Index v = 0; v < n_vars; ++v)
        x0(v) = lower(v) + start_lhs.points(s, v) * (upper(v) - lower(v));
      start_points.push_back(std::move(x0));
    }
  }
  std::vector<detail::NelderMeadResult> results(start_points.size());
  parallel_for_index(start_points.size(), options.threads, [&](std::size_t s) {
    results[s] = detail::nelder_mead(objective, start_points[s], lower, upper, nm_options);
  });

  std::size_t best = 0;
  for (std::size_t s = 1; s < results.size(); ++s)
    if (results[s].value < results[best].value) best = s;
  if (!std::isfinite(results[best].value))
    throw NumericalError("likelihood optimization failed for every start");

  return build_gp_model(design, outputs, params_from(results[best].x), options.initial_nugget);
}

/// Trend-plus-correction predictor evaluated through the stored factorization.
/// `x` is a physical-domain point.
inline double predict_mean(const GpModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.dim()) throw ArgumentError("prediction point dimension mismatch");
  Eigen::VectorXd u(model.dim());
  for (Eigen::Index l = 0; l < model.dim(); ++l) {
    const Interval& iv = model.domain[static_cast<std::size_t>(l)];
    u(l) = (x(l) - iv.lo) / (iv.hi - iv.lo);
  }
  double mean = model.beta(0);
  for (Eigen::Index l = 0; l < model.dim(); ++l) mean += model.beta(l + 1) * u(l);
  for (Eigen::Index i = 0; i < model.size(); ++i) {
    double exponent = 0.0;
    for (Eigen::Index l = 0; l < model.dim(); ++l) {
      const double dist = std::abs(u(l) - model.inputs(i, l));
      if (dist > 0.0) exponent += model.corr.theta(l) * std::pow(dist, model.corr.p(l));
    }
    mean += std::exp(-exponent) * model.alpha(i);
  }
  return mean;
}

/// Kriging variance (predictor mean squared error), clamped below at zero.
inline double predict_variance(const GpModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.dim()) throw ArgumentError("prediction point dimension mismatch");
  Eigen::VectorXd u(model.dim());
  for (Eigen::Index l = 0; l < model.dim(); ++l) {
    const Interval& iv = model.domain[static_cast<std::size_t>(l)];
    u(l) = (x(l) - iv.lo) / (iv.hi - iv.lo);
  }
  Eigen::VectorXd r(model.size());
  for (Eigen::Index i = 0; i < model.size(); ++i) {
    double exponent = 0.0;
    for (Eigen::Index l = 0; l < model.dim(); ++l) {
      const double dist = std::abs(u(l) - model.inputs(i, l));
      if (dist > 0.0) exponent += model.corr.theta(l) * std::pow(dist, model.corr.p(l));
    }
    r(i) = std::exp(-exponent);
  }
  model.chol_lower.triangularView<Eigen::Lower>().solveInPlace(r);
  return std::max(0.0, model.sigma2 * (1.0 - r.squaredNorm()));
}

/// Physical-domain learning point i (inputs are stored normalized).
inline Eigen::VectorXd learning_point(const GpModel& model, Eigen::Index i) {
  Eigen::VectorXd x(model.dim());
  for (Eigen::Index l = 0; l < model.dim(); ++l) {
    const Interval& iv = model.domain[static_cast<std::size_t>(l)];
    x(l) = iv.lo + model.inputs(i, l) * (iv.hi - iv.lo);
  }
  return x;
}

}  // namespace doekit
