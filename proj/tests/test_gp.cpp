#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <filesystem>

#include "doekit/gp.hpp"
#include "doekit/io.hpp"

using namespace doekit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Dense reference: explicit inverse, normal-equation GLS, direct formulas.
struct DenseGp {
  Eigen::MatrixXd inputs;
  Eigen::VectorXd outputs;
  CorrelationParams corr;
  double nugget;
  Eigen::MatrixXd c_inv;
  Eigen::VectorXd beta;
  double sigma2;
  double log_lik;

  DenseGp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const CorrelationParams& cp,
          double nu)
      : inputs(x), outputs(y), corr(cp), nugget(nu) {
    const auto n = x.rows();
    Eigen::MatrixXd c(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        double e = 0.0;
        for (Eigen::Index l = 0; l < x.cols(); ++l)
          e += cp.theta(l) * std::pow(std::abs(x(i, l) - x(j, l)), cp.p(l));
        c(i, j) = std::exp(-e);
      }
    c.diagonal().array() += nu;
    c_inv = c.inverse();
    Eigen::MatrixXd f(n, x.cols() + 1);
    f.col(0).setOnes();
    f.rightCols(x.cols()) = x;
    beta = (f.transpose() * c_inv * f).inverse() * (f.transpose() * c_inv * y);
    const Eigen::VectorXd resid = y - f * beta;
    sigma2 = (resid.transpose() * c_inv * resid)(0) / static_cast<double>(n);
    log_lik = -0.5 * static_cast<double>(n) * std::log(sigma2) - 0.5 * std::log(c.determinant()) -
              0.5 * static_cast<double>(n) * (std::log(2.0 * std::numbers::pi) + 1.0);
  }

  double mean(const Eigen::VectorXd& u) const {
    Eigen::VectorXd r(inputs.rows());
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
      double e = 0.0;
      for (Eigen::Index l = 0; l < inputs.cols(); ++l)
        e += corr.theta(l) * std::pow(std::abs(u(l) - inputs(i, l)), corr.p(l));
      r(i) = std::exp(-e);
    }
    Eigen::VectorXd f(inputs.cols() + 1);
    f(0) = 1.0;
    f.tail(inputs.cols()) = u;
    Eigen::MatrixXd fm(inputs.rows(), inputs.cols() + 1);
    fm.col(0).setOnes();
    fm.rightCols(inputs.cols()) = inputs;
    return f.dot(beta) + r.dot(c_inv * (outputs - fm * beta));
  }

  double variance(const Eigen::VectorXd& u) const {
    Eigen::VectorXd r(inputs.rows());
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
      double e = 0.0;
      for (Eigen::Index l = 0; l < inputs.cols(); ++l)
        e += corr.theta(l) * std::pow(std::abs(u(l) - inputs(i, l)), corr.p(l));
      r(i) = std::exp(-e);
    }
    return sigma2 * (1.0 - (r.transpose() * c_inv * r)(0));
  }
};

Design unit_design_from(const Eigen::MatrixXd& pts) {
  Design design;
  design.points = pts;
  design.domain = unit_box(pts.cols());
  return design;
}

}  // namespace

TEST_CASE("correlation hand values") {
  CorrelationParams corr;
  corr.theta = Eigen::VectorXd::Constant(1, 1.0);
  corr.p = Eigen::VectorXd::Constant(1, 1.0);
  Eigen::VectorXd x(1), u(1);
  x << 0.25;
  u << 0.25;
  REQUIRE(correlation(x, u, corr) == 1.0);
  u << 1.25;
  REQUIRE_THAT(correlation(x, u, corr), WithinRel(std::exp(-1.0), 1e-14));

  CorrelationParams flat;
  flat.theta = Eigen::VectorXd::Zero(3);
  flat.p = Eigen::VectorXd::Constant(3, 1.5);
  Eigen::VectorXd a = Eigen::VectorXd::Random(3), b = Eigen::VectorXd::Random(3);
  REQUIRE(correlation(a, b, flat) == 1.0);

  Eigen::VectorXd wrong(2);
  wrong << 0.0, 0.0;
  REQUIRE_THROWS_AS(correlation(x, wrong, corr), ArgumentError);
}

TEST_CASE("factored predictor matches the dense solve") {
  Rng rng(101);
  const Design design = generate_lhs(5, 2, rng);
  Eigen::VectorXd y(5);
  y << 1.2, -0.4, 0.9, 2.5, 0.1;
  CorrelationParams corr;
  corr.theta = Eigen::VectorXd(2);
  corr.theta << 2.0, 1.0;
  corr.p = Eigen::VectorXd(2);
  corr.p << 1.5, 2.0;

  const GpModel model = build_gp_model(design, y, corr, 1e-8);
  const DenseGp dense(design.points, y, corr, model.nugget);

  REQUIRE_THAT(model.sigma2, WithinRel(dense.sigma2, 1e-8));
  REQUIRE_THAT(model.log_likelihood, WithinRel(dense.log_lik, 1e-8));
  for (Eigen::Index c = 0; c < model.beta.size(); ++c)
    REQUIRE_THAT(model.beta(c), WithinAbs(dense.beta(c), 1e-8));

  Rng probe(102);
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXd x(2);
    x << probe.next_unit(), probe.next_unit();
    REQUIRE_THAT(predict_mean(model, x), WithinAbs(dense.mean(x), 1e-8));
    REQUIRE_THAT(predict_variance(model, x), WithinAbs(std::max(0.0, dense.variance(x)), 1e-8));
  }
}

TEST_CASE("profiled log likelihood matches a dense toy computation") {
  Eigen::MatrixXd pts(3, 1);
  pts << 0.1, 0.5, 0.9;
  Eigen::VectorXd y(3);
  y << 0.3, 1.0, -0.7;
  CorrelationParams corr;
  corr.theta = Eigen::VectorXd::Constant(1, 3.0);
  corr.p = Eigen::VectorXd::Constant(1, 1.0);
  const DenseGp dense(pts, y, corr, 1e-10);
  REQUIRE_THAT(log_likelihood(unit_design_from(pts), y, corr, 1e-10),
               WithinAbs(dense.log_lik, 1e-10));
}

TEST_CASE("likelihood absorbs output shifts through the intercept") {
  Rng rng(103);
  const Design design = generate_lhs(10, 2, rng);
  Eigen::VectorXd y(10);
  for (Eigen::Index i = 0; i < 10; ++i)
    y(i) = std::sin(5.0 * design.points(i, 0)) + design.points(i, 1);
  CorrelationParams corr;
  corr.theta = Eigen::VectorXd::Constant(2, 4.0);
  corr.p = Eigen::VectorXd::Constant(2, 1.8);

  const GpModel base = build_gp_model(design, y, corr, 1e-9);
  const GpModel shifted = build_gp_model(design, y.array() + 17.5, corr, 1e-9);
  REQUIRE_THAT(shifted.sigma2, WithinAbs(base.sigma2, 1e-10));
  REQUIRE_THAT(shifted.log_likelihood, WithinAbs(base.log_likelihood, 1e-9));
}

TEST_CASE("likelihood shifts by -n log(a) under output scaling") {
  Rng rng(104);
  const Design design = generate_lhs(8, 1, rng);
  Eigen::VectorXd y(8);
  for (Eigen::Index i = 0; i < 8; ++i) y(i) = std::cos(7.0 * design.points(i, 0));
  CorrelationParams corr;
  corr.theta = Eigen::VectorXd::Constant(1, 5.0);
  corr.p = Eigen::VectorXd::Constant(1, 2.0);
  const double a = 3.5;
  const double base = log_likelihood(design, y, corr, 1e-9);
  const double scaled = log_likelihood(design, y * a, corr, 1e-9);
  REQUIRE_THAT(scaled, WithinAbs(base - 8.0 * std::log(a), 1e-8));
  const GpModel mb = build_gp_model(design, y, corr, 1e-9);
  const GpModel ms = build_gp_model(design, y * a, corr, 1e-9);
  REQUIRE_THAT(ms.sigma2, WithinRel(mb.sigma2 * a * a, 1e-10));
}

TEST_CASE("kriging interpolates the learning set") {
  Rng rng(105);
  const Design design = generate_lhs(12, 2, rng);
  Eigen::VectorXd y(12);
  for (Eigen::Index i = 0; i < 12; ++i)
    y(i) = 2.0 * design.points(i, 0) - std::sin(3.0 * design.points(i, 1));
  CorrelationParams corr;
  corr.theta = Eigen::VectorXd::Constant(2, 6.0);
  corr.p = Eigen::VectorXd::Constant(2, 2.0);
  const GpModel model = build_gp_model(design, y, corr, 1e-8);
  const double tol = std::max(1e-6, 10.0 * model.nugget * y.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < 12; ++i) {
    const Eigen::VectorXd x = learning_point(model, i);
    REQUIRE_THAT(predict_mean(model, x), WithinAbs(y(i), tol));
    REQUIRE(predict_variance(model, x) <= model.sigma2 * (10.0 * model.nugget + 1e-8));
  }
}

TEST_CASE("variance approaches the process variance far from the data") {
  Eigen::MatrixXd pts(4, 1);
  pts << 0.01, 0.03, 0.05, 0.08;
  Eigen::VectorXd y(4);
  y << 0.4, 0.9, -0.2, 0.5;
  CorrelationParams corr;
  corr.theta = Eigen::VectorXd::Constant(1, 500.0);
  corr.p = Eigen::VectorXd::Constant(1, 2.0);
  const GpModel model = build_gp_model(unit_design_from(pts), y, corr, 1e-10);
  Eigen::VectorXd far(1);
  far << 1.0;
  REQUIRE_THAT(predict_variance(model, far), WithinRel(model.sigma2, 1e-6));
}

TEST_CASE("constant outputs collapse to the intercept") {
  Rng rng(106);
  const Design design = generate_lhs(9, 2, rng);
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(9, 4.25);
  FitOptions options;
  options.starts = 4;
  options.seed = 1;
  const GpModel model = fit_gp(design, y, options);
  REQUIRE_THAT(model.beta(0), WithinAbs(4.25, 1e-8));
  REQUIRE(model.sigma2 <= 1e-8 * 4.25 * 4.25);
  Eigen::VectorXd x(2);
  x << 0.123, 0.887;
  REQUIRE_THAT(predict_mean(model, x), WithinAbs(4.25, 1e-8));
}

TEST_CASE("fit recovers a linear response") {
  Rng rng(107);
  const Design design = generate_lhs(14, 2, rng);
  Eigen::VectorXd y(14);
  for (Eigen::Index i = 0; i < 14; ++i) y(i) = 2.0 + 3.0 * design.points(i, 0);
  FitOptions options;
  options.starts = 6;
  options.seed = 2;
  const GpModel model = fit_gp(design, y, options);
  Rng probe(108);
  for (int t = 0; t < 25; ++t) {
    Eigen::VectorXd x(2);
    x << probe.next_unit(), probe.next_unit();
    const double truth = 2.0 + 3.0 * x(0);
    REQUIRE_THAT(predict_mean(model, x), WithinAbs(truth, 1e-3 * std::abs(truth)));
  }
}

TEST_CASE("fit is reproducible and invariant to row permutation") {
  Rng rng(109);
  const Design design = generate_lhs(10, 2, rng);
  Eigen::VectorXd y(10);
  for (Eigen::Index i = 0; i < 10; ++i)
    y(i) = std::sin(4.0 * design.points(i, 0)) * std::cos(2.0 * design.points(i, 1));
  FitOptions options;
  options.starts = 8;
  options.seed = 3;
  const GpModel a = fit_gp(design, y, options);
  const GpModel b = fit_gp(design, y, options);
  REQUIRE(a.corr.theta == b.corr.theta);
  REQUIRE(a.corr.p == b.corr.p);

  Design permuted = design;
  Eigen::VectorXd y_permuted = y;
  const std::vector<Eigen::Index> order = {7, 2, 9, 0, 4, 1, 8, 3, 6, 5};
  for (Eigen::Index i = 0; i < 10; ++i) {
    permuted.points.row(i) = design.points.row(order[static_cast<std::size_t>(i)]);
    y_permuted(i) = y(order[static_cast<std::size_t>(i)]);
  }
  const GpModel c = fit_gp(permuted, y_permuted, options);
  Rng probe(110);
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXd x(2);
    x << probe.next_unit(), probe.next_unit();
    REQUIRE_THAT(predict_mean(c, x), WithinAbs(predict_mean(a, x), 1e-6));
  }
}

TEST_CASE("fit validates its inputs") {
  Rng rng(111);
  Design design = generate_lhs(6, 2, rng);
  Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(6, 0.0, 1.0);

  Design dup = design;
  dup.points.row(3) = dup.points.row(1);
  REQUIRE_THROWS_AS(fit_gp(dup, y, {}), DataError);

  const Design tiny = generate_lhs(3, 2, rng);
  REQUIRE_THROWS_AS(fit_gp(tiny, Eigen::VectorXd::Zero(3), {}), DataError);

  Eigen::VectorXd bad = y;
  bad(0) = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(fit_gp(design, bad, {}), DataError);

  REQUIRE_THROWS_AS(fit_gp(design, Eigen::VectorXd::Zero(5), {}), ArgumentError);
}

TEST_CASE("pinned exponents and restricted dimensions are honored") {
  Rng rng(112);
  const Design design = generate_lhs(12, 3, rng);
  Eigen::VectorXd y(12);
  for (Eigen::Index i = 0; i < 12; ++i)
    y(i) = std::sin(6.0 * design.points(i, 0)) + 0.1 * design.points(i, 2);
  FitOptions options;
  options.starts = 4;
  options.seed = 4;
  options.fixed_exponent = 2.0;
  options.active_dims = {0, 2};
  const GpModel model = fit_gp(design, y, options);
  REQUIRE(model.corr.p(0) == 2.0);
  REQUIRE(model.corr.p(1) == 2.0);
  REQUIRE(model.corr.theta(1) == 0.0);
  REQUIRE(model.corr.theta(0) > 0.0);
}

TEST_CASE("model json round-trip rebuilds an equivalent predictor") {
  Rng rng(113);
  const Design unit = generate_lhs(10, 2, rng);
  const Design design = scale_to_domain(unit, {{-1.0, 1.0}, {0.0, 2.0}});
  Eigen::VectorXd y(10);
  for (Eigen::Index i = 0; i < 10; ++i)
    y(i) = design.points(i, 0) * design.points(i, 0) + std::sin(design.points(i, 1));
  FitOptions options;
  options.starts = 4;
  options.max_evals_per_start = 150;
  options.seed = 9;
  const GpModel model = fit_gp(design, y, options);

  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "doekit-model-roundtrip.json";
  doekit::io::write_model_json(path, model);
  const GpModel loaded = doekit::io::read_model_json(path);
  fs::remove(path);

  REQUIRE(loaded.corr.theta == model.corr.theta);
  REQUIRE(loaded.nugget == model.nugget);
  Rng probe(114);
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd x(2);
    x << 2.0 * probe.next_unit() - 1.0, 2.0 * probe.next_unit();
    REQUIRE_THAT(predict_mean(loaded, x), WithinAbs(predict_mean(model, x), 1e-10));
    REQUIRE_THAT(predict_variance(loaded, x), WithinAbs(predict_variance(model, x), 1e-10));
  }
}
