#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "doekit/criteria.hpp"
#include "doekit/design.hpp"

using namespace doekit;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

// Deliberately naive transcriptions of the closed-form discrepancies,
// kept independent of the library implementation.
// Extended-precision accumulation: the centered value is a small difference
// of O(1) terms and plain double sums lose the comparison budget.
double naive_centered_l2(const Eigen::MatrixXd& u) {
  const auto n = u.rows();
  const auto d = u.cols();
  long double single = 0.0L;
  for (Eigen::Index i = 0; i < n; ++i) {
    double prod = 1.0;
    for (Eigen::Index k = 0; k < d; ++k)
      prod *= 1.0 + 0.5 * std::abs(u(i, k) - 0.5) -
              0.5 * std::abs(u(i, k) - 0.5) * std::abs(u(i, k) - 0.5);
    single += prod;
  }
  long double cross = 0.0L;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double prod = 1.0;
      for (Eigen::Index k = 0; k < d; ++k)
        prod *= 1.0 + 0.5 * std::abs(u(i, k) - 0.5) + 0.5 * std::abs(u(j, k) - 0.5) -
                0.5 * std::abs(u(i, k) - u(j, k));
      cross += prod;
    }
  const auto dn = static_cast<long double>(n);
  return static_cast<double>(std::pow(13.0L / 12.0L, static_cast<long double>(d)) -
                             2.0L / dn * single + cross / (dn * dn));
}

double naive_wraparound_l2(const Eigen::MatrixXd& u) {
  const auto n = u.rows();
  const auto d = u.cols();
  long double cross = 0.0L;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      double prod = 1.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        const double t = std::abs(u(i, k) - u(j, k));
        prod *= 1.5 - t * (1.0 - t);
      }
      cross += prod;
    }
  const auto dn = static_cast<long double>(n);
  return static_cast<double>(std::pow(4.0L / 3.0L, static_cast<long double>(d)) +
                             cross / (dn * dn));
}

Design design_from(std::initializer_list<std::initializer_list<double>> rows) {
  Design design;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto d = static_cast<Eigen::Index>(rows.begin()->size());
  design.points.resize(n, d);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    Eigen::Index k = 0;
    for (double v : row) design.points(i, k++) = v;
    ++i;
  }
  design.domain = unit_box(d);
  return design;
}

}  // namespace

TEST_CASE("maximin hand values") {
  REQUIRE_THAT(maximin_distance(design_from({{0.0, 0.0}, {1.0, 1.0}})).value,
               WithinAbs(std::sqrt(2.0), 1e-15));
  REQUIRE(maximin_distance(design_from({{0.3, 0.4}, {0.3, 0.4}, {0.9, 0.1}})).value == 0.0);
  REQUIRE_THAT(
      maximin_distance(design_from({{0.0, 0.0}, {0.0, 1.0}, {1.0, 0.0}, {1.0, 1.0}})).value,
      WithinAbs(1.0, 1e-15));
}

TEST_CASE("maximin requires two points and unit coordinates") {
  REQUIRE_THROWS_AS(maximin_distance(design_from({{0.5}})), ArgumentError);
  REQUIRE_THROWS_AS(maximin_distance(design_from({{-0.1}, {0.5}})), ArgumentError);
}

TEST_CASE("centered l2 hand values") {
  // Single point at 1/2 in one dimension: 13/12 - 2 + 1 = 1/12.
  REQUIRE_THAT(centered_l2(design_from({{0.5}})).value, WithinAbs(1.0 / 12.0, 1e-15));
  // Single point at 0: 13/12 - 2*(9/8) + 3/2 = 1/3.
  REQUIRE_THAT(centered_l2(design_from({{0.0}})).value, WithinAbs(1.0 / 3.0, 1e-15));
}

TEST_CASE("wraparound l2 hand values") {
  REQUIRE_THAT(wraparound_l2(design_from({{0.25}})).value, WithinAbs(17.0 / 6.0, 1e-15));
  REQUIRE_THAT(wraparound_l2(design_from({{0.0}, {0.5}})).value, WithinAbs(65.0 / 24.0, 1e-15));
}

TEST_CASE("discrepancies match the naive reference on random designs") {
  Rng rng(2718);
  for (int rep = 0; rep < 12; ++rep) {
    const auto n = static_cast<Eigen::Index>(2 + rng.next_below(199));
    const auto d = static_cast<Eigen::Index>(1 + rng.next_below(10));
    Rng stream = rng.split(static_cast<std::uint64_t>(rep));
    const Design design = generate_srs(n, d, stream);
    REQUIRE_THAT(centered_l2(design).value, WithinRel(naive_centered_l2(design.points), 1e-12));
    REQUIRE_THAT(wraparound_l2(design).value,
                 WithinRel(naive_wraparound_l2(design.points), 1e-12));
  }
}

TEST_CASE("criteria are invariant under row and column permutations") {
  Rng rng(31);
  const Design design = generate_srs(20, 4, rng);
  Design rows = design;
  rows.points.row(0).swap(rows.points.row(13));
  rows.points.row(5).swap(rows.points.row(19));
  Design cols = design;
  cols.points.col(0).swap(cols.points.col(3));

  for (CriterionKind kind :
       {CriterionKind::Maximin, CriterionKind::CenteredL2, CriterionKind::WrapAroundL2}) {
    const double base = evaluate_criterion(design, kind).value;
    REQUIRE_THAT(evaluate_criterion(rows, kind).value, WithinRel(base, 1e-13));
    REQUIRE_THAT(evaluate_criterion(cols, kind).value, WithinRel(base, 1e-13));
  }
}

TEST_CASE("centered l2 is invariant under coordinate reflection") {
  Rng rng(32);
  const Design design = generate_srs(30, 3, rng);
  Design reflected = design;
  reflected.points = 1.0 - reflected.points.array();
  REQUIRE_THAT(centered_l2(reflected).value, WithinRel(centered_l2(design).value, 1e-12));
}

TEST_CASE("wraparound l2 is invariant under wrapped shifts") {
  Rng rng(33);
  const Design design = generate_srs(25, 3, rng);
  Design shifted = design;
  const double c = 0.37;
  for (Eigen::Index i = 0; i < shifted.size(); ++i) {
    double v = shifted.points(i, 1) + c;
    if (v >= 1.0) v -= 1.0;
    shifted.points(i, 1) = v;
  }
  REQUIRE_THAT(wraparound_l2(shifted).value, WithinRel(wraparound_l2(design).value, 1e-12));
}

TEST_CASE("criteria reject coordinates outside the unit cube") {
  REQUIRE_THROWS_AS(centered_l2(design_from({{1.2}})), ArgumentError);
  REQUIRE_THROWS_AS(wraparound_l2(design_from({{-0.2}})), ArgumentError);
}

TEST_CASE("add-point evaluation equals full recomputation") {
  Rng rng(55);
  for (CriterionKind kind : {CriterionKind::CenteredL2, CriterionKind::WrapAroundL2}) {
    for (int rep = 0; rep < 20; ++rep) {
      Rng stream = rng.split(static_cast<std::uint64_t>(rep));
      const auto n = static_cast<Eigen::Index>(2 + stream.next_below(40));
      const auto d = static_cast<Eigen::Index>(1 + stream.next_below(6));
      const Design design = generate_srs(n, d, stream);
      Eigen::VectorXd candidate(d);
      for (Eigen::Index k = 0; k < d; ++k) candidate(k) = stream.next_unit();

      Design grown = design;
      grown.points.conservativeResize(n + 1, Eigen::NoChange);
      grown.points.row(n) = candidate.transpose();

      const double incremental = discrepancy_with_added_point(design, candidate, kind);
      const double full = evaluate_criterion(grown, kind).value;
      REQUIRE_THAT(incremental, WithinAbs(full, 1e-10));
    }
  }
}

TEST_CASE("adding an existing design point matches the duplicated design") {
  Rng rng(56);
  const Design design = generate_srs(8, 3, rng);
  const Eigen::VectorXd candidate = design.points.row(2).transpose();
  Design doubled = design;
  doubled.points.conservativeResize(9, Eigen::NoChange);
  doubled.points.row(8) = candidate.transpose();
  REQUIRE_THAT(discrepancy_with_added_point(design, candidate, CriterionKind::CenteredL2),
               WithinAbs(centered_l2(doubled).value, 1e-12));
}

TEST_CASE("cached sums survive sequential additions") {
  Rng rng(57);
  const Design design = generate_srs(10, 2, rng);
  AddPointEvaluator evaluator(design, CriterionKind::CenteredL2);
  Design current = design;
  for (int step = 0; step < 5; ++step) {
    Eigen::VectorXd candidate(2);
    candidate << rng.next_unit(), rng.next_unit();
    evaluator.add(candidate);
    current.points.conservativeResize(current.size() + 1, Eigen::NoChange);
    current.points.row(current.size() - 1) = candidate.transpose();
    REQUIRE_THAT(evaluator.current(), WithinAbs(centered_l2(current).value, 1e-10));
  }
}

TEST_CASE("add-point evaluation rejects bad candidates") {
  Rng rng(58);
  const Design design = generate_srs(5, 2, rng);
  AddPointEvaluator evaluator(design, CriterionKind::WrapAroundL2);
  Eigen::VectorXd wrong_dim(3);
  wrong_dim << 0.1, 0.2, 0.3;
  REQUIRE_THROWS_AS(evaluator.with_added(wrong_dim), ArgumentError);
  Eigen::VectorXd outside(2);
  outside << 0.1, 1.2;
  REQUIRE_THROWS_AS(evaluator.with_added(outside), ArgumentError);
  REQUIRE_THROWS_AS(AddPointEvaluator(design, CriterionKind::Maximin), ArgumentError);
}
