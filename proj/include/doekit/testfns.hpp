#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "doekit/design.hpp"
#include "doekit/errors.hpp"

namespace doekit {

/// Analytic benchmark function with its domain; evaluation rejects points
/// outside the box (up to a few ulps of slack for scaled endpoints).
struct TestFunction {
  std::string name;
  Eigen::Index dimension = 0;
  Box bounds;
  double (*evaluator)(const Eigen::VectorXd&) = nullptr;

  double operator()(const Eigen::VectorXd& x) const {
    if (x.size() != dimension)
      throw ArgumentError(name + " expects dimension " + std::to_string(dimension));
    for (Eigen::Index l = 0; l < dimension; ++l) {
      const Interval& iv = bounds[static_cast<std::size_t>(l)];
      const double slack =
          4.0 * std::numeric_limits<double>::epsilon() *
          std::max({std::abs(iv.lo), std::abs(iv.hi), iv.hi - iv.lo});
      if (x(l) < iv.lo - slack || x(l) > iv.hi + slack)
        throw ArgumentError(name + ": coordinate " + std::to_string(l) + " out of bounds");
    }
    return evaluator(x);
  }
};

namespace testfns {

/// Two-dimensional function on [-1,1]^2 mixing an exponential trend, a
/// degree-six polynomial and a sharp rational bump at the origin.
inline double irregular(const Eigen::VectorXd& x) {
  const double x1 = x(0), x2 = x(1);
  return std::exp(x1) / 5.0 - x2 / 5.0 + std::pow(x2, 6) / 3.0 + 4.0 * std::pow(x2, 4) -
         4.0 * x2 * x2 + 7.0 * x1 * x1 / 10.0 + std::pow(x1, 4) +
         3.0 / (4.0 * x1 * x1 + 4.0 * x2 * x2 + 1.0);
}

/// Additive g-Sobol variant on [0,1]^5 with a = (1,2,3,4,5).
inline double gsobol5(const Eigen::VectorXd& x) {
  static constexpr double a[] = {1.0, 2.0, 3.0, 4.0, 5.0};
  double sum = 0.0;
  for (int i = 0; i < 5; ++i) sum += (std::abs(4.0 * x(i) - 2.0) + a[i]) / (1.0 + a[i]);
  return sum;
}

/// Additive g-Sobol variant on [0,1]^8 with a1 = a2 = 3 and a3..a8 = 0.
inline double gsobol8(const Eigen::VectorXd& x) {
  static constexpr double a[] = {3.0, 3.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) sum += (std::abs(4.0 * x(i) - 2.0) + a[i]) / (1.0 + a[i]);
  return sum;
}

/// cos(10 x1) + sin(10 x2) + x1 x2 on the unit square.
inline double cosin2(const Eigen::VectorXd& x) {
  return std::cos(10.0 * x(0)) + std::sin(10.0 * x(1)) + x(0) * x(1);
}

}  // namespace testfns

inline const std::vector<TestFunction>& test_function_registry() {
  static const std::vector<TestFunction> registry = {
      {"irregular", 2, Box{{-1.0, 1.0}, {-1.0, 1.0}}, &testfns::irregular},
      {"gsobol5", 5, Box(5), &testfns::gsobol5},
      {"gsobol8", 8, Box(8), &testfns::gsobol8},
      {"cosin2", 2, Box(2), &testfns::cosin2},
  };
  return registry;
}

inline const TestFunction& find_test_function(std::string_view name) {
  for (const TestFunction& fn : test_function_registry())
    if (fn.name == name) return fn;
  throw ArgumentError("unknown test function: " + std::string(name));
}

inline std::vector<std::string> test_function_names() {
  std::vector<std::string> names;
  for (const TestFunction& fn : test_function_registry()) names.push_back(fn.name);
  return names;
}

}  // namespace doekit
