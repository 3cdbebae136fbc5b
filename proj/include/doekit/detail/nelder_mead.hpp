#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

namespace doekit::detail {

struct NelderMeadOptions {
  int max_evals = 400;
  double f_tol = 1e-10;
  double initial_step = 0.08;  // fraction of the box width
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int evals = 0;
};

/// Downhill-simplex minimization with box constraints handled by clamping
/// candidate vertices onto the box. Deterministic given the start point.
template <class F>
NelderMeadResult nelder_mead(F&& f, const Eigen::VectorXd& start, const Eigen::VectorXd& lower,
                             const Eigen::VectorXd& upper, const NelderMeadOptions& options) {
  const Eigen::Index m = start.size();
  const auto clamp = [&](Eigen::VectorXd x) {
    for (Eigen::Index i = 0; i < m; ++i) x(i) = std::clamp(x(i), lower(i), upper(i));
    return x;
  };

  int evals = 0;
  const auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    return f(x);
  };

  std::vector<Eigen::VectorXd> simplex;
  std::vector<double> values;
  simplex.reserve(static_cast<std::size_t>(m) + 1);
  simplex.push_back(clamp(start));
  values.push_back(eval(simplex[0]));
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::VectorXd v = simplex[0];
    const double step = options.initial_step * (upper(i) - lower(i));
    v(i) = (v(i) + step <= upper(i)) ? v(i) + step : v(i) - step;
    simplex.push_back(clamp(v));
    values.push_back(eval(simplex.back()));
  }

  std::vector<std::size_t> order(simplex.size());
  const auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  };

  while (evals < options.max_evals) {
    sort_simplex();
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second_worst = order[order.size() - 2];
    if (std::abs(values[worst] - values[best]) <=
        options.f_tol * (std::abs(values[best]) + options.f_tol))
      break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(m);
    for (std::size_t i = 0; i < simplex.size(); ++i)
      if (i != worst) centroid += simplex[i];
    centroid /= static_cast<double>(simplex.size() - 1);

    const Eigen::VectorXd reflected = clamp(centroid + (centroid - simplex[worst]));
    const double f_reflected = eval(reflected);
    if (f_reflected < values[best]) {
      const Eigen::VectorXd expanded = clamp(centroid + 2.0 * (centroid - simplex[worst]));
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        simplex[worst] = expanded;
        values[worst] = f_expanded;
      } else {
        simplex[worst] = reflected;
        values[worst] = f_reflected;
      }
    } else if (f_reflected < values[second_worst]) {
      simplex[worst] = reflected;
      values[worst] = f_reflected;
    } else {
      const bool outside = f_reflected < values[worst];
      const Eigen::VectorXd contracted = clamp(
          outside ? Eigen::VectorXd(centroid + 0.5 * (reflected - centroid))
                  : Eigen::VectorXd(centroid - 0.5 * (centroid - simplex[worst])));
      const double f_contracted = eval(contracted);
      if (f_contracted < std::min(f_reflected, values[worst])) {
        simplex[worst] = contracted;
        values[worst] = f_contracted;
      } else {
        for (std::size_t i = 0; i < simplex.size(); ++i) {
          if (i == best) continue;
          simplex[i] = clamp(simplex[best] + 0.5 * (simplex[i] - simplex[best]));
          values[i] = eval(simplex[i]);
          if (evals >= options.max_evals) break;
        }
      }
    }
  }

  sort_simplex();
  return {simplex[order.front()], values[order.front()], evals};
}

}  // namespace doekit::detail
