#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "doekit/errors.hpp"
#include "doekit/rng.hpp"

namespace doekit {

/// Closed interval of finite bounds, one per input dimension.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

using Box = std::vector<Interval>;

inline Box unit_box(Eigen::Index d) { return Box(static_cast<std::size_t>(d)); }

inline bool is_unit_box(const Box& box) {
  return std::all_of(box.begin(), box.end(),
                     [](const Interval& iv) { return iv.lo == 0.0 && iv.hi == 1.0; });
}

inline void check_box(const Box& box) {
  for (std::size_t k = 0; k < box.size(); ++k) {
    if (!std::isfinite(box[k].lo) || !std::isfinite(box[k].hi) || !(box[k].lo < box[k].hi))
      throw ArgumentError("degenerate interval in dimension " + std::to_string(k));
  }
}

enum class DesignKind { Srs, Lhs, Hammersley, Augmented, External };

inline const char* to_string(DesignKind kind) {
  switch (kind) {
    case DesignKind::Srs: return "SRS";
    case DesignKind::Lhs: return "LHS";
    case DesignKind::Hammersley: return "Hammersley";
    case DesignKind::Augmented: return "Augmented";
    case DesignKind::External: return "External";
  }
  return "External";
}

inline DesignKind design_kind_from_string(std::string_view s) {
  if (s == "SRS" || s == "srs") return DesignKind::Srs;
  if (s == "LHS" || s == "lhs") return DesignKind::Lhs;
  if (s == "Hammersley" || s == "hammersley") return DesignKind::Hammersley;
  if (s == "Augmented" || s == "augmented") return DesignKind::Augmented;
  if (s == "External" || s == "external") return DesignKind::External;
  throw ArgumentError("unknown design kind: " + std::string(s));
}

/// A set of n points in a d-dimensional box, one row per point.
///
/// Generators produce points in the unit hypercube; `scale_to_domain`
/// materializes physical coordinates at the function-evaluation boundary.
struct Design {
  Eigen::MatrixXd points;
  Box domain;
  DesignKind kind = DesignKind::External;

  Eigen::Index size() const { return points.rows(); }
  Eigen::Index dim() const { return points.cols(); }
};

namespace detail {

inline void check_counts(Eigen::Index n, Eigen::Index d) {
  if (n < 1) throw ArgumentError("point count must be >= 1");
  if (d < 1) throw ArgumentError("dimension must be >= 1");
}

/// First m primes by trial division (m is small: one prime per dimension).
inline std::vector<std::uint64_t> first_primes(std::size_t m) {
  std::vector<std::uint64_t> primes;
  primes.reserve(m);
  for (std::uint64_t c = 2; primes.size() < m; ++c) {
    bool prime = true;
    for (std::uint64_t p : primes) {
      if (p * p > c) break;
      if (c % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) primes.push_back(c);
  }
  return primes;
}

/// Digit-reversed fraction of i in the given base, in (0,1) for i >= 1.
inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
  const double inv_base = 1.0 / static_cast<double>(base);
  double factor = inv_base;
  double result = 0.0;
  while (i > 0) {
    result += factor * static_cast<double>(i % base);
    i /= base;
    factor *= inv_base;
  }
  return result;
}

}  // namespace detail

/// n i.i.d. uniform points on the unit hypercube.
inline Design generate_srs(Eigen::Index n, Eigen::Index d, Rng& rng) {
  detail::check_counts(n, d);
  Design design;
  design.points.resize(n, d);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index k = 0; k < d; ++k) design.points(i, k) = rng.next_unit();
  design.domain = unit_box(d);
  design.kind = DesignKind::Srs;
  return design;
}

/// Latin hypercube sample: per column, one point in each stratum
/// [j/n, (j+1)/n), strata independently permuted, position within the
/// stratum uniform.
inline Design generate_lhs(Eigen::Index n, Eigen::Index d, Rng& rng) {
  detail::check_counts(n, d);
  Design design;
  design.points.resize(n, d);
  std::vector<Eigen::Index> strata(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < d; ++k) {
    std::iota(strata.begin(), strata.end(), Eigen::Index{0});
    for (Eigen::Index i = n - 1; i > 0; --i) {
      const auto j = static_cast<Eigen::Index>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
      std::swap(strata[static_cast<std::size_t>(i)], strata[static_cast<std::size_t>(j)]);
    }
    for (Eigen::Index i = 0; i < n; ++i)
      design.points(i, k) =
          (static_cast<double>(strata[static_cast<std::size_t>(i)]) + rng.next_unit()) /
          static_cast<double>(n);
  }
  design.domain = unit_box(d);
  design.kind = DesignKind::Lhs;
  return design;
}

/// Hammersley point set: point i (i = 1..n) is
/// (i/n, phi_2(i), phi_3(i), ..., phi_{p_{d-1}}(i)) with phi the radical
/// inverse and p_k the k-th prime. Deterministic; all coordinates in (0,1].
inline Design generate_hammersley(Eigen::Index n, Eigen::Index d) {
  detail::check_counts(n, d);
  Design design;
  design.points.resize(n, d);
  const auto primes = detail::first_primes(static_cast<std::size_t>(d - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto index = static_cast<std::uint64_t>(i) + 1;
    design.points(i, 0) = static_cast<double>(index) / static_cast<double>(n);
    for (Eigen::Index k = 1; k < d; ++k)
      design.points(i, k) = detail::radical_inverse(index, primes[static_cast<std::size_t>(k - 1)]);
  }
  design.domain = unit_box(d);
  design.kind = DesignKind::Hammersley;
  return design;
}

/// Coordinates normalized to [0,1] relative to the design's domain.
inline Eigen::MatrixXd unit_coordinates(const Design& design) {
  Eigen::MatrixXd u = design.points;
  for (Eigen::Index k = 0; k < design.dim(); ++k) {
    const Interval& iv = design.domain[static_cast<std::size_t>(k)];
    u.col(k) = (u.col(k).array() - iv.lo) / (iv.hi - iv.lo);
  }
  return u;
}

/// Checks the LHS stratum invariant: per column, the stratum indices
/// floor(u * n) of the normalized coordinates are a permutation of 0..n-1.
inline bool is_lhs(const Design& design) {
  const Eigen::Index n = design.size();
  const Eigen::MatrixXd u = unit_coordinates(design);
  std::vector<int> seen(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < design.dim(); ++k) {
    std::fill(seen.begin(), seen.end(), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double v = u(i, k);
      if (v < 0.0 || v > 1.0) return false;
      auto s = static_cast<Eigen::Index>(std::floor(v * static_cast<double>(n)));
      s = std::min(s, n - 1);
      ++seen[static_cast<std::size_t>(s)];
    }
    if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; })) return false;
  }
  return true;
}

/// Restriction to the selected coordinates, in the given order.
/// LHS structure survives projection; so does SRS. Other kinds lose their tag.
inline Design project(const Design& design, const std::vector<Eigen::Index>& dims) {
  if (dims.empty()) throw ArgumentError("projection index set is empty");
  for (Eigen::Index k : dims)
    if (k < 0 || k >= design.dim())
      throw ArgumentError("projection index " + std::to_string(k) + " out of range");
  Design out;
  out.points.resize(design.size(), static_cast<Eigen::Index>(dims.size()));
  out.domain.reserve(dims.size());
  for (std::size_t j = 0; j < dims.size(); ++j) {
    out.points.col(static_cast<Eigen::Index>(j)) = design.points.col(dims[j]);
    out.domain.push_back(design.domain[static_cast<std::size_t>(dims[j])]);
  }
  out.kind = (design.kind == DesignKind::Lhs || design.kind == DesignKind::Srs)
                 ? design.kind
                 : DesignKind::External;
  return out;
}

/// Affine map of every coordinate from its current interval onto `bounds`.
inline Design scale_to_domain(const Design& design, const Box& bounds) {
  if (static_cast<Eigen::Index>(bounds.size()) != design.dim())
    throw ArgumentError("bounds dimension mismatch");
  check_box(bounds);
  check_box(design.domain);
  Design out = design;
  for (Eigen::Index k = 0; k < design.dim(); ++k) {
    const Interval& from = design.domain[static_cast<std::size_t>(k)];
    const Interval& to = bounds[static_cast<std::size_t>(k)];
    out.points.col(k) =
        to.lo + (design.points.col(k).array() - from.lo) * ((to.hi - to.lo) / (from.hi - from.lo));
  }
  out.domain = bounds;
  return out;
}

/// Inverse of scale_to_domain: back onto the unit hypercube.
inline Design unscale_to_unit(const Design& design) {
  return scale_to_domain(design, unit_box(design.dim()));
}

/// Maps a single unit-cube point into the box.
inline Eigen::VectorXd scale_point(const Eigen::VectorXd& u, const Box& box) {
  Eigen::VectorXd x(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    const Interval& iv = box[static_cast<std::size_t>(k)];
    x(k) = iv.lo + u(k) * (iv.hi - iv.lo);
  }
  return x;
}

}  // namespace doekit
