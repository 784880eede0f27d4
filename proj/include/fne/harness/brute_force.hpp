#pragma once

#include <algorithm>
#include <array>
#include <cmath>

#include "fne/common.hpp"
#include "fne/geometry.hpp"

namespace fne::harness {

namespace detail {

/// Maps parameters u in [0,1]^k onto the set, boundary included.
inline Vector param_point(const FeasibleSet& set, const std::array<double, 2>& u) {
  const Index d = set.dim();
  Vector z(d);
  switch (set.kind()) {
    case SetKind::Box:
      for (Index i = 0; i < d; ++i) z(i) = set.lower()(i) + u[i] * (set.upper()(i) - set.lower()(i));
      return z;
    case SetKind::Ball:
      if (d == 1) return set.center() + Vector::Constant(1, set.radius() * (2.0 * u[0] - 1.0));
      z << 2.0 * u[0] - 1.0, 2.0 * u[1] - 1.0;
      return set.center() + set.radius() * z;  // bounding square, filtered by the caller
    case SetKind::Simplex:
      if (d == 1) return Vector::Constant(1, set.radius());
      z << set.radius() * u[0], set.radius() * (1.0 - u[0]);
      return z;
    case SetKind::L1Ball: {
      const double r = set.radius();
      if (d == 1) return set.center() + Vector::Constant(1, r * (2.0 * u[0] - 1.0));
      z << 2.0 * u[0] - 1.0, 2.0 * u[1] - 1.0;
      return set.center() + r * z;  // bounding square, filtered by the caller
    }
    case SetKind::WholeSpace: break;
  }
  throw InvalidArgument("grid search needs a bounded set");
}

/// True when param_point covers a bounding square and points outside the set must be skipped.
inline bool needs_filter(const FeasibleSet& set) {
  return set.dim() == 2 && (set.kind() == SetKind::Ball || set.kind() == SetKind::L1Ball);
}

/// Boundary curve of a 2-D ball or l1-ball, t in [0,1].
inline Vector boundary_point(const FeasibleSet& set, double t) {
  Vector z(2);
  const double r = set.radius();
  if (set.kind() == SetKind::Ball) {
    z << std::cos(2.0 * M_PI * t), std::sin(2.0 * M_PI * t);
    return set.center() + r * z;
  }
  // diamond edges between (r,0), (0,r), (-r,0), (0,-r)
  const double s = 4.0 * std::clamp(t, 0.0, 1.0);
  const int e = std::min(3, static_cast<int>(s));
  const double f = s - e;
  const double vx[5] = {r, 0.0, -r, 0.0, r}, vy[5] = {0.0, r, 0.0, -r, 0.0};
  z << (1.0 - f) * vx[e] + f * vx[e + 1], (1.0 - f) * vy[e] + f * vy[e + 1];
  return set.center() + z;
}

inline int param_dims(const FeasibleSet& set) {
  if (set.dim() == 1) return set.kind() == SetKind::Simplex ? 0 : 1;
  switch (set.kind()) {
    case SetKind::Simplex: return 1;
    default: return 2;
  }
}

}  // namespace detail

struct GridMax {
  double value = -std::numeric_limits<double>::infinity();
  Vector argmax;
};

/**
 * Maximizes obj over a bounded set of dimension <= 2 by exhaustive grid
 * search, refining the window around the incumbent `levels` times.
 */
inline GridMax grid_maximize(const FeasibleSet& set, const std::function<double(const Vector&)>& obj, int n = 101,
                             int levels = 10) {
  if (set.dim() > 2) throw InvalidArgument("grid search supports d <= 2");
  const int k = detail::param_dims(set);
  const bool filter = detail::needs_filter(set);
  std::array<double, 2> lo{0.0, 0.0}, hi{1.0, 1.0};
  if (k < 2) lo[1] = hi[1] = 0.5;
  if (k < 1) lo[0] = hi[0] = 0.5;
  GridMax best;
  std::array<double, 2> ubest{0.5, 0.5};
  for (int level = 0; level < levels; ++level) {
    const int n0 = k >= 1 ? n : 1, n1 = k >= 2 ? n : 1;
    for (int i = 0; i < n0; ++i) {
      for (int j = 0; j < n1; ++j) {
        std::array<double, 2> u{n0 > 1 ? lo[0] + (hi[0] - lo[0]) * i / (n0 - 1) : lo[0],
                                n1 > 1 ? lo[1] + (hi[1] - lo[1]) * j / (n1 - 1) : lo[1]};
        const Vector z = detail::param_point(set, u);
        if (filter && !set.contains(z, 0.0)) continue;
        const double v = obj(z);
        if (v > best.value) {
          best.value = v;
          best.argmax = z;
          ubest = u;
        }
      }
    }
    for (int c = 0; c < k; ++c) {
      const double w = 2.0 * (hi[c] - lo[c]) / (n - 1);
      lo[c] = std::max(0.0, ubest[c] - w);
      hi[c] = std::min(1.0, ubest[c] + w);
    }
  }
  if (filter) {
    // a concave objective peaks inside or on the boundary; the filtered square grid
    // resolves interior maxima, this 1-D sweep resolves boundary ones
    GridMax edge;
    double blo = 0.0, bhi = 1.0, tbest = 0.0;
    const int nb = 8 * n;
    for (int level = 0; level < levels; ++level) {
      for (int i = 0; i < nb; ++i) {
        const double t = blo + (bhi - blo) * i / (nb - 1);
        const Vector z = detail::boundary_point(set, t);
        const double v = obj(z);
        if (v > edge.value) {
          edge.value = v;
          edge.argmax = z;
          tbest = t;
        }
      }
      const double w = 2.0 * (bhi - blo) / (nb - 1);
      blo = std::max(0.0, tbest - w);
      bhi = std::min(1.0, tbest + w);
    }
    if (edge.value > best.value) best = edge;
  }
  return best;
}

}  // namespace fne::harness
