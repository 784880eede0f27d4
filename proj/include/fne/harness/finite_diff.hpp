#pragma once

#include <vector>

#include "fne/common.hpp"
#include "fne/problem.hpp"

namespace fne::harness {

struct FiniteDiffReport {
  double max_rel_error = 0.0;
  size_t worst_point = 0;
  Index worst_coord = 0;
};

/**
 * Central differences (f(x + h e_i) - f(x - h e_i)) / 2h against grad(x).
 * Error per coordinate is |fd - g_i| / max(1, |g_i|).
 */
inline FiniteDiffReport finite_diff_check(const std::function<double(const Vector&)>& f,
                                          const std::function<Vector(const Vector&)>& grad,
                                          const std::vector<Vector>& points, double h) {
  require_positive(h, "h");
  FiniteDiffReport rep;
  for (size_t k = 0; k < points.size(); ++k) {
    const Vector& x = points[k];
    const Vector g = grad(x);
    require_same_dim(g, x.size(), "gradient");
    Vector xp = x;
    for (Index i = 0; i < x.size(); ++i) {
      xp(i) = x(i) + h;
      const double fp = f(xp);
      xp(i) = x(i) - h;
      const double fm = f(xp);
      xp(i) = x(i);
      const double fd = (fp - fm) / (2.0 * h);
      const double err = std::abs(fd - g(i)) / std::max(1.0, std::abs(g(i)));
      if (err > rep.max_rel_error || !std::isfinite(err)) {
        rep.max_rel_error = std::isfinite(err) ? err : std::numeric_limits<double>::infinity();
        rep.worst_point = k;
        rep.worst_coord = i;
      }
    }
  }
  return rep;
}

/// Checks both partial gradients of a problem at the given (x, y) pairs.
inline FiniteDiffReport finite_diff_check(const ProblemSpec& spec, const std::vector<std::pair<Vector, Vector>>& pts,
                                          double h) {
  if (!spec.value) throw InvalidArgument("finite differences need the value oracle");
  FiniteDiffReport worst;
  for (size_t k = 0; k < pts.size(); ++k) {
    const auto& [x, y] = pts[k];
    const auto fx = [&](const Vector& v) { return spec.value(v, y); };
    const auto gx = [&](const Vector& v) { return spec.grad_x(v, y); };
    const auto fy = [&](const Vector& v) { return spec.value(x, v); };
    const auto gy = [&](const Vector& v) { return spec.grad_y(x, v); };
    for (const auto& r : {finite_diff_check(fx, gx, {x}, h), finite_diff_check(fy, gy, {y}, h)}) {
      if (r.max_rel_error > worst.max_rel_error) {
        worst = r;
        worst.worst_point = k;
      }
    }
  }
  return worst;
}

}  // namespace fne::harness
