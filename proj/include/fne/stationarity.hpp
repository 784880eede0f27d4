#pragma once

#include <string>

#include "fne/common.hpp"
#include "fne/geometry.hpp"
#include "fne/problem.hpp"

namespace fne {

/// Strong and weak measures at one point, plus the maximizer of the strong one.
struct StationarityReport {
  double strong = 0.0;
  double weak = 0.0;
  Vector prox_point;
};

namespace detail {

/**
 * Shared core of the Euclidean measures. p = Proj(z - zeta/L) maximizes
 * -<zeta, z' - z> - (L/2)|z' - z|^2, and m is the maximum value.
 */
inline StationarityReport measure_core(const Vector& z, const Vector& zeta, double L, const FeasibleSet& set,
                                       CallCounter* counter) {
  require_positive(L, "L");
  require_same_dim(z, set.dim(), "z");
  require_same_dim(zeta, set.dim(), "zeta");
  require_finite(zeta, "zeta");
  if (!set.contains(z)) throw PreconditionViolation("stationarity measure evaluated outside the feasible set");

  count_proj(counter);
  StationarityReport r;
  const Vector target = z - zeta / L;
  r.prox_point = set.project(target);
  const Vector step = r.prox_point - z;
  // With residual res = target - p, -<zeta, step> = L<res, step> + L|step|^2, so
  // m = L<res, step> + (L/2)|step|^2. Both terms are >= 0 (variational inequality
  // of the projection), which avoids cancellation when m is small.
  const Vector res = target - r.prox_point;
  double vi = res.dot(step);
  // rounding in res and step scales with eps d (|z| + |p| + |target|); a vi inside that band is noise
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(z.size()) *
                       (res.norm() + step.norm()) * (z.norm() + r.prox_point.norm() + target.norm());
  if (vi < -noise) {
    // beyond rounding only the 1e-9 feasibility slack on z can explain it
    const double slack = noise + res.norm() * (set.project(z) - z).norm();
    if (vi < -slack)
      throw InternalConsistencyError("strong stationarity measure: projection inequality violated by " +
                                     std::to_string(vi));
  }
  if (vi <= noise) vi = 0.0;
  const double m = L * vi + 0.5 * L * step.squaredNorm();
  r.strong = std::sqrt(2.0 * L * m);
  r.weak = L * step.norm();
  return r;
}

}  // namespace detail

/// S_Z(z, zeta, L) = sqrt(2L max_{z' in Z}[-<zeta, z'-z> - (L/2)|z'-z|^2]).
inline double strong_measure(const Vector& z, const Vector& zeta, double L, const FeasibleSet& set,
                             CallCounter* counter = nullptr) {
  return detail::measure_core(z, zeta, L, set, counter).strong;
}

/// W_Z(z, zeta, L) = L |z - Proj_Z(z - zeta/L)|, the gradient-mapping norm.
inline double weak_measure(const Vector& z, const Vector& zeta, double L, const FeasibleSet& set,
                           CallCounter* counter = nullptr) {
  return detail::measure_core(z, zeta, L, set, counter).weak;
}

/// Both measures with a single projection.
inline StationarityReport measures(const Vector& z, const Vector& zeta, double L, const FeasibleSet& set,
                                   CallCounter* counter = nullptr) {
  return detail::measure_core(z, zeta, L, set, counter);
}

struct FneVerdict {
  bool passed = false;
  StationarityReport x_side;  // against grad_x F at L_xx
  StationarityReport y_side;  // against -grad_y F at L_yy
  double eps_x = 0.0;
  double eps_y = 0.0;

  std::string explain() const {
    return "S_x=" + std::to_string(x_side.strong) + " (<= " + std::to_string(eps_x) + ")" +
           ", S_y=" + std::to_string(y_side.strong) + " (<= " + std::to_string(eps_y) + ")";
  }
};

/**
 * (eps_x, eps_y)-first-order Nash equilibrium test:
 * S_X(x, grad_x F, L_xx) <= eps_x and S_Y(y, -grad_y F, L_yy) <= eps_y.
 */
inline FneVerdict fne_check(const Vector& x, const Vector& y, const ProblemSpec& spec, double eps_x, double eps_y,
                            CallCounter* counter = nullptr) {
  require_positive(eps_x, "eps_x");
  require_positive(eps_y, "eps_y");
  count_grad(counter, 2);
  const Vector gx = spec.grad_x(x, y);
  const Vector gy = spec.grad_y(x, y);
  FneVerdict v;
  v.eps_x = eps_x;
  v.eps_y = eps_y;
  v.x_side = measures(x, gx, spec.L_xx, spec.X, counter);
  v.y_side = measures(y, -gy, spec.L_yy, spec.Y, counter);
  v.passed = v.x_side.strong <= eps_x && v.y_side.strong <= eps_y;
  return v;
}

}  // namespace fne
