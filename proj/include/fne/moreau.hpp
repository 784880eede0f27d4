#pragma once

#include <algorithm>

#include "fne/common.hpp"
#include "fne/fgm.hpp"
#include "fne/geometry.hpp"
#include "fne/problem.hpp"
#include "fne/stationarity.hpp"

namespace fne {

/**
 * Gradient of the Moreau envelope phi_{2L}(x) = min_{x' in X} phi(x') + L|x' - x|^2,
 * phi = max_Y F(., y), L = L_xx. grad = 2L(x - x_plus).
 *
 * error_bar bounds |grad - true grad| (2L times the certified distance of
 * x_plus from the exact proximal point).
 */
struct MoreauReport {
  Vector x_plus;
  Vector gradient;
  double grad_norm = 0.0;
  double error_bar = std::numeric_limits<double>::infinity();
  bool certified = false;
  long dual_iterations = 0;
};

struct MoreauOptions {
  double inner_tol = 1e-6;      // target for error_bar
  long max_dual_iterations = 200000;
  long max_ascent_steps = 2000;  // for the primal upper bound
};

namespace detail {

/// argmin_{x' in X} F(x', y) + L|x' - x|^2 from a warm start, stopped on a certified distance.
inline Vector moreau_inner(const ProblemSpec& spec, const Vector& x, const Vector& y, const Vector& warm,
                           double dist_tol, double* gap_bound, CallCounter* counter) {
  const double L = spec.L_xx;
  GradFn g = [&](const Vector& z) -> Vector { return spec.grad_x(z, y) + 2.0 * L * (z - x); };
  Vector z = warm;
  double S = 0.0;
  for (int epoch = 0; epoch < 400; ++epoch) {
    count_grad(counter);
    S = strong_measure(z, g(z), L, spec.X, counter);
    // L-strong convexity: gap <= S^2/(2L), distance <= S/L
    if (S / L <= dist_tol) break;
    z = fgm(z, spec.X, 1.0 / (3.0 * L), 11, g, counter, epoch);
  }
  if (gap_bound) *gap_bound = S * S / (2.0 * L);
  return z;
}

/// Upper bound on phi(x) = max_Y F(x, .) by projected ascent plus a linearization certificate.
inline double phi_upper_bound(const ProblemSpec& spec, const Vector& x, const Vector& y_start, double slack,
                              long max_steps, CallCounter* counter) {
  Vector y = y_start;
  double best = std::numeric_limits<double>::infinity();
  for (long k = 0; k <= max_steps; ++k) {
    count_grad(counter);
    const Vector gy = spec.grad_y(x, y);
    const double f = spec.value(x, y);
    // concavity: F(x, y') <= F(x, y) + <gy, y' - y>
    const double fw_gap = spec.Y.support(gy) - gy.dot(y);
    best = std::min(best, f + std::max(0.0, fw_gap));
    // f <= max F(x, .) <= best
    if (best - f <= slack) break;
    count_proj(counter);
    y = spec.Y.project(y + gy / spec.L_yy);
  }
  return best;
}

}  // namespace detail

/**
 * Solves the proximal subproblem through its concave dual
 * psi(y) = min_{x'} F(x', y) + L|x' - x|^2 with accelerated ascent, and
 * certifies the result with a duality gap: |x_plus - prox| <= sqrt(2 gap / L).
 */
inline MoreauReport moreau_gradient(const Vector& x, const ProblemSpec& spec, const MoreauOptions& opts = {},
                                    CallCounter* counter = nullptr) {
  spec.validate();
  if (!spec.value) throw InvalidArgument("moreau_gradient needs the value oracle");
  require_positive(opts.inner_tol, "inner_tol");
  require_same_dim(x, spec.X.dim(), "x");
  if (!spec.X.contains(x)) throw PreconditionViolation("x is not in X");

  const double L = spec.L_xx;
  const double Lp = spec.L_yy_plus();
  const double dist_target = opts.inner_tol / (2.0 * L);
  const double gap_target = 0.5 * L * dist_target * dist_target;
  const double inner_tol = 1e-2 * dist_target;

  Vector warm = spec.X.project(x);
  auto psi_grad = [&](const Vector& y) -> Vector {
    warm = detail::moreau_inner(spec, x, y, warm, inner_tol, nullptr, counter);
    count_grad(counter);
    return -spec.grad_y(warm, y);
  };

  MoreauReport rep;
  Vector y = spec.anchor();
  long T = 25;
  for (long epoch = 0; rep.dual_iterations < opts.max_dual_iterations; ++epoch) {
    y = fgm(y, spec.Y, 1.0 / Lp, T, psi_grad, counter, epoch);
    rep.dual_iterations += T;
    T = std::min<long>(2 * T, 3200);

    double inner_gap = 0.0;
    const Vector xt = detail::moreau_inner(spec, x, y, warm, 5.0 * inner_tol, &inner_gap, counter);
    warm = xt;
    const double prox_term = L * (xt - x).squaredNorm();
    const double lower = spec.value(xt, y) + prox_term - inner_gap;  // <= psi(y) <= min Phi
    const double upper =
        detail::phi_upper_bound(spec, xt, y, 1e-2 * gap_target, opts.max_ascent_steps, counter) + prox_term;
    // rounding in the two bounds keeps the certificate from going below ~sqrt(eps)
    const double gap = std::max(0.0, upper - lower) +
                       4.0 * std::numeric_limits<double>::epsilon() * (std::abs(upper) + std::abs(lower));
    const double dist = std::sqrt(2.0 * gap / L);
    if (2.0 * L * dist < rep.error_bar) {
      rep.error_bar = 2.0 * L * dist;
      rep.x_plus = xt;
    }
    logger()->debug("moreau epoch {}: gap={:.3e} error_bar={:.3e}", epoch, gap, rep.error_bar);
    if (rep.error_bar <= opts.inner_tol) {
      rep.certified = true;
      break;
    }
  }
  if (!rep.certified)
    logger()->warn("moreau_gradient: error bar {:.3e} above target {:.3e}", rep.error_bar, opts.inner_tol);
  rep.gradient = 2.0 * L * (x - rep.x_plus);
  rep.grad_norm = rep.gradient.norm();
  return rep;
}

/// eps_y that makes an (eps_x, eps_y)-FNE a C eps_x-stationary point of the Moreau envelope.
inline double epsilon_y_for_moreau(double eps_x, const ProblemSpec& spec) {
  require_positive(eps_x, "eps_x");
  require_positive(spec.L_xx, "L_xx");
  require_positive(spec.L_yy, "L_yy");
  require_positive(spec.R_y, "R_y");
  return std::min(eps_x * eps_x / (spec.L_xx * spec.R_y), eps_x * std::sqrt(spec.L_yy / spec.L_xx));
}

/// Both sides of h(y') - h(y) <= <zeta^L(y), y' - y> + (S^2 - W^2)/(2L) for concave L-smooth h.
struct ConcavityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double S = 0.0;
  double W = 0.0;
  double inner = 0.0;  // <zeta^L(y), y' - y>
  bool holds(double tol = 1e-12) const { return lhs <= rhs + tol; }
};

inline ConcavityCheck constrained_concavity_check(const std::function<double(const Vector&)>& h,
                                                  const GradFn& grad_h, const Vector& y, const Vector& y_prime,
                                                  double L, const FeasibleSet& Y) {
  require_positive(L, "L");
  if (!Y.contains(y) || !Y.contains(y_prime)) throw PreconditionViolation("points must lie in Y");
  const Vector g = grad_h(y);
  const StationarityReport m = measures(y, -g, L, Y);
  // zeta^L(y) = L(Proj(y + g/L) - y)
  const Vector zeta = L * (m.prox_point - y);
  ConcavityCheck c;
  c.S = m.strong;
  c.W = m.weak;
  c.inner = zeta.dot(y_prime - y);
  c.lhs = h(y_prime) - h(y);
  c.rhs = c.inner + (c.S * c.S - c.W * c.W) / (2.0 * L);
  return c;
}

}  // namespace fne
