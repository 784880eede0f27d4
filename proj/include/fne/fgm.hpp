#pragma once

#include <functional>

#include "fne/common.hpp"
#include "fne/geometry.hpp"

namespace fne {

using GradFn = std::function<Vector(const Vector&)>;
using ValueFnZ = std::function<double(const Vector&)>;
using EpochObserver = std::function<void(long epoch, const Vector& z)>;

/**
 * (delta, L)-oracle for a convex f on Z:
 * 0 <= f(z') - value(z) - <grad(z), z'-z> <= (L/2)|z'-z|^2 + delta for all z, z' in Z.
 * value may be left empty when only gradients are used.
 */
struct InexactOracle {
  GradFn grad;
  ValueFnZ value;
  double delta = 0.0;
  double L = 0.0;
};

/// Interpolation weight of FGM iteration t: 2(t+2)/((t+1)(t+4)).
inline double fgm_tau(long t) {
  const double td = static_cast<double>(t);
  return 2.0 * (td + 2.0) / ((td + 1.0) * (td + 4.0));
}

/**
 * The FGM loop with a pluggable prox step.
 *
 * prox(center, zeta, weight) must return argmin_{z'} <zeta, z'> + D(z', center)
 * (plus any composite term scaled by weight, the accumulated gradient weight
 * behind zeta). Each iteration calls grad once and prox twice.
 */
template <class Prox>
Vector fgm_loop(const Vector& z0, double gamma, long T, const GradFn& grad, Prox&& prox, CallCounter* counter,
                long epoch = -1) {
  Vector z = z0;
  Vector G = Vector::Zero(z0.size());
  double A = 0.0;
  for (long t = 0; t < T; ++t) {
    const double td = static_cast<double>(t);
    const Vector u = prox(z0, gamma * G, A);
    const double tau = fgm_tau(t);
    const Vector v = tau * u + (1.0 - tau) * z;
    count_grad(counter);
    const double a = 0.5 * (td + 2.0);
    const Vector g = a * grad(v);
    if (!g.allFinite()) throw NumericalFailure("gradient oracle returned a non-finite value", t, epoch);
    const Vector w = prox(u, gamma * g, a);
    z = tau * w + (1.0 - tau) * z;
    G += g;
    A += a;
  }
  return z;
}

/// Fast gradient method on a convex f over `set`, T iterations with stepsize gamma (<= 1/L).
inline Vector fgm(const Vector& z0, const FeasibleSet& set, double gamma, long T, const GradFn& grad,
                  CallCounter* counter = nullptr, long epoch = -1) {
  require_positive(gamma, "gamma");
  if (T < 1) throw InvalidArgument("FGM needs T >= 1");
  require_same_dim(z0, set.dim(), "z0");
  require_finite(z0, "z0");
  if (!set.contains(z0)) throw PreconditionViolation("FGM start point is not in the feasible set");
  auto prox = [&](const Vector& c, const Vector& zeta, double) { return prox_map(c, zeta, set, counter); };
  return fgm_loop(z0, gamma, T, grad, prox, counter, epoch);
}

/// S epochs of FGM, each warm-started from the previous output.
inline Vector restart_fgm(const Vector& z0, const FeasibleSet& set, double gamma, long T, long S,
                          const GradFn& grad, CallCounter* counter = nullptr, const EpochObserver& observer = {}) {
  if (S < 1) throw InvalidArgument("restart FGM needs S >= 1");
  Vector z = z0;
  for (long s = 0; s < S; ++s) {
    z = fgm(z, set, gamma, T, grad, counter, s);
    if (observer) observer(s, z);
  }
  return z;
}

struct RestartParams {
  long T = 1;
  long S = 1;
};

/// T = ceil(sqrt(40 kappa)), S = ceil(log2(3 L R / eps)) for an L-smooth, L/kappa-strongly convex f.
inline RestartParams restart_params_from_radius(double kappa, double L, double R, double eps) {
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw InvalidArgument("kappa must be >= 1");
  require_positive(L, "L");
  require_positive(eps, "eps");
  if (!(R >= 0.0) || !std::isfinite(R)) throw InvalidArgument("R must be finite and >= 0");
  RestartParams p;
  p.T = ceil_count(std::sqrt(40.0 * kappa));
  p.S = R > 0.0 ? ceil_count(std::log2(3.0 * L * R / eps)) : 1;
  return p;
}

/// Same T; S = ceil(0.5 log2(18 kappa L gap / eps^2)) using a bound on the initial optimality gap.
inline RestartParams restart_params_from_gap(double kappa, double L, double gap, double eps) {
  if (!(kappa >= 1.0) || !std::isfinite(kappa)) throw InvalidArgument("kappa must be >= 1");
  require_positive(L, "L");
  require_positive(eps, "eps");
  if (!(gap >= 0.0) || !std::isfinite(gap)) throw InvalidArgument("gap bound must be finite and >= 0");
  RestartParams p;
  p.T = ceil_count(std::sqrt(40.0 * kappa));
  p.S = gap > 0.0 ? ceil_count(0.5 * (std::log2(18.0 * kappa * L * gap) - 2.0 * std::log2(eps))) : 1;
  return p;
}

struct ProxPointParams {
  long T = 11;
  long S = 1;
  double gamma = 0.0;
};

/// Schedule for minimizing phi + L|. - x|^2 (3L-smooth, kappa <= 3).
inline ProxPointParams prox_point_params(double L, double eps, double gap) {
  require_positive(L, "L");
  require_positive(eps, "eps");
  // accuracy 3eps/2 for the 3L-smooth problem gives S = ceil(0.5 log2(72 L gap / eps^2))
  const RestartParams rp = restart_params_from_gap(3.0, 3.0 * L, gap, 1.5 * eps);
  ProxPointParams p;
  p.T = rp.T;
  p.S = rp.S;
  p.gamma = 1.0 / (3.0 * L);
  return p;
}

/**
 * Approximate proximal point of an L-weakly convex, L-smooth phi at x:
 * argmin_{x' in set} phi(x') + L|x' - x|^2, via restarted FGM.
 *
 * gap bounds phi(x) - min phi_{L,x}; when only phi(x) - inf phi is known, that works too.
 */
inline Vector prox_point_via_fgm(const Vector& x, const GradFn& grad_phi, double L, const FeasibleSet& set,
                                 double eps, double gap, CallCounter* counter = nullptr) {
  const ProxPointParams p = prox_point_params(L, eps, gap);
  logger()->debug("prox point: T={} S={} gamma={}", p.T, p.S, p.gamma);
  const Vector anchor = x;
  GradFn g = [&](const Vector& z) -> Vector { return grad_phi(z) + 2.0 * L * (z - anchor); };
  return restart_fgm(x, set, p.gamma, p.T, p.S, g, counter);
}

}  // namespace fne
