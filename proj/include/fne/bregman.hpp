#pragma once

#include <optional>
#include <vector>

#include "fne/common.hpp"
#include "fne/fgm.hpp"
#include "fne/geometry.hpp"

namespace fne {

namespace detail {

/// |v|_r for r >= 1, scaled to avoid overflow.
inline double lp_norm(const Vector& v, double r) {
  const double m = v.lpNorm<Eigen::Infinity>();
  if (m == 0.0) return 0.0;
  return m * std::pow((v.array().abs() / m).pow(r).sum(), 1.0 / r);
}

/// Gradient of (1/2)|v|_r^2: |v|_r^{2-r} sign(v)|v|^{r-1}.
inline Vector half_sq_norm_grad(const Vector& v, double r) {
  const double n = lp_norm(v, r);
  if (n == 0.0) return Vector::Zero(v.size());
  return (n * v.array().sign() * (v.array().abs() / n).pow(r - 1.0)).matrix();
}

}  // namespace detail

enum class DgfKind { Euclidean, Lp };

/**
 * Distance-generating function omega(z) = (K/2)|z - origin|_p^2, 1-strongly
 * convex w.r.t. the geometry norm (l2 for Euclidean, l1 for the lp family).
 */
class DgfGeometry {
 public:
  static DgfGeometry euclidean(Index d) {
    if (d <= 0) throw InvalidArgument("dimension must be positive");
    DgfGeometry g;
    g.kind_ = DgfKind::Euclidean;
    g.d_ = d;
    g.p_ = 2.0;
    g.C_ = 1.0;
    g.K_ = 1.0;
    g.growth_ = 1.0;
    g.smoothness_ = 1.0;
    g.origin_ = Vector::Zero(d);
    return g;
  }

  /// p = 1 + 1/ln d. K = e ln(d) C_d with C_d = exp((ln d - 1)/(ln d + 1)) makes omega
  /// 1-strongly convex w.r.t. l1; sup over the unit l1 ball is (e C_d / 2) ln d.
  static DgfGeometry lp(Index d) {
    if (d < 3) throw InvalidArgument("the lp distance-generating function needs d >= 3");
    const double ld = std::log(static_cast<double>(d));
    DgfGeometry g;
    g.kind_ = DgfKind::Lp;
    g.d_ = d;
    g.p_ = 1.0 + 1.0 / ld;
    g.C_ = std::exp((ld - 1.0) / (ld + 1.0));
    g.K_ = std::exp(1.0) * ld * g.C_;
    g.growth_ = 0.5 * std::exp(2.0) * ld;  // C_d < e
    g.smoothness_ = std::nullopt;
    g.origin_ = Vector::Zero(d);
    return g;
  }

  DgfGeometry recentered(const Vector& origin) const {
    require_same_dim(origin, d_, "origin");
    DgfGeometry g = *this;
    g.origin_ = origin;
    return g;
  }

  DgfKind kind() const { return kind_; }
  Index dim() const { return d_; }
  double p() const { return p_; }
  double q() const { return p_ / (p_ - 1.0); }
  double C() const { return C_; }
  double scale() const { return K_; }
  const Vector& origin() const { return origin_; }
  /// Growth factor G with omega(z) - min omega <= G |z - origin|^2.
  double growth_factor() const { return growth_; }
  /// Lipschitz constant of grad omega w.r.t. the norm pair; nullopt if unbounded.
  std::optional<double> smoothness() const { return smoothness_; }

  double omega(const Vector& z) const {
    require_same_dim(z, d_, "z");
    const double n = detail::lp_norm(z - origin_, p_);
    return 0.5 * K_ * n * n;
  }

  Vector grad(const Vector& z) const {
    require_same_dim(z, d_, "z");
    if (kind_ == DgfKind::Euclidean) return z - origin_;
    return K_ * detail::half_sq_norm_grad(z - origin_, p_);
  }

  /// omega*(theta) = <theta, origin> + |theta|_q^2 / (2K).
  double conjugate(const Vector& theta) const {
    const double n = detail::lp_norm(theta, q());
    return theta.dot(origin_) + 0.5 * n * n / K_;
  }

  /// grad omega*, the inverse of grad omega.
  Vector grad_conjugate(const Vector& theta) const {
    if (kind_ == DgfKind::Euclidean) return origin_ + theta;
    return origin_ + detail::half_sq_norm_grad(theta, q()) / K_;
  }

  double divergence(const Vector& a, const Vector& b) const {
    if (kind_ == DgfKind::Euclidean) return 0.5 * (a - b).squaredNorm();
    return omega(a) - omega(b) - grad(b).dot(a - b);
  }

  double norm(const Vector& v) const { return kind_ == DgfKind::Euclidean ? v.norm() : v.lpNorm<1>(); }
  double dual_norm(const Vector& v) const {
    return kind_ == DgfKind::Euclidean ? v.norm() : v.lpNorm<Eigen::Infinity>();
  }

  /// Upper bound on omega(z) - min omega over |z - origin| <= r.
  double omega_radius(double r) const { return growth_ * r * r; }

  /// sup of omega over a bounded set (an upper bound on its omega-diameter).
  double omega_bound(const FeasibleSet& set) const {
    require_same_dim(Vector::Zero(set.dim()), d_, "set");
    switch (set.kind()) {
      case SetKind::WholeSpace: return std::numeric_limits<double>::infinity();
      case SetKind::Box: {
        const Vector far = (set.lower() - origin_).cwiseAbs().cwiseMax((set.upper() - origin_).cwiseAbs());
        return omega(origin_ + far);
      }
      case SetKind::Ball:
      case SetKind::L1Ball: {
        // reach in |.|_p: |v|_p <= |v|_1, and |v|_p <= d^{1/p - 1/2}|v|_2 for p <= 2
        const double ball_factor = std::pow(static_cast<double>(d_), 1.0 / p_ - 0.5);
        const double r = set.kind() == SetKind::Ball ? ball_factor * set.radius() : set.radius();
        const double reach = detail::lp_norm(set.center() - origin_, p_) + r;
        return 0.5 * K_ * reach * reach;
      }
      case SetKind::Simplex: {
        double best = 0.0;
        for (Index i = 0; i < d_; ++i) {
          Vector v = Vector::Zero(d_);
          v(i) = set.radius();
          best = std::max(best, omega(v));
        }
        return best;
      }
    }
    return std::numeric_limits<double>::infinity();
  }

 private:
  DgfGeometry() = default;

  DgfKind kind_ = DgfKind::Euclidean;
  Index d_ = 0;
  double p_ = 2.0;
  double C_ = 1.0;
  double K_ = 1.0;
  double growth_ = 1.0;
  std::optional<double> smoothness_;
  Vector origin_;
};

inline DgfGeometry euclidean_dgf(Index d) { return DgfGeometry::euclidean(d); }
inline DgfGeometry lp_dgf(Index d) { return DgfGeometry::lp(d); }

/// Optional composite term mu * D(z', anchor) in the prox-mapping.
struct ProxRegularizer {
  double mu = 0.0;
  Vector anchor;
};

namespace detail {

/// argmin_{u in [a,b]} (K/2)|u|_p^2 - <theta, u>, bisection on the multiplier of |u|_p^p.
inline Vector lp_box_argmin(const Vector& theta, const Vector& a, const Vector& b, double K, double p) {
  const Index d = theta.size();
  auto u_of = [&](double nu) {
    Vector u(d);
    for (Index i = 0; i < d; ++i) {
      const double t = theta(i);
      const double mag = t == 0.0 ? 0.0 : std::pow(std::abs(t) / (p * nu), 1.0 / (p - 1.0));
      u(i) = std::clamp(t < 0.0 ? -mag : mag, a(i), b(i));
    }
    return u;
  };
  // nu must equal g'(s) = (K/p) s^{2/p - 1} with s = sum |u_i|^p
  auto h = [&](double log_nu) {
    const Vector u = u_of(std::exp(log_nu));
    const double s = u.array().abs().pow(p).sum();
    const double gp = s == 0.0 ? 0.0 : (K / p) * std::pow(s, 2.0 / p - 1.0);
    return log_nu - (gp > 0.0 ? std::log(gp) : -std::numeric_limits<double>::infinity());
  };
  double lo = -700.0, hi = 700.0;
  if (h(lo) >= 0.0) return u_of(std::exp(lo));
  if (h(hi) <= 0.0) return u_of(std::exp(hi));
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (h(mid) < 0.0 ? lo : hi) = mid;
  }
  return u_of(std::exp(0.5 * (lo + hi)));
}

/// argmin_{|u|_1 <= r} (K/2)|u|_p^2 - <theta, u>, bisection on the l1 multiplier.
inline Vector lp_l1_argmin(const Vector& theta, double r, double K, double p) {
  const double q = p / (p - 1.0);
  auto u_of = [&](double beta) -> Vector {
    const Vector shrunk = (theta.array().sign() * (theta.array().abs() - beta).max(0.0)).matrix();
    return half_sq_norm_grad(shrunk, q) / K;
  };
  Vector u = u_of(0.0);
  if (u.lpNorm<1>() <= r) return u;
  double lo = 0.0, hi = theta.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (u_of(mid).lpNorm<1>() > r ? lo : hi) = mid;
  }
  u = u_of(hi);
  const double n1 = u.lpNorm<1>();
  if (n1 > r && n1 > 0.0) u *= r / n1;  // remove bisection residue
  return u;
}

}  // namespace detail

/**
 * argmin_{z' in set} <zeta, z'> + D(z', z) + mu D(z', anchor).
 * Euclidean: any set. lp: whole space, boxes, and l1-balls centered at the origin.
 */
inline Vector bregman_prox(const Vector& z, const Vector& zeta, const FeasibleSet& set, const DgfGeometry& geo,
                           const ProxRegularizer& reg = {}, CallCounter* counter = nullptr) {
  require_same_dim(z, geo.dim(), "z");
  require_same_dim(zeta, geo.dim(), "zeta");
  if (set.dim() != geo.dim()) throw InvalidArgument("set and geometry dimensions differ");
  if (!(reg.mu >= 0.0)) throw InvalidArgument("regularizer weight must be >= 0");
  count_proj(counter);
  if (geo.kind() == DgfKind::Euclidean && reg.mu == 0.0) return set.project(z - zeta);

  const double w = 1.0 + reg.mu;
  Vector theta = geo.grad(z) - zeta;
  if (reg.mu > 0.0) {
    require_same_dim(reg.anchor, geo.dim(), "anchor");
    theta += reg.mu * geo.grad(reg.anchor);
  }
  // minimize w * omega(z') - <theta, z'>
  if (geo.kind() == DgfKind::Euclidean) return set.project(geo.origin() + theta / w);

  const Vector& o = geo.origin();
  switch (set.kind()) {
    case SetKind::WholeSpace: return geo.grad_conjugate(theta / w);
    case SetKind::Box:
      return o + detail::lp_box_argmin(theta, set.lower() - o, set.upper() - o, w * geo.scale(), geo.p());
    case SetKind::L1Ball:
      if ((set.center() - o).lpNorm<Eigen::Infinity>() > 0.0)
        throw UnsupportedCombination("lp prox on an l1-ball needs the ball centered at the geometry origin");
      return o + detail::lp_l1_argmin(theta, set.radius(), w * geo.scale(), geo.p());
    default:
      throw UnsupportedCombination(std::string("lp prox-mapping is not implemented for ") + to_string(set.kind()));
  }
}

struct BregmanStationarity {
  double strong = 0.0;
  double weak = 0.0;
  Vector mirror_point;
};

/// S = sqrt(2L max[-<zeta, z'-z> - L D(z', z)]) and W = L|z - mirror point| in the geometry norm.
inline BregmanStationarity bregman_measures(const Vector& z, const Vector& zeta, double L, const FeasibleSet& set,
                                            const DgfGeometry& geo) {
  require_positive(L, "L");
  if (!set.contains(z)) throw PreconditionViolation("Bregman measure evaluated outside the feasible set");
  BregmanStationarity r;
  r.mirror_point = bregman_prox(z, zeta / L, set, geo);
  const Vector step = r.mirror_point - z;
  // res = -(zeta/L + grad omega(p) - grad omega(z)) lies in the normal cone at p, so
  // -<zeta, step> - L D(p, z) = L<res, step> + L D(z, p), a sum of nonnegative terms.
  const Vector res = -(zeta / L + geo.grad(r.mirror_point) - geo.grad(z));
  double vi = res.dot(step);
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(z.size()) *
                       (res.norm() + step.norm()) * (z.norm() + r.mirror_point.norm() + (z - zeta / L).norm());
  // the constrained lp prox is a bisection with relative multiplier tolerance ~1e-12
  const bool iterative = geo.kind() == DgfKind::Lp && set.kind() != SetKind::WholeSpace;
  const double solver_tol = iterative ? 1e-10 * (geo.grad(z) - zeta / L).norm() * step.norm() : 0.0;
  if (vi < -noise - solver_tol - 1e-12 * (1.0 + res.norm() * step.norm()))
    throw InternalConsistencyError("Bregman strong measure: optimality violated by " + std::to_string(vi));
  if (vi <= noise) vi = 0.0;
  // D >= 0 exactly; rounding in the lp divergence can dip just below zero
  const double m = L * vi + L * std::max(0.0, geo.divergence(z, r.mirror_point));
  r.strong = std::sqrt(2.0 * L * m);
  r.weak = L * geo.norm(step);
  return r;
}

inline double strong_measure_bregman(const Vector& z, const Vector& zeta, double L, const FeasibleSet& set,
                                     const DgfGeometry& geo) {
  return bregman_measures(z, zeta, L, set, geo).strong;
}

inline double weak_measure_bregman(const Vector& z, const Vector& zeta, double L, const FeasibleSet& set,
                                   const DgfGeometry& geo) {
  return bregman_measures(z, zeta, L, set, geo).weak;
}

/// FGM with Bregman prox steps on f + lambda D(., anchor); lambda enters through the prox.
inline Vector bregman_fgm(const Vector& z0, const FeasibleSet& set, const DgfGeometry& geo, double gamma, long T,
                          const GradFn& grad, double lambda = 0.0, const Vector& anchor = {},
                          CallCounter* counter = nullptr, long epoch = -1) {
  require_positive(gamma, "gamma");
  if (T < 1) throw InvalidArgument("FGM needs T >= 1");
  if (!set.contains(z0)) throw PreconditionViolation("FGM start point is not in the feasible set");
  auto prox = [&](const Vector& c, const Vector& zeta, double weight) {
    ProxRegularizer reg;
    if (lambda > 0.0) {
      reg.mu = gamma * lambda * weight;
      reg.anchor = anchor;
    }
    return bregman_prox(c, zeta, set, geo, reg, counter);
  };
  return fgm_loop(z0, gamma, T, grad, prox, counter, epoch);
}

struct BregmanRestartResult {
  Vector z;
  long T = 0;
  long S = 0;
  double Omega = 0.0;
  DgfGeometry geometry = DgfGeometry::euclidean(1);  // the geometry actually used (recentered on whole space)
};

/**
 * Restarted FGM for f_lambda = f + lambda D(., z0), f convex and L-smooth
 * w.r.t. the geometry norm. T = ceil(sqrt(40 G L / lambda)), S = ceil(log2(3L sqrt(Omega)/eps))
 * with G the geometry's growth factor. On whole space the geometry is
 * recentered at z0 and Omega = G radius^2; on bounded sets Omega is the
 * sup of omega over the set.
 */
inline BregmanRestartResult bregman_restart_fgm(const Vector& z0, const FeasibleSet& set, const DgfGeometry& geo,
                                                double L, double lambda, double eps, const GradFn& grad,
                                                double radius = 0.0, CallCounter* counter = nullptr) {
  require_positive(L, "L");
  require_positive(lambda, "lambda");
  require_positive(eps, "eps");
  BregmanRestartResult res{z0, 0, 0, 0.0, geo};
  if (set.kind() == SetKind::WholeSpace) {
    require_positive(radius, "radius");
    res.geometry = geo.recentered(z0);
    res.Omega = geo.omega_radius(radius);
  } else {
    res.Omega = geo.omega_bound(set);
  }
  res.T = ceil_count(std::sqrt(40.0 * geo.growth_factor() * L / lambda));
  res.S = ceil_count(std::log2(3.0 * L * std::sqrt(res.Omega) / eps));
  for (long s = 0; s < res.S; ++s)
    res.z = bregman_fgm(res.z, set, res.geometry, 1.0 / L, res.T, grad, lambda, z0, counter, s);
  return res;
}

struct BregmanProxPointResult {
  Vector x_hat;
  double min_strong = 0.0;
  double bound = 0.0;  // the guaranteed ceiling on min_strong
  long T = 0;
  std::vector<double> strong_trace;
};

/**
 * Inexact Bregman proximal point with gamma = 1/(2L): each step approximately
 * minimizes phi + 2L D(., x_{t-1}). Needs a geometry with finite smoothness.
 * T = ceil(16 L Delta / eps^2) unless T_override > 0.
 */
inline BregmanProxPointResult bregman_prox_point(const Vector& x0, const FeasibleSet& set, const DgfGeometry& geo,
                                                 const GradFn& grad_phi, double L, double Delta, double eps,
                                                 long T_override = 0, CallCounter* counter = nullptr) {
  const auto ell = geo.smoothness();
  if (!ell) throw UnsupportedCombination("Bregman proximal point needs a geometry with finite smoothness");
  require_positive(L, "L");
  require_positive(eps, "eps");
  if (!(Delta >= 0.0)) throw InvalidArgument("Delta must be >= 0");
  BregmanProxPointResult res;
  res.T = T_override > 0 ? T_override : ceil_count(16.0 * L * Delta / (eps * eps));
  res.bound = *ell * std::sqrt(16.0 * L * Delta / static_cast<double>(res.T) + 10.0 / 3.0 * eps * eps);

  Vector x = x0;
  res.min_strong = std::numeric_limits<double>::infinity();
  for (long t = 1; t <= res.T; ++t) {
    const Vector center = x;
    const DgfGeometry g = set.kind() == SetKind::WholeSpace ? geo.recentered(center) : geo;
    const Vector gc = g.grad(center);
    GradFn f_grad = [&](const Vector& z) -> Vector { return grad_phi(z) + L * (g.grad(z) - gc); };
    count_grad(counter);
    const double dist = g.dual_norm(grad_phi(center)) / L;
    const BregmanRestartResult r =
        bregman_restart_fgm(center, set, geo, L * (1.0 + *ell), L, eps, f_grad, std::max(dist, 1e-300), counter);
    x = r.z;
    count_grad(counter);
    const double S = strong_measure_bregman(x, grad_phi(x), L, set, geo);
    res.strong_trace.push_back(S);
    if (S < res.min_strong) {
      res.min_strong = S;
      res.x_hat = x;
    }
  }
  return res;
}

struct SteepestDescentResult {
  Vector x_best;
  std::vector<double> dual_grad_norms;  // |grad phi(x_t)|_q, t = 0..T-1
  double min_dual_grad_norm = 0.0;
};

/**
 * Non-Euclidean steepest descent: x+ = argmin <grad/L, x'> + (1/2)|x' - x|_p^2,
 * the (1/2)|.|_p^2 variant of the prox step. phi must be L-smooth w.r.t. |.|_p.
 */
inline SteepestDescentResult steepest_descent_lp(const Vector& x0, double p, const GradFn& grad_phi, double L,
                                                 long T, CallCounter* counter = nullptr) {
  if (!(p > 1.0 && p <= 2.0)) throw InvalidArgument("p must lie in (1, 2]");
  require_positive(L, "L");
  const double q = p / (p - 1.0);
  SteepestDescentResult res;
  Vector x = x0;
  res.min_dual_grad_norm = std::numeric_limits<double>::infinity();
  for (long t = 0; t < T; ++t) {
    count_grad(counter);
    const Vector g = grad_phi(x);
    if (!g.allFinite()) throw NumericalFailure("gradient oracle returned a non-finite value", t);
    const double n = detail::lp_norm(g, q);
    res.dual_grad_norms.push_back(n);
    if (n < res.min_dual_grad_norm) {
      res.min_dual_grad_norm = n;
      res.x_best = x;
    }
    x -= detail::half_sq_norm_grad(g / L, q);
  }
  return res;
}

}  // namespace fne
