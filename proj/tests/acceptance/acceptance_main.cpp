// Acceptance runner: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <spdlog/fmt/fmt.h>

#include "fne/bregman.hpp"
#include "fne/fgm.hpp"
#include "fne/harness/brute_force.hpp"
#include "fne/harness/finite_diff.hpp"
#include "fne/harness/problems.hpp"
#include "fne/moreau.hpp"
#include "fne/saddle.hpp"
#include "fne/stationarity.hpp"
#include "test_util.hpp"

using namespace fne;
using fne::test::randn;

namespace {

struct Outcome {
  bool ok = false;
  std::string detail;
};

struct Quadratic {
  Matrix A;
  Vector b, zstar;
  double L = 1.0;

  double f(const Vector& z) const { return 0.5 * z.dot(A * z) - b.dot(z); }
  Vector grad(const Vector& z) const { return A * z - b; }
  // f(z) - f*, written so it does not cancel
  double gap(const Vector& z) const {
    const Vector e = z - zstar;
    return 0.5 * e.dot(A * e);
  }
};

Quadratic make_quadratic(std::mt19937_64& rng, Index d, double mu, double L) {
  Quadratic q;
  q.A = fne::test::spd_with_spectrum(rng, d, mu, L);
  q.b = randn(rng, d);
  q.zstar = q.A.ldlt().solve(q.b);
  q.L = L;
  return q;
}

Vector sample_in(std::mt19937_64& rng, const FeasibleSet& set, double spread = 1.0) {
  const Vector c = set.kind() == SetKind::WholeSpace ? Vector::Zero(set.dim()) : set.center();
  const double r = set.radius_bound().value_or(1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return set.project(c + spread * r * u(rng) * randn(rng, set.dim()) / std::sqrt(static_cast<double>(set.dim())));
}

// ---------------------------------------------------------------------------

Outcome fgm_rate() {
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Quadratic q = make_quadratic(rng, 50, 1e-3, 1.0);
    const double R = q.zstar.norm();
    for (long T : {10L, 50L, 100L}) {
      const Vector z = fgm(Vector::Zero(50), FeasibleSet::whole_space(50), 1.0 / q.L, T,
                           [&](const Vector& v) { return q.grad(v); });
      worst = std::max(worst, q.gap(z) / (4.0 * q.L * R * R / (T * T)));
    }
  }
  return {worst <= 1.0, fmt::format("max gap / (4LR^2/T^2) = {:.3f}", worst)};
}

Outcome fgm_inexact() {
  std::mt19937_64 rng(101);
  double worst = 0.0, worst_sandwich = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Quadratic q = make_quadratic(rng, 50, 1e-3, 1.0);
    const double R = q.zstar.norm();
    const FeasibleSet Z = FeasibleSet::ball(Vector::Zero(50), 2.0 * R);
    const bool adversarial = k % 2 == 0;
    for (long T : {10L, 50L, 100L}) {
      const double delta = q.L * R * R / (2.0 * T * T * T);
      const double emag = delta / (8.0 * R);
      std::mt19937_64 noise(1000 + k);
      auto err = [&](const Vector& v) -> Vector {
        Vector dir = adversarial ? Vector(q.zstar - v) : randn(noise, 50);
        if (dir.norm() == 0.0) dir = randn(noise, 50);
        return emag * dir.normalized();
      };
      InexactOracle o;
      o.delta = delta;
      o.L = q.L;
      o.grad = [&](const Vector& v) -> Vector { return q.grad(v) + err(v); };
      o.value = [&](const Vector& v) { return q.f(v) - 0.5 * delta; };

      // the perturbed oracle must satisfy the sandwich before it is used
      for (int s = 0; s < 200; ++s) {
        const Vector z = sample_in(rng, Z, 3.0), zp = sample_in(rng, Z, 3.0);
        const double lhs = q.f(zp) - o.value(z) - o.grad(z).dot(zp - z);
        const double upper = 0.5 * q.L * (zp - z).squaredNorm() + delta;
        const double tol = 1e-12 * (1.0 + std::abs(q.f(zp)) + std::abs(q.f(z)));
        worst_sandwich = std::max({worst_sandwich, -lhs - tol, lhs - upper - tol});
      }

      const Vector z = fgm(Vector::Zero(50), Z, 1.0 / q.L, T, o.grad);
      worst = std::max(worst, q.gap(z) / (5.0 * q.L * R * R / (T * T)));
    }
  }
  return {worst <= 1.0 && worst_sandwich <= 0.0,
          fmt::format("max gap / (5LR^2/T^2) = {:.3f}, oracle sandwich violation {:.2e}", worst,
                      std::max(0.0, worst_sandwich))};
}

Outcome restart_scheme() {
  std::mt19937_64 rng(303);
  const Index d = 20;
  double w_dist = 0.0, w_gap = 0.0, w_S = 0.0, w_halve = 0.0;
  int runs = 0;
  for (double kappa : {3.0, 10.0, 100.0}) {
    for (int k = 0; k < 5; ++k) {
      const double L = 1.0 + k;
      const Quadratic q = make_quadratic(rng, d, L / kappa, L);
      const double R = q.zstar.norm();
      for (double rel : {1e-2, 1e-6}) {
        const double eps = rel * L * R;
        const RestartParams p = restart_params_from_radius(kappa, L, R, eps);
        double prev = R;
        const Vector z = restart_fgm(Vector::Zero(d), FeasibleSet::whole_space(d), 1.0 / L, p.T, p.S,
                                     [&](const Vector& v) { return q.grad(v); }, nullptr,
                                     [&](long, const Vector& zs) {
                                       const double dist = (zs - q.zstar).norm();
                                       if (prev > 1e-10 * R) w_halve = std::max(w_halve, dist / (0.5 * prev));
                                       prev = dist;
                                     });
        w_dist = std::max(w_dist, (z - q.zstar).norm() / (eps / (3.0 * L)));
        w_gap = std::max(w_gap, q.gap(z) / (eps * eps / (18.0 * L)));
        w_S = std::max(w_S, strong_measure(z, q.grad(z), L, FeasibleSet::whole_space(d)) / (eps / 3.0));
        ++runs;
      }
    }
  }
  const bool ok = w_dist <= 1.0 && w_gap <= 1.0 && w_S <= 1.0 && w_halve <= 1.0;
  return {ok, fmt::format("{} runs; worst ratios: dist {:.2e}, gap {:.2e}, S {:.2e}, epoch halving {:.3f}", runs,
                          w_dist, w_gap, w_S, w_halve)};
}

Outcome prox_point_operator() {
  // phi(x) = |x|^4/4 - x'Bx/2 + c'x on the ball of radius 1.5; Hessian eigenvalues in [-1, 6.75]
  std::mt19937_64 rng(404);
  const Index d = 5;
  const Matrix B = fne::test::spd_with_spectrum(rng, d, 0.1, 1.0);
  const Vector c = randn(rng, d, 0.3);
  const double L = 6.75;
  const FeasibleSet X = FeasibleSet::ball(Vector::Zero(d), 1.5);
  auto phi = [&](const Vector& x) { return 0.25 * std::pow(x.squaredNorm(), 2) - 0.5 * x.dot(B * x) + c.dot(x); };
  auto grad_phi = [&](const Vector& x) -> Vector { return x.squaredNorm() * x - B * x + c; };

  double w_dist = 0.0, w_S = 0.0, w_gap = 0.0;
  for (int k = 0; k < 8; ++k) {
    Vector x = sample_in(rng, X, 2.0);
    if (k % 3 == 0) x = X.project(10.0 * x);  // on the boundary
    auto phi_L = [&](const Vector& z) { return phi(z) + L * (z - x).squaredNorm(); };
    auto grad_L = [&](const Vector& z) -> Vector { return grad_phi(z) + 2.0 * L * (z - x); };

    Vector ref = x;
    for (long i = 0; i < 1000000; ++i) ref = X.project(ref - grad_L(ref) / (3.0 * L));
    const double gap0 = phi(x) - phi_L(ref);

    for (double eps : {1e-2, 1e-5}) {
      const Vector xt = prox_point_via_fgm(x, grad_phi, L, X, eps, gap0);
      w_dist = std::max(w_dist, (xt - ref).norm() / (eps / (6.0 * L)));
      w_S = std::max(w_S, strong_measure(xt, grad_L(xt), L, X) / (eps / 2.0));
      w_gap = std::max(w_gap, (phi_L(xt) - phi_L(ref)) / (eps * eps / (24.0 * L)));
    }
  }
  const bool ok = w_dist <= 1.0 && w_S <= 1.0 && w_gap <= 1.0;
  return {ok, fmt::format("worst ratios: dist {:.2e}, S {:.2e}, gap {:.2e}", w_dist, w_S, w_gap)};
}

FeasibleSet random_set(std::mt19937_64& rng, Index d) {
  std::uniform_int_distribution<int> kind(0, 4);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  switch (kind(rng)) {
    case 0: return FeasibleSet::whole_space(d);
    case 1: {
      const Vector lo = randn(rng, d);
      Vector hi = lo;
      for (Index i = 0; i < d; ++i) hi(i) += u(rng);
      return FeasibleSet::box(lo, hi);
    }
    case 2: return FeasibleSet::ball(randn(rng, d), u(rng));
    case 3: return FeasibleSet::simplex(d, u(rng));
    default: return FeasibleSet::l1_ball(randn(rng, d), u(rng));
  }
}

Outcome stationarity_measures() {
  std::mt19937_64 rng(505);
  std::uniform_int_distribution<int> dim(1, 6);
  std::uniform_real_distribution<double> lg(-1.0, 1.0), mag(-3.0, 2.0), grow(1.0, 10.0);
  double w_order = 0.0, w_mono = 0.0, w_grid = 0.0;
  int grids = 0;
  for (int n = 0; n < 10000; ++n) {
    const Index d = n % 2 == 0 ? 1 + n % 4 / 2 : dim(rng);
    const FeasibleSet set = random_set(rng, d);
    const Vector z = sample_in(rng, set, 1.5);
    const Vector zeta = std::pow(10.0, mag(rng)) * randn(rng, d);
    const double L = std::pow(10.0, lg(rng));
    const StationarityReport m = measures(z, zeta, L, set);
    const StationarityReport m2 = measures(z, zeta, L * grow(rng), set);
    const double tol = 1e-12 * (1.0 + m.strong);
    w_order = std::max(w_order, m.weak - m.strong - tol);
    w_mono = std::max({w_mono, m.strong - m2.strong - tol, m.weak - m2.weak - tol});

    if (d <= 2) {
      double S_ref;
      if (!set.bounded()) {
        S_ref = zeta.norm();
      } else {
        const auto g = harness::grid_maximize(
            set, [&](const Vector& zp) { return -zeta.dot(zp - z) - 0.5 * L * (zp - z).squaredNorm(); }, 41, 12);
        S_ref = std::sqrt(2.0 * L * std::max(0.0, g.value));
      }
      w_grid = std::max(w_grid, std::abs(m.strong - S_ref) / std::max(1.0, m.strong));
      ++grids;
    }
  }
  const bool ok = w_order <= 0.0 && w_mono <= 0.0 && w_grid <= 1e-5;
  return {ok, fmt::format("W - S excess {:.1e}, monotonicity excess {:.1e}, grid mismatch {:.2e} over {} draws",
                          std::max(0.0, w_order), std::max(0.0, w_mono), w_grid, grids)};
}

Outcome boundary_family() {
  double worst = 0.0;
  for (double a : {0.5, 1.0, 2.0, 5.0}) {
    for (double eps : {0.1, 0.5, 1.0}) {
      auto h = [a](const Vector& y) { return -0.5 * (y(0) - a) * (y(0) - a); };
      auto gh = [a](const Vector& y) -> Vector { return Vector::Constant(1, -(y(0) - a)); };
      const auto c = constrained_concavity_check(h, gh, Vector::Constant(1, -eps), Vector::Zero(1), 1.0,
                                                 FeasibleSet::box(1, -1.0, 0.0));
      worst = std::max({worst, std::abs(c.S * c.S - (2.0 * a * eps + eps * eps)), std::abs(c.W - eps),
                        std::abs(c.lhs - (0.5 * eps * eps + a * eps)), std::abs(c.rhs - (eps * eps + a * eps))});
    }
  }
  return {worst <= 1e-12, fmt::format("12 combinations, max deviation {:.1e}", worst)};
}

Outcome end_to_end() {
  const double eps = 1e-2;
  std::string detail;
  bool ok = true;
  for (const char* name : {"strongly-concave-toy", "max-of-quadratics"}) {
    harness::ProblemDims dims;
    dims.d = std::string(name) == "max-of-quadratics" ? 10 : 5;
    const auto inst = harness::build_problem(name, 0, dims);
    SearchOptions o;
    o.termination = Termination::Adaptive;
    o.schedule.call_cap = 1e15;
    const auto r = fne_search(inst.spec, eps, eps, o);
    const auto v = fne_check(r.x, r.y, inst.spec, 2.0 * eps, 5.0 * eps);
    double max_Sy = 0.0;
    for (const auto& row : r.trace) max_Sy = std::max(max_Sy, row.S_y);
    const bool calls_ok = static_cast<double>(r.calls.grad_calls) <= r.schedule.budget;
    ok = ok && v.passed && max_Sy <= 5.0 * eps && calls_ok;
    detail += fmt::format("{}{}: {} tau={} S_x={:.4f} S_y={:.4f} max trace S_y={:.4f} calls {:.3g} <= budget {:.3g}",
                          detail.empty() ? "" : "; ", name, to_string(r.status), r.tau, v.x_side.strong,
                          v.y_side.strong, max_Sy, static_cast<double>(r.calls.grad_calls), r.schedule.budget);
  }
  return {ok, detail};
}

// psi_t(y) = min_x F^reg(x, y) + L_xx |x - x_prev|^2 with certified bounds
struct DualReference {
  double lo = 0.0, hi = 0.0;
  Vector grad;
};

DualReference reference_dual(const ProblemSpec& spec, const SolverSchedule& s, const Vector& x_prev, const Vector& y) {
  const RegDualResult r = solve_reg_dual(y, x_prev, spec, s, nullptr, 11, 80);
  const double L = spec.L_xx, Ls = 3.0 * spec.L_xx;
  const Vector g = spec.grad_x(r.x_tilde, y) + 2.0 * L * (r.x_tilde - x_prev);
  const Vector xp = spec.X.project(r.x_tilde - g / Ls);
  const double G = Ls * (r.x_tilde - xp).norm();
  DualReference ref;
  ref.hi = regularized_value(spec, s, xp, y) + L * (xp - x_prev).squaredNorm();
  ref.lo = ref.hi - G * G / (2.0 * L);
  ref.grad = r.grad_psi;
  return ref;
}

Outcome dual_oracle_sandwich() {
  const auto inst = harness::build_problem("strongly-concave-toy", 0);
  const ProblemSpec& spec = inst.spec;
  const double eps = 0.05;
  std::vector<Vector> anchors;
  SearchOptions o;
  o.observer = [&](const OuterIterate& it) {
    anchors.push_back(*it.x_prev);
    return anchors.size() < 10;
  };
  const auto run = fne_search(spec, eps, eps, o);
  const SolverSchedule& s = run.schedule;
  const double lam = s.lambda_y, Lp = spec.L_yy_plus();

  std::mt19937_64 rng(808);
  std::uniform_real_distribution<double> small(1e-4, 1e-1);
  double w_lower = 0.0, w_upper = 0.0;
  int pairs = 0;
  for (int n = 0; n < 100; ++n) {
    const Vector& x_prev = anchors[n % anchors.size()];
    const Vector y = sample_in(rng, spec.Y);
    const Vector yp = n % 2 == 0 ? sample_in(rng, spec.Y) : spec.Y.project(y + small(rng) * randn(rng, y.size()));
    const RegDualResult r = solve_reg_dual(y, x_prev, spec, s);
    const double psi_tilde = reg_dual_value(r, y, x_prev, spec, s);
    const DualReference ref = reference_dual(spec, s, x_prev, yp);
    const double lin = psi_tilde + r.grad_psi.dot(yp - y);
    const double tol = 1e-12 * (1.0 + std::abs(ref.hi));
    w_lower = std::max(w_lower, ref.hi - lin - tol);  // needs -psi(y') + lin >= 0
    w_upper = std::max(w_upper, (lin - ref.lo) - (0.5 * (Lp + lam) * (yp - y).squaredNorm() + s.delta) - tol);
    ++pairs;
  }
  const bool ok = w_lower <= 0.0 && w_upper <= 0.0 && pairs == 100;
  return {ok, fmt::format("{} pairs over {} outer iterations, delta={:.2e}; lower violation {:.1e}, upper violation {:.1e}",
                          pairs, anchors.size(), s.delta, std::max(0.0, w_lower), std::max(0.0, w_upper))};
}

Outcome danskin_gradient() {
  double worst = 0.0;
  int points = 0;
  std::mt19937_64 rng(909);
  for (const char* name : {"strongly-concave-toy", "max-of-quadratics"}) {
    const auto inst = harness::build_problem(name, 1);
    const ProblemSpec& spec = inst.spec;
    const SolverSchedule s = compute_schedule(spec, 0.1, 0.1, ScheduleOptions{DualMode::Concave, 0.0, 1e15, {}});
    for (int n = 0; n < 10; ++n) {
      const Vector x_prev = sample_in(rng, spec.X);
      Vector y = sample_in(rng, spec.Y, 0.7);
      auto psi = [&](const Vector& v) {
        const DualReference r = reference_dual(spec, s, x_prev, v);
        return 0.5 * (r.lo + r.hi);
      };
      auto grad = [&](const Vector& v) -> Vector { return reference_dual(spec, s, x_prev, v).grad; };
      worst = std::max(worst, harness::finite_diff_check(psi, grad, {y}, 1e-5).max_rel_error);
      ++points;
    }
  }
  return {worst <= 1e-4, fmt::format("{} points, max relative error {:.2e}", points, worst)};
}

Outcome moreau_identity() {
  double worst = 0.0, worst_closed = 0.0;
  bool certified = true;
  std::string kink;
  auto check = [&](const ProblemSpec& spec, const Vector& x) {
    const MoreauReport rep = moreau_gradient(x, spec);
    const StationarityReport m = measures(x, rep.gradient, 2.0 * spec.L_xx, spec.X);
    worst = std::max({worst, std::abs(rep.grad_norm - m.strong), std::abs(rep.grad_norm - m.weak)});
    return rep;
  };

  // |x| = max_{|y| <= 1} xy; its envelope is a Huber function
  ProblemSpec h;
  h.value = [](const Vector& x, const Vector& y) { return x(0) * y(0); };
  h.grad_x = [](const Vector&, const Vector& y) -> Vector { return y; };
  h.grad_y = [](const Vector& x, const Vector&) -> Vector { return x; };
  h.X = FeasibleSet::whole_space(1);
  h.Y = FeasibleSet::box(1, -1.0, 1.0);
  h.L_xx = 0.5;
  h.L_yy = 1.0;
  h.L_xy = 1.0;
  h.R_y = 1.0;
  h.Delta = 2.0;
  h.x0 = Vector::Constant(1, 2.0);
  for (double x : {2.0, -1.5, 0.3}) {
    const MoreauReport rep = check(h, Vector::Constant(1, x));
    const double expected = std::abs(x) >= 1.0 ? (x > 0 ? 1.0 : -1.0) : x;
    worst_closed = std::max(worst_closed, std::abs(rep.gradient(0) - expected) - rep.error_bar);
    // for |x| < 1 the prox point is the kink of |.|, where the duality-gap certificate only
    // shrinks like the square root of the iterate error; report it without requiring it
    if (std::abs(x) >= 1.0) certified = certified && rep.certified;
    else kink = fmt::format("; at the kink: certified {}, error bar {:.1e}", rep.certified, rep.error_bar);
  }

  const auto inst = harness::build_problem("strongly-concave-toy", 0);
  std::mt19937_64 rng(1010);
  certified = certified && check(inst.spec, inst.spec.x0).certified;
  for (int n = 0; n < 3; ++n) certified = certified && check(inst.spec, sample_in(rng, inst.spec.X)).certified;

  const bool ok = certified && worst <= 1e-8 && worst_closed <= 0.0;
  return {ok, fmt::format("identity deviation {:.1e} at 7 points; smooth points certified: {}; Huber closed form "
                          "within error bar: {}{}",
                          worst, certified, worst_closed <= 0.0, kink)};
}

Outcome bregman_geometry() {
  std::mt19937_64 rng(1111);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto in_l1_ball = [&](Index d) {
    Vector v = randn(rng, d);
    // vary sparsity so points near vertices get sampled too
    const double keep = u(rng);
    for (Index i = 0; i < d; ++i)
      if (u(rng) > keep) v(i) = 0.0;
    if (v.lpNorm<1>() == 0.0) v(0) = 1.0;
    return Vector(v / v.lpNorm<1>() * u(rng));
  };

  double sc = std::numeric_limits<double>::infinity(), growth = 0.0, grad_bound = 0.0;
  std::vector<double> cs;
  for (Index d : {10, 1000}) {
    const DgfGeometry g = lp_dgf(d);
    for (int n = 0; n < 2000; ++n) {
      const Vector a = in_l1_ball(d), b = in_l1_ball(d);
      const double h = (a - b).lpNorm<1>();
      if (h < 1e-3) continue;
      sc = std::min(sc, g.divergence(a, b) / (0.5 * h * h));
    }
    // sup of omega over the unit l1 ball is attained at the vertices
    Vector e = Vector::Zero(d);
    e(0) = 1.0;
    const double Omega1 = g.omega(e);
    const double c = Omega1 / std::log(static_cast<double>(d));
    cs.push_back(c);
    const double bound = std::sqrt(2.0 * c * g.scale() * std::log(static_cast<double>(d)));
    double sup = g.dual_norm(g.grad(e));
    for (int n = 0; n < 10000; ++n) {
      const Vector z = in_l1_ball(d);
      const double r = z.lpNorm<1>();
      growth = std::max({growth, g.omega(z) / (g.growth_factor() * r * r), g.omega(z) / (Omega1 * r * r)});
      sup = std::max(sup, g.dual_norm(g.grad(z)));
    }
    grad_bound = std::max(grad_bound, sup / bound);
  }
  const double c_cal = 0.5 * std::exp(2.0);
  const bool c_ok = cs[0] <= c_cal && cs[1] <= c_cal;

  // Euclidean reductions
  double red = 0.0;
  for (int n = 0; n < 500; ++n) {
    const Index d = 1 + n % 6;
    const FeasibleSet set = random_set(rng, d);
    const DgfGeometry g = euclidean_dgf(d);
    const Vector z = sample_in(rng, set, 1.5), zeta = randn(rng, d);
    const double L = 0.5 + u(rng);
    red = std::max(red, (bregman_prox(z, zeta, set, g) - prox_map(z, zeta, set)).norm());
    const BregmanStationarity b = bregman_measures(z, zeta, L, set, g);
    const StationarityReport e = measures(z, zeta, L, set);
    red = std::max({red, std::abs(b.strong - e.strong), std::abs(b.weak - e.weak)});
    const Vector w = sample_in(rng, set, 1.5);
    red = std::max(red, std::abs(g.divergence(w, z) - 0.5 * (w - z).squaredNorm()));
    if (n % 10 == 0) {
      const Matrix A = fne::test::spd_with_spectrum(rng, d, 0.1, 1.0);
      const Vector bb = randn(rng, d);
      GradFn gr = [&](const Vector& v) -> Vector { return A * v - bb; };
      red = std::max(red, (bregman_fgm(z, set, g, 1.0, 25, gr) - fgm(z, set, 1.0, 25, gr)).norm());
    }
  }

  const bool ok = sc >= 1.0 - 1e-9 && growth <= 1.0 + 1e-12 && grad_bound <= 1.0 + 1e-12 && c_ok && red <= 1e-12;
  return {ok, fmt::format("min D/(|.|_1^2/2) = {:.4f}, growth ratio {:.4f}, grad bound ratio {:.6f}, "
                          "c(10) = {:.3f}, c(1000) = {:.3f} (<= {:.3f}), Euclidean reduction {:.1e}",
                          sc, growth, grad_bound, cs[0], cs[1], c_cal, red)};
}

Outcome scaling() {
  const auto inst = harness::build_problem("max-of-quadratics", 0);
  const double eps_y = 0.5;
  std::vector<long> fixed, adaptive;
  for (double ex : {0.5, 0.25}) {
    SearchOptions o;
    o.schedule.call_cap = 1e15;
    fixed.push_back(static_cast<long>(fne_search(inst.spec, ex, eps_y, o).trace.size()));
    o.termination = Termination::Adaptive;
    adaptive.push_back(static_cast<long>(fne_search(inst.spec, ex, eps_y, o).trace.size()));
  }
  const double ratio = static_cast<double>(fixed[1]) / static_cast<double>(fixed[0]);
  return {ratio >= 2.0 && ratio <= 8.0,
          fmt::format("outer iterations {} -> {} (ratio {:.2f}); adaptive stopping used {} -> {}", fixed[0], fixed[1],
                      ratio, adaptive[0], adaptive[1])};
}

}  // namespace

int main() {
  logger()->set_level(spdlog::level::warn);
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "FGM rate on convex quadratics", 5, fgm_rate},
      {2, "FGM with an inexact oracle", 5, fgm_inexact},
      {3, "restarted FGM on strongly convex quadratics", 10, restart_scheme},
      {4, "proximal point operator on a nonconvex quartic", 30, prox_point_operator},
      {5, "stationarity measures", 10, stationarity_measures},
      {6, "boundary family exactness", 1, boundary_family},
      {7, "end-to-end equilibrium search", 300, end_to_end},
      {8, "inexact dual oracle sandwich", 60, dual_oracle_sandwich},
      {9, "dual gradient by finite differences", 60, danskin_gradient},
      {10, "Moreau envelope identity", 60, moreau_identity},
      {11, "Bregman geometry", 30, bregman_geometry},
      {12, "outer iteration scaling", 600, scaling},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.limit_s;
    const bool pass = out.ok && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s [%2d] %s: %s (%.2f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name,
                out.detail.c_str(), secs, c.limit_s, in_time ? "" : ", over time");
    std::fflush(stdout);
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed ? 1 : 0;
}
