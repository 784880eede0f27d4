#pragma once

#include <random>
#include <string>
#include <vector>

#include "fne/bregman.hpp"
#include "fne/fgm.hpp"
#include "fne/geometry.hpp"
#include "fne/harness/finite_diff.hpp"
#include "fne/harness/problems.hpp"
#include "fne/harness/trace_io.hpp"
#include "fne/moreau.hpp"
#include "fne/saddle.hpp"
#include "fne/stationarity.hpp"

namespace fne::harness {

struct InvariantResult {
  std::string module;
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline std::vector<FeasibleSet> sample_sets(std::mt19937_64& rng, Index d) {
  std::normal_distribution<double> nd;
  Vector c(d);
  for (Index i = 0; i < d; ++i) c(i) = nd(rng);
  return {FeasibleSet::whole_space(d), FeasibleSet::box(d, -0.5, 1.5), FeasibleSet::ball(c, 1.3),
          FeasibleSet::simplex(d, 2.0), FeasibleSet::l1_ball(c, 0.7)};
}

inline Vector randn(std::mt19937_64& rng, Index d, double sd = 1.0) {
  std::normal_distribution<double> nd(0.0, sd);
  Vector v(d);
  for (Index i = 0; i < d; ++i) v(i) = nd(rng);
  return v;
}

inline std::string fmt_err(double e) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "worst %.3e", e);
  return buf;
}

}  // namespace detail

/// Fast property checks across all modules (the `check` subcommand). Deterministic for a given seed.
inline std::vector<InvariantResult> run_invariant_suite(std::uint64_t seed = 0) {
  std::vector<InvariantResult> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  auto add = [&](const char* module, const char* name, auto&& body) {
    InvariantResult r{module, name, false, ""};
    try {
      body(r);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out.push_back(std::move(r));
  };

  add("geometry", "projection is feasible, idempotent and nonexpansive", [&](InvariantResult& r) {
    double worst = 0.0;
    bool ok = true;
    for (Index d : {1, 2, 7}) {
      for (const auto& set : detail::sample_sets(rng, d)) {
        for (int k = 0; k < 200; ++k) {
          const Vector a = detail::randn(rng, d, 3.0), b = detail::randn(rng, d, 3.0);
          const Vector pa = set.project(a), pb = set.project(b);
          ok = ok && set.contains(pa) && set.contains(pb);
          worst = std::max(worst, (set.project(pa) - pa).norm());
          worst = std::max(worst, (pa - pb).norm() - (a - b).norm());
        }
      }
    }
    r.passed = ok && worst <= 1e-12;
    r.detail = detail::fmt_err(worst);
  });

  add("geometry", "prox_map equals projection of z - zeta", [&](InvariantResult& r) {
    bool ok = true;
    for (const auto& set : detail::sample_sets(rng, 4)) {
      const Vector z = set.project(detail::randn(rng, 4)), zeta = detail::randn(rng, 4);
      ok = ok && (prox_map(z, zeta, set) - set.project(z - zeta)).norm() == 0.0;
    }
    r.passed = ok;
  });

  add("stationarity", "W <= S and S nondecreasing in L", [&](InvariantResult& r) {
    double worst = 0.0;
    for (int k = 0; k < 2000; ++k) {
      const Index d = 1 + static_cast<Index>(unif(rng) * 5);
      const auto sets = detail::sample_sets(rng, d);
      const auto& set = sets[k % sets.size()];
      const Vector z = set.project(detail::randn(rng, d, 2.0)), zeta = detail::randn(rng, d, 2.0);
      const double L = std::exp(4.0 * unif(rng) - 2.0), L2 = L * (1.0 + 3.0 * unif(rng));
      const auto m = measures(z, zeta, L, set);
      worst = std::max(worst, (m.weak - m.strong) / (1.0 + m.strong) - 1e-9);
      worst = std::max(worst, m.strong - strong_measure(z, zeta, L2, set) * (1.0 + 1e-9) - 1e-12);
    }
    r.passed = worst <= 0.0;
    r.detail = detail::fmt_err(worst);
  });

  add("stationarity", "unconstrained S = W = |zeta|", [&](InvariantResult& r) {
    const auto set = FeasibleSet::whole_space(3);
    const Vector z = detail::randn(rng, 3), zeta = detail::randn(rng, 3);
    const auto m = measures(z, zeta, 1.7, set);
    const double e = std::max(std::abs(m.strong - zeta.norm()), std::abs(m.weak - zeta.norm()));
    r.passed = e <= 1e-12 * (1.0 + zeta.norm());
    r.detail = detail::fmt_err(e);
  });

  add("fgm", "convex quadratic rate 4LR^2/T^2", [&](InvariantResult& r) {
    const Index d = 20;
    const Matrix G = detail::randn(rng, d * d).reshaped(d, d);
    const Matrix Q = G.transpose() * G / static_cast<double>(d);
    const Vector b = detail::randn(rng, d);
    const double L = Eigen::SelfAdjointEigenSolver<Matrix>(Q).eigenvalues().maxCoeff();
    const Vector xs = Q.ldlt().solve(b);
    auto f = [&](const Vector& x) { return 0.5 * x.dot(Q * x) - b.dot(x); };
    const Vector z0 = Vector::Zero(d);
    const double R = xs.norm();
    double worst = -1.0;
    for (long T : {10, 40}) {
      const Vector z = fgm(z0, FeasibleSet::whole_space(d), 1.0 / L, T, [&](const Vector& x) -> Vector { return Q * x - b; });
      worst = std::max(worst, (f(z) - f(xs)) / (4.0 * L * R * R / (T * T)));
    }
    r.passed = worst <= 1.0;
    r.detail = "gap / bound " + detail::fmt_err(worst);
  });

  add("saddle", "schedule uses T_o = 11 and respects the call cap", [&](InvariantResult& r) {
    const auto inst = build_problem("scalar-remark54", 0);
    const auto s = compute_schedule(inst.spec, 0.05, 0.05);
    bool threw = false;
    try {
      ScheduleOptions o;
      o.call_cap = 10.0;
      compute_schedule(inst.spec, 0.05, 0.05, o);
    } catch (const ScheduleTooLarge&) {
      threw = true;
    }
    r.passed = s.T_o == 11 && threw && s.budget <= s.call_limit;
  });

  add("saddle", "scalar instance reaches an FNE with S_y <= 5 eps_y throughout", [&](InvariantResult& r) {
    const auto inst = build_problem("scalar-remark54", 0);
    SearchOptions o;
    o.termination = Termination::Adaptive;
    const auto res = fne_search(inst.spec, 0.05, 0.05, o);
    bool sy_ok = true;
    for (const auto& row : res.trace) sy_ok = sy_ok && row.S_y <= 5.0 * 0.05;
    const auto v = fne_check(res.x, res.y, inst.spec, 0.1, 0.25);
    r.passed = res.status == SearchStatus::Converged && sy_ok && v.passed &&
               static_cast<double>(res.calls.grad_calls) <= res.schedule.budget;
    r.detail = v.explain();
  });

  add("moreau", "|x| at x = 2: x+ = 1, gradient 1", [&](InvariantResult& r) {
    ProblemSpec s;
    s.value = [](const Vector& x, const Vector& y) { return x(0) * y(0); };
    s.grad_x = [](const Vector&, const Vector& y) -> Vector { return y; };
    s.grad_y = [](const Vector& x, const Vector&) -> Vector { return x; };
    s.X = FeasibleSet::box(1, -3.0, 3.0);
    s.Y = FeasibleSet::box(1, -1.0, 1.0);
    s.L_xx = 0.5;
    s.L_yy = 1.0;
    s.L_xy = 1.0;
    s.R_y = 1.0;
    s.Delta = 3.0;
    s.x0 = Vector::Zero(1);
    const auto rep = moreau_gradient(Vector::Constant(1, 2.0), s);
    const double e = std::max(std::abs(rep.x_plus(0) - 1.0), std::abs(rep.gradient(0) - 1.0));
    r.passed = rep.certified && e <= 1e-5;
    r.detail = detail::fmt_err(e);
  });

  add("moreau", "constrained concavity inequality on random concave quadratics", [&](InvariantResult& r) {
    double worst = -1.0;
    for (int k = 0; k < 50; ++k) {
      const Index d = 3;
      const Matrix G = detail::randn(rng, d * d).reshaped(d, d);
      const Matrix H = -(G.transpose() * G) / 3.0;
      const Vector c = detail::randn(rng, d);
      const double L = Eigen::SelfAdjointEigenSolver<Matrix>(-H).eigenvalues().maxCoeff() + 1e-12;
      const auto Y = FeasibleSet::box(detail::randn(rng, d, 0.1).array() - 1.0, detail::randn(rng, d, 0.1).array() + 1.0);
      auto h = [&](const Vector& y) { return 0.5 * y.dot(H * y) + c.dot(y); };
      GradFn gh = [&](const Vector& y) -> Vector { return H * y + c; };
      const Vector y = Y.project(detail::randn(rng, d)), yp = Y.project(detail::randn(rng, d));
      const auto cc = constrained_concavity_check(h, gh, y, yp, L, Y);
      worst = std::max(worst, cc.lhs - cc.rhs);
    }
    r.passed = worst <= 1e-10;
    r.detail = "lhs - rhs " + detail::fmt_err(worst);
  });

  add("bregman", "Euclidean geometry reduces to projection and Euclidean measures", [&](InvariantResult& r) {
    double worst = 0.0;
    for (const auto& set : detail::sample_sets(rng, 4)) {
      const auto geo = euclidean_dgf(4);
      const Vector z = set.project(detail::randn(rng, 4)), zeta = detail::randn(rng, 4);
      worst = std::max(worst, (bregman_prox(z, zeta, set, geo) - set.project(z - zeta)).norm());
      const auto b = bregman_measures(z, zeta, 1.3, set, geo);
      const auto e = measures(z, zeta, 1.3, set);
      worst = std::max({worst, std::abs(b.strong - e.strong), std::abs(b.weak - e.weak)});
    }
    r.passed = worst <= 1e-12;
    r.detail = detail::fmt_err(worst);
  });

  add("bregman", "lp distance-generating function is 1-strongly convex w.r.t. l1", [&](InvariantResult& r) {
    double worst = std::numeric_limits<double>::infinity();
    for (Index d : {10, 100}) {
      const auto geo = lp_dgf(d);
      for (int k = 0; k < 200; ++k) {
        const Vector a = detail::randn(rng, d), b = a + detail::randn(rng, d, 0.3);
        const double ratio = geo.divergence(b, a) / (0.5 * std::pow((b - a).lpNorm<1>(), 2));
        worst = std::min(worst, ratio);
      }
    }
    r.passed = worst >= 1.0 - 1e-9;
    r.detail = "min D/(|.|_1^2/2) = " + fmt_double(worst);
  });

  add("harness", "problem gradients match finite differences", [&](InvariantResult& r) {
    double worst = 0.0;
    for (const auto& name : problem_names()) {
      const auto inst = build_problem(name, 7);
      std::vector<std::pair<Vector, Vector>> pts;
      for (int k = 0; k < 3; ++k)
        pts.emplace_back(inst.spec.X.project(detail::randn(rng, inst.spec.X.dim())),
                         inst.spec.Y.project(detail::randn(rng, inst.spec.Y.dim())));
      worst = std::max(worst, finite_diff_check(inst.spec, pts, 1e-5).max_rel_error);
    }
    r.passed = worst <= 1e-6;
    r.detail = detail::fmt_err(worst);
  });

  add("harness", "problem instances are reproducible from (name, seed)", [&](InvariantResult& r) {
    bool ok = true;
    for (const auto& name : problem_names()) {
      const auto a = build_problem(name, 11), b = build_problem(name, 11);
      const Vector x = a.spec.X.project(Vector::Constant(a.spec.X.dim(), 0.3));
      const Vector y = a.spec.Y.project(Vector::Constant(a.spec.Y.dim(), 0.2));
      ok = ok && a.spec.value(x, y) == b.spec.value(x, y) && a.spec.L_xy == b.spec.L_xy && a.spec.Delta == b.spec.Delta;
    }
    r.passed = ok;
  });

  return out;
}

}  // namespace fne::harness
