#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fne/common.hpp"
#include "fne/problem.hpp"

namespace fne::harness {

/// Reference saddle point with a note on how it was obtained.
struct KnownSolution {
  Vector x, y;
  std::string provenance;
};

struct ProblemInstance {
  std::string name;
  std::uint64_t seed = 0;
  ProblemSpec spec;
  std::optional<KnownSolution> solution;
};

/// Zero or negative entries select the family default.
struct ProblemDims {
  Index d = 0;
  Index k = 0;
  double a = 1.0;
};

inline std::vector<std::string> problem_names() {
  return {"quad-bilinear", "max-of-quadratics", "scalar-remark54", "strongly-concave-toy"};
}

namespace detail {

inline Matrix gaussian(std::mt19937_64& rng, Index rows, Index cols, double sd = 1.0) {
  std::normal_distribution<double> nd(0.0, sd);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = nd(rng);
  return m;
}

inline double spectral_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

/// Symmetric matrix with spectral norm exactly 1 and eigenvalues of both signs.
inline Matrix indefinite_unit(std::mt19937_64& rng, Index d) {
  const Matrix g = gaussian(rng, d, d);
  const Matrix s = 0.5 * (g + g.transpose());
  return s / spectral_norm(s);
}

inline ProblemInstance quad_bilinear(std::uint64_t seed, Index d, Index m) {
  std::mt19937_64 rng(seed);
  const Matrix Q = indefinite_unit(rng, d);
  Matrix B = gaussian(rng, d, m);
  B /= spectral_norm(B);
  const Vector c = gaussian(rng, m, 1, 0.3);
  const double Rx = 1.0;

  auto P = std::make_shared<const std::tuple<Matrix, Matrix, Vector>>(Q, B, c);
  ProblemInstance inst;
  inst.name = "quad-bilinear";
  inst.seed = seed;
  ProblemSpec& s = inst.spec;
  s.value = [P](const Vector& x, const Vector& y) {
    const auto& [Q, B, c] = *P;
    return 0.5 * x.dot(Q * x) + x.dot(B * y) + c.dot(y);
  };
  s.grad_x = [P](const Vector& x, const Vector& y) -> Vector {
    const auto& [Q, B, c] = *P;
    return Q * x + B * y;
  };
  s.grad_y = [P](const Vector& x, const Vector&) -> Vector {
    const auto& [Q, B, c] = *P;
    return B.transpose() * x + c;
  };
  s.X = FeasibleSet::ball(Vector::Zero(d), Rx);
  s.Y = FeasibleSet::box(m, -1.0, 1.0);
  s.L_xx = 1.0;
  s.L_xy = 1.0;
  s.L_yy = 1.0;  // F is linear in y; any positive bound is valid
  s.R_y = *s.Y.radius_bound();
  // phi(x) = x'Qx/2 + |B'x + c|_1, phi(0) = |c|_1, phi >= -|Q| Rx^2 / 2
  s.Delta = c.lpNorm<1>() + 0.5 * Rx * Rx;
  s.x0 = Vector::Zero(d);
  return inst;
}

inline ProblemInstance max_of_quadratics(std::uint64_t seed, Index d, Index k) {
  std::mt19937_64 rng(seed);
  std::vector<Matrix> A;
  Matrix b(d, k);
  Vector c(k);
  for (Index i = 0; i < k; ++i) {
    A.push_back(indefinite_unit(rng, d));
    b.col(i) = gaussian(rng, d, 1, 0.1);
  }
  c = gaussian(rng, k, 1, 0.1);
  const double Rx = 1.0;

  struct Data {
    std::vector<Matrix> A;
    Matrix b;
    Vector c;
  };
  auto P = std::make_shared<const Data>(Data{A, b, c});
  ProblemInstance inst;
  inst.name = "max-of-quadratics";
  inst.seed = seed;
  ProblemSpec& s = inst.spec;
  // F(x, y) = sum_i y_i f_i(x), f_i(x) = x'A_i x/2 + b_i'x + c_i
  s.value = [P](const Vector& x, const Vector& y) {
    double v = 0.0;
    for (size_t i = 0; i < P->A.size(); ++i)
      v += y(i) * (0.5 * x.dot(P->A[i] * x) + P->b.col(i).dot(x) + P->c(i));
    return v;
  };
  s.grad_x = [P](const Vector& x, const Vector& y) -> Vector {
    Vector g = P->b * y;
    for (size_t i = 0; i < P->A.size(); ++i) g.noalias() += y(i) * (P->A[i] * x);
    return g;
  };
  s.grad_y = [P](const Vector& x, const Vector&) -> Vector {
    Vector g(P->A.size());
    for (size_t i = 0; i < P->A.size(); ++i) g(i) = 0.5 * x.dot(P->A[i] * x) + P->b.col(i).dot(x) + P->c(i);
    return g;
  };
  s.X = FeasibleSet::ball(Vector::Zero(d), Rx);
  s.Y = FeasibleSet::simplex(k, 1.0);
  double Lxy2 = 0.0, lower = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < k; ++i) {
    const double bi = b.col(i).norm();
    Lxy2 += (Rx + bi) * (Rx + bi);  // |A_i| = 1
    lower = std::max(lower, c(i) - bi * Rx - 0.5 * Rx * Rx);
  }
  s.L_xx = 1.0;  // max_i |A_i|, attained at a vertex of the simplex
  s.L_xy = std::sqrt(Lxy2);
  s.L_yy = 1.0;  // F is linear in y
  s.R_y = *s.Y.radius_bound();
  s.Delta = c.maxCoeff() - lower;
  s.x0 = Vector::Zero(d);
  return inst;
}

inline ProblemInstance scalar_remark54(double a) {
  if (!(a >= 0.0) || !std::isfinite(a)) throw InvalidArgument("scalar-remark54 needs a >= 0");
  constexpr double beta = 0.1;
  ProblemInstance inst;
  inst.name = "scalar-remark54";
  ProblemSpec& s = inst.spec;
  // F(x, y) = x^2/2 + beta x y - (y - a)^2/2; at x = 0 this is h(y) = -(y - a)^2/2
  s.value = [a](const Vector& x, const Vector& y) {
    return 0.5 * x(0) * x(0) + beta * x(0) * y(0) - 0.5 * (y(0) - a) * (y(0) - a);
  };
  s.grad_x = [](const Vector& x, const Vector& y) -> Vector { return Vector::Constant(1, x(0) + beta * y(0)); };
  s.grad_y = [a](const Vector& x, const Vector& y) -> Vector {
    return Vector::Constant(1, beta * x(0) - (y(0) - a));
  };
  s.X = FeasibleSet::box(1, -1.0, 1.0);
  s.Y = FeasibleSet::box(1, -1.0, 0.0);
  s.L_xx = 1.0;
  s.L_yy = 1.0;
  s.L_xy = beta;
  s.R_y = 0.5;
  s.x0 = Vector::Constant(1, 1.0);
  const double y1 = std::clamp(a + beta, -1.0, 0.0);
  const double phi1 = 0.5 + beta * y1 - 0.5 * (y1 - a) * (y1 - a);
  s.Delta = phi1 + 0.5 * a * a;  // phi(x) >= F(x, 0) >= -a^2/2
  if (a >= beta) inst.solution = KnownSolution{Vector::Zero(1), Vector::Zero(1), "closed form: y* = 0 on the boundary"};
  return inst;
}

inline ProblemInstance strongly_concave_toy(std::uint64_t seed, Index d) {
  std::mt19937_64 rng(seed);
  const double mu = 1.0;
  const Matrix G = gaussian(rng, d, d);
  Eigen::HouseholderQR<Matrix> qr(G);
  const Matrix U = qr.householderQ();
  std::uniform_real_distribution<double> ud(0.5, 1.5);
  Vector lam(d);
  for (Index i = 0; i < d; ++i) lam(i) = ud(rng);
  const Matrix Q = U * lam.asDiagonal() * U.transpose();
  Matrix A = gaussian(rng, d, d);
  A /= spectral_norm(A);
  const Vector b = gaussian(rng, d, 1, 0.5);

  // saddle: Qx + A'y = 0, Ax - b - mu y = 0
  const Vector xs = (mu * Q + A.transpose() * A).ldlt().solve(A.transpose() * b);
  const Vector ys = (A * xs - b) / mu;

  auto P = std::make_shared<const std::tuple<Matrix, Matrix, Vector>>(Q, A, b);
  ProblemInstance inst;
  inst.name = "strongly-concave-toy";
  inst.seed = seed;
  ProblemSpec& s = inst.spec;
  s.value = [P, mu](const Vector& x, const Vector& y) {
    const auto& [Q, A, b] = *P;
    return 0.5 * x.dot(Q * x) + y.dot(A * x - b) - 0.5 * mu * y.squaredNorm();
  };
  s.grad_x = [P](const Vector& x, const Vector& y) -> Vector {
    const auto& [Q, A, b] = *P;
    return Q * x + A.transpose() * y;
  };
  s.grad_y = [P, mu](const Vector& x, const Vector& y) -> Vector {
    const auto& [Q, A, b] = *P;
    return A * x - b - mu * y;
  };
  s.X = FeasibleSet::ball(Vector::Zero(d), xs.norm() + 1.0);
  s.Y = FeasibleSet::ball(Vector::Zero(d), std::max(ys.norm(), b.norm() / mu) + 1.0);
  s.L_xx = lam.maxCoeff();
  s.L_yy = mu;
  s.L_xy = 1.0;
  s.R_y = s.Y.radius();
  s.x0 = Vector::Zero(d);
  // phi(0) = |b|^2/(2 mu) (maximizer -b/mu is inside Y), min phi = F(x*, y*)
  s.Delta = b.squaredNorm() / (2.0 * mu) - s.value(xs, ys);
  inst.solution = KnownSolution{xs, ys, "linear solve of the stationarity system"};
  return inst;
}

}  // namespace detail

/// Builds a seeded instance; `dims` overrides family defaults where it applies.
inline ProblemInstance build_problem(const std::string& name, std::uint64_t seed, const ProblemDims& dims = {}) {
  auto pick = [](Index v, Index dflt) { return v > 0 ? v : dflt; };
  ProblemInstance inst;
  if (name == "quad-bilinear") inst = detail::quad_bilinear(seed, pick(dims.d, 4), pick(dims.k, 3));
  else if (name == "max-of-quadratics") inst = detail::max_of_quadratics(seed, pick(dims.d, 10), pick(dims.k, 4));
  else if (name == "scalar-remark54") inst = detail::scalar_remark54(dims.a);
  else if (name == "strongly-concave-toy") inst = detail::strongly_concave_toy(seed, pick(dims.d, 5));
  else throw InvalidArgument("unknown problem family '" + name + "'");
  inst.seed = seed;
  inst.spec.validate();
  return inst;
}

}  // namespace fne::harness
