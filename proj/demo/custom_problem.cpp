// Builds a ProblemSpec by hand: a nonconvex-in-x, concave-in-y problem
//   F(x, y) = sum_i cos(x_i) + <x, y> - |y|^2 / 2
// with X = [-2, 2]^3, Y = unit ball.
#include <iostream>

#include "fne/saddle.hpp"
#include "fne/stationarity.hpp"

int main() {
  using fne::Vector;
  const fne::Index d = 3;
  fne::ProblemSpec spec;
  spec.value = [](const Vector& x, const Vector& y) {
    return x.array().cos().sum() + x.dot(y) - 0.5 * y.squaredNorm();
  };
  spec.grad_x = [](const Vector& x, const Vector& y) -> Vector { return -x.array().sin().matrix() + y; };
  spec.grad_y = [](const Vector& x, const Vector& y) -> Vector { return x - y; };
  spec.X = fne::FeasibleSet::box(d, -2.0, 2.0);
  spec.Y = fne::FeasibleSet::ball(Vector::Zero(d), 1.0);
  spec.L_xx = 1.0;  // |cos''| <= 1
  spec.L_yy = 1.0;
  spec.L_xy = 1.0;
  spec.R_y = 1.0;
  spec.x0 = Vector::Constant(d, 1.5);
  // phi(x0) <= 3 + |x0|, phi >= -3 - 2 sqrt(3)
  spec.Delta = 6.0 + spec.x0.norm() + 2.0 * std::sqrt(3.0);

  fne::SearchOptions opts;
  opts.termination = fne::Termination::Adaptive;
  opts.schedule.mode = fne::DualMode::StronglyConcave;
  opts.schedule.lambda_y = 1.0;
  opts.schedule.call_cap = 1e12;
  const auto res = fne::fne_search(spec, 0.05, 0.05, opts);
  const auto verdict = fne::fne_check(res.x, res.y, spec, 0.1, 0.25);
  std::cout << fne::to_string(res.status) << ": " << verdict.explain() << "\n";
  std::cout << "x = " << res.x.transpose() << "\n";
  return verdict.passed ? 0 : 1;
}
