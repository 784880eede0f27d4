#pragma once

#include <functional>
#include <string>

#include "fne/common.hpp"
#include "fne/geometry.hpp"

namespace fne {

using ValueFn = std::function<double(const Vector& x, const Vector& y)>;
using PartialGradFn = std::function<Vector(const Vector& x, const Vector& y)>;

/**
 * min_{x in X} max_{y in Y} F(x, y) with F(., y) L_xx-smooth (possibly
 * nonconvex), F(x, .) concave and L_yy-smooth, cross Lipschitz constant L_xy.
 *
 * Delta upper-bounds phi(x0) - min_X phi where phi = max_Y F(., y); R_y bounds
 * the distance of Y's points from its center.
 */
struct ProblemSpec {
  ValueFn value;  // optional for the solver, required by value-based checks
  PartialGradFn grad_x;
  PartialGradFn grad_y;
  FeasibleSet X = FeasibleSet::whole_space(1);
  FeasibleSet Y = FeasibleSet::whole_space(1);
  double L_xx = 0.0;
  double L_yy = 0.0;
  double L_xy = 0.0;
  double R_y = 0.0;
  double Delta = 0.0;
  Vector x0;
  Vector ybar;  // empty means Y.center()

  double L_yy_plus() const { return L_yy + L_xy * L_xy / L_xx; }

  Vector anchor() const { return ybar.size() ? ybar : Y.center(); }

  void validate() const {
    if (!grad_x || !grad_y) throw InvalidArgument("problem is missing a gradient oracle");
    require_positive(L_xx, "L_xx");
    require_positive(L_yy, "L_yy");
    if (!(L_xy >= 0.0) || !std::isfinite(L_xy)) throw InvalidArgument("L_xy must be finite and >= 0");
    require_positive(R_y, "R_y");
    if (!(Delta >= 0.0) || !std::isfinite(Delta)) throw InvalidArgument("Delta must be finite and >= 0");
    if (!Y.bounded()) throw InvalidArgument("Y must be bounded");
    require_same_dim(x0, X.dim(), "x0");
    require_finite(x0, "x0");
    if (!X.contains(x0)) throw PreconditionViolation("x0 is not in X");
    const Vector yb = anchor();
    require_same_dim(yb, Y.dim(), "ybar");
    if (!Y.contains(yb)) throw PreconditionViolation("ybar is not in Y");
    // every y in Y must lie within R_y of the anchor
    const double reach = *Y.radius_bound() + (yb - Y.center()).norm();
    if (reach > R_y * (1.0 + 1e-12) + 1e-12)
      throw InvalidArgument("R_y = " + std::to_string(R_y) + " is smaller than the radius of Y around ybar (" +
                            std::to_string(reach) + ")");
  }
};

}  // namespace fne
