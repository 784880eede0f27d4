#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fne/common.hpp"

namespace fne {

inline constexpr double kFeasibilityTol = 1e-9;

enum class SetKind { WholeSpace, Box, Ball, Simplex, L1Ball };

inline const char* to_string(SetKind k) {
  switch (k) {
    case SetKind::WholeSpace: return "whole";
    case SetKind::Box: return "box";
    case SetKind::Ball: return "ball";
    case SetKind::Simplex: return "simplex";
    case SetKind::L1Ball: return "l1-ball";
  }
  return "?";
}

namespace detail {

/// Euclidean projection onto {z >= 0, sum z = scale} by sorting.
inline Vector project_simplex(const Vector& v, double scale) {
  const Index d = v.size();
  if (scale == 0.0) return Vector::Zero(d);
  std::vector<double> u(v.data(), v.data() + d);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0, theta = 0.0;
  for (Index j = 0; j < d; ++j) {
    cumsum += u[j];
    const double t = (cumsum - scale) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  return (v.array() - theta).max(0.0).matrix();
}

}  // namespace detail

/**
 * Closed convex feasible set with an exact Euclidean projection.
 *
 * Degenerate members (zero radius, lo == hi, zero scale) are allowed and
 * behave as single points.
 */
class FeasibleSet {
 public:
  static FeasibleSet whole_space(Index dim) {
    if (dim <= 0) throw InvalidArgument("whole space needs a positive dimension");
    FeasibleSet s;
    s.kind_ = SetKind::WholeSpace;
    s.dim_ = dim;
    return s;
  }

  static FeasibleSet box(Vector lo, Vector hi) {
    if (lo.size() == 0 || lo.size() != hi.size()) throw InvalidArgument("box bounds must have equal positive size");
    require_finite(lo, "box lower bound");
    require_finite(hi, "box upper bound");
    if ((lo.array() > hi.array()).any()) throw InvalidArgument("box has lo > hi");
    FeasibleSet s;
    s.kind_ = SetKind::Box;
    s.dim_ = lo.size();
    s.lo_ = std::move(lo);
    s.hi_ = std::move(hi);
    return s;
  }

  static FeasibleSet box(Index dim, double lo, double hi) {
    return box(Vector::Constant(dim, lo), Vector::Constant(dim, hi));
  }

  static FeasibleSet ball(Vector center, double radius) {
    if (center.size() == 0) throw InvalidArgument("ball center is empty");
    require_finite(center, "ball center");
    if (!(radius >= 0.0) || !std::isfinite(radius)) throw InvalidArgument("ball radius must be finite and >= 0");
    FeasibleSet s;
    s.kind_ = SetKind::Ball;
    s.dim_ = center.size();
    s.center_ = std::move(center);
    s.radius_ = radius;
    return s;
  }

  static FeasibleSet simplex(Index dim, double scale = 1.0) {
    if (dim <= 0) throw InvalidArgument("simplex needs a positive dimension");
    if (!(scale >= 0.0) || !std::isfinite(scale)) throw InvalidArgument("simplex scale must be finite and >= 0");
    FeasibleSet s;
    s.kind_ = SetKind::Simplex;
    s.dim_ = dim;
    s.radius_ = scale;
    return s;
  }

  static FeasibleSet l1_ball(Vector center, double radius) {
    if (center.size() == 0) throw InvalidArgument("l1-ball center is empty");
    require_finite(center, "l1-ball center");
    if (!(radius >= 0.0) || !std::isfinite(radius)) throw InvalidArgument("l1-ball radius must be finite and >= 0");
    FeasibleSet s;
    s.kind_ = SetKind::L1Ball;
    s.dim_ = center.size();
    s.center_ = std::move(center);
    s.radius_ = radius;
    return s;
  }

  SetKind kind() const { return kind_; }
  Index dim() const { return dim_; }
  bool bounded() const { return kind_ != SetKind::WholeSpace; }

  const Vector& lower() const { return lo_; }
  const Vector& upper() const { return hi_; }
  /// Radius for ball/l1-ball, scale for simplex.
  double radius() const { return radius_; }

  /// Center used by radius_bound(); zero for whole space.
  Vector center() const {
    switch (kind_) {
      case SetKind::WholeSpace: return Vector::Zero(dim_);
      case SetKind::Box: return 0.5 * (lo_ + hi_);
      case SetKind::Ball:
      case SetKind::L1Ball: return center_;
      case SetKind::Simplex: return Vector::Constant(dim_, radius_ / static_cast<double>(dim_));
    }
    return Vector::Zero(dim_);
  }

  /// Every member is within this Euclidean distance of center(); nullopt if unbounded.
  std::optional<double> radius_bound() const {
    switch (kind_) {
      case SetKind::WholeSpace: return std::nullopt;
      case SetKind::Box: return 0.5 * (hi_ - lo_).norm();
      case SetKind::Ball:
      case SetKind::L1Ball: return radius_;
      case SetKind::Simplex: return radius_ * std::sqrt(1.0 - 1.0 / static_cast<double>(dim_));
    }
    return std::nullopt;
  }

  bool contains(const Vector& z, double tol = kFeasibilityTol) const {
    if (z.size() != dim_ || !z.allFinite()) return false;
    switch (kind_) {
      case SetKind::WholeSpace: return true;
      case SetKind::Box:
        return ((z - lo_).array() >= -tol).all() && ((hi_ - z).array() >= -tol).all();
      case SetKind::Ball: return (z - center_).norm() <= radius_ + tol;
      case SetKind::Simplex:
        return (z.array() >= -tol).all() && std::abs(z.sum() - radius_) <= tol * std::max(1.0, radius_);
      case SetKind::L1Ball: return (z - center_).lpNorm<1>() <= radius_ + tol;
    }
    return false;
  }

  Vector project(const Vector& z) const {
    require_same_dim(z, dim_, "point");
    require_finite(z, "point");
    switch (kind_) {
      case SetKind::WholeSpace: return z;
      case SetKind::Box: return z.cwiseMax(lo_).cwiseMin(hi_);
      case SetKind::Ball: {
        const Vector diff = z - center_;
        const double n = diff.norm();
        if (n <= radius_) return z;
        return center_ + (radius_ / n) * diff;
      }
      case SetKind::Simplex: return detail::project_simplex(z, radius_);
      case SetKind::L1Ball: {
        const Vector diff = z - center_;
        if (diff.lpNorm<1>() <= radius_) return z;
        const Vector mag = detail::project_simplex(diff.cwiseAbs(), radius_);
        return center_ + mag.cwiseProduct(diff.unaryExpr([](double v) { return v < 0.0 ? -1.0 : 1.0; }));
      }
    }
    return z;
  }

  /// Support function max_{z in set} <g, z>; +inf on whole space unless g = 0.
  double support(const Vector& g) const {
    require_same_dim(g, dim_, "support direction");
    switch (kind_) {
      case SetKind::WholeSpace:
        return g.isZero(0.0) ? 0.0 : std::numeric_limits<double>::infinity();
      case SetKind::Box: return g.cwiseProduct(lo_).cwiseMax(g.cwiseProduct(hi_)).sum();
      case SetKind::Ball: return g.dot(center_) + radius_ * g.norm();
      case SetKind::Simplex: return radius_ * g.maxCoeff();
      case SetKind::L1Ball: return g.dot(center_) + radius_ * g.lpNorm<Eigen::Infinity>();
    }
    return std::numeric_limits<double>::infinity();
  }

  std::string describe() const {
    std::string s = to_string(kind_);
    s += "(d=" + std::to_string(dim_) + ")";
    return s;
  }

 private:
  FeasibleSet() = default;

  SetKind kind_ = SetKind::WholeSpace;
  Index dim_ = 0;
  Vector lo_, hi_, center_;
  double radius_ = 0.0;
};

/// prox_{z,Z}(zeta) = argmin_{z' in Z} <zeta, z'> + 0.5 |z' - z|^2 = Proj_Z(z - zeta).
inline Vector prox_map(const Vector& z, const Vector& zeta, const FeasibleSet& set, CallCounter* counter = nullptr) {
  require_same_dim(z, set.dim(), "prox center");
  require_same_dim(zeta, set.dim(), "prox direction");
  count_proj(counter);
  return set.project(z - zeta);
}

}  // namespace fne
