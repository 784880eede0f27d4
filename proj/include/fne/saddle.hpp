#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include "fne/common.hpp"
#include "fne/fgm.hpp"
#include "fne/geometry.hpp"
#include "fne/problem.hpp"
#include "fne/stationarity.hpp"

namespace fne {

enum class DualMode { Concave, StronglyConcave };
enum class Termination { FixedBudget, Adaptive };
enum class Selection { StepNorm, GradNorm };

inline const char* to_string(DualMode m) { return m == DualMode::Concave ? "concave" : "strongly-concave"; }
inline const char* to_string(Termination t) { return t == Termination::FixedBudget ? "fixed" : "adaptive"; }
inline const char* to_string(Selection s) { return s == Selection::StepNorm ? "step" : "gradnorm"; }

/// Iteration counts that may only be raised above the computed ones.
struct ScheduleOverrides {
  std::optional<long> Tbar_x, Tbar_y, S_y, S_o;
};

struct ScheduleOptions {
  DualMode mode = DualMode::Concave;
  double lambda_y = 0.0;  // strongly-concave mode only: the concavity modulus of F(x, .)
  double call_cap = 1e9;
  ScheduleOverrides overrides;
};

struct SolverSchedule {
  DualMode mode = DualMode::Concave;
  bool regularize = true;  // subtract (lambda_y/2)|y - ybar|^2 from F
  double lambda_y = 0.0;
  double Theta = 0.0;
  double Theta_plus = 0.0;
  double delta = 0.0;
  bool delta_third_term_dropped = false;
  double gamma_x = 0.0;
  double gamma_y = 0.0;
  long Tbar_x = 0;
  long Tbar_y = 0;
  long S_y = 0;
  long T_o = 11;
  long S_o = 0;
  /// T_o * S_o * S_y * Tbar_x * Tbar_y: x-gradient calls made inside the dual loop.
  double budget = 0.0;
  /// Every gradient call a fixed-budget run makes, including the per-iteration
  /// primal solve, the dual-gradient evaluations and the trace diagnostics.
  double call_limit = 0.0;

  double calls_per_outer() const {
    const double inner = static_cast<double>(T_o) * static_cast<double>(S_o) + 1.0;
    return (static_cast<double>(Tbar_y) * static_cast<double>(S_y) + 1.0) * inner + 2.0;
  }
};

namespace detail {

inline double log_sum_exp(std::initializer_list<double> xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

inline long raise_only(long computed, const std::optional<long>& o, const char* name) {
  if (!o) return computed;
  if (*o < computed)
    throw InvalidArgument(std::string("override for ") + name + " (" + std::to_string(*o) +
                          ") is below the computed value " + std::to_string(computed));
  return *o;
}

}  // namespace detail

/// Parameter schedule that guarantees a (2 eps_x, 5 eps_y)-FNE in the concave case.
inline SolverSchedule compute_schedule(const ProblemSpec& spec, double eps_x, double eps_y,
                                       const ScheduleOptions& opts = {}) {
  spec.validate();
  require_positive(eps_x, "eps_x");
  require_positive(eps_y, "eps_y");
  require_positive(opts.call_cap, "call cap");

  SolverSchedule s;
  s.mode = opts.mode;
  const double Lxx = spec.L_xx, Ry = spec.R_y, Delta = spec.Delta;
  const double Lp = spec.L_yy_plus();
  if (opts.mode == DualMode::Concave) {
    s.regularize = true;
    s.lambda_y = eps_y / Ry;
  } else {
    require_positive(opts.lambda_y, "lambda_y");
    s.regularize = false;
    s.lambda_y = opts.lambda_y;
  }
  const double lam = s.lambda_y;
  s.Theta = spec.L_yy * Ry * Ry;
  s.Theta_plus = Lp * Ry * Ry;
  s.gamma_x = 1.0 / (2.0 * Lxx);
  s.gamma_y = 1.0 / (Lp + lam);

  s.Tbar_x = ceil_count(10.0 * Lxx * (Delta + 2.0 * eps_y * Ry) / (eps_x * eps_x));
  s.Tbar_y = ceil_count(std::sqrt(40.0 * (Lp + lam) / lam));
  s.Tbar_x = detail::raise_only(s.Tbar_x, opts.overrides.Tbar_x, "Tbar_x");
  s.Tbar_y = detail::raise_only(s.Tbar_y, opts.overrides.Tbar_y, "Tbar_y");

  const double Tx = static_cast<double>(s.Tbar_x), Ty = static_cast<double>(s.Tbar_y);
  double delta = std::min(8.0 * eps_y * Ry, s.Theta / (2.0 * Ty * Ty * Ty));
  const double gap_theta = s.Theta_plus - s.Theta;
  if (gap_theta > 0.0 && Delta > 0.0) {
    delta = std::min(delta, std::sqrt(Delta * gap_theta / (Tx * Ty * Ty)));
  } else {
    s.delta_third_term_dropped = true;
    logger()->warn("L_xy = 0 or Delta = 0: dropping the third term of the oracle accuracy");
  }
  s.delta = delta;

  // logs in natural base, converted at the end
  const double ln2 = std::log(2.0);
  const double log_Sy_arg = std::max(std::log(Ty), std::log(s.Theta_plus) - std::log(delta));
  s.S_y = ceil_count(2.0 * log_Sy_arg / ln2);
  const double bracket = detail::log_sum_exp({std::log(Lxx) - 2.0 * std::log(eps_x),
                                              std::log(2.0 * s.Theta_plus) - 2.0 * std::log(delta),
                                              -std::log(12.0) - std::log(delta)});
  const double head = std::log(72.0) + std::log(3.0 * Delta + 2.0 * s.Theta + 6.0 * eps_y * Ry);
  s.S_o = ceil_count(0.5 * (head + bracket) / ln2);
  s.S_y = detail::raise_only(s.S_y, opts.overrides.S_y, "S_y");
  s.S_o = detail::raise_only(s.S_o, opts.overrides.S_o, "S_o");

  s.budget = static_cast<double>(s.T_o) * static_cast<double>(s.S_o) * static_cast<double>(s.S_y) * Tx * Ty;
  s.call_limit = Tx * s.calls_per_outer();
  if (!std::isfinite(s.call_limit)) throw InvalidArgument("schedule is not finite");
  logger()->info("schedule: Tbar_x={} Tbar_y={} S_y={} T_o={} S_o={} delta={:.3e} budget={:.6g} call_limit={:.6g}",
                 s.Tbar_x, s.Tbar_y, s.S_y, s.T_o, s.S_o, s.delta, s.budget, s.call_limit);
  if (s.call_limit > opts.call_cap) throw ScheduleTooLarge(s.call_limit, opts.call_cap);
  return s;
}

/// F^reg(x, y) = F(x, y) - (lambda_y/2)|y - ybar|^2 (no regularizer in strongly-concave mode).
inline double regularized_value(const ProblemSpec& spec, const SolverSchedule& s, const Vector& x, const Vector& y) {
  if (!spec.value) throw InvalidArgument("problem has no value oracle");
  const double v = spec.value(x, y);
  return s.regularize ? v - 0.5 * s.lambda_y * (y - spec.anchor()).squaredNorm() : v;
}

struct RegDualResult {
  Vector x_tilde;
  Vector grad_psi;  // inexact gradient of psi_t at y
};

/**
 * Inexact oracle for psi_t(y) = min_x F^reg(x, y) + L_xx|x - x_prev|^2.
 * Inner problem is L_xx-strongly convex and 3L_xx-smooth; solved with T_o x S_o FGM steps.
 */
inline RegDualResult solve_reg_dual(const Vector& y, const Vector& x_prev, const ProblemSpec& spec,
                                    const SolverSchedule& s, CallCounter* counter = nullptr, long T_inner = 0,
                                    long S_inner = 0) {
  const long T = T_inner > 0 ? T_inner : s.T_o;
  const long S = S_inner > 0 ? S_inner : s.S_o;
  const double w = 1.0 / s.gamma_x;
  GradFn g = [&](const Vector& x) -> Vector { return spec.grad_x(x, y) + w * (x - x_prev); };
  RegDualResult r;
  r.x_tilde = restart_fgm(x_prev, spec.X, 2.0 * s.gamma_x / 3.0, T, S, g, counter);
  count_grad(counter);
  r.grad_psi = spec.grad_y(r.x_tilde, y);
  if (s.regularize) r.grad_psi -= s.lambda_y * (y - spec.anchor());
  if (!r.grad_psi.allFinite()) throw NumericalFailure("dual gradient is not finite", 0);
  return r;
}

/// Value used in the sandwich inequality for the dual oracle: F^reg_t(x_tilde, y) + delta/4.
inline double reg_dual_value(const RegDualResult& r, const Vector& y, const Vector& x_prev, const ProblemSpec& spec,
                             const SolverSchedule& s) {
  return regularized_value(spec, s, r.x_tilde, y) + spec.L_xx * (r.x_tilde - x_prev).squaredNorm() + 0.25 * s.delta;
}

struct TraceRow {
  long outer_t = 0;
  double step_norm = 0.0;
  double S_x = 0.0;
  double S_y = 0.0;
  double W_x = 0.0;
  double W_y = 0.0;
  double grad_norm_x = 0.0;
  std::uint64_t grad_calls_cum = 0;
  std::uint64_t proj_calls_cum = 0;
};

/// Passed to the per-iteration observer; return false from it to stop the run.
struct OuterIterate {
  long t = 0;
  const Vector* x_prev = nullptr;
  const Vector* x = nullptr;
  const Vector* y = nullptr;
  const TraceRow* row = nullptr;
};

enum class SearchStatus { Converged, Completed, BudgetExceeded, Stopped };

inline const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Converged: return "converged";
    case SearchStatus::Completed: return "completed";
    case SearchStatus::BudgetExceeded: return "budget-exceeded";
    case SearchStatus::Stopped: return "stopped";
  }
  return "?";
}

struct SearchOptions {
  ScheduleOptions schedule;
  Termination termination = Termination::FixedBudget;
  Selection selection = Selection::StepNorm;
  std::function<bool(const OuterIterate&)> observer;
};

struct SearchResult {
  Vector x, y;
  long tau = 0;
  SearchStatus status = SearchStatus::Completed;
  SolverSchedule schedule;
  std::vector<TraceRow> trace;
  CallCounter calls;
  double wall_seconds = 0.0;
};

/**
 * Nested inexact proximal point search for an approximate first-order Nash
 * equilibrium. In fixed-budget mode all Tbar_x outer iterations run and tau is
 * picked by the selection rule; adaptive mode stops at the first iterate with
 * S_X <= 2 eps_x.
 */
inline SearchResult fne_search(const ProblemSpec& spec, double eps_x, double eps_y, const SearchOptions& opts = {}) {
  const auto t_start = std::chrono::steady_clock::now();
  SearchResult res;
  res.schedule = compute_schedule(spec, eps_x, eps_y, opts.schedule);
  const SolverSchedule& s = res.schedule;
  CallCounter* cnt = &res.calls;
  const Vector ybar = spec.anchor();

  Vector x_prev = spec.x0;
  double best_key = std::numeric_limits<double>::infinity();
  double best_sx = std::numeric_limits<double>::infinity();
  Vector best_sx_x, best_sx_y;
  long best_sx_t = 0;
  res.status = opts.termination == Termination::FixedBudget ? SearchStatus::Completed : SearchStatus::BudgetExceeded;

  for (long t = 1; t <= s.Tbar_x; ++t) {
    // maximize psi_t by minimizing -psi_t
    GradFn neg_grad_psi = [&](const Vector& y) -> Vector { return -solve_reg_dual(y, x_prev, spec, s, cnt).grad_psi; };
    // the dual loop's gradient is the inner solve, which counts its own oracle calls
    CallCounter dual_loop;
    const Vector y_t = restart_fgm(ybar, spec.Y, s.gamma_y, s.Tbar_y, s.S_y, neg_grad_psi, &dual_loop);
    count_proj(cnt, dual_loop.proj_calls);
    const Vector x_t = solve_reg_dual(y_t, x_prev, spec, s, cnt).x_tilde;

    count_grad(cnt, 2);
    const Vector gx = spec.grad_x(x_t, y_t);
    const Vector gy = spec.grad_y(x_t, y_t);
    const StationarityReport mx = measures(x_t, gx, spec.L_xx, spec.X, cnt);
    const StationarityReport my = measures(y_t, -gy, spec.L_yy, spec.Y, cnt);

    TraceRow row;
    row.outer_t = t;
    row.step_norm = (x_t - x_prev).norm();
    row.S_x = mx.strong;
    row.S_y = my.strong;
    row.W_x = mx.weak;
    row.W_y = my.weak;
    row.grad_norm_x = gx.norm();
    row.grad_calls_cum = res.calls.grad_calls;
    row.proj_calls_cum = res.calls.proj_calls;
    res.trace.push_back(row);
    logger()->debug("outer {}: step={:.3e} S_x={:.3e} S_y={:.3e}", t, row.step_norm, row.S_x, row.S_y);

    const double key = opts.selection == Selection::StepNorm ? row.step_norm : row.grad_norm_x;
    if (key < best_key) {
      best_key = key;
      res.tau = t;
      res.x = x_t;
      res.y = y_t;
    }
    if (row.S_x < best_sx) {
      best_sx = row.S_x;
      best_sx_x = x_t;
      best_sx_y = y_t;
      best_sx_t = t;
    }

    bool stop = false;
    if (opts.termination == Termination::Adaptive && row.S_x <= 2.0 * eps_x) {
      res.status = SearchStatus::Converged;
      res.tau = t;
      res.x = x_t;
      res.y = y_t;
      stop = true;
    }
    if (!stop && opts.observer) {
      OuterIterate it{t, &x_prev, &x_t, &y_t, &res.trace.back()};
      if (!opts.observer(it)) {
        res.status = SearchStatus::Stopped;
        stop = true;
      }
    }
    x_prev = x_t;
    if (stop) break;
  }
  if (res.status == SearchStatus::BudgetExceeded) {
    res.tau = best_sx_t;
    res.x = best_sx_x;
    res.y = best_sx_y;
    logger()->warn("adaptive run used all {} outer iterations without S_x <= {}", s.Tbar_x, 2.0 * eps_x);
  }
  if (static_cast<double>(res.calls.grad_calls) > s.call_limit)
    throw InternalConsistencyError("gradient calls exceeded the schedule's call limit");
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return res;
}

struct ComplexityFactors {
  double T_x = 0.0;  // L_xx Delta / eps_x^2
  double T_y = 0.0;  // sqrt(L_yy^+ R_y / eps_y)
};

inline ComplexityFactors complexity_factors(const ProblemSpec& spec, double eps_x, double eps_y) {
  require_positive(eps_x, "eps_x");
  require_positive(eps_y, "eps_y");
  return {spec.L_xx * spec.Delta / (eps_x * eps_x), std::sqrt(spec.L_yy_plus() * spec.R_y / eps_y)};
}

}  // namespace fne
