#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

namespace fne {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Bad input that the caller can fix (dimensions, non-positive constants,
/// non-finite coordinates, unknown names).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition does not hold, e.g. a point outside its set.
class PreconditionViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The iteration produced NaN/Inf. Carries where it happened.
class NumericalFailure : public std::runtime_error {
 public:
  NumericalFailure(const std::string& what, long iteration, long epoch = -1)
      : std::runtime_error(what + " (iteration " + std::to_string(iteration) +
                           (epoch >= 0 ? ", epoch " + std::to_string(epoch) : std::string()) + ")"),
        iteration_(iteration),
        epoch_(epoch) {}

  long iteration() const { return iteration_; }
  long epoch() const { return epoch_; }

 private:
  long iteration_;
  long epoch_;
};

/// A geometry/set pairing that has no implemented prox-mapping.
class UnsupportedCombination : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Something that must hold mathematically did not (beyond rounding).
class InternalConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The iteration schedule asks for more oracle calls than the configured cap.
class ScheduleTooLarge : public std::runtime_error {
 public:
  ScheduleTooLarge(double budget, double cap)
      : std::runtime_error("schedule needs " + std::to_string(budget) +
                           " oracle calls, cap is " + std::to_string(cap)),
        budget_(budget),
        cap_(cap) {}
  double budget() const { return budget_; }
  double cap() const { return cap_; }

 private:
  double budget_;
  double cap_;
};

/// Gradient and projection counts. Passed by pointer; nullptr means "don't count".
struct CallCounter {
  std::uint64_t grad_calls = 0;
  std::uint64_t proj_calls = 0;
};

inline void count_grad(CallCounter* c, std::uint64_t n = 1) {
  if (c) c->grad_calls += n;
}
inline void count_proj(CallCounter* c, std::uint64_t n = 1) {
  if (c) c->proj_calls += n;
}

inline bool all_finite(const Vector& v) { return v.allFinite(); }

inline void require_finite(const Vector& v, const char* name) {
  if (!v.allFinite()) throw InvalidArgument(std::string(name) + " has non-finite coordinates");
}

inline void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw InvalidArgument(std::string(name) + " must be positive and finite, got " + std::to_string(v));
}

inline void require_same_dim(const Vector& a, Index d, const char* name) {
  if (a.size() != d)
    throw InvalidArgument(std::string(name) + " has dimension " + std::to_string(a.size()) +
                          ", expected " + std::to_string(d));
}

/// Iteration count from a real-valued lower bound: ceil, at least 1.
inline long ceil_count(double x) {
  if (std::isnan(x)) throw InvalidArgument("iteration bound is NaN");
  if (x <= 1.0) return 1;
  if (x > 9.0e18) throw InvalidArgument("iteration bound overflows");
  return static_cast<long>(std::ceil(x));
}

/// Library logger. Level comes from MINMAX_FNE_LOG (error|info|debug), default info.
inline std::shared_ptr<spdlog::logger> logger() {
  static std::shared_ptr<spdlog::logger> log = [] {
    auto l = std::make_shared<spdlog::logger>("minmax-fne",
                                              std::make_shared<spdlog::sinks::stderr_sink_mt>());
    l->set_pattern("[%l] %v");
    spdlog::level::level_enum lvl = spdlog::level::info;
    if (const char* env = std::getenv("MINMAX_FNE_LOG")) {
      std::string s(env);
      if (s == "error") lvl = spdlog::level::err;
      else if (s == "debug") lvl = spdlog::level::debug;
      else if (s == "info") lvl = spdlog::level::info;
      else if (s == "off") lvl = spdlog::level::off;
    }
    l->set_level(lvl);
    return l;
  }();
  return log;
}

}  // namespace fne
