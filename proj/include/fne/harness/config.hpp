#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fne/harness/problems.hpp"
#include "fne/saddle.hpp"

namespace fne::harness {

/// Raised for malformed configuration; `errors` lists every problem found.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors)
      : std::runtime_error(join(errors)), errors_(std::move(errors)) {}
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  static std::string join(const std::vector<std::string>& e) {
    std::string s = "invalid configuration:";
    for (const auto& m : e) s += "\n  - " + m;
    return s;
  }
  std::vector<std::string> errors_;
};

struct BenchConfig {
  std::vector<std::string> problems{"scalar-remark54", "strongly-concave-toy", "quad-bilinear"};
  std::vector<double> eps{0.2, 0.1};
  unsigned threads = 1;
};

struct RunConfig {
  std::string problem = "scalar-remark54";
  ProblemDims dims;
  std::uint64_t seed = 0;
  double eps_x = 0.05;
  double eps_y = 0.05;
  DualMode mode = DualMode::Concave;
  std::optional<double> lambda_y;
  Termination termination = Termination::Adaptive;
  Selection selection = Selection::StepNorm;
  double call_cap = 1e9;
  ScheduleOverrides overrides;
  std::string out = "out";
  BenchConfig bench;

  SearchOptions search_options(const ProblemSpec& spec) const {
    SearchOptions o;
    o.schedule.mode = mode;
    o.schedule.call_cap = call_cap;
    o.schedule.overrides = overrides;
    if (mode == DualMode::StronglyConcave) o.schedule.lambda_y = lambda_y ? *lambda_y : spec.L_yy;
    o.termination = termination;
    o.selection = selection;
    return o;
  }
};

inline std::optional<DualMode> parse_mode(const std::string& s) {
  if (s == "concave") return DualMode::Concave;
  if (s == "strongly-concave") return DualMode::StronglyConcave;
  return std::nullopt;
}
inline std::optional<Termination> parse_termination(const std::string& s) {
  if (s == "fixed" || s == "fixed-budget") return Termination::FixedBudget;
  if (s == "adaptive") return Termination::Adaptive;
  return std::nullopt;
}
inline std::optional<Selection> parse_selection(const std::string& s) {
  if (s == "step") return Selection::StepNorm;
  if (s == "gradnorm") return Selection::GradNorm;
  return std::nullopt;
}

namespace detail {

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> k{"problem", "seed", "eps_x", "eps_y", "mode", "lambda_y", "termination",
                                          "select", "call_cap", "overrides", "out", "bench"};
  return k;
}

}  // namespace detail

/// Validates and applies a JSON document on top of `base`. Collects all errors before throwing.
inline RunConfig parse_config(const nlohmann::json& j, RunConfig base = {}) {
  std::vector<std::string> err;
  RunConfig c = std::move(base);
  if (!j.is_object()) throw ConfigError({"top level must be an object"});

  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& keys = detail::known_keys();
    if (std::find(keys.begin(), keys.end(), it.key()) == keys.end()) err.push_back("unknown key '" + it.key() + "'");
  }

  auto positive = [&](const nlohmann::json& v, const std::string& name, double& out) {
    if (!v.is_number()) return err.push_back(name + " must be a number");
    const double d = v.get<double>();
    if (!(d > 0.0) || !std::isfinite(d)) return err.push_back(name + " must be positive");
    out = d;
  };
  auto choice = [&](const nlohmann::json& v, const std::string& name, auto parser, auto& out) {
    if (!v.is_string()) return err.push_back(name + " must be a string");
    auto r = parser(v.get<std::string>());
    if (!r) return err.push_back(name + " has unknown value '" + v.get<std::string>() + "'");
    out = *r;
  };

  if (j.contains("problem")) {
    const auto& p = j["problem"];
    if (p.is_string()) {
      c.problem = p.get<std::string>();
    } else if (p.is_object()) {
      if (!p.contains("name") || !p["name"].is_string()) err.push_back("problem.name must be a string");
      else c.problem = p["name"].get<std::string>();
      for (const char* key : {"d", "k"}) {
        if (!p.contains(key)) continue;
        if (!p[key].is_number_integer() || p[key].get<long>() <= 0)
          err.push_back(std::string("problem.") + key + " must be a positive integer");
        else (key[0] == 'd' ? c.dims.d : c.dims.k) = p[key].get<long>();
      }
      if (p.contains("a")) {
        if (!p["a"].is_number() || p["a"].get<double>() < 0.0) err.push_back("problem.a must be a number >= 0");
        else c.dims.a = p["a"].get<double>();
      }
    } else {
      err.push_back("problem must be a string or an object");
    }
    const auto names = problem_names();
    if (std::find(names.begin(), names.end(), c.problem) == names.end())
      err.push_back("unknown problem family '" + c.problem + "'");
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) err.push_back("seed must be a non-negative integer");
    else c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("eps_x")) positive(j["eps_x"], "eps_x", c.eps_x);
  if (j.contains("eps_y")) positive(j["eps_y"], "eps_y", c.eps_y);
  if (j.contains("mode")) choice(j["mode"], "mode", parse_mode, c.mode);
  if (j.contains("lambda_y") && !j["lambda_y"].is_null()) {
    double l = 0.0;
    positive(j["lambda_y"], "lambda_y", l);
    c.lambda_y = l;
  }
  if (j.contains("termination")) choice(j["termination"], "termination", parse_termination, c.termination);
  if (j.contains("select")) choice(j["select"], "select", parse_selection, c.selection);
  if (j.contains("call_cap")) positive(j["call_cap"], "call_cap", c.call_cap);
  if (j.contains("out")) {
    if (!j["out"].is_string()) err.push_back("out must be a string");
    else c.out = j["out"].get<std::string>();
  }
  if (j.contains("overrides")) {
    const auto& o = j["overrides"];
    if (!o.is_object()) {
      err.push_back("overrides must be an object");
    } else {
      for (auto it = o.begin(); it != o.end(); ++it) {
        std::optional<long>* slot = nullptr;
        if (it.key() == "Tbar_x") slot = &c.overrides.Tbar_x;
        else if (it.key() == "Tbar_y") slot = &c.overrides.Tbar_y;
        else if (it.key() == "S_y") slot = &c.overrides.S_y;
        else if (it.key() == "S_o") slot = &c.overrides.S_o;
        if (!slot) {
          err.push_back("unknown override '" + it.key() + "'");
        } else if (!it.value().is_number_integer() || it.value().get<long>() <= 0) {
          err.push_back("override " + it.key() + " must be a positive integer");
        } else {
          *slot = it.value().get<long>();
        }
      }
    }
  }
  if (j.contains("bench")) {
    const auto& b = j["bench"];
    if (!b.is_object()) {
      err.push_back("bench must be an object");
    } else {
      if (b.contains("problems")) {
        if (!b["problems"].is_array() || b["problems"].empty()) {
          err.push_back("bench.problems must be a non-empty array");
        } else {
          c.bench.problems.clear();
          const auto names = problem_names();
          for (const auto& p : b["problems"]) {
            if (!p.is_string() || std::find(names.begin(), names.end(), p.get<std::string>()) == names.end())
              err.push_back("bench.problems has an unknown entry " + p.dump());
            else c.bench.problems.push_back(p.get<std::string>());
          }
        }
      }
      if (b.contains("eps")) {
        if (!b["eps"].is_array() || b["eps"].empty()) {
          err.push_back("bench.eps must be a non-empty array");
        } else {
          c.bench.eps.clear();
          for (const auto& e : b["eps"]) {
            if (!e.is_number() || !(e.get<double>() > 0.0)) err.push_back("bench.eps entries must be positive");
            else c.bench.eps.push_back(e.get<double>());
          }
        }
      }
      if (b.contains("threads")) {
        if (!b["threads"].is_number_integer() || b["threads"].get<long>() < 1)
          err.push_back("bench.threads must be a positive integer");
        else c.bench.threads = b["threads"].get<unsigned>();
      }
    }
  }
  if (c.mode == DualMode::Concave && c.lambda_y) err.push_back("lambda_y is only meaningful in strongly-concave mode");
  if (!err.empty()) throw ConfigError(std::move(err));
  return c;
}

inline RunConfig load_config(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file '" + path + "'"});
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError({std::string("JSON parse error: ") + e.what()});
  }
  return parse_config(j, std::move(base));
}

}  // namespace fne::harness
