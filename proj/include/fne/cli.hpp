#pragma once

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fne/harness/config.hpp"
#include "fne/harness/invariants.hpp"
#include "fne/harness/plot.hpp"
#include "fne/harness/problems.hpp"
#include "fne/harness/trace_io.hpp"
#include "fne/saddle.hpp"

namespace fne {

namespace cli_exit {
constexpr int ok = 0;
constexpr int check_failed = 1;
constexpr int bad_config = 2;
constexpr int budget_exceeded = 3;
constexpr int runtime_error = 4;
}  // namespace cli_exit

namespace detail {

inline nlohmann::json schedule_json(const SolverSchedule& s, const ComplexityFactors& cf) {
  return {{"mode", to_string(s.mode)},
          {"regularize", s.regularize},
          {"lambda_y", s.lambda_y},
          {"Theta", s.Theta},
          {"Theta_plus", s.Theta_plus},
          {"delta", s.delta},
          {"delta_third_term_dropped", s.delta_third_term_dropped},
          {"gamma_x", s.gamma_x},
          {"gamma_y", s.gamma_y},
          {"Tbar_x", s.Tbar_x},
          {"Tbar_y", s.Tbar_y},
          {"S_y", s.S_y},
          {"T_o", s.T_o},
          {"S_o", s.S_o},
          {"budget", s.budget},
          {"call_limit", s.call_limit},
          {"complexity_T_x", cf.T_x},
          {"complexity_T_y", cf.T_y}};
}

inline void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw harness::ConfigError({"cannot create output directory '" + dir + "': " + ec.message()});
}

struct BenchRow {
  std::string problem;
  double eps = 0.0;
  std::string status;
  long tau = 0;
  double S_x = 0.0, S_y = 0.0;
  std::uint64_t grad_calls = 0, proj_calls = 0;
  double budget = 0.0, T_x = 0.0, T_y = 0.0, wall = 0.0;
  std::string error;
};

inline BenchRow bench_one(const harness::RunConfig& cfg, const std::string& name, double eps) {
  BenchRow row;
  row.problem = name;
  row.eps = eps;
  try {
    const auto inst = harness::build_problem(name, cfg.seed, name == cfg.problem ? cfg.dims : harness::ProblemDims{});
    const auto cf = complexity_factors(inst.spec, eps, eps);
    row.T_x = cf.T_x;
    row.T_y = cf.T_y;
    const auto res = fne_search(inst.spec, eps, eps, cfg.search_options(inst.spec));
    const auto j = harness::summary_json(res);
    row.status = to_string(res.status);
    row.tau = res.tau;
    row.S_x = j["S_x_final"].get<double>();
    row.S_y = j["S_y_final"].get<double>();
    row.grad_calls = res.calls.grad_calls;
    row.proj_calls = res.calls.proj_calls;
    row.budget = res.schedule.budget;
    row.wall = res.wall_seconds;
  } catch (const std::exception& e) {
    row.status = "error";
    row.error = e.what();
  }
  return row;
}

}  // namespace detail

/// Entry point of the minmax-fne command line tool. Returns the process exit code.
inline int run_cli(int argc, const char* const* argv) {
  using harness::RunConfig;
  CLI::App app{"First-order Nash equilibria of nonconvex-concave min-max problems"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, problem, mode, termination, select;
  std::uint64_t seed = 0;
  double eps_x = 0.0, eps_y = 0.0, call_cap = 0.0, lambda_y = 0.0;
  auto* o_config = app.add_option("--config", config_path, "JSON run configuration");
  auto* o_out = app.add_option("--out", out_dir, "output directory");
  auto* o_seed = app.add_option("--seed", seed, "instance seed");
  auto* o_ex = app.add_option("--eps-x", eps_x, "primal tolerance");
  auto* o_ey = app.add_option("--eps-y", eps_y, "dual tolerance");
  auto* o_mode = app.add_option("--mode", mode, "concave | strongly-concave");
  auto* o_term = app.add_option("--termination", termination, "fixed | adaptive");
  auto* o_sel = app.add_option("--select", select, "step | gradnorm");
  auto* o_prob = app.add_option("--problem", problem, "problem family");
  auto* o_cap = app.add_option("--call-cap", call_cap, "refuse schedules above this many gradient calls");
  auto* o_lam = app.add_option("--lambda-y", lambda_y, "concavity modulus for strongly-concave mode");

  auto* c_schedule = app.add_subcommand("schedule", "print the parameter schedule as JSON");
  auto* c_solve = app.add_subcommand("solve", "run the solver, write trace.csv and summary.json");
  auto* c_check = app.add_subcommand("check", "run the invariant suites");
  auto* c_bench = app.add_subcommand("bench", "sweep problems x tolerances, write bench.csv");
  auto* c_plot = app.add_subcommand("plot", "render SVG plots from a trace CSV");
  std::string trace_path;
  c_plot->add_option("--trace", trace_path, "trace CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli_exit::bad_config;
  }

  RunConfig cfg;
  try {
    if (*o_config) cfg = harness::load_config(config_path);
    std::vector<std::string> err;
    if (*o_out) cfg.out = out_dir;
    if (*o_seed) cfg.seed = seed;
    if (*o_ex) (eps_x > 0.0 ? void(cfg.eps_x = eps_x) : err.push_back("--eps-x must be positive"));
    if (*o_ey) (eps_y > 0.0 ? void(cfg.eps_y = eps_y) : err.push_back("--eps-y must be positive"));
    if (*o_cap) (call_cap > 0.0 ? void(cfg.call_cap = call_cap) : err.push_back("--call-cap must be positive"));
    if (*o_lam) (lambda_y > 0.0 ? void(cfg.lambda_y = lambda_y) : err.push_back("--lambda-y must be positive"));
    if (*o_mode) {
      if (auto m = harness::parse_mode(mode)) cfg.mode = *m;
      else err.push_back("--mode must be concave or strongly-concave");
    }
    if (*o_term) {
      if (auto t = harness::parse_termination(termination)) cfg.termination = *t;
      else err.push_back("--termination must be fixed or adaptive");
    }
    if (*o_sel) {
      if (auto s = harness::parse_selection(select)) cfg.selection = *s;
      else err.push_back("--select must be step or gradnorm");
    }
    if (*o_prob) {
      const auto names = harness::problem_names();
      if (std::find(names.begin(), names.end(), problem) == names.end())
        err.push_back("--problem must be one of quad-bilinear, max-of-quadratics, scalar-remark54, strongly-concave-toy");
      else cfg.problem = problem;
    }
    if (!err.empty()) throw harness::ConfigError(err);
  } catch (const harness::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return cli_exit::bad_config;
  }

  try {
    if (*c_check) {
      const auto results = harness::run_invariant_suite(cfg.seed);
      int failed = 0;
      for (const auto& r : results) {
        std::cout << (r.passed ? "ok   " : "FAIL ") << r.module << ": " << r.name;
        if (!r.detail.empty()) std::cout << " (" << r.detail << ")";
        std::cout << "\n";
        failed += r.passed ? 0 : 1;
      }
      std::cout << results.size() - failed << "/" << results.size() << " invariants hold\n";
      return failed ? cli_exit::check_failed : cli_exit::ok;
    }

    if (*c_plot) {
      detail::ensure_dir(cfg.out);
      for (const auto& f : harness::plot_trace(harness::read_trace_csv(trace_path), cfg.out)) std::cout << f << "\n";
      return cli_exit::ok;
    }

    if (*c_bench) {
      detail::ensure_dir(cfg.out);
      std::vector<std::pair<std::string, double>> jobs;
      for (const auto& p : cfg.bench.problems)
        for (double e : cfg.bench.eps) jobs.emplace_back(p, e);
      std::vector<detail::BenchRow> rows(jobs.size());
      const size_t width = std::max(1u, cfg.bench.threads);
      for (size_t start = 0; start < jobs.size(); start += width) {
        std::vector<std::future<detail::BenchRow>> batch;
        for (size_t i = start; i < std::min(jobs.size(), start + width); ++i)
          batch.push_back(std::async(std::launch::async, detail::bench_one, std::cref(cfg), jobs[i].first, jobs[i].second));
        for (size_t i = 0; i < batch.size(); ++i) rows[start + i] = batch[i].get();
      }
      const std::string path = cfg.out + "/bench.csv";
      std::ofstream os(path);
      os << "problem,eps,status,tau,S_x_final,S_y_final,grad_calls,proj_calls,budget,T_x,T_y,wall_seconds\n";
      int errors = 0;
      for (const auto& r : rows) {
        os << r.problem << ',' << harness::fmt_double(r.eps) << ',' << r.status << ',' << r.tau << ','
           << harness::fmt_double(r.S_x) << ',' << harness::fmt_double(r.S_y) << ',' << r.grad_calls << ','
           << r.proj_calls << ',' << harness::fmt_double(r.budget) << ',' << harness::fmt_double(r.T_x) << ','
           << harness::fmt_double(r.T_y) << ',' << harness::fmt_double(r.wall) << '\n';
        if (!r.error.empty()) {
          std::cerr << r.problem << " eps=" << r.eps << ": " << r.error << "\n";
          ++errors;
        }
      }
      std::cout << path << "\n";
      return errors ? cli_exit::runtime_error : cli_exit::ok;
    }

    const auto inst = harness::build_problem(cfg.problem, cfg.seed, cfg.dims);
    const SearchOptions opts = cfg.search_options(inst.spec);

    if (*c_schedule) {
      const auto s = compute_schedule(inst.spec, cfg.eps_x, cfg.eps_y, opts.schedule);
      nlohmann::json j = detail::schedule_json(s, complexity_factors(inst.spec, cfg.eps_x, cfg.eps_y));
      j["problem"] = cfg.problem;
      j["eps_x"] = cfg.eps_x;
      j["eps_y"] = cfg.eps_y;
      std::cout << j.dump(2) << "\n";
      return cli_exit::ok;
    }

    if (*c_solve) {
      detail::ensure_dir(cfg.out);
      const auto res = fne_search(inst.spec, cfg.eps_x, cfg.eps_y, opts);
      harness::write_trace_csv(cfg.out + "/trace.csv", res.trace);
      nlohmann::json j = harness::summary_json(res);
      std::ofstream(cfg.out + "/summary.json") << j.dump(2) << "\n";
      std::cout << j.dump(2) << "\n";
      return res.status == SearchStatus::BudgetExceeded ? cli_exit::budget_exceeded : cli_exit::ok;
    }
  } catch (const harness::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return cli_exit::bad_config;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return cli_exit::bad_config;
  } catch (const ScheduleTooLarge& e) {
    std::cerr << e.what() << "\n";
    return cli_exit::budget_exceeded;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return cli_exit::runtime_error;
  }
  return cli_exit::ok;
}

}  // namespace fne
