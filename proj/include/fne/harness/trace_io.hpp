#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fne/saddle.hpp"

namespace fne::harness {

inline const char* kTraceHeader = "outer_t,step_norm,S_x,S_y,W_x,W_y,grad_calls_cum,proj_calls_cum";

/// Shortest round-trip representation, so identical runs give identical bytes.
inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << kTraceHeader << '\n';
  for (const auto& r : rows) {
    os << r.outer_t << ',' << fmt_double(r.step_norm) << ',' << fmt_double(r.S_x) << ',' << fmt_double(r.S_y) << ','
       << fmt_double(r.W_x) << ',' << fmt_double(r.W_y) << ',' << r.grad_calls_cum << ',' << r.proj_calls_cum
       << '\n';
  }
}

inline void write_trace_csv(const std::string& path, const std::vector<TraceRow>& rows) {
  std::ofstream os(path);
  if (!os) throw InvalidArgument("cannot write " + path);
  write_trace_csv(os, rows);
}

inline std::vector<TraceRow> read_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read " + path);
  std::string line;
  if (!std::getline(in, line) || line != kTraceHeader) throw InvalidArgument(path + " is not a trace file");
  std::vector<TraceRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) throw InvalidArgument("malformed trace line: " + line);
    TraceRow r;
    r.outer_t = std::stol(cells[0]);
    r.step_norm = std::stod(cells[1]);
    r.S_x = std::stod(cells[2]);
    r.S_y = std::stod(cells[3]);
    r.W_x = std::stod(cells[4]);
    r.W_y = std::stod(cells[5]);
    r.grad_calls_cum = std::stoull(cells[6]);
    r.proj_calls_cum = std::stoull(cells[7]);
    rows.push_back(r);
  }
  return rows;
}

inline nlohmann::json summary_json(const SearchResult& r) {
  nlohmann::json j;
  j["status"] = to_string(r.status);
  j["tau"] = r.tau;
  const TraceRow* last = nullptr;
  for (const auto& row : r.trace)
    if (row.outer_t == r.tau) last = &row;
  j["S_x_final"] = last ? last->S_x : std::numeric_limits<double>::quiet_NaN();
  j["S_y_final"] = last ? last->S_y : std::numeric_limits<double>::quiet_NaN();
  j["grad_calls"] = r.calls.grad_calls;
  j["proj_calls"] = r.calls.proj_calls;
  j["budget"] = r.schedule.budget;
  j["call_limit"] = r.schedule.call_limit;
  j["wall_seconds"] = r.wall_seconds;
  return j;
}

}  // namespace fne::harness
