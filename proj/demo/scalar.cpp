// Solves the one-dimensional test instance and prints the trace.
#include <iostream>

#include "fne/harness/problems.hpp"
#include "fne/saddle.hpp"

int main() {
  const auto inst = fne::harness::build_problem("scalar-remark54", 0);
  fne::SearchOptions opts;
  opts.termination = fne::Termination::Adaptive;
  const auto res = fne::fne_search(inst.spec, 0.05, 0.05, opts);

  std::cout << "status " << fne::to_string(res.status) << " after " << res.tau << " outer iterations\n";
  for (const auto& row : res.trace)
    std::cout << "  t=" << row.outer_t << "  S_x=" << row.S_x << "  S_y=" << row.S_y << "\n";
  std::cout << "x = " << res.x.transpose() << ", y = " << res.y.transpose() << "\n";
  std::cout << "gradient calls " << res.calls.grad_calls << " of budget " << res.schedule.budget << "\n";
}
