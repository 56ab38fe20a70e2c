#pragma once

#include <string>

#include "run_config.hpp"

namespace fradi::cli {

struct SolveOptions {
  int grid = 0;  // 0: use the last entry of cfg.grids
  std::string save_operator;
  std::string save_factor;
};

int cmd_converge(const RunConfig& cfg);
int cmd_converge_nonsym(const RunConfig& cfg);
int cmd_tlr_report(const RunConfig& cfg);
int cmd_factor_bench(const RunConfig& cfg);
int cmd_solve(const RunConfig& cfg, const SolveOptions& opts);

}  // namespace fradi::cli
