#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fradi/fields.hpp"
#include "fradi/grid.hpp"

namespace fradi::cli {

enum class Case { kappa, beta, nonsym };

struct RunConfig {
  Case problem_case = Case::kappa;
  int dim = 1;
  std::vector<int> grids;       // cells per dimension, ascending
  double eps = 1e-6;
  int tile = 0;                 // 0: ceil(sqrt(N)) rounded to a multiple of 32
  double delta_mult = 4.0;
  uint64_t seed = 0;
  std::string out_dir;
  double beta0 = 0.7;           // offset of the linear beta fields
  std::string solver = "auto";  // auto | dense | tlr
  bool full_precision = false;

  void validate() const;  // throws std::invalid_argument with a one-line diagnostic
};

/// Applies `key = value` lines from a config file. Unknown keys are errors.
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Builds the problem description for one grid resolution (delta = mult * h).
ProblemSpec build_problem(const RunConfig& cfg, int cells);

const char* case_name(Case c);
Case parse_case(const std::string& s);

}  // namespace fradi::cli
