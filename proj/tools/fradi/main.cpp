#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "run_config.hpp"

using namespace fradi::cli;

namespace {

struct CommonFlags {
  std::string config_path;
  std::string case_str;
  std::string grids_str;
};

void add_common(CLI::App* cmd, RunConfig& cfg, CommonFlags& fl) {
  cmd->add_option("--config", fl.config_path, "config file with key = value lines");
  cmd->add_option("--dim", cfg.dim, "spatial dimension (1 or 2)");
  cmd->add_option("--case", fl.case_str, "coefficient case: kappa, beta, nonsym");
  cmd->add_option("--grids", fl.grids_str, "comma-separated cell counts, e.g. 64,128,256");
  cmd->add_option("--eps", cfg.eps, "tile accuracy / factorization tolerance");
  cmd->add_option("--tile", cfg.tile, "tile size m (default: sqrt(N) rounded up to 32)");
  cmd->add_option("--delta-mult", cfg.delta_mult, "window radius in units of h");
  cmd->add_option("--seed", cfg.seed, "random seed for the compression sampling");
  cmd->add_option("--out", cfg.out_dir, "directory for CSV output");
  cmd->add_option("--beta0", cfg.beta0, "offset of the linear beta field");
  cmd->add_option("--solver", cfg.solver, "auto, dense, or tlr");
  cmd->add_flag("--full-precision", cfg.full_precision, "print 17 significant digits");
}

void finalize(RunConfig& cfg, const CommonFlags& fl, const CLI::App* cmd) {
  // config file first, explicit command-line flags override
  if (!fl.config_path.empty()) {
    RunConfig file_cfg = cfg;
    apply_config_file(file_cfg, fl.config_path);
    RunConfig merged = file_cfg;
    if (cmd->count("--dim")) merged.dim = cfg.dim;
    if (cmd->count("--eps")) merged.eps = cfg.eps;
    if (cmd->count("--tile")) merged.tile = cfg.tile;
    if (cmd->count("--delta-mult")) merged.delta_mult = cfg.delta_mult;
    if (cmd->count("--seed")) merged.seed = cfg.seed;
    if (cmd->count("--out")) merged.out_dir = cfg.out_dir;
    if (cmd->count("--beta0")) merged.beta0 = cfg.beta0;
    if (cmd->count("--solver")) merged.solver = cfg.solver;
    if (cmd->count("--full-precision")) merged.full_precision = cfg.full_precision;
    cfg = merged;
  }
  if (cmd->count("--case")) cfg.problem_case = parse_case(fl.case_str);
  if (cmd->count("--grids")) {
    cfg.grids.clear();
    std::string tok;
    std::stringstream ss(fl.grids_str);
    while (std::getline(ss, tok, ','))
      if (!tok.empty()) cfg.grids.push_back(std::stoi(tok));
  }
  cfg.validate();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fradi: variable-order variable-diffusivity fractional diffusion solver"};
  app.require_subcommand(1);

  RunConfig cfg;
  CommonFlags fl;
  SolveOptions sopts;

  auto* converge = app.add_subcommand("converge", "symmetric-formulation convergence study");
  auto* converge_ns =
      app.add_subcommand("converge-nonsym", "non-symmetric study, treated vs untreated");
  auto* report = app.add_subcommand("tlr-report", "TLR memory and rank report");
  auto* bench = app.add_subcommand("factor-bench", "TLR build/factor/solve timings");
  auto* solve = app.add_subcommand("solve", "solve one problem and emit the solution");
  for (CLI::App* c : {converge, converge_ns, report, bench, solve}) add_common(c, cfg, fl);
  solve->add_option("--grid", sopts.grid, "cells per dimension (default: last of --grids)");
  solve->add_option("--save-operator", sopts.save_operator, "write the TLR operator snapshot");
  solve->add_option("--save-factor", sopts.save_factor, "write the TLR factor snapshot");

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (sub == converge_ns && !sub->count("--case")) cfg.problem_case = Case::nonsym;
    finalize(cfg, fl, sub);
    if (sub == converge) return cmd_converge(cfg);
    if (sub == converge_ns) return cmd_converge_nonsym(cfg);
    if (sub == report) return cmd_tlr_report(cfg);
    if (sub == bench) return cmd_factor_bench(cfg);
    return cmd_solve(cfg, sopts);
  } catch (const std::exception& e) {
    std::cerr << "fradi: " << e.what() << "\n";
    return 1;
  }
}
