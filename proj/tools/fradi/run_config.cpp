#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fradi::cli {

const char* case_name(Case c) {
  switch (c) {
    case Case::kappa: return "kappa";
    case Case::beta: return "beta";
    default: return "nonsym";
  }
}

Case parse_case(const std::string& s) {
  if (s == "kappa") return Case::kappa;
  if (s == "beta") return Case::beta;
  if (s == "nonsym") return Case::nonsym;
  throw std::invalid_argument("unknown case '" + s + "' (expected kappa, beta, or nonsym)");
}

void RunConfig::validate() const {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
  if (problem_case == Case::nonsym && dim != 1)
    throw std::invalid_argument("the non-symmetric formulation is one-dimensional");
  if (grids.empty()) throw std::invalid_argument("no grids given");
  for (int g : grids)
    if (g < 4) throw std::invalid_argument("grids must have at least 4 cells");
  if (!std::is_sorted(grids.begin(), grids.end()))
    throw std::invalid_argument("grids must be ascending");
  if (!(eps > 0)) throw std::invalid_argument("eps must be positive");
  if (tile < 0 || (tile > 0 && tile < 2)) throw std::invalid_argument("tile must be >= 2");
  if (!(delta_mult > 0)) throw std::invalid_argument("delta-mult must be positive");
  if (solver != "auto" && solver != "dense" && solver != "tlr")
    throw std::invalid_argument("solver must be auto, dense, or tlr");
  if (solver == "tlr" && problem_case == Case::nonsym)
    throw std::invalid_argument(
        "the non-symmetric operator is not symmetric positive definite; "
        "it is solved by the dense LU path");
  // delta must fit inside the volume-constraint collar on the coarsest grid
  double h0 = 2.0 / grids.front();
  if (delta_mult * h0 > 1.0 + 1e-12)
    throw std::invalid_argument("window radius delta-mult * h exceeds the collar width");
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<int> parse_grid_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) continue;
    out.push_back(std::stoi(tok));
  }
  return out;
}

}  // namespace

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    lineno++;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected 'key = value'");
    std::string key = trim(t.substr(0, eq));
    std::string val = trim(t.substr(eq + 1));
    if (key == "dim")
      cfg.dim = std::stoi(val);
    else if (key == "case")
      cfg.problem_case = parse_case(val);
    else if (key == "grids")
      cfg.grids = parse_grid_list(val);
    else if (key == "eps")
      cfg.eps = std::stod(val);
    else if (key == "tile")
      cfg.tile = std::stoi(val);
    else if (key == "delta_mult")
      cfg.delta_mult = std::stod(val);
    else if (key == "seed")
      cfg.seed = std::stoull(val);
    else if (key == "out")
      cfg.out_dir = val;
    else if (key == "beta0")
      cfg.beta0 = std::stod(val);
    else if (key == "solver")
      cfg.solver = val;
    else if (key == "full_precision")
      cfg.full_precision = val == "1" || val == "true";
    else
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": unknown key '" + key + "'");
  }
}

ProblemSpec build_problem(const RunConfig& cfg, int cells) {
  ProblemSpec spec;
  spec.dim = cfg.dim;
  if (cfg.dim == 1) {
    spec.interior = {{-1, 0}, {1, 0}};
    spec.exterior = {{-2, 0}, {2, 0}};
  } else {
    spec.interior = {{-1, -1}, {1, 1}};
    spec.exterior = {{-2, -2}, {2, 2}};
  }
  spec.window.delta = cfg.delta_mult * 2.0 / cells;
  spec.source = constant_field(1.0);
  switch (cfg.problem_case) {
    case Case::kappa:
      spec.formulation = Formulation::symmetric_variable_kappa;
      spec.kappa = cfg.dim == 1 ? kappa_bump_1d() : kappa_two_bumps_2d();
      spec.beta = constant_field(0.75);
      break;
    case Case::beta:
      spec.formulation = Formulation::symmetric_variable_beta;
      spec.kappa = constant_field(1.0);
      spec.beta = cfg.dim == 1 ? linear_field(cfg.beta0, 0.1) : beta_bump_2d();
      break;
    case Case::nonsym:
      spec.formulation = Formulation::nonsymmetric_variable_beta;
      spec.kappa = constant_field(1.0);
      spec.beta = linear_field(cfg.beta0, 0.1);
      break;
  }
  return spec;
}

}  // namespace fradi::cli
