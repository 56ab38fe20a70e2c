#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <optional>

#include "csv.hpp"
#include "fradi/assembly.hpp"
#include "fradi/clustering.hpp"
#include "fradi/dense.hpp"
#include "fradi/rng.hpp"
#include "fradi/snapshot.hpp"
#include "fradi/tlr.hpp"
#include "fradi/tlr_cholesky.hpp"

namespace fradi::cli {

namespace {

struct Solution {
  Grid grid;
  std::vector<double> u;
};

struct Artifacts {
  std::optional<TLRMatrix> tlr;
  std::optional<TLRFactor> factor;
};

bool use_tlr(const RunConfig& cfg) {
  if (cfg.problem_case == Case::nonsym) return false;
  if (cfg.solver == "dense") return false;
  if (cfg.solver == "tlr") return true;
  return cfg.dim == 2;  // auto: dense in 1D, TLR in 2D
}

Solution solve_grid(const RunConfig& cfg, int cells, bool treated = true,
                    Artifacts* keep = nullptr) {
  ProblemSpec spec = build_problem(cfg, cells);
  Grid grid = make_grid(spec, cells);
  AssemblyOptions aopts;
  aopts.singularity_treatment = treated;

  if (use_tlr(cfg)) {
    int m = cfg.tile > 0 ? cfg.tile : default_tile_size(grid.n());
    TilePartition part = order_points(grid.interior, m, cfg.dim);
    grid.apply_ordering(part.perm);
    DiscreteOperator op = assemble(spec, grid, aopts);
    TlrAssembleOptions topts;
    topts.seed = cfg.seed;
    TLRMatrix A = assemble_tlr(op, part, cfg.eps, topts);
    TLRFactor L = factorize(A, cfg.eps);
    auto f = rhs(spec, grid);
    auto u = solve(L, f);
    if (keep) {
      keep->tlr = std::move(A);
      keep->factor = std::move(L);
    }
    return {std::move(grid), std::move(u)};
  }

  DiscreteOperator op = assemble(spec, grid, aopts);
  Mat A = assemble_dense(op, 1 << 14);
  auto f = rhs(spec, grid);
  std::vector<double> u;
  if (op.symmetric)
    u = dense_solve(dense_cholesky(A), f);
  else
    u = dense_solve(dense_lu(A), f);
  return {std::move(grid), std::move(u)};
}

struct PairError {
  double max_rel = 0;
  double l2_rel = 0;
};

// Successive-grid error at coincident lattice sites (strictly interior nodes
// appear on both grids); staggered midpoints use the two-cell average.
PairError pair_error(const Solution& coarse, const Solution& fine) {
  const Grid& gc = coarse.grid;
  const Grid& gf = fine.grid;
  double un_max = 0, un_l2 = 0;
  for (double v : fine.u) {
    un_max = std::max(un_max, std::abs(v));
    un_l2 += v * v;
  }
  un_l2 = std::sqrt(un_l2);
  double e_max = 0, e_l2 = 0;
  for (int i = 0; i < gc.n(); i++) {
    double d;
    if (!gc.staggered) {
      auto [ix, iy] = gc.lat_coords(gc.lat_of_interior[i]);
      int64_t fl = gf.lat_linear(2 * ix, gc.dim == 2 ? 2 * iy : 0);
      int fi = gf.interior_at_lat[fl];
      if (fi < 0) continue;
      d = coarse.u[i] - fine.u[fi];
    } else {
      int ix = static_cast<int>(gc.lat_of_interior[i]);
      int fl = gf.interior_at_lat[2 * ix], fr = gf.interior_at_lat[2 * ix + 1];
      if (fl < 0 || fr < 0) continue;
      d = coarse.u[i] - 0.5 * (fine.u[fl] + fine.u[fr]);
    }
    e_max = std::max(e_max, std::abs(d));
    e_l2 += d * d;
  }
  return {e_max / un_max, std::sqrt(e_l2) / un_l2};
}

// Least-squares slope of log2(err) against log2(h).
double fit_rate(const std::vector<double>& h, const std::vector<double>& err) {
  const int n = static_cast<int>(h.size());
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double xs = 0, ys = 0, xx = 0, xy = 0;
  for (int i = 0; i < n; i++) {
    double x = std::log2(h[i]), y = std::log2(err[i]);
    xs += x;
    ys += y;
    xx += x * x;
    xy += x * y;
  }
  return (n * xy - xs * ys) / (n * xx - xs * xs);
}

void check_nested(const RunConfig& cfg, int min_grids) {
  if (static_cast<int>(cfg.grids.size()) < min_grids)
    throw std::invalid_argument("convergence studies need at least " +
                                std::to_string(min_grids) + " grids");
  for (size_t q = 0; q + 1 < cfg.grids.size(); q++)
    if (cfg.grids[q + 1] != 2 * cfg.grids[q])
      throw std::invalid_argument("grids must refine by a factor of 2 (nested lattices)");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median3(double a, double b, double c) {
  return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

}  // namespace

int cmd_converge(const RunConfig& cfg) {
  check_nested(cfg, 3);
  std::vector<Solution> sols;
  for (int cells : cfg.grids) sols.push_back(solve_grid(cfg, cells));

  std::vector<double> hs, errs_max, errs_l2;
  for (size_t q = 0; q + 1 < sols.size(); q++) {
    PairError e = pair_error(sols[q], sols[q + 1]);
    hs.push_back(sols[q].grid.h);
    errs_max.push_back(e.max_rel);
    errs_l2.push_back(e.l2_rel);
  }
  double p_max = fit_rate(hs, errs_max);
  double p_l2 = fit_rate(hs, errs_l2);

  Csv csv({"grid", "N", "h", "err_max", "rate_max", "err_l2", "rate_l2", "p_fit_max",
           "p_fit_l2"},
          cfg.full_precision);
  for (size_t q = 0; q < hs.size(); q++) {
    double rm = q ? std::log2(errs_max[q - 1] / errs_max[q]) : std::nan("");
    double r2 = q ? std::log2(errs_l2[q - 1] / errs_l2[q]) : std::nan("");
    csv.row(cfg.grids[q], sols[q].grid.n(), hs[q], errs_max[q], rm, errs_l2[q], r2, p_max,
            p_l2);
  }
  csv.emit(cfg.out_dir, "converge");
  return 0;
}

int cmd_converge_nonsym(const RunConfig& cfg) {
  if (cfg.problem_case != Case::nonsym)
    throw std::invalid_argument("converge-nonsym requires --case nonsym");
  check_nested(cfg, 3);
  std::vector<Solution> treated, untreated;
  for (int cells : cfg.grids) {
    treated.push_back(solve_grid(cfg, cells, true));
    untreated.push_back(solve_grid(cfg, cells, false));
  }
  std::vector<double> hs, et_max, et_l2, eu_max, eu_l2;
  for (size_t q = 0; q + 1 < treated.size(); q++) {
    PairError t = pair_error(treated[q], treated[q + 1]);
    PairError u = pair_error(untreated[q], untreated[q + 1]);
    hs.push_back(treated[q].grid.h);
    et_max.push_back(t.max_rel);
    et_l2.push_back(t.l2_rel);
    eu_max.push_back(u.max_rel);
    eu_l2.push_back(u.l2_rel);
  }
  double pt = fit_rate(hs, et_l2), pu = fit_rate(hs, eu_l2);
  double pt_max = fit_rate(hs, et_max), pu_max = fit_rate(hs, eu_max);

  Csv csv({"grid", "N", "h", "err_l2_treated", "err_l2_untreated", "err_max_treated",
           "err_max_untreated", "p_fit_l2_treated", "p_fit_l2_untreated", "p_fit_max_treated",
           "p_fit_max_untreated"},
          cfg.full_precision);
  for (size_t q = 0; q < hs.size(); q++)
    csv.row(cfg.grids[q], treated[q].grid.n(), hs[q], et_l2[q], eu_l2[q], et_max[q],
            eu_max[q], pt, pu, pt_max, pu_max);
  csv.emit(cfg.out_dir, "converge_nonsym");
  return 0;
}

int cmd_tlr_report(const RunConfig& cfg) {
  if (cfg.problem_case == Case::nonsym)
    throw std::invalid_argument("tlr-report requires a symmetric formulation");
  std::vector<double> ns, bytes;
  struct Row {
    int grid, N, m;
    MemoryStats st;
  };
  std::vector<Row> rows;
  for (int cells : cfg.grids) {
    ProblemSpec spec = build_problem(cfg, cells);
    Grid grid = make_grid(spec, cells);
    int m = cfg.tile > 0 ? cfg.tile : default_tile_size(grid.n());
    TilePartition part = order_points(grid.interior, m, cfg.dim);
    grid.apply_ordering(part.perm);
    DiscreteOperator op = assemble(spec, grid);
    TlrAssembleOptions topts;
    topts.seed = cfg.seed;
    TLRMatrix A = assemble_tlr(op, part, cfg.eps, topts);
    auto st = memory_stats(A);
    rows.push_back({cells, grid.n(), m, st});
    ns.push_back(grid.n());
    bytes.push_back(static_cast<double>(st.total_bytes));
  }
  double slope = fit_rate(ns, bytes);  // log-log slope of bytes vs N

  Csv csv({"grid", "N", "m", "eps", "bytes_dense_equiv", "bytes_tlr", "avg_rank",
           "max_rank", "mem_slope"},
          cfg.full_precision);
  for (const auto& r : rows)
    csv.row(r.grid, r.N, r.m, cfg.eps, r.st.dense_equiv_bytes, r.st.total_bytes,
            r.st.avg_rank, r.st.max_rank, slope);
  csv.emit(cfg.out_dir, "tlr_report");
  return 0;
}

int cmd_factor_bench(const RunConfig& cfg) {
  if (cfg.problem_case == Case::nonsym)
    throw std::invalid_argument("factor-bench requires a symmetric formulation");
  struct Row {
    int grid, N, m;
    double build, factor, solve_t, residual;
  };
  std::vector<Row> rows;
  std::vector<double> ns, times;
  for (int cells : cfg.grids) {
    ProblemSpec spec = build_problem(cfg, cells);
    Grid grid0 = make_grid(spec, cells);
    int m = cfg.tile > 0 ? cfg.tile : default_tile_size(grid0.n());
    double tb[3], tf[3], ts[3], residual = 0;
    for (int rep = 0; rep < 3; rep++) {
      Grid grid = grid0;
      TilePartition part = order_points(grid.interior, m, cfg.dim);
      grid.apply_ordering(part.perm);
      DiscreteOperator op = assemble(spec, grid);
      auto t0 = std::chrono::steady_clock::now();
      TlrAssembleOptions topts;
      topts.seed = cfg.seed;
      TLRMatrix A = assemble_tlr(op, part, cfg.eps, topts);
      tb[rep] = seconds_since(t0);
      t0 = std::chrono::steady_clock::now();
      TLRFactor L = factorize(A, cfg.eps);
      tf[rep] = seconds_since(t0);

      const int N = grid.n();
      std::vector<double> b(N);
      CounterRng rng(cfg.seed ^ 0xb0b0b0b0ull);
      double bn = 0;
      for (int i = 0; i < N; i++) {
        b[i] = rng.normal(i);
        bn += b[i] * b[i];
      }
      t0 = std::chrono::steady_clock::now();
      auto x = solve(L, b);
      ts[rep] = seconds_since(t0);
      auto Ax = matvec(A, x);
      double rn = 0;
      for (int i = 0; i < N; i++) rn += (Ax[i] - b[i]) * (Ax[i] - b[i]);
      residual = std::sqrt(rn / bn);
    }
    rows.push_back({cells, grid0.n(), m, median3(tb[0], tb[1], tb[2]),
                    median3(tf[0], tf[1], tf[2]), median3(ts[0], ts[1], ts[2]), residual});
    ns.push_back(grid0.n());
    times.push_back(rows.back().factor);
  }
  double slope = fit_rate(ns, times);

  Csv csv({"grid", "N", "m", "build_s", "factor_s", "solve_s", "residual", "factor_slope"},
          cfg.full_precision);
  for (const auto& r : rows)
    csv.row(r.grid, r.N, r.m, r.build, r.factor, r.solve_t, r.residual, slope);
  csv.emit(cfg.out_dir, "factor_bench");
  return 0;
}

int cmd_solve(const RunConfig& cfg, const SolveOptions& opts) {
  int cells = opts.grid > 0 ? opts.grid : cfg.grids.back();
  bool want_snapshots = !opts.save_operator.empty() || !opts.save_factor.empty();
  if (want_snapshots && !use_tlr(cfg))
    throw std::invalid_argument("snapshots require the TLR solver (--solver tlr)");

  Artifacts keep;
  Solution s = solve_grid(cfg, cells, true, want_snapshots ? &keep : nullptr);
  if (!opts.save_operator.empty()) write_snapshot(opts.save_operator, *keep.tlr);
  if (!opts.save_factor.empty()) write_snapshot(opts.save_factor, *keep.factor);

  Csv csv(cfg.dim == 2 ? std::vector<std::string>{"x", "y", "u"}
                       : std::vector<std::string>{"x", "u"},
          cfg.full_precision);
  // lattice order, so the output does not depend on the tile partition
  std::vector<int> order(s.grid.n());
  for (int i = 0; i < s.grid.n(); i++) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return s.grid.lat_of_interior[a] < s.grid.lat_of_interior[b];
  });
  for (int i : order) {
    if (cfg.dim == 2)
      csv.row(s.grid.interior[i][0], s.grid.interior[i][1], s.u[i]);
    else
      csv.row(s.grid.interior[i][0], s.u[i]);
  }
  csv.emit(cfg.out_dir, "solution");
  return 0;
}

}  // namespace fradi::cli
