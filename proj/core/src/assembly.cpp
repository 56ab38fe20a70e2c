#include "fradi/assembly.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fradi/parallel.hpp"
#include "fradi/quadrature.hpp"

namespace fradi {

double SparseCorrection::entry(int i, int j) const {
  for (int p = row_ptr[i]; p < row_ptr[i + 1]; p++)
    if (col[p] == j) return val[p];
  return 0.0;
}

double SparseCorrection::row_sum(int i) const {
  // Same summation order as construction: interior legs, ghost legs, diagonal.
  double s = 0;
  for (int p = row_ptr[i]; p < row_ptr[i + 1] - 1; p++) s += val[p];
  for (int p = ghost_ptr[i]; p < ghost_ptr[i + 1]; p++) s += ghost_val[p];
  return s + val[row_ptr[i + 1] - 1];
}

void SparseCorrection::apply(const double* x, double* y) const {
  for (int i = 0; i < n; i++) {
    double s = 0;
    for (int p = row_ptr[i]; p < row_ptr[i + 1]; p++) s += val[p] * x[col[p]];
    y[i] += s;
  }
}

namespace {

// Per-row stencil slots before CSR compression. col < 0 marks a leg on an
// exterior (ghost) site.
struct StencilSlots {
  int n = 0, dim = 1;
  std::vector<int> cols;     // n * 2*dim, order: d0-, d0+, d1-, d1+
  std::vector<double> vals;

  StencilSlots(int n_, int dim_) : n(n_), dim(dim_) {
    cols.assign(static_cast<size_t>(n) * 2 * dim, -1);
    vals.assign(static_cast<size_t>(n) * 2 * dim, 0.0);
  }
  int& col(int i, int d, int side) { return cols[(static_cast<size_t>(i) * dim + d) * 2 + side]; }
  double& val(int i, int d, int side) { return vals[(static_cast<size_t>(i) * dim + d) * 2 + side]; }
};

SparseCorrection compress_slots(const StencilSlots& sl) {
  SparseCorrection C;
  C.n = sl.n;
  C.row_ptr.assign(sl.n + 1, 0);
  C.ghost_ptr.assign(sl.n + 1, 0);
  for (int i = 0; i < sl.n; i++) {
    int nin = 0, ngh = 0;
    for (int s = 0; s < 2 * sl.dim; s++)
      (sl.cols[static_cast<size_t>(i) * 2 * sl.dim + s] >= 0 ? nin : ngh)++;
    C.row_ptr[i + 1] = C.row_ptr[i] + nin + 1;  // + diagonal
    C.ghost_ptr[i + 1] = C.ghost_ptr[i] + ngh;
  }
  C.col.resize(C.row_ptr[sl.n]);
  C.val.resize(C.row_ptr[sl.n]);
  C.ghost_val.resize(C.ghost_ptr[sl.n]);
  for (int i = 0; i < sl.n; i++) {
    int p = C.row_ptr[i], g = C.ghost_ptr[i];
    double acc = 0;
    // interior legs first, then ghost legs, so row_sum() can reproduce the
    // accumulation order and cancel to exactly zero
    for (int s = 0; s < 2 * sl.dim; s++) {
      size_t k = static_cast<size_t>(i) * 2 * sl.dim + s;
      if (sl.cols[k] >= 0) {
        C.col[p] = sl.cols[k];
        C.val[p++] = sl.vals[k];
        acc += sl.vals[k];
      }
    }
    for (int s = 0; s < 2 * sl.dim; s++) {
      size_t k = static_cast<size_t>(i) * 2 * sl.dim + s;
      if (sl.cols[k] < 0) {
        C.ghost_val[g++] = sl.vals[k];
        acc += sl.vals[k];
      }
    }
    C.col[p] = i;
    C.val[p] = -acc;  // diagonal, stored last
  }
  return C;
}

struct LatticeFields {
  std::vector<double> x, y, c, beta;  // one slot per lattice site
};

LatticeFields sample_lattice(const ProblemSpec& spec, const Grid& grid) {
  int ny = grid.dim == 2 ? grid.lat_count[1] : 1;
  int64_t total = static_cast<int64_t>(grid.lat_count[0]) * ny;
  LatticeFields lf;
  lf.x.resize(total);
  lf.y.resize(total);
  lf.c.resize(total);
  lf.beta.resize(total);
  for (int iy = 0; iy < ny; iy++)
    for (int ix = 0; ix < grid.lat_count[0]; ix++) {
      int64_t lin = grid.lat_linear(ix, iy);
      Point p = grid.lat_point(ix, iy);
      double kap = spec.kappa(p);
      double bet = spec.beta(p);
      if (!(kap > 0.0))
        throw std::invalid_argument("assemble: kappa must be positive on the whole lattice");
      if (!(bet > 0.0 && bet < 1.0))
        throw std::invalid_argument("assemble: beta must lie in (0,1) on the whole lattice");
      lf.x[lin] = p[0];
      lf.y[lin] = p[1];
      lf.c[lin] = std::sqrt(kap);
      lf.beta[lin] = bet;
    }
  return lf;
}

DiscreteOperator build_symmetric(const ProblemSpec& spec, const Grid& grid,
                                 const AssemblyOptions& opts) {
  const bool var_beta = spec.formulation == Formulation::symmetric_variable_beta;
  if (var_beta && !spec.kappa.is_constant())
    throw std::invalid_argument(
        "assemble: simultaneous variable kappa and beta is unsupported; "
        "the variable-beta formulation requires constant kappa");
  if (!var_beta && !spec.beta.is_constant())
    throw std::invalid_argument(
        "assemble: simultaneous variable kappa and beta is unsupported; "
        "the variable-kappa formulation requires constant beta");

  DiscreteOperator op;
  op.formulation = spec.formulation;
  op.dim = spec.dim;
  op.symmetric = true;
  op.grid = grid;

  const int N = grid.n();
  const int dim = grid.dim;
  const double h = grid.h;
  const double hn = dim == 2 ? h * h : h;
  const double delta = spec.window.delta;
  op.kern_coef = -2.0 * hn;

  LatticeFields lf = sample_lattice(spec, grid);
  const int64_t lat_total = static_cast<int64_t>(lf.x.size());

  op.c.resize(N);
  op.beta.resize(N);
  for (int i = 0; i < N; i++) {
    op.c[i] = lf.c[grid.lat_of_interior[i]];
    op.beta[i] = lf.beta[grid.lat_of_interior[i]];
  }
  op.ext_c.reserve(grid.exterior.size());
  op.ext_beta.reserve(grid.exterior.size());
  for (int64_t lin = 0; lin < lat_total; lin++)
    if (grid.interior_at_lat[lin] < 0) {
      op.ext_c.push_back(lf.c[lin]);
      op.ext_beta.push_back(lf.beta[lin]);
    }

  // Diagonal D_i = 2 h^n sum_{j != i, j in lattice} gamma_ij.
  op.diag.resize(N);
  parallel_for(N, [&](int64_t i) {
    int64_t self = grid.lat_of_interior[i];
    double xi = lf.x[self], yi = lf.y[self], bi = lf.beta[self];
    double s = 0;
    for (int64_t j = 0; j < lat_total; j++) {
      if (j == self) continue;
      double dx = lf.x[j] - xi, dy = lf.y[j] - yi;
      double r2 = dim == 2 ? dx * dx + dy * dy : dx * dx;
      s += lf.c[j] * std::pow(r2, -0.5 * (dim + bi + lf.beta[j]));
    }
    op.diag[i] = 2.0 * hn * lf.c[self] * s;
  });

  // Correction stencil: per-direction weights from the windowed lattice sums
  // minus the exact window integrals.
  const int K = static_cast<int>(std::ceil(delta / h));
  const double delta2 = delta * delta;
  StencilSlots slots(N, dim);

  parallel_for(N, [&](int64_t i) {
    int64_t self = grid.lat_of_interior[i];
    auto [ix, iy] = grid.lat_coords(self);
    double bi = lf.beta[self];
    double ci = lf.c[self];

    double su[2] = {0, 0}, slog[2] = {0, 0};
    int ky_lo = dim == 2 ? -K : 0, ky_hi = dim == 2 ? K : 0;
    for (int ky = ky_lo; ky <= ky_hi; ky++)
      for (int kx = -K; kx <= K; kx++) {
        if (kx == 0 && ky == 0) continue;
        double dx = kx * h, dy = ky * h;
        double r2 = dx * dx + dy * dy;
        if (r2 >= delta2) continue;
        double r = std::sqrt(r2);
        double w = window(r, delta);
        double powv = std::pow(r2, -0.5 * (dim + 2.0 * bi));
        su[0] += w * dx * dx * powv;
        if (dim == 2) su[1] += w * dy * dy * powv;
        if (var_beta) {
          double lg = 0.5 * std::log(r2);
          slog[0] += w * dx * dx * lg * powv;
          if (dim == 2) slog[1] += w * dy * dy * lg * powv;
        }
      }

    // beta gradient: analytic when supplied, else centered difference on the lattice
    Point grad_beta{0, 0};
    if (var_beta) {
      if (spec.beta.has_gradient()) {
        grad_beta = spec.beta.gradient(grid.interior[i]);
      } else {
        for (int d = 0; d < dim; d++) {
          int64_t lp = d == 0 ? grid.lat_linear(ix + 1, iy) : grid.lat_linear(ix, iy + 1);
          int64_t lm = d == 0 ? grid.lat_linear(ix - 1, iy) : grid.lat_linear(ix, iy - 1);
          grad_beta[d] = (lf.beta[lp] - lf.beta[lm]) / (2.0 * h);
        }
      }
    }

    double kappa_i = ci * ci;
    for (int d = 0; d < dim; d++) {
      double Su = hn * su[d] - corr_u2_nd(bi, delta, dim);
      double Tl = 0;
      if (var_beta)
        Tl = -2.0 * (hn * grad_beta[d] * slog[d] - corr_log_nd(bi, grad_beta[d], delta, dim));

      int64_t lp = d == 0 ? grid.lat_linear(ix + 1, iy) : grid.lat_linear(ix, iy + 1);
      int64_t lm = d == 0 ? grid.lat_linear(ix - 1, iy) : grid.lat_linear(ix, iy - 1);

      double km, kp;
      if (opts.half_point_coefficients) {
        Point pi = grid.interior[i];
        Point pm = pi, pp = pi;
        pm[d] -= 0.5 * h;
        pp[d] += 0.5 * h;
        km = ci * (2.0 * std::sqrt(spec.kappa(pm)) - ci);
        kp = ci * (2.0 * std::sqrt(spec.kappa(pp)) - ci);
      } else {
        km = ci * lf.c[lm];
        kp = ci * lf.c[lp];
      }

      slots.col(i, d, 0) = grid.interior_at_lat[lm];
      slots.col(i, d, 1) = grid.interior_at_lat[lp];
      slots.val(i, d, 0) = Su * km / (h * h) - kappa_i * Tl / (2.0 * h);
      slots.val(i, d, 1) = Su * kp / (h * h) + kappa_i * Tl / (2.0 * h);
    }
  });

  if (var_beta) {
    // Explicit symmetrization: average each interior-interior pair of legs,
    // then compress_slots rebuilds the diagonal so row sums stay exactly zero.
    for (int i = 0; i < N; i++)
      for (int d = 0; d < dim; d++) {
        int j = slots.col(i, d, 1);
        if (j < 0) continue;
        double avg = 0.5 * (slots.val(i, d, 1) + slots.val(j, d, 0));
        slots.val(i, d, 1) = avg;
        slots.val(j, d, 0) = avg;
      }
  }

  op.corr = compress_slots(slots);
  return op;
}

DiscreteOperator build_nonsym(const ProblemSpec& spec, const Grid& grid,
                              const AssemblyOptions& opts) {
  DiscreteOperator op;
  op.formulation = spec.formulation;
  op.dim = 1;
  op.symmetric = false;
  op.grid = grid;
  op.kern_coef = 0;

  const int N = grid.n();
  const double h = grid.h;
  const double delta = spec.window.delta;

  // Flux nodes: one more than the midpoints per dimension.
  const int nodes = grid.lat_count[0] + 1;
  op.ns_x.assign(nodes, 0.0);
  op.ns_komega.assign(nodes, std::numeric_limits<double>::quiet_NaN());
  op.ns_beta.assign(nodes, std::numeric_limits<double>::quiet_NaN());
  op.ns_s.assign(nodes, 0.0);

  const double tol = 1e-9 * h;
  const int K = static_cast<int>(std::ceil(delta / h));
  for (int k = 0; k < nodes; k++) {
    double x = grid.outer_box.lo[0] + k * h;
    op.ns_x[k] = x;
    if (x < spec.interior.lo[0] - tol || x > spec.interior.hi[0] + tol) continue;
    Point p{x, 0};
    double kap = spec.kappa(p);
    double bet = spec.beta(p);
    if (!(kap > 0.0)) throw std::invalid_argument("assemble: kappa must be positive");
    if (!(bet > 0.0 && bet < 1.0))
      throw std::invalid_argument("assemble: beta must lie in (0,1) at the flux nodes");
    op.ns_beta[k] = bet;
    op.ns_komega[k] = kap * omega_value(bet, 1);
    if (opts.singularity_treatment) {
      // C1: midpoint-rule of minus the windowed term; C2: its exact integral.
      double c1 = 0;
      for (int t = 0; t < K; t++) {
        double off = (t + 0.5) * h;
        if (off >= delta) break;
        c1 += window(off, delta) * std::pow(off, -bet);
      }
      c1 *= -2.0 * h;
      double c2 = corr_u2_1d(0.5 * (1.0 + bet), delta);
      op.ns_s[k] = op.ns_komega[k] * (c1 + c2);
    }
  }

  // Correction stencil over midpoints: row i couples u_{i-1/2}, u_{i+1/2}, u_{i+3/2}
  // with weights -s_l/h^2, +(s_l+s_r)/h^2, -s_r/h^2.
  StencilSlots slots(N, 1);
  for (int i = 0; i < N; i++) {
    int64_t cell = grid.lat_of_interior[i];
    int ln = static_cast<int>(cell), rn = ln + 1;
    double sl = op.ns_s[ln], sr = op.ns_s[rn];
    slots.col(i, 0, 0) = cell - 1 >= 0 ? grid.interior_at_lat[cell - 1] : -1;
    slots.col(i, 0, 1) = cell + 1 < grid.lat_count[0] ? grid.interior_at_lat[cell + 1] : -1;
    slots.val(i, 0, 0) = -sl / (h * h);
    slots.val(i, 0, 1) = -sr / (h * h);
  }
  op.corr = compress_slots(slots);
  op.diag.assign(N, 0.0);

  // Midpoint fields are not used by the kernel; keep beta for completeness.
  op.c.assign(N, 1.0);
  op.beta.resize(N);
  for (int i = 0; i < N; i++) op.beta[i] = spec.beta(grid.interior[i]);
  return op;
}

}  // namespace

double DiscreteOperator::kernel(int i, int j) const {
  const Point& a = grid.interior[i];
  const Point& b = grid.interior[j];
  double dx = b[0] - a[0];
  double r2 = dx * dx;
  if (dim == 2) {
    double dy = b[1] - a[1];
    r2 += dy * dy;
  }
  return kern_coef * c[i] * c[j] * std::pow(r2, -0.5 * (dim + beta[i] + beta[j]));
}

double DiscreteOperator::nonsym_kernel(int i, int j) const {
  int ln = static_cast<int>(grid.lat_of_interior[i]);
  int rn = ln + 1;
  double xj = grid.interior[j][0];
  double dl = xj - ns_x[ln], dr = xj - ns_x[rn];
  double tl = ns_komega[ln] * dl * std::pow(std::abs(dl), -(ns_beta[ln] + 2.0));
  double tr = ns_komega[rn] * dr * std::pow(std::abs(dr), -(ns_beta[rn] + 2.0));
  return tl - tr;
}

double DiscreteOperator::entry(int i, int j) const {
  if (formulation == Formulation::nonsymmetric_variable_beta)
    return nonsym_kernel(i, j) + corr.entry(i, j);
  if (i == j) return diag[i] + corr.entry(i, i);
  return kernel(i, j) + corr.entry(i, j);
}

void DiscreteOperator::eval_block(int r0, int r1, int c0, int c1, Mat& out) const {
  out = Mat(r1 - r0, c1 - c0);
  for (int i = r0; i < r1; i++)
    for (int j = c0; j < c1; j++) out(i - r0, j - c0) = entry(i, j);
}

std::vector<double> DiscreteOperator::apply(const std::vector<double>& x) const {
  const int N = n();
  if (static_cast<int>(x.size()) != N)
    throw std::invalid_argument("DiscreteOperator::apply: dimension mismatch");
  std::vector<double> y(N, 0.0);
  parallel_for(N, [&](int64_t i) {
    double s = 0;
    for (int j = 0; j < N; j++) s += entry(static_cast<int>(i), j) * x[j];
    y[i] = s;
  });
  return y;
}

double DiscreteOperator::b_ext_row_sum(int i) const {
  double s = 0;
  for (int j = 0; j < n(); j++)
    if (j != i) s += kernel(i, j);
  const Point& a = grid.interior[i];
  for (size_t e = 0; e < grid.exterior.size(); e++) {
    const Point& b = grid.exterior[e];
    double dx = b[0] - a[0];
    double r2 = dx * dx;
    if (dim == 2) {
      double dy = b[1] - a[1];
      r2 += dy * dy;
    }
    s += kern_coef * c[i] * ext_c[e] * std::pow(r2, -0.5 * (dim + beta[i] + ext_beta[e]));
  }
  return s;
}

DiscreteOperator assemble_symmetric_kappa_1d(const ProblemSpec& spec, const Grid& grid,
                                             const AssemblyOptions& opts) {
  if (spec.formulation != Formulation::symmetric_variable_kappa || spec.dim != 1)
    throw std::invalid_argument("assemble_symmetric_kappa_1d: wrong formulation or dimension");
  return build_symmetric(spec, grid, opts);
}

DiscreteOperator assemble_symmetric_beta_1d(const ProblemSpec& spec, const Grid& grid,
                                            const AssemblyOptions& opts) {
  if (spec.formulation != Formulation::symmetric_variable_beta || spec.dim != 1)
    throw std::invalid_argument("assemble_symmetric_beta_1d: wrong formulation or dimension");
  return build_symmetric(spec, grid, opts);
}

DiscreteOperator assemble_symmetric_2d(const ProblemSpec& spec, const Grid& grid,
                                       const AssemblyOptions& opts) {
  if (spec.dim != 2 || spec.formulation == Formulation::nonsymmetric_variable_beta)
    throw std::invalid_argument("assemble_symmetric_2d: wrong formulation or dimension");
  return build_symmetric(spec, grid, opts);
}

DiscreteOperator assemble_nonsym_1d(const ProblemSpec& spec, const Grid& grid,
                                    const AssemblyOptions& opts) {
  if (spec.formulation != Formulation::nonsymmetric_variable_beta || spec.dim != 1)
    throw std::invalid_argument("assemble_nonsym_1d: wrong formulation or dimension");
  if (!grid.staggered)
    throw std::invalid_argument("assemble_nonsym_1d: requires a staggered grid");
  return build_nonsym(spec, grid, opts);
}

DiscreteOperator assemble(const ProblemSpec& spec, const Grid& grid,
                          const AssemblyOptions& opts) {
  if (spec.formulation == Formulation::nonsymmetric_variable_beta)
    return assemble_nonsym_1d(spec, grid, opts);
  return build_symmetric(spec, grid, opts);
}

std::vector<double> rhs(const ProblemSpec& spec, const Grid& grid) {
  std::vector<double> f(grid.n());
  for (int i = 0; i < grid.n(); i++) f[i] = spec.source(grid.interior[i]);
  return f;
}

}  // namespace fradi
