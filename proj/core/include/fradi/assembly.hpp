#pragma once

#include <vector>

#include "fradi/grid.hpp"
#include "fradi/matrix.hpp"

namespace fradi {

/// Sparse singularity-correction matrix C over interior rows (tridiagonal in
/// 1D, 5-point in 2D). Stencil legs that fall on constrained exterior sites
/// are kept as ghost values: they multiply u = 0 but participate in the
/// zero-row-sum identity. The diagonal is built as the negated sum of the
/// other legs, so row_sum() vanishes exactly.
struct SparseCorrection {
  int n = 0;
  std::vector<int> row_ptr;  // size n+1; diagonal entry stored last in each row
  std::vector<int> col;
  std::vector<double> val;
  std::vector<int> ghost_ptr;  // size n+1
  std::vector<double> ghost_val;

  double entry(int i, int j) const;
  /// Interior legs + ghost legs + diagonal, summed in construction order.
  double row_sum(int i) const;
  /// y += C x over interior columns.
  void apply(const double* x, double* y) const;
  int nnz() const { return static_cast<int>(val.size()); }
};

struct AssemblyOptions {
  /// Use k = c_i (2 c_{i±1/2} - c_i) with c sampled at half points instead of
  /// the O(h^2)-equivalent k = c_i c_{i±1}.
  bool half_point_coefficients = false;
  /// Non-symmetric formulation only: disable the windowed subtraction and the
  /// C1 + C2 correction (for studying the untreated convergence).
  bool singularity_treatment = true;
};

/// Discretized operator A = B + D + C: a lazily evaluated dense kernel part B,
/// diagonal D, and sparse correction C. Entries are indexed by the grid's
/// solve ordering. The entry oracle is pure and safe for concurrent use.
struct DiscreteOperator {
  Formulation formulation = Formulation::symmetric_variable_kappa;
  int dim = 1;
  bool symmetric = true;
  Grid grid;
  double kern_coef = 0;  // -2 h^n

  // Per-interior-point data, solve ordering.
  std::vector<double> c;     // sqrt(kappa)
  std::vector<double> beta;
  std::vector<double> diag;  // D_i (zero for the non-symmetric formulation)
  SparseCorrection corr;

  // Non-symmetric formulation: per-node flux data (1D, staggered grid).
  std::vector<double> ns_x;       // node coordinates
  std::vector<double> ns_komega;  // kappa * omega at nodes
  std::vector<double> ns_beta;
  std::vector<double> ns_s;       // kappa * omega * (C1 + C2) at nodes

  int n() const { return grid.n(); }
  double entry(int i, int j) const;
  /// out(i - r0, j - c0) = entry(i, j) for the index ranges [r0,r1) x [c0,c1).
  void eval_block(int r0, int r1, int c0, int c1, Mat& out) const;
  /// y = A x through the entry oracle (O(N^2), reference use only).
  std::vector<double> apply(const std::vector<double>& x) const;
  /// Row sum of the dense part B extended over interior and exterior columns;
  /// equals -D_i up to roundoff by construction of D.
  double b_ext_row_sum(int i) const;

  // Exterior-site field values (lattice order), retained for b_ext_row_sum.
  std::vector<double> ext_c, ext_beta;

 private:
  double kernel(int i, int j) const;
  double nonsym_kernel(int i, int j) const;
};

DiscreteOperator assemble_symmetric_kappa_1d(const ProblemSpec& spec, const Grid& grid,
                                             const AssemblyOptions& opts = {});
DiscreteOperator assemble_symmetric_beta_1d(const ProblemSpec& spec, const Grid& grid,
                                            const AssemblyOptions& opts = {});
DiscreteOperator assemble_symmetric_2d(const ProblemSpec& spec, const Grid& grid,
                                       const AssemblyOptions& opts = {});
DiscreteOperator assemble_nonsym_1d(const ProblemSpec& spec, const Grid& grid,
                                    const AssemblyOptions& opts = {});
/// Dispatches on spec.formulation and spec.dim.
DiscreteOperator assemble(const ProblemSpec& spec, const Grid& grid,
                          const AssemblyOptions& opts = {});

/// Source term sampled at the unknowns, in solve ordering.
std::vector<double> rhs(const ProblemSpec& spec, const Grid& grid);

}  // namespace fradi
