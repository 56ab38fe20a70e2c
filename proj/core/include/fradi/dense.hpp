#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "fradi/assembly.hpp"
#include "fradi/matrix.hpp"

namespace fradi {

/// Raised when a Cholesky factorization hits a non-positive pivot.
struct SpdError : std::runtime_error {
  int index;     // block index (TLR) or row index (dense)
  double pivot;
  SpdError(const std::string& what, int idx, double piv)
      : std::runtime_error(what), index(idx), pivot(piv) {}
};

/// Materializes the entry oracle; refuses N beyond the cap (memory guard).
DenseMatrix assemble_dense(const DiscreteOperator& op, int cap = 8192);

struct DenseCholesky {
  Mat L;  // lower triangular
};
DenseCholesky dense_cholesky(const DenseMatrix& A);
std::vector<double> dense_solve(const DenseCholesky& f, std::span<const double> b);

struct DenseLU {
  Mat lu;                 // packed L (unit diagonal) and U
  std::vector<int> perm;  // row permutation
};
DenseLU dense_lu(const DenseMatrix& A);
std::vector<double> dense_solve(const DenseLU& f, std::span<const double> b);

/// Minimal k such that || tile - best rank-k approximation ||_2 <= eps,
/// i.e. the number of singular values exceeding eps.
int svd_eps_rank(const DenseMatrix& tile, double eps);

/// All singular values, descending (deterministic).
std::vector<double> singular_values(const DenseMatrix& tile);

}  // namespace fradi
