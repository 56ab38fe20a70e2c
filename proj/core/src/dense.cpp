#include "fradi/dense.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/SVD>

#include "fradi/parallel.hpp"

namespace fradi {

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<EMat>;
using ECMap = Eigen::Map<const EMat>;

ECMap emap(const Mat& m) { return ECMap(m.data(), m.rows, m.cols); }
EMap emap(Mat& m) { return EMap(m.data(), m.rows, m.cols); }

}  // namespace

DenseMatrix assemble_dense(const DiscreteOperator& op, int cap) {
  const int N = op.n();
  if (N > cap)
    throw std::invalid_argument("assemble_dense: N exceeds the dense size cap");
  Mat A(N, N);
  parallel_for(N, [&](int64_t i) {
    for (int j = 0; j < N; j++) A(static_cast<int>(i), j) = op.entry(static_cast<int>(i), j);
  });
  return A;
}

DenseCholesky dense_cholesky(const DenseMatrix& A) {
  if (A.rows != A.cols) throw std::invalid_argument("dense_cholesky: matrix not square");
  Eigen::LLT<EMat> llt(emap(A));
  if (llt.info() != Eigen::Success) {
    // locate the offending pivot with a plain unblocked factorization
    const int n = A.rows;
    Mat W = A;
    for (int k = 0; k < n; k++) {
      double piv = W(k, k);
      for (int j = 0; j < k; j++) piv -= W(k, j) * W(k, j);
      if (!(piv > 0.0)) throw SpdError("dense_cholesky: non-positive pivot", k, piv);
      double lkk = std::sqrt(piv);
      W(k, k) = lkk;
      for (int i = k + 1; i < n; i++) {
        double s = W(i, k);
        for (int j = 0; j < k; j++) s -= W(i, j) * W(k, j);
        W(i, k) = s / lkk;
      }
    }
    throw SpdError("dense_cholesky: factorization failed", A.rows - 1, 0.0);
  }
  DenseCholesky out;
  out.L = Mat(A.rows, A.cols);
  emap(out.L) = llt.matrixL();
  return out;
}

std::vector<double> dense_solve(const DenseCholesky& f, std::span<const double> b) {
  const int n = f.L.rows;
  if (static_cast<int>(b.size()) != n)
    throw std::invalid_argument("dense_solve: dimension mismatch");
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(b.data(), n);
  auto L = emap(f.L);
  L.triangularView<Eigen::Lower>().solveInPlace(x);
  L.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
  return std::vector<double>(x.data(), x.data() + n);
}

DenseLU dense_lu(const DenseMatrix& A) {
  if (A.rows != A.cols) throw std::invalid_argument("dense_lu: matrix not square");
  Eigen::PartialPivLU<EMat> lu(emap(A));
  DenseLU out;
  out.lu = Mat(A.rows, A.cols);
  emap(out.lu) = lu.matrixLU();
  auto pv = lu.permutationP().indices();
  out.perm.assign(pv.data(), pv.data() + pv.size());
  for (int k = 0; k < A.rows; k++)
    if (out.lu(k, k) == 0.0)
      throw SpdError("dense_lu: singular pivot", k, 0.0);
  return out;
}

std::vector<double> dense_solve(const DenseLU& f, std::span<const double> b) {
  const int n = f.lu.rows;
  if (static_cast<int>(b.size()) != n)
    throw std::invalid_argument("dense_solve: dimension mismatch");
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; i++) x(i) = b[f.perm[i]];
  auto LU = emap(f.lu);
  LU.triangularView<Eigen::UnitLower>().solveInPlace(x);
  LU.triangularView<Eigen::Upper>().solveInPlace(x);
  return std::vector<double>(x.data(), x.data() + n);
}

std::vector<double> singular_values(const DenseMatrix& tile) {
  if (tile.rows == 0 || tile.cols == 0) return {};
  Eigen::BDCSVD<EMat> svd(emap(tile));
  const auto& sv = svd.singularValues();
  return std::vector<double>(sv.data(), sv.data() + sv.size());
}

int svd_eps_rank(const DenseMatrix& tile, double eps) {
  auto sv = singular_values(tile);
  int k = 0;
  while (k < static_cast<int>(sv.size()) && sv[k] > eps) k++;
  return k;
}

}  // namespace fradi
