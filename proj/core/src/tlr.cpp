#include "fradi/tlr.hpp"

#include <Eigen/Dense>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

#include "fradi/parallel.hpp"

namespace fradi {

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<EMat>;
using ECMap = Eigen::Map<const EMat>;

ECMap emap(const Mat& m) { return ECMap(m.data(), m.rows, m.cols); }
EMap emap(Mat& m) { return EMap(m.data(), m.rows, m.cols); }

// Thin orthonormal factor of a block, via Householder QR.
Mat thin_q(const Mat& y) {
  Eigen::HouseholderQR<EMat> qr(emap(y));
  EMat q = qr.householderQ() * EMat::Identity(y.rows, y.cols);
  Mat out(y.rows, y.cols);
  emap(out) = q;
  return out;
}

}  // namespace

AraResult ara(const LinOp& op, double eps, const CounterRng& rng, const AraOptions& opts) {
  if (!(eps > 0)) throw std::invalid_argument("ara: eps must be positive");
  const int rows = op.rows, cols = op.cols;
  const int cap = std::min(rows, cols);
  AraResult res;

  Mat Q;  // rows x k, orthonormal columns
  int k = 0;
  uint64_t ctr = 0;
  double op_scale = 0;  // running norm proxy, sets the numerical noise floor

  while (true) {
    const int b = opts.block;
    Mat X(cols, b);
    rng.fill_gaussian(X, ctr);
    ctr += static_cast<uint64_t>(cols) * b;

    Mat Y(rows, b);
    op.apply(X, Y);
    {
      auto y = emap(Y);
      for (int j = 0; j < b; j++) op_scale = std::max(op_scale, y.col(j).norm());
    }
    if (k > 0) {
      auto q = emap(Q);
      auto y = emap(Y);
      y -= q * (q.transpose() * y).eval();
      y -= q * (q.transpose() * y).eval();  // second pass for orthogonality
    }
    double est = 0;
    {
      auto y = emap(Y);
      for (int j = 0; j < b; j++) est = std::max(est, y.col(j).norm());
    }
    res.rounds++;
    if (est <= eps * opts.stop_factor) break;

    // Rank-revealed orthonormal directions of the sample block. Keeping only
    // singular directions above the noise floor prevents rounding-level junk
    // columns (not orthogonal to Q) from entering the basis.
    Eigen::JacobiSVD<EMat> bsvd(emap(Y), Eigen::ComputeThinU);
    double floor_sv = std::max(op_scale * 1e-13, 1e-300);
    int r = 0;
    while (r < static_cast<int>(bsvd.singularValues().size()) &&
           bsvd.singularValues()(r) > floor_sv)
      r++;
    if (r == 0) break;  // only rounding noise left
    if (k + r > cap) {
      res.dense_fallback = true;
      return res;
    }
    Mat Qb(rows, r);
    emap(Qb) = bsvd.matrixU().leftCols(r);
    if (k > 0) {
      auto q = emap(Q);
      auto qb = emap(Qb);
      qb -= q * (q.transpose() * qb).eval();
      Qb = thin_q(Qb);
    }
    Mat Qn(rows, k + r);
    if (k > 0) emap(Qn).leftCols(k) = emap(Q);
    emap(Qn).rightCols(r) = emap(Qb);
    Q = std::move(Qn);
    k += r;
    if (k >= cap) {  // basis filled the whole space before the estimator converged
      res.dense_fallback = true;
      return res;
    }
  }

  if (k == 0) {
    res.tile.U = Mat(rows, 0);
    res.tile.V = Mat(cols, 0);
    return res;
  }

  // Project: V = A^T Q, so A ~ Q V^T with Q orthonormal.
  Mat V(cols, k);
  op.applyT(Q, V);

  // Recompress: SVD of V gives A ~ (Q Z) S W^T; keep the minimal rank whose
  // discarded Frobenius tail is below eps/2.
  Eigen::JacobiSVD<EMat> svd(emap(V), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double tail = 0;
  int r = static_cast<int>(sv.size());
  while (r > 0) {
    double t = std::sqrt(tail + sv(r - 1) * sv(r - 1));
    if (t > 0.5 * eps) break;
    tail += sv(r - 1) * sv(r - 1);
    r--;
  }
  res.tile.U = Mat(rows, r);
  res.tile.V = Mat(cols, r);
  if (r > 0) {
    emap(res.tile.U) = emap(Q) * svd.matrixV().leftCols(r) * sv.head(r).asDiagonal();
    emap(res.tile.V) = svd.matrixU().leftCols(r);
  }
  return res;
}

int TLRMatrix::off_index(int i, int j) const {
  if (i == j || i < 0 || j < 0 || i >= part.nb || j >= part.nb)
    throw std::out_of_range("TLRMatrix::off_index");
  if (symmetric) {
    if (j > i) throw std::out_of_range("TLRMatrix::off_index: upper tile of symmetric matrix");
    return i * (i - 1) / 2 + j;
  }
  return i * (part.nb - 1) + (j > i ? j - 1 : j);
}

int64_t TLRMatrix::stored_numbers() const {
  int64_t s = 0;
  for (const auto& d : diag) s += static_cast<int64_t>(d.size());
  for (const auto& t : off)
    s += t.kind == TileKind::dense
             ? static_cast<int64_t>(t.dense.size())
             : static_cast<int64_t>(t.lr.U.size()) + static_cast<int64_t>(t.lr.V.size());
  return s;
}

Mat TLRMatrix::tile_dense(int i, int j) const {
  if (i == j) return diag[i];
  bool transpose = symmetric && j > i;
  const OffTile& t = transpose ? off_tile(j, i) : off_tile(i, j);
  Mat out;
  if (t.kind == TileKind::dense) {
    if (!transpose) return t.dense;
    out = Mat(t.dense.cols, t.dense.rows);
    emap(out) = emap(t.dense).transpose();
    return out;
  }
  int mr = part.tile_size(i), mc = part.tile_size(j);
  out = Mat(mr, mc);
  if (t.lr.rank() == 0) return out;
  if (!transpose)
    emap(out) = emap(t.lr.U) * emap(t.lr.V).transpose();
  else
    emap(out) = emap(t.lr.V) * emap(t.lr.U).transpose();
  return out;
}

TLRMatrix assemble_tlr(const DiscreteOperator& op, const TilePartition& part,
                       double eps, const TlrAssembleOptions& opts) {
  const int N = op.n();
  if (part.tile_range.empty() || part.tile_range.back().second != N)
    throw std::invalid_argument("assemble_tlr: partition does not cover the operator");
  for (int t = 0; t < part.nb; t++) {
    auto [b, e] = part.tile_range[t];
    for (int i = b; i < e; i++) {
      const Point& p = op.grid.interior[i];
      for (int d = 0; d < op.dim; d++)
        if (p[d] < part.tile_box[t].lo[d] - 1e-12 || p[d] > part.tile_box[t].hi[d] + 1e-12)
          throw std::invalid_argument(
              "assemble_tlr: partition is inconsistent with the grid ordering");
    }
  }

  TLRMatrix A;
  A.part = part;
  A.n = N;
  A.dim = op.dim;
  A.eps = eps;
  A.symmetric = op.symmetric;
  A.seed = opts.seed;
  A.diag.resize(part.nb);

  const int nb = part.nb;
  int64_t noff = A.symmetric ? static_cast<int64_t>(nb) * (nb - 1) / 2
                             : static_cast<int64_t>(nb) * (nb - 1);
  A.off.resize(noff);

  // Diagonal tiles: dense, exact.
  parallel_for(nb, [&](int64_t t) {
    auto [b, e] = part.tile_range[t];
    op.eval_block(b, e, b, e, A.diag[t]);
  }, opts.workers);

  // Off-diagonal tiles: dense evaluation, then ARA compression.
  std::vector<std::pair<int, int>> coords;
  coords.reserve(noff);
  for (int i = 0; i < nb; i++)
    for (int j = 0; j < (A.symmetric ? i : nb); j++) {
      if (j == i) continue;
      coords.emplace_back(i, j);
    }

  parallel_for(static_cast<int64_t>(coords.size()), [&](int64_t q) {
    auto [i, j] = coords[q];
    auto [rb, re] = part.tile_range[i];
    auto [cb, ce] = part.tile_range[j];
    Mat tile;
    op.eval_block(rb, re, cb, ce, tile);

    LinOp lin;
    lin.rows = tile.rows;
    lin.cols = tile.cols;
    lin.apply = [&tile](const Mat& X, Mat& Y) {
      Y = Mat(tile.rows, X.cols);
      emap(Y) = emap(tile) * emap(X);
    };
    lin.applyT = [&tile](const Mat& X, Mat& Y) {
      Y = Mat(tile.cols, X.cols);
      emap(Y) = emap(tile).transpose() * emap(X);
    };

    CounterRng rng(opts.seed, (1ull << 40) + static_cast<uint64_t>(i) * nb + j);
    AraOptions ao;
    ao.block = opts.block;
    AraResult r = ara(lin, eps, rng, ao);
    OffTile& out = A.off_tile(i, j);
    if (r.dense_fallback) {
      out.kind = TileKind::dense;
      out.dense = std::move(tile);
    } else {
      out.kind = TileKind::lowrank;
      out.lr = std::move(r.tile);
    }
  }, opts.workers);

  return A;
}

std::vector<double> matvec(const TLRMatrix& A, const std::vector<double>& x, int workers) {
  if (static_cast<int>(x.size()) != A.n)
    throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<double> y(A.n, 0.0);
  const int nb = A.nb();

  auto apply_tile = [&](const OffTile& t, bool transpose, int rows, int cols,
                        const double* xs, double* ys) {
    if (t.kind == TileKind::dense) {
      ECMap d(t.dense.data(), t.dense.rows, t.dense.cols);
      Eigen::Map<const Eigen::VectorXd> xv(xs, cols);
      Eigen::Map<Eigen::VectorXd> yv(ys, rows);
      if (!transpose)
        yv += d * xv;
      else
        yv += d.transpose() * xv;
      return;
    }
    if (t.lr.rank() == 0) return;
    ECMap U(t.lr.U.data(), t.lr.U.rows, t.lr.U.cols);
    ECMap V(t.lr.V.data(), t.lr.V.rows, t.lr.V.cols);
    Eigen::Map<const Eigen::VectorXd> xv(xs, cols);
    Eigen::Map<Eigen::VectorXd> yv(ys, rows);
    if (!transpose)
      yv += U * (V.transpose() * xv).eval();
    else
      yv += V * (U.transpose() * xv).eval();
  };

  parallel_for(nb, [&](int64_t bi) {
    int i = static_cast<int>(bi);
    auto [rb, re] = A.part.tile_range[i];
    // diagonal block
    ECMap d(A.diag[i].data(), A.diag[i].rows, A.diag[i].cols);
    Eigen::Map<const Eigen::VectorXd> xv(x.data() + rb, re - rb);
    Eigen::Map<Eigen::VectorXd> yv(y.data() + rb, re - rb);
    yv = d * xv;
    // off-diagonal blocks, fixed ordering over the source index
    for (int j = 0; j < nb; j++) {
      if (j == i) continue;
      auto [cb, ce] = A.part.tile_range[j];
      if (!A.symmetric) {
        apply_tile(A.off_tile(i, j), false, re - rb, ce - cb, x.data() + cb, y.data() + rb);
      } else if (j < i) {
        apply_tile(A.off_tile(i, j), false, re - rb, ce - cb, x.data() + cb, y.data() + rb);
      } else {
        apply_tile(A.off_tile(j, i), true, re - rb, ce - cb, x.data() + cb, y.data() + rb);
      }
    }
  }, workers);
  return y;
}

MemoryStats memory_stats(const TLRMatrix& A) {
  MemoryStats st;
  st.seed = A.seed;
  st.dense_equiv_bytes = static_cast<int64_t>(A.n) * A.n * 8;
  for (const auto& d : A.diag) st.dense_diag_bytes += static_cast<int64_t>(d.size()) * 8;
  int64_t rank_sum = 0;
  for (int i = 0; i < A.nb(); i++)
    for (int j = 0; j < (A.symmetric ? i : A.nb()); j++) {
      if (j == i) continue;
      const OffTile& t = A.off_tile(i, j);
      int mr = A.part.tile_size(i), mc = A.part.tile_size(j);
      int k = t.rank_or_full(mr, mc);
      if (t.kind == TileKind::dense)
        st.dense_fallback_bytes += static_cast<int64_t>(t.dense.size()) * 8;
      else
        st.lowrank_bytes += static_cast<int64_t>(t.lr.U.size() + t.lr.V.size()) * 8;
      if (k >= static_cast<int>(st.rank_histogram.size()))
        st.rank_histogram.resize(k + 1, 0);
      st.rank_histogram[k]++;
      rank_sum += k;
      st.max_rank = std::max(st.max_rank, k);
    }
  int64_t count = 0;
  for (auto c : st.rank_histogram) count += c;
  st.avg_rank = count ? static_cast<double>(rank_sum) / count : 0.0;
  st.total_bytes = st.dense_diag_bytes + st.lowrank_bytes + st.dense_fallback_bytes;
  return st;
}

}  // namespace fradi
