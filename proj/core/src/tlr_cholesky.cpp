#include "fradi/tlr_cholesky.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "fradi/dense.hpp"
#include "fradi/parallel.hpp"

namespace fradi {

namespace {

using EMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EMap = Eigen::Map<EMat>;
using ECMap = Eigen::Map<const EMat>;

ECMap emap(const Mat& m) { return ECMap(m.data(), m.rows, m.cols); }
EMap emap(Mat& m) { return EMap(m.data(), m.rows, m.cols); }

// Y (+)= T X or T^T X for an OffTile.
void tile_gemm(const OffTile& t, bool transpose, const Mat& X, Mat& Y, bool accumulate) {
  int rows = transpose
                 ? (t.kind == TileKind::dense ? t.dense.cols : t.lr.V.rows)
                 : (t.kind == TileKind::dense ? t.dense.rows : t.lr.U.rows);
  if (!accumulate) Y = Mat(rows, X.cols);
  auto y = emap(Y);
  auto x = emap(X);
  if (t.kind == TileKind::dense) {
    if (!transpose)
      y += emap(t.dense) * x;
    else
      y += emap(t.dense).transpose() * x;
    return;
  }
  if (t.lr.rank() == 0) return;
  auto U = emap(t.lr.U);
  auto V = emap(t.lr.V);
  if (!transpose)
    y += U * (V.transpose() * x).eval();
  else
    y += V * (U.transpose() * x).eval();
}

}  // namespace

int TLRFactor::sub_index(int i, int j) const {
  if (!(i > j && j >= 0 && i < part.nb))
    throw std::out_of_range("TLRFactor::sub_index");
  return i * (i - 1) / 2 + j;
}

int64_t TLRFactor::stored_numbers() const {
  int64_t s = 0;
  for (const auto& d : diag) s += static_cast<int64_t>(d.size());
  for (const auto& t : sub)
    s += t.kind == TileKind::dense
             ? static_cast<int64_t>(t.dense.size())
             : static_cast<int64_t>(t.lr.U.size()) + static_cast<int64_t>(t.lr.V.size());
  return s;
}

MemoryStats TLRFactor::memory() const {
  MemoryStats st;
  st.seed = seed;
  st.dense_equiv_bytes = static_cast<int64_t>(n) * n * 8;
  for (const auto& d : diag) st.dense_diag_bytes += static_cast<int64_t>(d.size()) * 8;
  int64_t rank_sum = 0, count = 0;
  for (int i = 1; i < nb(); i++)
    for (int j = 0; j < i; j++) {
      const OffTile& t = sub_tile(i, j);
      int k = t.rank_or_full(part.tile_size(i), part.tile_size(j));
      if (t.kind == TileKind::dense)
        st.dense_fallback_bytes += static_cast<int64_t>(t.dense.size()) * 8;
      else
        st.lowrank_bytes += static_cast<int64_t>(t.lr.U.size() + t.lr.V.size()) * 8;
      if (k >= static_cast<int>(st.rank_histogram.size())) st.rank_histogram.resize(k + 1, 0);
      st.rank_histogram[k]++;
      rank_sum += k;
      count++;
      st.max_rank = std::max(st.max_rank, k);
    }
  st.avg_rank = count ? static_cast<double>(rank_sum) / count : 0.0;
  st.total_bytes = st.dense_diag_bytes + st.lowrank_bytes + st.dense_fallback_bytes;
  return st;
}

TLRFactor factorize(const TLRMatrix& A, double eps, const FactorOptions& opts) {
  if (!A.symmetric)
    throw std::invalid_argument(
        "factorize: Cholesky requires a symmetric TLR matrix (non-symmetric "
        "formulations route through the dense LU path)");
  const int nb = A.nb();
  TLRFactor L;
  L.part = A.part;
  L.n = A.n;
  L.eps = eps;
  L.seed = A.seed;
  L.diag.resize(nb);
  L.sub.resize(static_cast<size_t>(nb) * (nb - 1) / 2);
  L.compressions.assign(L.sub.size(), 0);

  for (int k = 0; k < nb; k++) {
    const int mk = A.part.tile_size(k);

    // Diagonal: apply all left updates densely, then factor.
    Mat Dk = A.diag[k];
    {
      auto d = emap(Dk);
      for (int j = 0; j < k; j++) {
        const OffTile& t = L.sub_tile(k, j);
        if (t.kind == TileKind::dense) {
          d -= emap(t.dense) * emap(t.dense).transpose();
        } else if (t.lr.rank() > 0) {
          auto U = emap(t.lr.U);
          auto V = emap(t.lr.V);
          EMat S = V.transpose() * V;        // r x r
          d -= U * S * U.transpose();
        }
      }
    }
    try {
      L.diag[k] = dense_cholesky(Dk).L;
    } catch (const SpdError& e) {
      throw SpdError(
          "factorize: diagonal tile lost positive definiteness (block " +
              std::to_string(k) + ", pivot " + std::to_string(e.pivot) +
              "); consider loosening eps or checking the assembly",
          k, e.pivot);
    }
    const Mat& Lkk = L.diag[k];

    // Subdiagonal tiles of column k: one sampled compression each, then a
    // triangular solve on the V factor.
    parallel_for(nb - 1 - k, [&](int64_t q) {
      const int i = k + 1 + static_cast<int>(q);
      const int mi = A.part.tile_size(i);
      const OffTile& Aik = A.off_tile(i, k);

      // Precompute the small coupling matrices V(i,j)^T V(k,j) for low-rank pairs.
      struct Term {
        const OffTile* Lij;
        const OffTile* Lkj;
        EMat G;       // only when both low rank
        bool use_g = false;
      };
      std::vector<Term> terms;
      terms.reserve(k);
      for (int j = 0; j < k; j++) {
        const OffTile& Lij = L.sub_tile(i, j);
        const OffTile& Lkj = L.sub_tile(k, j);
        if (Lij.kind == TileKind::lowrank && Lij.lr.rank() == 0) continue;
        if (Lkj.kind == TileKind::lowrank && Lkj.lr.rank() == 0) continue;
        Term t;
        t.Lij = &Lij;
        t.Lkj = &Lkj;
        if (Lij.kind == TileKind::lowrank && Lkj.kind == TileKind::lowrank) {
          t.G = emap(Lij.lr.V).transpose() * emap(Lkj.lr.V);
          t.use_g = true;
        }
        terms.push_back(std::move(t));
      }

      LinOp lin;
      lin.rows = mi;
      lin.cols = mk;
      lin.apply = [&](const Mat& X, Mat& Y) {
        tile_gemm(Aik, false, X, Y, false);
        auto y = emap(Y);
        for (const auto& t : terms) {
          if (t.use_g) {
            auto Ui = emap(t.Lij->lr.U);
            auto Uk = emap(t.Lkj->lr.U);
            y -= Ui * (t.G * (Uk.transpose() * emap(X)).eval()).eval();
          } else {
            Mat tmp;
            tile_gemm(*t.Lkj, true, X, tmp, false);   // L(k,j)^T X
            Mat tmp2;
            tile_gemm(*t.Lij, false, tmp, tmp2, false);  // L(i,j) ...
            y -= emap(tmp2);
          }
        }
      };
      lin.applyT = [&](const Mat& X, Mat& Y) {
        tile_gemm(Aik, true, X, Y, false);
        auto y = emap(Y);
        for (const auto& t : terms) {
          if (t.use_g) {
            auto Ui = emap(t.Lij->lr.U);
            auto Uk = emap(t.Lkj->lr.U);
            y -= Uk * (t.G.transpose() * (Ui.transpose() * emap(X)).eval()).eval();
          } else {
            Mat tmp;
            tile_gemm(*t.Lij, true, X, tmp, false);   // L(i,j)^T X
            Mat tmp2;
            tile_gemm(*t.Lkj, false, tmp, tmp2, false);  // L(k,j) ...
            y -= emap(tmp2);
          }
        }
      };

      CounterRng rng(A.seed, (2ull << 40) + static_cast<uint64_t>(i) * nb + k);
      AraOptions ao;
      ao.block = opts.block;
      AraResult r = ara(lin, eps, rng, ao);
      L.compressions[L.sub_index(i, k)]++;

      OffTile out;
      if (r.dense_fallback) {
        // Densify the updated tile, then solve densely.
        Mat W(mi, mk);
        {
          Mat I(mk, mk);
          emap(I).setIdentity();
          lin.apply(I, W);
        }
        out.kind = TileKind::dense;
        out.dense = Mat(mi, mk);
        emap(out.dense) =
            emap(Lkk).transpose().triangularView<Eigen::Upper>().solve<Eigen::OnTheRight>(
                emap(W));
      } else {
        out.kind = TileKind::lowrank;
        out.lr = std::move(r.tile);
        if (out.lr.rank() > 0) {
          // L(i,k) = U (Lkk^{ -1} V)^T
          emap(out.lr.V) = emap(Lkk).triangularView<Eigen::Lower>().solve(emap(out.lr.V));
        }
      }
      L.sub[L.sub_index(i, k)] = std::move(out);
    }, opts.workers);
  }
  return L;
}

std::vector<double> solve(const TLRFactor& L, std::span<const double> b) {
  if (static_cast<int>(b.size()) != L.n)
    throw std::invalid_argument("solve: dimension mismatch");
  const int nb = L.nb();
  std::vector<double> x(b.begin(), b.end());

  // forward: L y = b
  for (int k = 0; k < nb; k++) {
    auto [rb, re] = L.part.tile_range[k];
    Eigen::Map<Eigen::VectorXd> xk(x.data() + rb, re - rb);
    for (int j = 0; j < k; j++) {
      auto [cb, ce] = L.part.tile_range[j];
      const OffTile& t = L.sub_tile(k, j);
      Eigen::Map<const Eigen::VectorXd> xj(x.data() + cb, ce - cb);
      if (t.kind == TileKind::dense)
        xk -= emap(t.dense) * xj;
      else if (t.lr.rank() > 0)
        xk -= emap(t.lr.U) * (emap(t.lr.V).transpose() * xj).eval();
    }
    emap(L.diag[k]).triangularView<Eigen::Lower>().solveInPlace(xk);
  }

  // backward: L^T x = y
  for (int k = nb - 1; k >= 0; k--) {
    auto [rb, re] = L.part.tile_range[k];
    Eigen::Map<Eigen::VectorXd> xk(x.data() + rb, re - rb);
    for (int i = k + 1; i < nb; i++) {
      auto [cb, ce] = L.part.tile_range[i];
      const OffTile& t = L.sub_tile(i, k);
      Eigen::Map<const Eigen::VectorXd> xi(x.data() + cb, ce - cb);
      if (t.kind == TileKind::dense)
        xk -= emap(t.dense).transpose() * xi;
      else if (t.lr.rank() > 0)
        xk -= emap(t.lr.V) * (emap(t.lr.U).transpose() * xi).eval();
    }
    emap(L.diag[k]).transpose().triangularView<Eigen::Upper>().solveInPlace(xk);
  }
  return x;
}

}  // namespace fradi
