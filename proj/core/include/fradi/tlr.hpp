#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fradi/assembly.hpp"
#include "fradi/clustering.hpp"
#include "fradi/matrix.hpp"
#include "fradi/rng.hpp"

namespace fradi {

/// Rank-k tile stored as U V^T; k = 0 encodes the zero tile.
struct LowRankTile {
  Mat U, V;
  int rank() const { return U.cols; }
};

enum class TileKind : uint8_t { lowrank = 0, dense = 1 };

/// Off-diagonal tile: low rank, or dense when compression hit the rank cap.
struct OffTile {
  TileKind kind = TileKind::lowrank;
  LowRankTile lr;
  Mat dense;
  int rank_or_full(int mr, int mc) const {
    return kind == TileKind::lowrank ? lr.rank() : std::min(mr, mc);
  }
};

/// Linear operator sampled by block multiplication; the interface ARA needs.
struct LinOp {
  int rows = 0, cols = 0;
  std::function<void(const Mat&, Mat&)> apply;   // Y = A X,   X: cols x b
  std::function<void(const Mat&, Mat&)> applyT;  // Y = A^T X, X: rows x b
};

struct AraOptions {
  int block = 16;           // sample block size
  double stop_factor = 0.1; // stop when the residual sample norm estimate <= eps * this
};

struct AraResult {
  LowRankTile tile;
  bool dense_fallback = false;  // rank cap reached before convergence
  int rounds = 0;
};

/// Adaptive randomized approximation: samples the operator in blocks of
/// gaussian vectors, growing an orthonormal basis until the residual norm
/// estimate drops below eps * stop_factor, then recompresses to the minimal
/// rank with Frobenius tail below eps/2.
AraResult ara(const LinOp& op, double eps, const CounterRng& rng,
              const AraOptions& opts = {});

/// Nb x nb tile matrix: dense diagonal tiles, compressed off-diagonal tiles;
/// only the strict lower triangle is stored when symmetric.
struct TLRMatrix {
  TilePartition part;
  int n = 0;
  int dim = 1;
  double eps = 0;
  bool symmetric = true;
  uint64_t seed = 0;
  std::vector<Mat> diag;
  std::vector<OffTile> off;

  int nb() const { return part.nb; }
  int off_index(int i, int j) const;
  const OffTile& off_tile(int i, int j) const { return off[off_index(i, j)]; }
  OffTile& off_tile(int i, int j) { return off[off_index(i, j)]; }
  /// Stored scalar count (factor payloads plus dense tiles).
  int64_t stored_numbers() const;
  /// Dense reconstruction of tile (i, j) including transposed lookups in the
  /// symmetric case.
  Mat tile_dense(int i, int j) const;
};

struct TlrAssembleOptions {
  int block = 16;
  uint64_t seed = 0;
  int workers = 0;
};

/// Evaluates every tile densely from the entry oracle (sparse correction and
/// diagonal folded in) and compresses the off-diagonal tiles with ARA.
TLRMatrix assemble_tlr(const DiscreteOperator& op, const TilePartition& part,
                       double eps, const TlrAssembleOptions& opts = {});

/// y = A x. Work is partitioned by destination block row with a fixed
/// within-row ordering, so the result is bitwise reproducible.
std::vector<double> matvec(const TLRMatrix& A, const std::vector<double>& x,
                           int workers = 0);

struct MemoryStats {
  int64_t total_bytes = 0;
  int64_t dense_diag_bytes = 0;
  int64_t lowrank_bytes = 0;
  int64_t dense_fallback_bytes = 0;
  int64_t dense_equiv_bytes = 0;      // N^2 * sizeof(double)
  std::vector<int64_t> rank_histogram;  // index = rank; fallback counts at min(m)
  double avg_rank = 0;
  int max_rank = 0;
  uint64_t seed = 0;
};

MemoryStats memory_stats(const TLRMatrix& A);

}  // namespace fradi
