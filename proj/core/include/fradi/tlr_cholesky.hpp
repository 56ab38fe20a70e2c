#pragma once

#include <span>

#include "fradi/tlr.hpp"

namespace fradi {

/// Lower-triangular TLR Cholesky factor: dense lower-triangular diagonal
/// tiles, compressed subdiagonal tiles.
struct TLRFactor {
  TilePartition part;
  int n = 0;
  double eps = 0;
  uint64_t seed = 0;
  std::vector<Mat> diag;      // nb lower-triangular dense tiles
  std::vector<OffTile> sub;   // strict lower triangle, packed i(i-1)/2 + j
  /// Instrumentation: ARA compressions per subdiagonal tile (left-looking
  /// factorization performs exactly one).
  std::vector<int> compressions;

  int nb() const { return part.nb; }
  int sub_index(int i, int j) const;
  const OffTile& sub_tile(int i, int j) const { return sub[sub_index(i, j)]; }
  int64_t stored_numbers() const;
  MemoryStats memory() const;
};

struct FactorOptions {
  int block = 16;
  int workers = 0;
};

/// Left-looking block Cholesky on the TLR tiles. Each subdiagonal tile
/// receives all its left updates as one sampled operator, is compressed once
/// by ARA at tolerance eps, and finished by a triangular solve applied to its
/// V factor. Throws SpdError (with block index and pivot) when a diagonal
/// tile loses positive definiteness.
TLRFactor factorize(const TLRMatrix& A, double eps, const FactorOptions& opts = {});

/// Forward then backward substitution through the factor.
std::vector<double> solve(const TLRFactor& L, std::span<const double> b);

}  // namespace fradi
