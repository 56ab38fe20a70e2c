#pragma once

#include <string>

#include "fradi/tlr.hpp"
#include "fradi/tlr_cholesky.hpp"

namespace fradi {

// Binary snapshot of a TLR matrix or factor. Little-endian layout:
//   magic "TLR1"; u8 kind (0 = operator, 1 = factor); u8 symmetric;
//   u16 reserved; u32 dim; u64 N; u32 m; u32 nb; f64 eps; u64 seed;
//   u64 tile_count; then per tile:
//   u32 i; u32 j; u8 tile kind (0 = lowrank, 1 = dense); u8 reserved[3];
//   u32 k; u32 rows; u32 cols; payload f64 row-major
//   (dense: rows*cols; lowrank: U rows*k then V cols*k).

void write_snapshot(const std::string& path, const TLRMatrix& A);
void write_snapshot(const std::string& path, const TLRFactor& L);

TLRMatrix read_snapshot_matrix(const std::string& path);
TLRFactor read_snapshot_factor(const std::string& path);

/// Peeks at the header kind byte: 0 = operator, 1 = factor.
int snapshot_kind(const std::string& path);

}  // namespace fradi
