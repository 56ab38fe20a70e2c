#pragma once

#include <span>
#include <vector>

#include "fradi/geometry.hpp"

namespace fradi {

/// Uniform tile partition of a point set induced by recursive KD bisection.
/// All tiles hold exactly m points except possibly the last one.
struct TilePartition {
  int m = 0;   // tile size (points per tile)
  int nb = 0;  // tile count
  std::vector<int> perm;      // old index -> new index
  std::vector<int> inv_perm;  // new index -> old index
  std::vector<std::pair<int, int>> tile_range;  // per tile [begin, end) in new indexing
  std::vector<Box> tile_box;

  int tile_size(int t) const { return tile_range[t].second - tile_range[t].first; }
  int tile_of(int new_idx) const;
};

/// KD-tree style ordering: each cluster is sorted along the longest dimension
/// of its bounding box and split into a left part of (P/2)*m points, where P
/// is the power of two nearest to ceil(count/m) (ties round up), until
/// clusters of at most m points remain. Leaves, left to right, define the
/// permutation and the tiles.
TilePartition order_points(std::span<const Point> pts, int m, int dim);

/// Admissibility ratio max(diam t, diam s) / dist(t, s) of two cluster boxes.
/// Returns +infinity (non-admissible) when the boxes touch or overlap.
double admissibility_eta(const Box& t, const Box& s, int dim);

/// Default tile size: ceil(sqrt(N)) rounded up to a multiple of 32.
int default_tile_size(int n);

}  // namespace fradi
