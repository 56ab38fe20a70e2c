#include "fradi/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fradi {

int TilePartition::tile_of(int new_idx) const {
  return std::min(new_idx / m, nb - 1);
}

namespace {

// Power of two nearest to q, ties rounding up.
int nearest_pow2(int q) {
  int lo = 1;
  while (lo * 2 <= q) lo *= 2;
  int hi = lo * 2;
  return (q - lo < hi - q) ? lo : hi;
}

void split_recursive(const std::vector<Point>& pts, int dim, int m,
                     std::vector<int>& idx, int begin, int end,
                     std::vector<std::pair<int, int>>& leaves) {
  int count = end - begin;
  if (count <= m) {
    leaves.emplace_back(begin, end);
    return;
  }
  Box bb;
  bb.lo = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  bb.hi = {-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (int i = begin; i < end; i++)
    for (int d = 0; d < dim; d++) {
      bb.lo[d] = std::min(bb.lo[d], pts[idx[i]][d]);
      bb.hi[d] = std::max(bb.hi[d], pts[idx[i]][d]);
    }
  int axis = 0;
  for (int d = 1; d < dim; d++)
    if (bb.side(d) > bb.side(axis)) axis = d;

  std::sort(idx.begin() + begin, idx.begin() + end, [&](int a, int b) {
    if (pts[a][axis] != pts[b][axis]) return pts[a][axis] < pts[b][axis];
    int other = 1 - axis;
    if (dim == 2 && pts[a][other] != pts[b][other]) return pts[a][other] < pts[b][other];
    return a < b;  // deterministic tie-break on original index
  });

  int q = (count + m - 1) / m;
  int left = (nearest_pow2(q) / 2) * m;
  split_recursive(pts, dim, m, idx, begin, begin + left, leaves);
  split_recursive(pts, dim, m, idx, begin + left, end, leaves);
}

}  // namespace

TilePartition order_points(std::span<const Point> pts, int m, int dim) {
  if (pts.empty()) throw std::invalid_argument("order_points: empty point set");
  if (m < 2) throw std::invalid_argument("order_points: tile size must be at least 2");

  const int n = static_cast<int>(pts.size());
  std::vector<Point> p(pts.begin(), pts.end());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::pair<int, int>> leaves;
  split_recursive(p, dim, m, idx, 0, n, leaves);

  TilePartition part;
  part.m = m;
  part.nb = static_cast<int>(leaves.size());
  part.perm.resize(n);
  part.inv_perm.resize(n);
  int pos = 0;
  for (auto [b, e] : leaves) {
    part.tile_range.emplace_back(pos, pos + (e - b));
    for (int i = b; i < e; i++, pos++) {
      part.inv_perm[pos] = idx[i];
      part.perm[idx[i]] = pos;
    }
  }
  for (int t = 0; t < part.nb; t++) {
    auto [b, e] = part.tile_range[t];
    std::vector<Point> tp(e - b);
    for (int i = b; i < e; i++) tp[i - b] = p[part.inv_perm[i]];
    part.tile_box.push_back(Box::bounding(tp.data(), static_cast<int>(tp.size()), dim));
  }
  return part;
}

double admissibility_eta(const Box& t, const Box& s, int dim) {
  double d = Box::distance(t, s, dim);
  if (d == 0.0) return std::numeric_limits<double>::infinity();
  return std::max(t.diameter(dim), s.diameter(dim)) / d;
}

int default_tile_size(int n) {
  int m = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
  m = ((m + 31) / 32) * 32;
  return std::max(32, m);
}

}  // namespace fradi
