#include "fradi/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace fradi {

Point Grid::lat_point(int ix, int iy) const {
  double off = staggered ? 0.5 : 0.0;
  Point p{outer_box.lo[0] + (ix + off) * h, 0};
  if (dim == 2) p[1] = outer_box.lo[1] + (iy + off) * h;
  return p;
}

void Grid::apply_ordering(const std::vector<int>& perm) {
  const int N = n();
  if (static_cast<int>(perm.size()) != N)
    throw std::invalid_argument("Grid::apply_ordering: permutation size mismatch");
  std::vector<Point> pts(N);
  std::vector<int64_t> lats(N);
  for (int old = 0; old < N; old++) {
    pts[perm[old]] = interior[old];
    lats[perm[old]] = lat_of_interior[old];
  }
  interior = std::move(pts);
  lat_of_interior = std::move(lats);
  for (int i = 0; i < N; i++) interior_at_lat[lat_of_interior[i]] = i;
}

Grid make_grid(const ProblemSpec& spec, int cells_per_dim) {
  spec.validate();
  if (cells_per_dim < 2) throw std::invalid_argument("make_grid: need at least 2 cells");

  Grid g;
  g.dim = spec.dim;
  g.cells = cells_per_dim;
  g.staggered = spec.formulation == Formulation::nonsymmetric_variable_beta;
  g.interior_box = spec.interior;
  g.outer_box = spec.exterior;

  double side = spec.interior.side(0);
  for (int d = 1; d < g.dim; d++)
    if (std::abs(spec.interior.side(d) - side) > 1e-12 * side)
      throw std::invalid_argument("make_grid: interior box must have equal sides");
  g.h = side / cells_per_dim;

  for (int d = 0; d < g.dim; d++) {
    double cells_outer = spec.exterior.side(d) / g.h;
    double rounded = std::round(cells_outer);
    if (std::abs(cells_outer - rounded) > 1e-9)
      throw std::invalid_argument(
          "make_grid: outer box sides must be integer multiples of the spacing");
    g.lat_count[d] = static_cast<int>(rounded) + (g.staggered ? 0 : 1);
  }

  const double tol = 1e-9 * g.h;
  auto inside = [&](const Point& p) {
    for (int d = 0; d < g.dim; d++)
      if (!(p[d] > spec.interior.lo[d] + tol && p[d] < spec.interior.hi[d] - tol))
        return false;
    return true;
  };

  int64_t total = static_cast<int64_t>(g.lat_count[0]) * (g.dim == 2 ? g.lat_count[1] : 1);
  g.interior_at_lat.assign(total, -1);
  int ny = g.dim == 2 ? g.lat_count[1] : 1;
  for (int iy = 0; iy < ny; iy++)
    for (int ix = 0; ix < g.lat_count[0]; ix++) {
      Point p = g.lat_point(ix, iy);
      int64_t lin = g.lat_linear(ix, iy);
      if (inside(p)) {
        g.interior_at_lat[lin] = static_cast<int32_t>(g.interior.size());
        g.interior.push_back(p);
        g.lat_of_interior.push_back(lin);
      } else {
        g.exterior.push_back(p);
      }
    }
  if (g.interior.empty()) throw std::invalid_argument("make_grid: no interior points");
  return g;
}

}  // namespace fradi
