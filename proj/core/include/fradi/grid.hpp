#pragma once

#include <cstdint>
#include <vector>

#include "fradi/fields.hpp"
#include "fradi/geometry.hpp"

namespace fradi {

/// Regular Cartesian lattice over the exterior box with spacing h = (interior
/// side)/cells. Unknowns live at lattice sites strictly inside the interior
/// box; the remaining sites carry the homogeneous volume constraint u = 0.
///
/// For the non-symmetric formulation the grid is staggered: unknowns sit at
/// cell midpoints and fluxes at the nodes between them.
struct Grid {
  int dim = 1;
  double h = 0;
  int cells = 0;        // nominal cells per dimension of the interior box
  bool staggered = false;
  Box interior_box, outer_box;

  std::vector<Point> interior;       // unknown coordinates, in solve ordering
  std::vector<Point> exterior;       // constrained sites (u = 0), lattice order

  // Lattice index maps for the unknown lattice (nodes, or midpoints when
  // staggered). lat_count[d] sites per dimension over the outer box.
  std::array<int, 2> lat_count{1, 1};
  std::vector<int32_t> interior_at_lat;  // lattice linear -> interior idx or -1
  std::vector<int64_t> lat_of_interior;  // interior idx -> lattice linear

  int n() const { return static_cast<int>(interior.size()); }

  int64_t lat_linear(int ix, int iy) const {
    return static_cast<int64_t>(iy) * lat_count[0] + ix;
  }
  std::array<int, 2> lat_coords(int64_t lin) const {
    return {static_cast<int>(lin % lat_count[0]), static_cast<int>(lin / lat_count[0])};
  }
  Point lat_point(int ix, int iy) const;

  /// Reorder the interior list by a permutation (old index -> new index)
  /// and rebuild the index maps.
  void apply_ordering(const std::vector<int>& perm);
};

/// Builds the lattice for a given nominal per-dimension resolution. The outer
/// box sides must be integer multiples of h. Staggered grids are used by the
/// non-symmetric formulation.
Grid make_grid(const ProblemSpec& spec, int cells_per_dim);

}  // namespace fradi
