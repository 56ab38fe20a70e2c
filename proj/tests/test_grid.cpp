#include "doctest.h"
#include "fradi/grid.hpp"

#include <cmath>
#include <numeric>

using namespace fradi;

namespace {

ProblemSpec base_spec(int dim, Formulation f = Formulation::symmetric_variable_kappa) {
  ProblemSpec s;
  s.formulation = f;
  s.dim = dim;
  s.interior = {{-1, -1}, {1, 1}};
  s.exterior = {{-2, -2}, {2, 2}};
  s.kappa = constant_field(1.0);
  s.beta = constant_field(0.75);
  s.window.delta = 0.1;
  s.source = constant_field(1.0);
  return s;
}

}  // namespace

TEST_CASE("1d node grid: counts, spacing, classification") {
  auto spec = base_spec(1);
  Grid g = make_grid(spec, 64);
  CHECK(g.h == doctest::Approx(2.0 / 64));
  CHECK(g.n() == 63);  // strictly interior nodes
  CHECK(g.lat_count[0] == 129);
  CHECK(static_cast<int>(g.exterior.size()) == 129 - 63);
  for (const auto& p : g.interior) {
    CHECK(p[0] > -1.0);
    CHECK(p[0] < 1.0);
  }
  // lattice maps are mutually inverse
  for (int i = 0; i < g.n(); i++)
    CHECK(g.interior_at_lat[g.lat_of_interior[i]] == i);
}

TEST_CASE("2d node grid counts") {
  auto spec = base_spec(2);
  Grid g = make_grid(spec, 16);
  CHECK(g.n() == 15 * 15);
  CHECK(g.lat_count[0] == 33);
  CHECK(static_cast<int>(g.exterior.size()) == 33 * 33 - 225);
}

TEST_CASE("staggered grid for the non-symmetric formulation") {
  auto spec = base_spec(1, Formulation::nonsymmetric_variable_beta);
  spec.beta = constant_field(0.5);
  Grid g = make_grid(spec, 64);
  CHECK(g.staggered);
  CHECK(g.n() == 64);  // exactly one midpoint per interior cell
  CHECK(g.lat_count[0] == 128);
  // midpoints sit at half-integer lattice positions
  CHECK(g.interior[0][0] == doctest::Approx(-1.0 + g.h / 2));
  CHECK(g.interior.back()[0] == doctest::Approx(1.0 - g.h / 2));
}

TEST_CASE("grid refinement nests: coarse interior nodes appear on the fine grid") {
  auto spec = base_spec(2);
  Grid gc = make_grid(spec, 8);
  Grid gf = make_grid(spec, 16);
  for (int i = 0; i < gc.n(); i++) {
    auto [ix, iy] = gc.lat_coords(gc.lat_of_interior[i]);
    int fine = gf.interior_at_lat[gf.lat_linear(2 * ix, 2 * iy)];
    REQUIRE(fine >= 0);
    CHECK(gf.interior[fine][0] == doctest::Approx(gc.interior[i][0]).epsilon(1e-14));
    CHECK(gf.interior[fine][1] == doctest::Approx(gc.interior[i][1]).epsilon(1e-14));
  }
}

TEST_CASE("apply_ordering permutes points and maps consistently") {
  auto spec = base_spec(1);
  Grid g = make_grid(spec, 16);
  int n = g.n();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());
  auto before = g.interior;
  g.apply_ordering(perm);
  for (int old = 0; old < n; old++)
    CHECK(g.interior[perm[old]][0] == before[old][0]);
  for (int i = 0; i < n; i++)
    CHECK(g.interior_at_lat[g.lat_of_interior[i]] == i);
}

TEST_CASE("grid validation errors") {
  auto spec = base_spec(1);
  CHECK_THROWS_AS(make_grid(spec, 1), std::invalid_argument);
  spec.window.delta = 3.0;
  CHECK_THROWS_AS(make_grid(spec, 16), std::invalid_argument);
}
