#include "doctest.h"
#include "fradi/assembly.hpp"
#include "fradi/dense.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace fradi;

namespace {

ProblemSpec make_spec_2d(Formulation f, int cells, double delta_mult = 4.0) {
  ProblemSpec s;
  s.formulation = f;
  s.dim = 2;
  s.interior = {{-1, -1}, {1, 1}};
  s.exterior = {{-2, -2}, {2, 2}};
  s.kappa = constant_field(1.0);
  s.beta = constant_field(0.75);
  s.window.delta = delta_mult * 2.0 / cells;
  s.source = constant_field(1.0);
  return s;
}

double max_abs(const Mat& m) {
  double v = 0;
  for (double x : m.a) v = std::max(v, std::abs(x));
  return v;
}

}  // namespace

TEST_CASE("2d variable-kappa operator matches the straight-line oracle (9x9 interior)") {
  auto spec = make_spec_2d(Formulation::symmetric_variable_kappa, 9, 1.5);
  spec.kappa = kappa_two_bumps_2d();
  Grid g = make_grid(spec, 9);  // odd cell count: 9x9 interior sites
  REQUIRE(g.n() == 81);
  auto op = assemble_symmetric_2d(spec, g);
  Mat ref = oracles::dense_sym_2d_unsym(spec, g);  // kappa case is already symmetric
  double scale = max_abs(ref);
  for (int i = 0; i < g.n(); i++)
    for (int j = 0; j < g.n(); j++) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK(std::abs(op.entry(i, j) - ref(i, j)) <= 1e-12 * scale);
    }
}

TEST_CASE("2d variable-beta operator matches the symmetrized oracle (7x7 interior)") {
  auto spec = make_spec_2d(Formulation::symmetric_variable_beta, 7, 1.5);
  spec.beta = beta_bump_2d();
  Grid g = make_grid(spec, 7);
  REQUIRE(g.n() == 49);
  auto op = assemble_symmetric_2d(spec, g);

  Mat kern(g.n(), g.n());
  auto st = oracles::all_sites(g);
  for (int i = 0; i < g.n(); i++) {
    Point pi = g.interior[i];
    double bi = spec.beta(pi);
    for (size_t q = 0; q < st.pts.size(); q++) {
      Point pj = st.pts[q];
      double dx = pj[0] - pi[0], dy = pj[1] - pi[1];
      double r2 = dx * dx + dy * dy;
      if (r2 == 0) continue;
      double gamma = 1.0 / std::pow(std::sqrt(r2), 2 + bi + spec.beta(pj));
      if (st.interior[q]) kern(i, st.interior_idx[q]) += -2 * g.h * g.h * gamma;
      kern(i, i) += 2 * g.h * g.h * gamma;
    }
  }
  Mat sym = oracles::dense_sym_2d_unsym(spec, g);
  oracles::symmetrize_correction(sym, kern);
  double scale = max_abs(sym);
  for (int i = 0; i < g.n(); i++)
    for (int j = 0; j < g.n(); j++) {
      if (i == j) continue;
      CHECK(std::abs(op.entry(i, j) - sym(i, j)) <= 1e-12 * scale);
    }
}

TEST_CASE("2d variable-beta diagonal rebuild converges to the plain average") {
  double prev = -1;
  for (int cells : {7, 14, 28}) {
    auto spec = make_spec_2d(Formulation::symmetric_variable_beta, cells, 1.5);
    spec.beta = beta_bump_2d();
    Grid g = make_grid(spec, cells);
    auto op = assemble_symmetric_2d(spec, g);

    Mat kern(g.n(), g.n());
    auto st = oracles::all_sites(g);
    for (int i = 0; i < g.n(); i++) {
      Point pi = g.interior[i];
      double bi = spec.beta(pi);
      for (size_t q = 0; q < st.pts.size(); q++) {
        Point pj = st.pts[q];
        double dx = pj[0] - pi[0], dy = pj[1] - pi[1];
        double r2 = dx * dx + dy * dy;
        if (r2 == 0) continue;
        double gamma = 1.0 / std::pow(std::sqrt(r2), 2 + bi + spec.beta(pj));
        if (st.interior[q]) kern(i, st.interior_idx[q]) += -2 * g.h * g.h * gamma;
        kern(i, i) += 2 * g.h * g.h * gamma;
      }
    }
    Mat sym = oracles::dense_sym_2d_unsym(spec, g);
    oracles::symmetrize_correction(sym, kern);
    double dev = 0, scale = max_abs(sym);
    for (int i = 0; i < g.n(); i++)
      dev = std::max(dev, std::abs(op.entry(i, i) - sym(i, i)));
    double rel = dev / scale;
    if (prev >= 0) CHECK(rel < 0.7 * prev);
    prev = rel;
  }
  CHECK(prev <= 5e-4);
}

TEST_CASE("constant coefficients reduce to a scaled 5-point Laplacian") {
  auto spec = make_spec_2d(Formulation::symmetric_variable_kappa, 12);
  Grid g = make_grid(spec, 12);
  auto op = assemble_symmetric_2d(spec, g);
  const double h = g.h, delta = spec.window.delta, beta = 0.75;

  // independent per-direction weight: windowed lattice sum minus the integral
  double sw = 0;
  int K = static_cast<int>(std::ceil(delta / h));
  for (int ky = -K; ky <= K; ky++)
    for (int kx = -K; kx <= K; kx++) {
      if (kx == 0 && ky == 0) continue;
      double r = h * std::sqrt(double(kx * kx + ky * ky));
      if (r >= delta) continue;
      sw += oracles::wfun(r, delta) * (kx * h) * (kx * h) / std::pow(r, 2 + 2 * beta);
    }
  double s = h * h * sw - M_PI * oracles::win_int(1 - 2 * beta, delta);

  // pick an interior point away from the boundary
  int mid = -1;
  for (int i = 0; i < g.n(); i++)
    if (std::abs(g.interior[i][0]) < 0.1 && std::abs(g.interior[i][1]) < 0.1) mid = i;
  REQUIRE(mid >= 0);
  auto [ix, iy] = g.lat_coords(g.lat_of_interior[mid]);
  int xp = g.interior_at_lat[g.lat_linear(ix + 1, iy)];
  int yp = g.interior_at_lat[g.lat_linear(ix, iy + 1)];
  double ref = s / (h * h);
  CHECK(std::abs(op.corr.entry(mid, xp) - ref) <= 1e-12 * std::abs(ref));
  CHECK(std::abs(op.corr.entry(mid, yp) - ref) <= 1e-12 * std::abs(ref));
  CHECK(std::abs(op.corr.entry(mid, mid) + 4 * ref) <= 1e-12 * std::abs(4 * ref));
}

TEST_CASE("2d correction rows sum to zero exactly and A is symmetric") {
  auto spec = make_spec_2d(Formulation::symmetric_variable_beta, 8);
  spec.beta = beta_bump_2d();
  Grid g = make_grid(spec, 8);
  auto op = assemble(spec, g);
  for (int i = 0; i < g.n(); i++) CHECK(op.corr.row_sum(i) == 0.0);

  Mat A = assemble_dense(op);
  double scale = max_abs(A), worst = 0;
  for (int i = 0; i < A.rows; i++)
    for (int j = 0; j < i; j++) worst = std::max(worst, std::abs(A(i, j) - A(j, i)));
  CHECK(worst <= 1e-12 * scale);
}

TEST_CASE("2d operators are positive definite at small N") {
  for (auto f : {Formulation::symmetric_variable_kappa, Formulation::symmetric_variable_beta}) {
    auto spec = make_spec_2d(f, 16);
    if (f == Formulation::symmetric_variable_kappa)
      spec.kappa = kappa_two_bumps_2d();
    else
      spec.beta = beta_bump_2d();
    Grid g = make_grid(spec, 16);
    auto op = assemble(spec, g);
    Mat A = assemble_dense(op);
    CHECK_NOTHROW(dense_cholesky(A));
  }
}

TEST_CASE("2d extended-constant identity") {
  auto spec = make_spec_2d(Formulation::symmetric_variable_kappa, 8);
  spec.kappa = kappa_two_bumps_2d();
  Grid g = make_grid(spec, 8);
  auto op = assemble(spec, g);
  for (int i = 0; i < g.n(); i++)
    CHECK(std::abs(op.b_ext_row_sum(i) + op.diag[i]) <= 1e-12 * op.diag[i]);
}
