// Test-only reference implementations: straight-line transcriptions of the
// discretization formulas, independent of the assembly code paths. Row
// construction below follows the equations term by term with no shared
// helpers from the library apart from elementary field evaluation.
#pragma once

#include <cmath>
#include <vector>

#include "fradi/assembly.hpp"
#include "fradi/fields.hpp"
#include "fradi/grid.hpp"
#include "fradi/matrix.hpp"

namespace oracles {

using fradi::Grid;
using fradi::Mat;
using fradi::Point;
using fradi::ProblemSpec;

// int_0^delta w(r) r^a dr by the power rule, term by term.
inline double win_int(double a, double delta) {
  const int pw[5] = {0, 4, 5, 6, 7};
  const double cf[5] = {1, -35, 84, -70, 20};
  double s = 0;
  for (int k = 0; k < 5; k++) s += cf[k] / (a + pw[k] + 1);
  return std::pow(delta, a + 1) * s;
}

// int_0^delta w(r) ln(r) r^a dr, using int_0^1 t^(g-1) ln t dt = -1/g^2.
inline double win_int_log(double a, double delta) {
  const int pw[5] = {0, 4, 5, 6, 7};
  const double cf[5] = {1, -35, 84, -70, 20};
  double s = 0;
  for (int k = 0; k < 5; k++) {
    double g = a + pw[k] + 1;
    s += cf[k] * (std::log(delta) / g - 1.0 / (g * g));
  }
  return std::pow(delta, a + 1) * s;
}

inline double wfun(double r, double delta) {
  double t = r / delta;
  if (t >= 1) return 0;
  return 1 - 35 * std::pow(t, 4) + 84 * std::pow(t, 5) - 70 * std::pow(t, 6) +
         20 * std::pow(t, 7);
}

// Collects every lattice site (interior in solve order, then exterior).
struct Sites {
  std::vector<Point> pts;
  std::vector<bool> interior;
  std::vector<int> interior_idx;  // -1 for exterior
};

inline Sites all_sites(const Grid& g) {
  Sites s;
  for (int i = 0; i < g.n(); i++) {
    s.pts.push_back(g.interior[i]);
    s.interior.push_back(true);
    s.interior_idx.push_back(i);
  }
  for (const auto& p : g.exterior) {
    s.pts.push_back(p);
    s.interior.push_back(false);
    s.interior_idx.push_back(-1);
  }
  return s;
}

// Dense operator for the 1D variable-diffusivity discretization: trapezoidal
// sum of the regularized integrand plus the separately integrated correction.
inline Mat dense_kappa_1d(const ProblemSpec& spec, const Grid& grid) {
  const int N = grid.n();
  const double h = grid.h;
  const double delta = spec.window.delta;
  const double beta = spec.beta(Point{0, 0});
  Sites st = all_sites(grid);
  Mat A(N, N);

  for (int i = 0; i < N; i++) {
    double xi = grid.interior[i][0];
    double ci = std::sqrt(spec.kappa(grid.interior[i]));

    // trapezoidal sum of -2 (u_j - u_i) gamma_ij
    for (size_t q = 0; q < st.pts.size(); q++) {
      double xj = st.pts[q][0];
      if (xj == xi) continue;
      double cj = std::sqrt(spec.kappa(st.pts[q]));
      double gamma = ci * cj / std::pow(std::abs(xj - xi), 1 + 2 * beta);
      if (st.interior[q]) A(i, st.interior_idx[q]) += -2 * h * gamma;
      A(i, i) += 2 * h * gamma;
    }

    // u-bar'' coefficient: windowed lattice sum minus the exact integral
    double sw = 0;
    for (size_t q = 0; q < st.pts.size(); q++) {
      double r = std::abs(st.pts[q][0] - xi);
      if (r == 0 || r >= delta) continue;
      sw += wfun(r, delta) * std::pow(r, 1 - 2 * beta);
    }
    double coef = h * sw - 2 * win_int(1 - 2 * beta, delta);

    // stencil k_{i +/- 1} = c_i c_{i +/- 1}
    double cm = std::sqrt(spec.kappa(Point{xi - h, 0}));
    double cp = std::sqrt(spec.kappa(Point{xi + h, 0}));
    double km = ci * cm, kp = ci * cp;
    auto col = [&](double x) {
      for (int j = 0; j < N; j++)
        if (std::abs(grid.interior[j][0] - x) < 1e-12) return j;
      return -1;
    };
    int jm = col(xi - h), jp = col(xi + h);
    if (jm >= 0) A(i, jm) += coef * km / (h * h);
    if (jp >= 0) A(i, jp) += coef * kp / (h * h);
    A(i, i) += -coef * (km + kp) / (h * h);
  }
  return A;
}

// 1D variable-order rows (kappa constant), before symmetrization.
inline Mat dense_beta_1d_unsym(const ProblemSpec& spec, const Grid& grid) {
  const int N = grid.n();
  const double h = grid.h;
  const double delta = spec.window.delta;
  const double kappa = spec.kappa(Point{0, 0});
  Sites st = all_sites(grid);
  Mat A(N, N);

  for (int i = 0; i < N; i++) {
    double xi = grid.interior[i][0];
    double bi = spec.beta(grid.interior[i]);
    double dbi = spec.beta.gradient(grid.interior[i])[0];

    for (size_t q = 0; q < st.pts.size(); q++) {
      double xj = st.pts[q][0];
      if (xj == xi) continue;
      double bj = spec.beta(st.pts[q]);
      double gamma = kappa / std::pow(std::abs(xj - xi), 1 + bi + bj);
      if (st.interior[q]) A(i, st.interior_idx[q]) += -2 * h * gamma;
      A(i, i) += 2 * h * gamma;
    }

    double sw = 0, swlog = 0;
    for (size_t q = 0; q < st.pts.size(); q++) {
      double r = std::abs(st.pts[q][0] - xi);
      if (r == 0 || r >= delta) continue;
      sw += wfun(r, delta) * std::pow(r, 1 - 2 * bi);
      swlog += wfun(r, delta) * std::log(r) * std::pow(r, 1 - 2 * bi);
    }
    double Ia = 2 * win_int(1 - 2 * bi, delta);
    double Ib = dbi * 2 * win_int_log(1 - 2 * bi, delta);
    double a_coef = h * sw - Ia;                   // multiplies u''_i
    double b_coef = -2 * (h * dbi * swlog - Ib);   // multiplies u'_i

    auto col = [&](double x) {
      for (int j = 0; j < N; j++)
        if (std::abs(grid.interior[j][0] - x) < 1e-12) return j;
      return -1;
    };
    int jm = col(xi - h), jp = col(xi + h);
    if (jm >= 0) A(i, jm) += kappa * (a_coef / (h * h) - b_coef / (2 * h));
    if (jp >= 0) A(i, jp) += kappa * (a_coef / (h * h) + b_coef / (2 * h));
    A(i, i) += kappa * (-2 * a_coef / (h * h));
  }
  return A;
}

// 2D rows for either variable kappa (constant beta) or variable beta
// (constant kappa), per-direction corrections, before symmetrization.
inline Mat dense_sym_2d_unsym(const ProblemSpec& spec, const Grid& grid) {
  const int N = grid.n();
  const double h = grid.h;
  const double h2 = h * h;
  const double delta = spec.window.delta;
  const bool var_beta = spec.formulation == fradi::Formulation::symmetric_variable_beta;
  Sites st = all_sites(grid);
  Mat A(N, N);

  auto col = [&](double x, double y) {
    for (int j = 0; j < N; j++)
      if (std::abs(grid.interior[j][0] - x) < 1e-12 &&
          std::abs(grid.interior[j][1] - y) < 1e-12)
        return j;
    return -1;
  };

  for (int i = 0; i < N; i++) {
    Point pi = grid.interior[i];
    double ci = std::sqrt(spec.kappa(pi));
    double bi = spec.beta(pi);
    Point gb = var_beta ? spec.beta.gradient(pi) : Point{0, 0};

    for (size_t q = 0; q < st.pts.size(); q++) {
      Point pj = st.pts[q];
      double dx = pj[0] - pi[0], dy = pj[1] - pi[1];
      double r2 = dx * dx + dy * dy;
      if (r2 == 0) continue;
      double cj = std::sqrt(spec.kappa(pj));
      double bj = spec.beta(pj);
      double gamma = ci * cj / std::pow(std::sqrt(r2), 2 + bi + bj);
      if (st.interior[q]) A(i, st.interior_idx[q]) += -2 * h2 * gamma;
      A(i, i) += 2 * h2 * gamma;
    }

    for (int d = 0; d < 2; d++) {
      double sw = 0, swlog = 0;
      for (size_t q = 0; q < st.pts.size(); q++) {
        Point pj = st.pts[q];
        double dx = pj[0] - pi[0], dy = pj[1] - pi[1];
        double r = std::sqrt(dx * dx + dy * dy);
        if (r == 0 || r >= delta) continue;
        double dd = d == 0 ? dx : dy;
        double base = wfun(r, delta) * dd * dd / std::pow(r, 2 + 2 * bi);
        sw += base;
        if (var_beta) swlog += base * std::log(r);
      }
      double Iu2 = M_PI * win_int(1 - 2 * bi, delta);
      double su = h2 * sw - Iu2;
      double sl = 0;
      if (var_beta) {
        double Ilog = gb[d] * M_PI * win_int_log(1 - 2 * bi, delta);
        sl = -2 * (h2 * gb[d] * swlog - Ilog);
      }

      Point pm = pi, pp = pi;
      pm[d] -= h;
      pp[d] += h;
      double km = ci * std::sqrt(spec.kappa(pm));
      double kp = ci * std::sqrt(spec.kappa(pp));
      double kap = ci * ci;
      int jm = col(pm[0], pm[1]), jp = col(pp[0], pp[1]);
      if (jm >= 0) A(i, jm) += su * km / h2 - kap * sl / (2 * h);
      if (jp >= 0) A(i, jp) += su * kp / h2 + kap * sl / (2 * h);
      A(i, i) += -su * (km + kp) / h2;
    }
  }
  return A;
}

// Symmetrization rule used for the variable-order operators: average the
// off-diagonal interior legs, rebuild the diagonal from the row (the legs on
// exterior sites and the kernel part stay put, so row identities survive).
inline void symmetrize_correction(Mat& A, const Mat& unsym_kernel_part) {
  const int N = A.rows;
  Mat C(N, N);
  for (int i = 0; i < N; i++)
    for (int j = 0; j < N; j++) C(i, j) = A(i, j) - unsym_kernel_part(i, j);
  for (int i = 0; i < N; i++)
    for (int j = 0; j < i; j++) {
      double avg = 0.5 * (C(i, j) + C(j, i));
      C(i, j) = C(j, i) = avg;
    }
  for (int i = 0; i < N; i++)
    for (int j = 0; j < N; j++) A(i, j) = unsym_kernel_part(i, j) + C(i, j);
}

// Non-symmetric formulation, Appendix rows: flux Q at the two nodes bracketing
// each midpoint, divergence by their difference.
inline Mat dense_nonsym_1d(const ProblemSpec& spec, const Grid& grid, bool treated) {
  const int N = grid.n();
  const double h = grid.h;
  const double delta = spec.window.delta;
  Mat A(N, N);

  auto flux_row = [&](double xnode, std::vector<double>& row, int& mid_left) {
    // Q(xnode) = -kappa omega (h sum_j (x_j - xnode) |x_j - xnode|^(-beta-2) u_j
    //                          + u'(xnode) (C1 + C2))
    double bet = spec.beta(Point{xnode, 0});
    double komega = spec.kappa(Point{xnode, 0}) * fradi::omega_value(bet, 1);
    row.assign(N, 0.0);
    for (int j = 0; j < N; j++) {
      double xj = grid.interior[j][0];
      row[j] += -komega * h * (xj - xnode) * std::pow(std::abs(xj - xnode), -bet - 2);
    }
    if (treated) {
      double c1 = 0;
      for (int t = 0;; t++) {
        double off = (t + 0.5) * h;
        if (off >= delta) break;
        c1 += wfun(off, delta) * std::pow(off, -bet);
      }
      c1 *= -2 * h;
      double c2 = 2 * win_int(-bet, delta);
      // u'(xnode) = (u at right midpoint - u at left midpoint)/h
      double s = komega * (c1 + c2);
      // columns of the two midpoints straddling xnode
      for (int j = 0; j < N; j++) {
        double xj = grid.interior[j][0];
        if (std::abs(xj - (xnode + h / 2)) < 1e-12) row[j] += -s / h;
        if (std::abs(xj - (xnode - h / 2)) < 1e-12) row[j] += s / h;
      }
    }
    (void)mid_left;
  };

  std::vector<double> ql, qr;
  int dummy;
  for (int i = 0; i < N; i++) {
    double xm = grid.interior[i][0];
    flux_row(xm - h / 2, ql, dummy);
    flux_row(xm + h / 2, qr, dummy);
    for (int j = 0; j < N; j++) A(i, j) = (qr[j] - ql[j]) / h;
  }
  return A;
}

}  // namespace oracles
