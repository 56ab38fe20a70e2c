#pragma once

#include <functional>

namespace fradi {

/// Result of an adaptive quadrature. On success (converged == true)
/// error_estimate is bounded by the requested tolerance.
struct QuadResult {
  double value = 0;
  double error_estimate = 0;
  long evaluations = 0;
  bool converged = false;
};

/// Recursive adaptive Simpson quadrature on [a,b] with a 15-level depth cap.
/// The tolerance is applied in both absolute and relative sense. When the
/// cap is reached before the tolerance, converged is false and
/// error_estimate carries the accumulated estimate.
QuadResult adaptive_1d(const std::function<double(double)>& f, double a, double b,
                       double tol = 1e-12);

// Windowed correction integrals appearing after singularity subtraction.
// All are evaluated by exact term-by-term integration of the polynomial
// window; the *_quad variants cross-check through adaptive quadrature
// (the subinterval at the origin is integrated term-by-term to avoid the
// unbounded endpoint).

/// 2 * int_0^delta w(r) r^(1-2 beta) dr   (two-sided 1D window integral)
double corr_u2_1d(double beta, double delta);
/// 2 * dbeta * int_0^delta w(r) ln(r) r^(1-2 beta) dr
double corr_log_1d(double beta, double dbeta, double delta);
/// (1/n) int_{B_delta} w(|y|) |y|^(2-n-2 beta) dy; per-direction second-order
/// correction weight. Equals corr_u2_1d for n = 1; pi int_0^delta w r^(1-2b) dr for n = 2.
double corr_u2_nd(double beta, double delta, int n);
/// dbeta_d * (1/n) int_{B_delta} w(|y|) ln|y| |y|^(2-n-2 beta) dy
double corr_log_nd(double beta, double dbeta_d, double delta, int n);

double corr_u2_1d_quad(double beta, double delta, double tol = 1e-12);
double corr_log_1d_quad(double beta, double dbeta, double delta, double tol = 1e-12);
double corr_u2_nd_quad(double beta, double delta, int n, double tol = 1e-12);
double corr_log_nd_quad(double beta, double dbeta_d, double delta, int n, double tol = 1e-12);

}  // namespace fradi
