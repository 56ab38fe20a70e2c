#include "fradi/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "fradi/fields.hpp"

namespace fradi {

namespace {

constexpr int kMaxDepth = 15;

struct AdaptState {
  const std::function<double(double)>& f;
  long evals = 0;
  double err = 0;
  bool capped = false;
};

double simpson_rec(AdaptState& st, double a, double b, double fa, double fm,
                   double fb, double whole, double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = st.f(lm), frm = st.f(rm);
  st.evals += 2;
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol || depth >= kMaxDepth) {
    if (std::abs(delta) > 15.0 * tol) st.capped = true;
    st.err += std::abs(delta) / 15.0;
    return left + right + delta / 15.0;
  }
  return simpson_rec(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
         simpson_rec(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

// Window polynomial as (power, coefficient) pairs of t = r/delta.
constexpr int kWinPow[5] = {0, 4, 5, 6, 7};
constexpr double kWinCoef[5] = {1.0, -35.0, 84.0, -70.0, 20.0};

// int_0^(u*delta) w(r) r^a dr = delta^(a+1) * sum_k c_k u^g / g, g = a+k+1.
double win_power_partial(double a, double delta, double u) {
  double s = 0;
  for (int k = 0; k < 5; k++) {
    double g = a + kWinPow[k] + 1.0;
    s += kWinCoef[k] * std::pow(u, g) / g;
  }
  return std::pow(delta, a + 1.0) * s;
}

// int_0^(u*delta) w(r) ln(r) r^a dr, term by term.
double win_power_log_partial(double a, double delta, double u) {
  double lu = std::log(u * delta);
  double s = 0;
  for (int k = 0; k < 5; k++) {
    double g = a + kWinPow[k] + 1.0;
    double ug = std::pow(u, g);
    s += kWinCoef[k] * (ug * lu / g - ug / (g * g));
  }
  return std::pow(delta, a + 1.0) * s;
}

void check_corr_args(double beta, double delta, int n) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::domain_error("corr integral: beta must lie in (0,1)");
  if (!(delta > 0.0)) throw std::domain_error("corr integral: delta must be positive");
  if (n != 1 && n != 2) throw std::domain_error("corr integral: n must be 1 or 2");
}

// Quadrature cross-check path: analytic on the origin subinterval [0, delta/8]
// (the integrand r^(1-2 beta) is unbounded there for beta > 1/2), adaptive
// Simpson on the smooth remainder.
double win_integral_quad(double a, double delta, bool with_log, double tol) {
  double u0 = 0.125;
  double head = with_log ? win_power_log_partial(a, delta, u0)
                         : win_power_partial(a, delta, u0);
  auto f = [a, delta, with_log](double r) {
    double v = window(r, delta) * std::pow(r, a);
    return with_log ? v * std::log(r) : v;
  };
  QuadResult tail = adaptive_1d(f, u0 * delta, delta, tol);
  if (!tail.converged)
    throw std::runtime_error("corr integral quadrature path failed to converge");
  return head + tail.value;
}

}  // namespace

QuadResult adaptive_1d(const std::function<double(double)>& f, double a, double b,
                       double tol) {
  if (!(a < b)) throw std::invalid_argument("adaptive_1d: requires a < b");
  AdaptState st{f};
  double fa = f(a), fm = f(0.5 * (a + b)), fb = f(b);
  st.evals = 3;
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  double tol_eff = std::max(tol, tol * std::abs(whole));
  QuadResult out;
  out.value = simpson_rec(st, a, b, fa, fm, fb, whole, tol_eff, 0);
  out.error_estimate = st.err;
  out.evaluations = st.evals;
  out.converged = !st.capped;
  return out;
}

double corr_u2_1d(double beta, double delta) {
  check_corr_args(beta, delta, 1);
  return 2.0 * win_power_partial(1.0 - 2.0 * beta, delta, 1.0);
}

double corr_log_1d(double beta, double dbeta, double delta) {
  check_corr_args(beta, delta, 1);
  return 2.0 * dbeta * win_power_log_partial(1.0 - 2.0 * beta, delta, 1.0);
}

double corr_u2_nd(double beta, double delta, int n) {
  check_corr_args(beta, delta, n);
  if (n == 1) return corr_u2_1d(beta, delta);
  return M_PI * win_power_partial(1.0 - 2.0 * beta, delta, 1.0);
}

double corr_log_nd(double beta, double dbeta_d, double delta, int n) {
  check_corr_args(beta, delta, n);
  if (n == 1) return corr_log_1d(beta, dbeta_d, delta);
  return dbeta_d * M_PI * win_power_log_partial(1.0 - 2.0 * beta, delta, 1.0);
}

double corr_u2_1d_quad(double beta, double delta, double tol) {
  check_corr_args(beta, delta, 1);
  return 2.0 * win_integral_quad(1.0 - 2.0 * beta, delta, false, tol);
}

double corr_log_1d_quad(double beta, double dbeta, double delta, double tol) {
  check_corr_args(beta, delta, 1);
  return 2.0 * dbeta * win_integral_quad(1.0 - 2.0 * beta, delta, true, tol);
}

double corr_u2_nd_quad(double beta, double delta, int n, double tol) {
  check_corr_args(beta, delta, n);
  if (n == 1) return corr_u2_1d_quad(beta, delta, tol);
  return M_PI * win_integral_quad(1.0 - 2.0 * beta, delta, false, tol);
}

double corr_log_nd_quad(double beta, double dbeta_d, double delta, int n, double tol) {
  check_corr_args(beta, delta, n);
  if (n == 1) return corr_log_1d_quad(beta, dbeta_d, delta, tol);
  return dbeta_d * M_PI * win_integral_quad(1.0 - 2.0 * beta, delta, true, tol);
}

}  // namespace fradi
