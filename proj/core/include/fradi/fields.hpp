#pragma once

#include <functional>
#include <string>

#include "fradi/geometry.hpp"

namespace fradi {

/// Radial window localizing the singularity subtraction.
/// w(r) = 1 - 35t^4 + 84t^5 - 70t^6 + 20t^7, t = r/delta, for r < delta, else 0.
/// Satisfies w(r) = 1 + O(r^4) near 0 and vanishes with three derivatives at delta.
double window(double r, double delta);

/// C-infinity bump with support of width l centered at c:
/// exp(-1/(1-r^2)) with r = (x-c)/(l/2) for |r| < 1, else 0.
double bump_1d(double x, double c, double l);
double d_bump_1d(double x, double c, double l);

/// Product of two 1D bumps along axes rotated by theta about center c.
double bump_2d(const Point& x, const Point& c, double lx, double ly, double theta);

struct WindowSpec {
  double delta = 0;  // window radius, same units as grid coordinates
};

enum class FieldTag { constant, linear, bump1d, bump2d_sum, custom };

/// Scalar coefficient field with optional analytic gradient.
/// Evaluators must be pure; they are called concurrently from many workers.
struct ScalarField {
  std::function<double(const Point&)> value;
  std::function<Point(const Point&)> gradient;  // empty when not supplied
  FieldTag tag = FieldTag::custom;
  double constant_value = 0;  // meaningful iff tag == constant

  double operator()(const Point& p) const { return value(p); }
  bool has_gradient() const { return static_cast<bool>(gradient); }
  bool is_constant() const { return tag == FieldTag::constant; }
};

ScalarField constant_field(double v);
/// a + b*x along coordinate d, with analytic gradient.
ScalarField linear_field(double a, double b, int d = 0);
/// kappa(x) = 1 + bump(x; 0.5, 1.0), the 1D variable-diffusivity test field.
ScalarField kappa_bump_1d();
/// kappa(x) = 1 + 2.5 bump2d(x,c1,l1,th1) + 2.5 bump2d(x,c2,l2,th2),
/// the 2D variable-diffusivity test field (two rotated bumps).
ScalarField kappa_two_bumps_2d();
/// beta(x) = 0.8 - 0.2 bump2d(x, 0, [2,2], 0), the 2D variable-order test field.
ScalarField beta_bump_2d();

enum class Formulation {
  symmetric_variable_kappa,
  symmetric_variable_beta,
  nonsymmetric_variable_beta,
};

/// Full problem description: formulation, geometry, coefficient fields,
/// window radius, and source term. Exterior values of u are identically zero.
struct ProblemSpec {
  Formulation formulation = Formulation::symmetric_variable_kappa;
  int dim = 1;
  Box interior;  // Omega
  Box exterior;  // Omega u Omega_0 (encloses interior strictly)
  ScalarField kappa;
  ScalarField beta;
  WindowSpec window;
  ScalarField source;

  /// Throws std::invalid_argument when geometry or window constraints are violated.
  void validate() const;
};

/// Symmetric kernel sqrt(kappa(x) kappa(y)) / |y-x|^(n + beta(x) + beta(y)).
/// Throws std::domain_error for coincident points.
double gamma_sym(const Point& x, const Point& y, const ProblemSpec& spec);

/// Scaling factor of the non-symmetric fractional gradient,
/// 2^b Gamma((n+b+1)/2) / (pi^(n/2) Gamma((1-b)/2)) at b = beta(x).
/// Throws std::domain_error when beta(x) is outside (0,1).
double omega(const Point& x, const ProblemSpec& spec);
double omega_value(double beta, int n);

}  // namespace fradi
