#include "fradi/fields.hpp"

#include <cmath>
#include <stdexcept>

#include "fradi/special.hpp"

namespace fradi {

double window(double r, double delta) {
  double t = r / delta;
  if (t >= 1.0) return 0.0;
  double t4 = t * t * t * t;
  return 1.0 + t4 * (-35.0 + t * (84.0 + t * (-70.0 + t * 20.0)));
}

double bump_1d(double x, double c, double l) {
  double r = (x - c) / (l / 2);
  double s = 1.0 - r * r;
  if (s <= 0.0) return 0.0;
  return std::exp(-1.0 / s);
}

double d_bump_1d(double x, double c, double l) {
  double r = (x - c) / (l / 2);
  double s = 1.0 - r * r;
  if (s <= 0.0) return 0.0;
  // d/dr exp(-1/(1-r^2)) = -2r/(1-r^2)^2 * bump, times dr/dx = 2/l
  return std::exp(-1.0 / s) * (-2.0 * r / (s * s)) * (2.0 / l);
}

double bump_2d(const Point& x, const Point& c, double lx, double ly, double theta) {
  double dx = x[0] - c[0], dy = x[1] - c[1];
  double ct = std::cos(theta), st = std::sin(theta);
  // rotate by -theta into the bump frame
  double u = ct * dx + st * dy;
  double v = -st * dx + ct * dy;
  return bump_1d(u, 0.0, lx) * bump_1d(v, 0.0, ly);
}

ScalarField constant_field(double v) {
  ScalarField f;
  f.value = [v](const Point&) { return v; };
  f.gradient = [](const Point&) { return Point{0, 0}; };
  f.tag = FieldTag::constant;
  f.constant_value = v;
  return f;
}

ScalarField linear_field(double a, double b, int d) {
  ScalarField f;
  f.value = [a, b, d](const Point& p) { return a + b * p[d]; };
  f.gradient = [b, d](const Point&) {
    Point g{0, 0};
    g[d] = b;
    return g;
  };
  f.tag = FieldTag::linear;
  return f;
}

ScalarField kappa_bump_1d() {
  ScalarField f;
  f.value = [](const Point& p) { return 1.0 + bump_1d(p[0], 0.5, 1.0); };
  f.gradient = [](const Point& p) { return Point{d_bump_1d(p[0], 0.5, 1.0), 0}; };
  f.tag = FieldTag::bump1d;
  return f;
}

namespace {

struct Bump2dTerm {
  Point c;
  double lx, ly, theta, scale;
};

double bump2d_val(const Bump2dTerm& t, const Point& p) {
  return t.scale * bump_2d(p, t.c, t.lx, t.ly, t.theta);
}

Point bump2d_grad(const Bump2dTerm& t, const Point& p) {
  double dx = p[0] - t.c[0], dy = p[1] - t.c[1];
  double ct = std::cos(t.theta), st = std::sin(t.theta);
  double u = ct * dx + st * dy;
  double v = -st * dx + ct * dy;
  double bu = bump_1d(u, 0, t.lx), bv = bump_1d(v, 0, t.ly);
  double du = d_bump_1d(u, 0, t.lx) * bv, dv = bu * d_bump_1d(v, 0, t.ly);
  // chain rule back through the rotation
  return Point{t.scale * (du * ct - dv * st), t.scale * (du * st + dv * ct)};
}

}  // namespace

ScalarField kappa_two_bumps_2d() {
  Bump2dTerm t1{{0.2, 0.25}, 1.4, 1.4, M_PI / 4, 2.5};
  Bump2dTerm t2{{-0.1, -0.2}, 1.4, 1.8, -M_PI / 10, 2.5};
  ScalarField f;
  f.value = [t1, t2](const Point& p) {
    return 1.0 + bump2d_val(t1, p) + bump2d_val(t2, p);
  };
  f.gradient = [t1, t2](const Point& p) {
    Point g1 = bump2d_grad(t1, p), g2 = bump2d_grad(t2, p);
    return Point{g1[0] + g2[0], g1[1] + g2[1]};
  };
  f.tag = FieldTag::bump2d_sum;
  return f;
}

ScalarField beta_bump_2d() {
  Bump2dTerm t{{0, 0}, 2.0, 2.0, 0.0, -0.2};
  ScalarField f;
  f.value = [t](const Point& p) { return 0.8 + bump2d_val(t, p); };
  f.gradient = [t](const Point& p) { return bump2d_grad(t, p); };
  f.tag = FieldTag::bump2d_sum;
  return f;
}

void ProblemSpec::validate() const {
  if (dim != 1 && dim != 2)
    throw std::invalid_argument("ProblemSpec: dim must be 1 or 2");
  double clearance = std::numeric_limits<double>::infinity();
  for (int d = 0; d < dim; d++) {
    if (!(interior.lo[d] > exterior.lo[d] && interior.hi[d] < exterior.hi[d]))
      throw std::invalid_argument("ProblemSpec: interior box must lie strictly inside exterior box");
    clearance = std::min({clearance, interior.lo[d] - exterior.lo[d],
                          exterior.hi[d] - interior.hi[d]});
  }
  if (!(window.delta > 0))
    throw std::invalid_argument("ProblemSpec: window radius must be positive");
  if (window.delta > clearance + 1e-12 * clearance)
    throw std::invalid_argument(
        "ProblemSpec: window radius exceeds the clearance between the interior "
        "box and the outer boundary; correction integrals would be clipped");
  if (!kappa.value || !beta.value)
    throw std::invalid_argument("ProblemSpec: kappa and beta fields are required");
}

double gamma_sym(const Point& x, const Point& y, const ProblemSpec& spec) {
  double r2 = dist2(x, y, spec.dim);
  if (r2 == 0.0) throw std::domain_error("gamma_sym: coincident points");
  double expo = spec.dim + spec.beta(x) + spec.beta(y);
  return std::sqrt(spec.kappa(x) * spec.kappa(y)) * std::pow(r2, -0.5 * expo);
}

double omega_value(double beta, int n) {
  if (!(beta > 0.0 && beta < 1.0))
    throw std::domain_error("omega: beta must lie in (0,1)");
  return std::pow(2.0, beta) * gamma_fn((n + beta + 1.0) / 2.0) /
         (std::pow(M_PI, 0.5 * n) * gamma_fn((1.0 - beta) / 2.0));
}

double omega(const Point& x, const ProblemSpec& spec) {
  return omega_value(spec.beta(x), spec.dim);
}

}  // namespace fradi
