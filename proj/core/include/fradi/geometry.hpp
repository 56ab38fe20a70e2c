#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace fradi {

// A point in R^1 or R^2; the second coordinate is ignored in 1D.
using Point = std::array<double, 2>;

inline double dist2(const Point& a, const Point& b, int dim) {
  double s = 0;
  for (int d = 0; d < dim; d++) {
    double t = b[d] - a[d];
    s += t * t;
  }
  return s;
}

inline double dist(const Point& a, const Point& b, int dim) {
  return std::sqrt(dist2(a, b, dim));
}

// Axis-aligned box.
struct Box {
  Point lo{0, 0};
  Point hi{0, 0};

  double side(int d) const { return hi[d] - lo[d]; }

  double diameter(int dim) const {
    double s = 0;
    for (int d = 0; d < dim; d++) s += side(d) * side(d);
    return std::sqrt(s);
  }

  // Euclidean distance between two boxes; 0 when they touch or overlap.
  static double distance(const Box& a, const Box& b, int dim) {
    double s = 0;
    for (int d = 0; d < dim; d++) {
      double gap = std::max({0.0, a.lo[d] - b.hi[d], b.lo[d] - a.hi[d]});
      s += gap * gap;
    }
    return std::sqrt(s);
  }

  static Box bounding(const Point* pts, int count, int dim) {
    Box bb;
    for (int d = 0; d < dim; d++) {
      bb.lo[d] = std::numeric_limits<double>::infinity();
      bb.hi[d] = -std::numeric_limits<double>::infinity();
    }
    for (int i = 0; i < count; i++)
      for (int d = 0; d < dim; d++) {
        bb.lo[d] = std::min(bb.lo[d], pts[i][d]);
        bb.hi[d] = std::max(bb.hi[d], pts[i][d]);
      }
    return bb;
  }
};

}  // namespace fradi
