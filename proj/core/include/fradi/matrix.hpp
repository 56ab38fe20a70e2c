#pragma once

#include <cstring>
#include <vector>

namespace fradi {

/// Dense row-major matrix of doubles. Used both for full operators (small N)
/// and for tile factors inside the TLR structures.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  double operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  double* data() { return a.data(); }
  const double* data() const { return a.data(); }
  size_t size() const { return a.size(); }
  bool empty() const { return a.empty(); }

  bool same_bits(const Mat& o) const {
    return rows == o.rows && cols == o.cols &&
           (a.empty() || std::memcmp(a.data(), o.a.data(), a.size() * sizeof(double)) == 0);
  }
};

using DenseMatrix = Mat;

}  // namespace fradi
