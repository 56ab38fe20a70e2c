#include "doctest.h"
#include "fradi/assembly.hpp"
#include "fradi/dense.hpp"
#include "fradi/rng.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace fradi;

namespace {

Mat random_spd(int n, uint64_t seed) {
  CounterRng rng(seed);
  Mat G(n, n);
  rng.fill_gaussian(G, 0);
  Mat A(n, n);
  for (int i = 0; i < n; i++)
    for (int j = 0; j < n; j++) {
      double s = 0;
      for (int k = 0; k < n; k++) s += G(i, k) * G(j, k);
      A(i, j) = s + (i == j ? n * 0.01 : 0.0);
    }
  return A;
}

double residual(const Mat& A, const std::vector<double>& x, const std::vector<double>& b) {
  double rn = 0, bn = 0;
  for (int i = 0; i < A.rows; i++) {
    double s = 0;
    for (int j = 0; j < A.cols; j++) s += A(i, j) * x[j];
    rn += (s - b[i]) * (s - b[i]);
    bn += b[i] * b[i];
  }
  return std::sqrt(rn / bn);
}

}  // namespace

TEST_CASE("assemble_dense equals the entry oracle and enforces the cap") {
  ProblemSpec s;
  s.formulation = Formulation::symmetric_variable_kappa;
  s.dim = 1;
  s.interior = {{-1, 0}, {1, 0}};
  s.exterior = {{-2, 0}, {2, 0}};
  s.kappa = kappa_bump_1d();
  s.beta = constant_field(0.75);
  s.window.delta = 4.0 * 2.0 / 64;
  s.source = constant_field(1.0);
  Grid g = make_grid(s, 64);
  auto op = assemble(s, g);
  Mat A = assemble_dense(op);
  CounterRng rng(3);
  for (int t = 0; t < 10000; t++) {
    int i = static_cast<int>(rng.uniform(2 * t) * g.n());
    int j = static_cast<int>(rng.uniform(2 * t + 1) * g.n());
    i = std::min(i, g.n() - 1);
    j = std::min(j, g.n() - 1);
    CHECK(A(i, j) == op.entry(i, j));  // same code path, bit-equal
  }
  CHECK_THROWS_AS(assemble_dense(op, 32), std::invalid_argument);
}

TEST_CASE("cholesky of identity and diagonal matrices") {
  Mat I(4, 4);
  for (int i = 0; i < 4; i++) I(i, i) = 1.0;
  auto f = dense_cholesky(I);
  for (int i = 0; i < 4; i++)
    for (int j = 0; j < 4; j++) CHECK(f.L(i, j) == doctest::Approx(i == j ? 1.0 : 0.0));

  Mat D4(3, 3);
  for (int i = 0; i < 3; i++) D4(i, i) = 4.0;
  auto f2 = dense_cholesky(D4);
  for (int i = 0; i < 3; i++) CHECK(f2.L(i, i) == doctest::Approx(2.0));
}

TEST_CASE("random SPD: solve residual below 1e-10") {
  for (int n : {16, 64, 257}) {
    Mat A = random_spd(n, 42 + n);
    auto f = dense_cholesky(A);
    CounterRng rng(7);
    std::vector<double> b(n);
    for (int i = 0; i < n; i++) b[i] = rng.normal(i);
    auto x = dense_solve(f, b);
    CHECK(residual(A, x, b) <= 1e-10);
  }
}

TEST_CASE("cholesky failure reports index and pivot") {
  Mat A(3, 3);
  A(0, 0) = 1;
  A(1, 1) = -2;
  A(2, 2) = 1;
  try {
    dense_cholesky(A);
    FAIL("expected SpdError");
  } catch (const SpdError& e) {
    CHECK(e.index == 1);
    CHECK(e.pivot == doctest::Approx(-2.0));
  }
}

TEST_CASE("LU solves a nonsymmetric system") {
  const int n = 50;
  CounterRng rng(11);
  Mat A(n, n);
  rng.fill_gaussian(A, 0);
  for (int i = 0; i < n; i++) A(i, i) += 10.0;
  std::vector<double> b(n);
  for (int i = 0; i < n; i++) b[i] = rng.normal(5000 + i);
  auto f = dense_lu(A);
  auto x = dense_solve(f, b);
  CHECK(residual(A, x, b) <= 1e-12);
}

TEST_CASE("svd_eps_rank basic cases") {
  Mat Z(8, 8);
  CHECK(svd_eps_rank(Z, 1e-12) == 0);

  // rank-1 outer product
  Mat uv(6, 5);
  for (int i = 0; i < 6; i++)
    for (int j = 0; j < 5; j++) uv(i, j) = (i + 1.0) * (j + 2.0);
  CHECK(svd_eps_rank(uv, 1e-8) == 1);
  CHECK(svd_eps_rank(uv, 1e12) == 0);  // eps above ||u|| ||v||
}

TEST_CASE("eps-rank of a separated kernel tile grows about linearly in |log eps|") {
  // 1D kernel block between two well-separated segments
  const int m = 48;
  Mat T(m, m);
  for (int i = 0; i < m; i++)
    for (int j = 0; j < m; j++) {
      double x = 0.0 + i * (1.0 / m), y = 2.0 + j * (1.0 / m);
      T(i, j) = std::pow(std::abs(y - x), -2.5);
    }
  std::vector<int> ranks;
  for (double eps : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10}) ranks.push_back(svd_eps_rank(T, eps));
  for (size_t q = 1; q < ranks.size(); q++) CHECK(ranks[q] >= ranks[q - 1]);
  // increments stay roughly constant (linear trend in |log eps|)
  int d1 = ranks[1] - ranks[0], d4 = ranks[4] - ranks[3];
  CHECK(d1 >= 1);
  CHECK(d4 >= 1);
  CHECK(std::abs(d4 - d1) <= 2);
}
