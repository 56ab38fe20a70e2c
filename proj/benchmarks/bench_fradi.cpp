#include <benchmark/benchmark.h>

#include "fradi/assembly.hpp"
#include "fradi/clustering.hpp"
#include "fradi/rng.hpp"
#include "fradi/tlr.hpp"
#include "fradi/tlr_cholesky.hpp"

using namespace fradi;

namespace {

struct Setup {
  ProblemSpec spec;
  Grid grid;
  TilePartition part;
  DiscreteOperator op;
};

Setup make_setup(int cells, int m) {
  Setup s;
  s.spec.formulation = Formulation::symmetric_variable_beta;
  s.spec.dim = 2;
  s.spec.interior = {{-1, -1}, {1, 1}};
  s.spec.exterior = {{-2, -2}, {2, 2}};
  s.spec.kappa = constant_field(1.0);
  s.spec.beta = beta_bump_2d();
  s.spec.window.delta = 4.0 * 2.0 / cells;
  s.spec.source = constant_field(1.0);
  s.grid = make_grid(s.spec, cells);
  s.part = order_points(s.grid.interior, m, 2);
  s.grid.apply_ordering(s.part.perm);
  s.op = assemble(s.spec, s.grid);
  return s;
}

}  // namespace

static void BM_EntryBlock(benchmark::State& state) {
  auto s = make_setup(32, 32);
  int m = 32;
  Mat out;
  for (auto _ : state) {
    s.op.eval_block(0, m, m, 2 * m, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * m * m);
}
BENCHMARK(BM_EntryBlock);

static void BM_Assemble(benchmark::State& state) {
  int cells = static_cast<int>(state.range(0));
  ProblemSpec spec;
  spec.formulation = Formulation::symmetric_variable_beta;
  spec.dim = 2;
  spec.interior = {{-1, -1}, {1, 1}};
  spec.exterior = {{-2, -2}, {2, 2}};
  spec.kappa = constant_field(1.0);
  spec.beta = beta_bump_2d();
  spec.window.delta = 4.0 * 2.0 / cells;
  spec.source = constant_field(1.0);
  Grid grid = make_grid(spec, cells);
  for (auto _ : state) {
    auto op = assemble(spec, grid);
    benchmark::DoNotOptimize(op.diag.data());
  }
  state.SetComplexityN(grid.n());
}
BENCHMARK(BM_Assemble)->Arg(16)->Arg(32)->Complexity();

static void BM_AraKernelTile(benchmark::State& state) {
  auto s = make_setup(32, 32);
  Mat tile;
  s.op.eval_block(0, 32, 9 * 32, 10 * 32, tile);  // a well-separated tile
  LinOp lin;
  lin.rows = lin.cols = 32;
  lin.apply = [&](const Mat& X, Mat& Y) {
    Y = Mat(32, X.cols);
    for (int i = 0; i < 32; i++)
      for (int q = 0; q < X.cols; q++) {
        double acc = 0;
        for (int j = 0; j < 32; j++) acc += tile(i, j) * X(j, q);
        Y(i, q) = acc;
      }
  };
  lin.applyT = [&](const Mat& X, Mat& Y) {
    Y = Mat(32, X.cols);
    for (int j = 0; j < 32; j++)
      for (int q = 0; q < X.cols; q++) {
        double acc = 0;
        for (int i = 0; i < 32; i++) acc += tile(i, j) * X(i, q);
        Y(j, q) = acc;
      }
  };
  CounterRng rng(1, 2);
  for (auto _ : state) {
    auto r = ara(lin, 1e-6, rng);
    benchmark::DoNotOptimize(r.tile.U.data());
  }
}
BENCHMARK(BM_AraKernelTile);

static void BM_TlrBuild(benchmark::State& state) {
  auto s = make_setup(static_cast<int>(state.range(0)), 32);
  for (auto _ : state) {
    TLRMatrix A = assemble_tlr(s.op, s.part, 1e-6, {});
    benchmark::DoNotOptimize(A.diag.data());
  }
}
BENCHMARK(BM_TlrBuild)->Arg(16)->Arg(32);

static void BM_TlrMatvec(benchmark::State& state) {
  auto s = make_setup(32, 32);
  TLRMatrix A = assemble_tlr(s.op, s.part, 1e-6, {});
  std::vector<double> x(A.n, 1.0);
  for (auto _ : state) {
    auto y = matvec(A, x);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * A.n);
}
BENCHMARK(BM_TlrMatvec);

static void BM_TlrFactorize(benchmark::State& state) {
  auto s = make_setup(static_cast<int>(state.range(0)), 32);
  TLRMatrix A = assemble_tlr(s.op, s.part, 1e-6, {});
  for (auto _ : state) {
    TLRFactor L = factorize(A, 1e-6);
    benchmark::DoNotOptimize(L.diag.data());
  }
}
BENCHMARK(BM_TlrFactorize)->Arg(16)->Arg(32);

BENCHMARK_MAIN();
