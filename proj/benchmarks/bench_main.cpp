// Microbenchmarks for the kernels that dominate experiment time: sparse
// products, the iterative eigensolver, the dense fallback, and one training
// step. Run with --benchmark_filter=... to pick a subset.

#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <vector>

#include "eigraph/graph.hpp"
#include "eigraph/linalg.hpp"
#include "eigraph/nn.hpp"
#include "eigraph/rng.hpp"
#include "eigraph/spectral.hpp"
#include "eigraph/synth.hpp"

using namespace eigraph;

namespace {

Matrix gaussian(int rows, int cols, std::uint64_t seed) {
  Matrix m(rows, cols);
  Rng rng = make_rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  return m;
}

void BM_spmv(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const StructureMatrix m = renormalized_adjacency(erdos_renyi_gnm(n, 10 * n, 1));
  std::vector<double> x(n, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(spmv(m, x));
  state.SetItemsProcessed(state.iterations() * m.sparse.nnz());
}

void BM_spmm(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int cols = static_cast<int>(state.range(1));
  const StructureMatrix m = renormalized_adjacency(erdos_renyi_gnm(n, 10 * n, 1));
  const Matrix h = gaussian(n, cols, 2);
  for (auto _ : state) benchmark::DoNotOptimize(spmm(m, h));
  state.SetItemsProcessed(state.iterations() * m.sparse.nnz() * cols);
}

void BM_top_eigenpairs(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int d = static_cast<int>(state.range(1));
  const StructureMatrix m = renormalized_adjacency(erdos_renyi_gnm(n, 10 * n, 1));
  for (auto _ : state) benchmark::DoNotOptimize(top_eigenpairs(m, d, 1e-10, 0, 3));
}

void BM_dense_eig_oracle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Matrix dense = to_dense(renormalized_adjacency(erdos_renyi_gnp(n, 0.1, 1)));
  for (auto _ : state) benchmark::DoNotOptimize(dense_eig_oracle(dense));
}

void BM_train_step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  SynthConfig cfg = desk_preset();
  cfg.num_nodes = n;
  cfg.seed = 4;
  const SynthDataset data = generate_synth(cfg, 20, 30);
  const StructureMatrix m = renormalized_adjacency(data.graph);
  const Model model =
      init_model(Arch::gcn, {data.features.cols(), 16, cfg.num_communities}, 5, true);
  Gradients grads;
  for (auto _ : state) {
    const ForwardTrace trace = node_forward(model, &m, data.features);
    benchmark::DoNotOptimize(
        loss_and_grads(model, trace, &m, data.labels, data.splits.train, 5e-4, grads));
  }
}

BENCHMARK(BM_spmv)->Arg(2000)->Arg(20000);
BENCHMARK(BM_spmm)->Args({2000, 16})->Args({2000, 64})->Args({20000, 16});
BENCHMARK(BM_top_eigenpairs)->Args({2000, 8})->Args({2000, 32})->Args({10000, 16});
BENCHMARK(BM_dense_eig_oracle)->Arg(100)->Arg(200);
BENCHMARK(BM_train_step)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
