// Serial reference kernels against their OpenMP counterparts.
//
//   ./bench_kernels --benchmark_filter=Gram
//   ENVMM_THREADS=4 ./bench_kernels

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "envmm/kernels.hpp"

namespace {

using envmm::Matrix;

struct Inputs {
  Matrix u, v, lambda;
  std::vector<double> w;
};

Inputs make_inputs(int atoms, int dim) {
  std::mt19937_64 rng(atoms * 131 + dim);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.1, 2.0);
  Inputs in{Matrix(atoms, dim), Matrix(atoms, dim), Matrix(dim, dim), std::vector<double>(atoms)};
  for (Matrix* m : {&in.u, &in.v, &in.lambda}) {
    for (Eigen::Index i = 0; i < m->size(); ++i) m->data()[i] = normal(rng);
  }
  for (auto& x : in.w) x = unif(rng);
  return in;
}

template <bool Parallel>
void BM_Gram(benchmark::State& state) {
  const Inputs in = make_inputs(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    Matrix g = Parallel ? envmm::kernels::parallel::weighted_gram(in.u, in.v, in.w)
                        : envmm::kernels::serial::weighted_gram(in.u, in.v, in.w);
    benchmark::DoNotOptimize(g.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_ResidualEnergy(benchmark::State& state) {
  const Inputs in = make_inputs(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    double e = Parallel ? envmm::kernels::parallel::weighted_residual_energy(in.u, in.v, in.lambda, in.w)
                        : envmm::kernels::serial::weighted_residual_energy(in.u, in.v, in.lambda, in.w);
    benchmark::DoNotOptimize(e);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Parallel>
void BM_ApplyRows(benchmark::State& state) {
  const Inputs in = make_inputs(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  for (auto _ : state) {
    Matrix r = Parallel ? envmm::kernels::parallel::apply_rows(in.u, in.lambda)
                        : envmm::kernels::serial::apply_rows(in.u, in.lambda);
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void sizes(benchmark::internal::Benchmark* b) {
  for (int atoms : {256, 4096, 65536}) {
    for (int dim : {8, 32}) b->Args({atoms, dim});
  }
}

BENCHMARK(BM_Gram<false>)->Name("Gram/serial")->Apply(sizes);
BENCHMARK(BM_Gram<true>)->Name("Gram/parallel")->Apply(sizes);
BENCHMARK(BM_ResidualEnergy<false>)->Name("ResidualEnergy/serial")->Apply(sizes);
BENCHMARK(BM_ResidualEnergy<true>)->Name("ResidualEnergy/parallel")->Apply(sizes);
BENCHMARK(BM_ApplyRows<false>)->Name("ApplyRows/serial")->Apply(sizes);
BENCHMARK(BM_ApplyRows<true>)->Name("ApplyRows/parallel")->Apply(sizes);

}  // namespace

BENCHMARK_MAIN();
