#include <benchmark/benchmark.h>

#include <map>
#include <numeric>

#include "qcuntz/kernels.hpp"
#include "qcuntz/rep.hpp"

using namespace qcuntz;

namespace {

// UnboundedXJ(n=2, j=1) on words up to length L and levels [-8, 8].
const OperatorFamily& family(int L) {
  static std::map<int, OperatorFamily> cache;
  auto it = cache.find(L);
  if (it == cache.end()) {
    it = cache.emplace(L, build_generators(RepSpec::unbounded_xj(0.5, 2, 1, 2.8), {L, -8, 8})).first;
  }
  return it->second;
}

template <SparseMatrix (*Multiply)(const SparseMatrix&, const SparseMatrix&)>
void BM_Relation(benchmark::State& state) {
  const OperatorFamily& f = family(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(Multiply(f.A_adj(1), f.A(1)));
    benchmark::DoNotOptimize(Multiply(f.A(1), f.A_adj(1)));
  }
  state.counters["dim"] = static_cast<double>(f.dim());
}

template <std::vector<double> (*Norms)(const SparseMatrix&, std::span<const std::size_t>)>
void BM_ColumnNorms(benchmark::State& state) {
  const OperatorFamily& f = family(static_cast<int>(state.range(0)));
  const SparseMatrix M = kernels::serial::multiply(f.A_adj(1), f.A(1));
  std::vector<std::size_t> cols(f.dim());
  std::iota(cols.begin(), cols.end(), 0);
  for (auto _ : state) benchmark::DoNotOptimize(Norms(M, cols));
  state.counters["dim"] = static_cast<double>(f.dim());
}

}  // namespace

BENCHMARK(BM_Relation<kernels::serial::multiply>)->Name("multiply/serial")->DenseRange(4, 8, 2);
BENCHMARK(BM_Relation<kernels::parallel::multiply>)->Name("multiply/parallel")->DenseRange(4, 8, 2);
BENCHMARK(BM_ColumnNorms<kernels::serial::column_norms>)->Name("column_norms/serial")->DenseRange(4, 8, 2);
BENCHMARK(BM_ColumnNorms<kernels::parallel::column_norms>)->Name("column_norms/parallel")->DenseRange(4, 8, 2);

BENCHMARK_MAIN();
