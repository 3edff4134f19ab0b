// Serial reference kernels against their OpenMP counterparts on a
// 4-dimensional grid of growing order.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "ridge/domain.hpp"
#include "ridge/kernels.hpp"

namespace {

ridge::RSetDomain make_domain(std::size_t q) {
  return ridge::RSetDomain({{0, 1}, {0, 1}, {0, 1}}, {{0, 1}}, q);
}

double test_fn(std::span<const double> y) {
  return std::sin(y[0]) * y[1] * y[1] + std::exp(-y[2]) * y[3];
}

template <bool Parallel>
void BM_Sample(benchmark::State& state) {
  const auto dom = make_domain(static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(dom.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      ridge::kernels::omp::sample(dom.grid(), test_fn, out);
    } else {
      ridge::kernels::serial::sample(dom.grid(), test_fn, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(dom.size()));
}

template <bool Parallel>
void BM_WeightedDot(benchmark::State& state) {
  const auto dom = make_domain(static_cast<std::size_t>(state.range(0)));
  std::vector<double> v(dom.size());
  ridge::kernels::serial::sample(dom.grid(), test_fn, v);
  for (auto _ : state) {
    double s = Parallel ? ridge::kernels::omp::weighted_dot(dom.tensor_weights(), v, v)
                        : ridge::kernels::serial::weighted_dot(dom.tensor_weights(), v, v);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(dom.size()));
}

template <bool Parallel>
void BM_AxisMarginal(benchmark::State& state) {
  const auto dom = make_domain(static_cast<std::size_t>(state.range(0)));
  std::vector<double> v(dom.size());
  ridge::kernels::serial::sample(dom.grid(), test_fn, v);
  for (auto _ : state) {
    auto m = Parallel ? ridge::kernels::omp::axis_marginal(dom.grid(), v, 1)
                      : ridge::kernels::serial::axis_marginal(dom.grid(), v, 1);
    benchmark::DoNotOptimize(m.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(dom.size()));
}

}  // namespace

BENCHMARK(BM_Sample<false>)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_Sample<true>)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_WeightedDot<false>)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_WeightedDot<true>)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_AxisMarginal<false>)->Arg(8)->Arg(16)->Arg(32);
BENCHMARK(BM_AxisMarginal<true>)->Arg(8)->Arg(16)->Arg(32);

BENCHMARK_MAIN();
