#include <omp.h>

#include <algorithm>
#include <limits>
#include <string>

#include "ridge/error.hpp"
#include "ridge/kernels.hpp"

namespace ridge::kernels {

namespace detail {
std::string describe_node(const TensorGrid& grid, std::size_t flat);
double complement_weight(const TensorGrid& grid, std::size_t flat, std::size_t axis);
}  // namespace detail

namespace {

// Reduction block length. Fixed so partial sums are the same for any
// number of threads.
constexpr std::size_t kBlock = 2048;

std::size_t block_count(std::size_t size) { return (size + kBlock - 1) / kBlock; }

}  // namespace

void set_max_threads(int threads) {
  omp_set_num_threads(threads > 0 ? threads : omp_get_num_procs());
}

int max_threads() { return omp_get_max_threads(); }

namespace omp {

void sample(const TensorGrid& grid, const PointFn& fn, std::span<double> out) {
  const auto size = static_cast<std::ptrdiff_t>(grid.size());
  std::size_t failed_at = std::numeric_limits<std::size_t>::max();
  std::string failure;
#pragma omp parallel
  {
    std::vector<double> y(grid.n);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < size; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      grid.point(idx, y);
      try {
        out[idx] = fn(y);
      } catch (const std::exception& e) {
#pragma omp critical(ridge_sample_error)
        if (idx < failed_at) {
          failed_at = idx;
          failure = e.what();
        }
      }
    }
  }
  if (failed_at != std::numeric_limits<std::size_t>::max()) {
    throw EvalError(failure + " at node y = " + detail::describe_node(grid, failed_at));
  }
}

double weighted_sum(std::span<const double> w, std::span<const double> a) {
  const std::size_t blocks = block_count(w.size());
  std::vector<double> partial(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(lo + kBlock, w.size());
    CompensatedSum s;
    for (std::size_t i = lo; i < hi; ++i) s.add(w[i] * a[i]);
    partial[static_cast<std::size_t>(b)] = s.value();
  }
  CompensatedSum total;
  for (double p : partial) total.add(p);
  return total.value();
}

double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b) {
  const std::size_t blocks = block_count(w.size());
  std::vector<double> partial(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t blk = 0; blk < static_cast<std::ptrdiff_t>(blocks); ++blk) {
    const std::size_t lo = static_cast<std::size_t>(blk) * kBlock;
    const std::size_t hi = std::min(lo + kBlock, w.size());
    CompensatedSum s;
    for (std::size_t i = lo; i < hi; ++i) s.add(w[i] * a[i] * b[i]);
    partial[static_cast<std::size_t>(blk)] = s.value();
  }
  CompensatedSum total;
  for (double p : partial) total.add(p);
  return total.value();
}

std::vector<double> axis_marginal(const TensorGrid& grid, std::span<const double> v,
                                  std::size_t axis) {
  const std::size_t q = grid.q;
  const std::size_t blocks = block_count(grid.size());
  std::vector<double> partial(blocks * q);
#pragma omp parallel
  {
    std::vector<CompensatedSum> acc(q);
#pragma omp for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
      std::fill(acc.begin(), acc.end(), CompensatedSum{});
      const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
      const std::size_t hi = std::min(lo + kBlock, grid.size());
      for (std::size_t i = lo; i < hi; ++i) {
        acc[grid.position(i, axis)].add(detail::complement_weight(grid, i, axis) * v[i]);
      }
      for (std::size_t k = 0; k < q; ++k) partial[static_cast<std::size_t>(b) * q + k] = acc[k].value();
    }
  }
  std::vector<double> out(q);
  for (std::size_t k = 0; k < q; ++k) {
    CompensatedSum s;
    for (std::size_t b = 0; b < blocks; ++b) s.add(partial[b * q + k]);
    out[k] = s.value();
  }
  return out;
}

void combine(const TensorGrid& grid, std::span<const std::size_t> axes,
             std::span<const std::span<const double>> components,
             std::span<const std::span<const double>> scales, std::span<double> out) {
  const auto size = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < size; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    double s = 0.0;
    for (std::size_t c = 0; c < axes.size(); ++c) {
      const double g = components[c][grid.position(idx, axes[c])];
      s += scales[c].empty() ? g : scales[c][idx] * g;
    }
    out[idx] = s;
  }
}

}  // namespace omp
}  // namespace ridge::kernels
