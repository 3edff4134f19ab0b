#pragma once

// Data-parallel kernels over a tensor-product quadrature grid.
//
// Every kernel has two implementations with identical contracts:
// `serial` is the straightforward reference kept for testing and
// benchmarking, `omp` is the OpenMP version used by the library. Reductions
// are compensated and the parallel versions partition work into fixed-size
// blocks, so results do not depend on the thread count.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace ridge::kernels {

/// Read-only view of a tensor grid with q nodes on each of n axes. Flat
/// sample index = sum_a k_a * q^(n-1-a), so axis 0 varies slowest.
struct TensorGrid {
  std::size_t n = 0;
  std::size_t q = 0;
  std::span<const double> nodes;         // n*q, axis-major
  std::span<const double> axis_weights;  // n*q, axis-major
  std::span<const double> weights;       // q^n tensor weights

  std::size_t size() const { return weights.size(); }
  std::size_t stride(std::size_t axis) const;
  std::size_t position(std::size_t flat, std::size_t axis) const {
    return (flat / stride(axis)) % q;
  }
  /// Coordinates of the node with the given flat index.
  void point(std::size_t flat, std::span<double> y) const;
};

using PointFn = std::function<double(std::span<const double>)>;

/// Neumaier compensated accumulator.
struct CompensatedSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double x) {
    const double t = sum + x;
    if ((sum >= 0 ? sum : -sum) >= (x >= 0 ? x : -x)) {
      carry += (sum - t) + x;
    } else {
      carry += (x - t) + sum;
    }
    sum = t;
  }
  double value() const { return sum + carry; }
};

/// Caps the number of worker threads; 0 restores the runtime default.
void set_max_threads(int threads);
int max_threads();

namespace serial {

/// out[i] = fn(node i). Evaluation errors are rethrown naming the node.
void sample(const TensorGrid& grid, const PointFn& fn, std::span<double> out);

/// sum_i w[i] * a[i]
double weighted_sum(std::span<const double> w, std::span<const double> a);

/// sum_i w[i] * a[i] * b[i]
double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b);

/// For each node k of `axis`: the quadrature sum of v over all other axes
/// with that axis fixed at node k.
std::vector<double> axis_marginal(const TensorGrid& grid, std::span<const double> v,
                                  std::size_t axis);

/// out[i] = sum_c scale[c][i] * component[c][position(i, axes[c])]; an empty
/// scale span means 1.
void combine(const TensorGrid& grid, std::span<const std::size_t> axes,
             std::span<const std::span<const double>> components,
             std::span<const std::span<const double>> scales, std::span<double> out);

}  // namespace serial

namespace omp {

void sample(const TensorGrid& grid, const PointFn& fn, std::span<double> out);
double weighted_sum(std::span<const double> w, std::span<const double> a);
double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b);
std::vector<double> axis_marginal(const TensorGrid& grid, std::span<const double> v,
                                  std::size_t axis);
void combine(const TensorGrid& grid, std::span<const std::size_t> axes,
             std::span<const std::span<const double>> components,
             std::span<const std::span<const double>> scales, std::span<double> out);

}  // namespace omp

}  // namespace ridge::kernels
