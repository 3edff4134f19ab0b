#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "ridge/gauss_legendre.hpp"
#include "ridge/geometry.hpp"
#include "ridge/kernels.hpp"

namespace ridge {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
};

/// An r-set Y = Y_1 x ... x Y_r x Y_0 with Y_0 an (n - r)-dimensional box,
/// discretized by a tensor Gauss–Legendre rule with q nodes per axis.
///
/// Axes 0..r-1 are the ridge axes Y_1..Y_r; axes r..n-1 span Y_0. Copies share
/// the same immutable grid.
class RSetDomain {
 public:
  static constexpr std::size_t kDefaultOrder = 8;

  RSetDomain(std::vector<Interval> ridge_intervals, std::vector<Interval> box0,
             std::size_t nodes_per_axis = kDefaultOrder);

  std::size_t r() const { return data_->r; }
  std::size_t m() const { return data_->box0.size(); }
  std::size_t n() const { return data_->r + data_->box0.size(); }
  std::size_t q() const { return data_->q; }
  std::size_t size() const { return data_->weights.size(); }

  const std::vector<Interval>& ridge_intervals() const { return data_->intervals; }
  const std::vector<Interval>& box0() const { return data_->box0; }
  /// Interval of axis a in 0..n-1.
  const Interval& axis_interval(std::size_t axis) const;

  std::span<const double> nodes(std::size_t axis) const;
  std::span<const double> axis_weights(std::size_t axis) const;
  std::span<const double> tensor_weights() const { return data_->weights; }

  /// |Y|
  double measure() const { return data_->measure; }
  /// |Y_i| for ridge axis i in 0..r-1.
  double ridge_measure(std::size_t i) const;
  /// |Y_0|; 1 when Y_0 is zero-dimensional.
  double box0_measure() const { return data_->box0_measure; }
  /// |Y^(i)|, the product of all factors except Y_i.
  double complement_measure(std::size_t i) const;

  kernels::TensorGrid grid() const;

  bool same_as(const RSetDomain& other) const { return data_ == other.data_; }

 private:
  struct Data {
    std::size_t r = 0;
    std::size_t q = 0;
    std::vector<Interval> intervals;
    std::vector<Interval> box0;
    std::vector<double> nodes;         // n*q
    std::vector<double> axis_weights;  // n*q
    std::vector<double> weights;       // q^n
    double measure = 0.0;
    double box0_measure = 1.0;
    std::vector<double> complement_measures;
  };
  std::shared_ptr<const Data> data_;
};

/// Samples of a function at every tensor node of a domain.
class GridFunction {
 public:
  GridFunction(RSetDomain domain, std::vector<double> samples);

  /// Constant function.
  static GridFunction constant(const RSetDomain& domain, double value);

  const RSetDomain& domain() const { return domain_; }
  std::span<const double> samples() const { return samples_; }
  double operator[](std::size_t i) const { return samples_[i]; }
  std::size_t size() const { return samples_.size(); }

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(const GridFunction& other);
  GridFunction& operator*=(double s);

  double max_abs() const;

 private:
  RSetDomain domain_;
  std::vector<double> samples_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(GridFunction a, const GridFunction& b);
GridFunction operator*(double s, GridFunction a);

/// Univariate g_i sampled at the q nodes of ridge axis `axis` (0-based; the
/// direction index is axis + 1).
struct RidgeComponent {
  std::size_t axis = 0;
  std::vector<double> values;
};

/// Samples fn at every node. Errors name the failing node.
GridFunction sample(const RSetDomain& dom, const PointFunction& fn);

/// Tensor quadrature of g over Y.
double integrate_full(const GridFunction& g);

/// Quadrature inner product over Y.
double inner(const GridFunction& a, const GridFunction& b);

/// Integral of g over Y^(axis) at each node of ridge axis `axis`.
RidgeComponent marginal(const GridFunction& g, std::size_t axis);

/// ||g||^2 over Y.
double norm_sq(const GridFunction& g);

/// Integral over Y of c(y_i)^2.
double ridge_norm_sq(const RidgeComponent& c, const RSetDomain& dom);

/// Node-wise sum_i weights[i] * components[i]. Empty `weights` means all ones.
GridFunction combine(const RSetDomain& dom, std::span<const RidgeComponent> components,
                     std::span<const GridFunction> weights = {});

/// Broadcast a component over the whole grid.
GridFunction broadcast(const RSetDomain& dom, const RidgeComponent& c);

/// Barycentric interpolation of a component at an arbitrary coordinate of its axis.
double interpolate(const RidgeComponent& c, const RSetDomain& dom, double t);

}  // namespace ridge
