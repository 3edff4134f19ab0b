#include <cstdio>
#include <string>

#include "ridge/error.hpp"
#include "ridge/kernels.hpp"

namespace ridge::kernels {

std::size_t TensorGrid::stride(std::size_t axis) const {
  std::size_t s = 1;
  for (std::size_t a = axis + 1; a < n; ++a) s *= q;
  return s;
}

void TensorGrid::point(std::size_t flat, std::span<double> y) const {
  for (std::size_t a = n; a-- > 0;) {
    y[a] = nodes[a * q + flat % q];
    flat /= q;
  }
}

namespace detail {

std::string describe_node(const TensorGrid& grid, std::size_t flat) {
  std::vector<double> y(grid.n);
  grid.point(flat, y);
  std::string s = "(";
  char buf[32];
  for (std::size_t a = 0; a < grid.n; ++a) {
    std::snprintf(buf, sizeof buf, "%.17g", y[a]);
    if (a) s += ", ";
    s += buf;
  }
  return s + ")";
}

double complement_weight(const TensorGrid& grid, std::size_t flat, std::size_t axis) {
  double w = 1.0;
  for (std::size_t a = grid.n; a-- > 0;) {
    if (a != axis) w *= grid.axis_weights[a * grid.q + flat % grid.q];
    flat /= grid.q;
  }
  return w;
}

}  // namespace detail

namespace serial {

void sample(const TensorGrid& grid, const PointFn& fn, std::span<double> out) {
  std::vector<double> y(grid.n);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    grid.point(i, y);
    try {
      out[i] = fn(y);
    } catch (const std::exception& e) {
      throw EvalError(std::string(e.what()) + " at node y = " + detail::describe_node(grid, i));
    }
  }
}

double weighted_sum(std::span<const double> w, std::span<const double> a) {
  CompensatedSum s;
  for (std::size_t i = 0; i < w.size(); ++i) s.add(w[i] * a[i]);
  return s.value();
}

double weighted_dot(std::span<const double> w, std::span<const double> a,
                    std::span<const double> b) {
  CompensatedSum s;
  for (std::size_t i = 0; i < w.size(); ++i) s.add(w[i] * a[i] * b[i]);
  return s.value();
}

std::vector<double> axis_marginal(const TensorGrid& grid, std::span<const double> v,
                                  std::size_t axis) {
  std::vector<CompensatedSum> acc(grid.q);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    acc[grid.position(i, axis)].add(detail::complement_weight(grid, i, axis) * v[i]);
  }
  std::vector<double> out(grid.q);
  for (std::size_t k = 0; k < grid.q; ++k) out[k] = acc[k].value();
  return out;
}

void combine(const TensorGrid& grid, std::span<const std::size_t> axes,
             std::span<const std::span<const double>> components,
             std::span<const std::span<const double>> scales, std::span<double> out) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double s = 0.0;
    for (std::size_t c = 0; c < axes.size(); ++c) {
      const double g = components[c][grid.position(i, axes[c])];
      s += scales[c].empty() ? g : scales[c][i] * g;
    }
    out[i] = s;
  }
}

}  // namespace serial
}  // namespace ridge::kernels
