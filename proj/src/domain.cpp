#include "ridge/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ridge/error.hpp"

namespace ridge {
namespace {

constexpr std::size_t kMaxGridSize = std::size_t{1} << 27;

void check_same(const GridFunction& a, const GridFunction& b) {
  if (!a.domain().same_as(b.domain())) {
    throw InvalidArgument("grid functions are defined on different domains");
  }
}

}  // namespace

RSetDomain::RSetDomain(std::vector<Interval> ridge_intervals, std::vector<Interval> box0,
                       std::size_t nodes_per_axis) {
  auto data = std::make_shared<Data>();
  data->r = ridge_intervals.size();
  data->q = nodes_per_axis;
  data->intervals = std::move(ridge_intervals);
  data->box0 = std::move(box0);
  if (data->r == 0) throw InvalidArgument("an r-set needs at least one ridge interval");
  if (nodes_per_axis == 0) throw InvalidArgument("quadrature order must be positive");

  const std::size_t n = data->r + data->box0.size();
  std::vector<const Interval*> axes;
  for (const auto& iv : data->intervals) axes.push_back(&iv);
  for (const auto& iv : data->box0) axes.push_back(&iv);
  for (std::size_t a = 0; a < n; ++a) {
    const Interval& iv = *axes[a];
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.hi > iv.lo)) {
      throw InvalidArgument("axis " + std::to_string(a + 1) + " interval [" +
                            std::to_string(iv.lo) + ", " + std::to_string(iv.hi) +
                            "] must have positive finite length");
    }
  }

  std::size_t total = 1;
  for (std::size_t a = 0; a < n; ++a) {
    if (total > kMaxGridSize / data->q) throw InvalidArgument("quadrature grid is too large");
    total *= data->q;
  }

  data->nodes.resize(n * data->q);
  data->axis_weights.resize(n * data->q);
  for (std::size_t a = 0; a < n; ++a) {
    const Rule1D rule = gauss_legendre(data->q, axes[a]->lo, axes[a]->hi);
    std::copy(rule.nodes.begin(), rule.nodes.end(), data->nodes.begin() + a * data->q);
    std::copy(rule.weights.begin(), rule.weights.end(), data->axis_weights.begin() + a * data->q);
  }

  data->weights.assign(total, 1.0);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t flat = i;
    double w = 1.0;
    for (std::size_t a = n; a-- > 0;) {
      w *= data->axis_weights[a * data->q + flat % data->q];
      flat /= data->q;
    }
    data->weights[i] = w;
  }

  for (const auto& iv : data->box0) data->box0_measure *= iv.length();
  data->complement_measures.resize(data->r);
  for (std::size_t i = 0; i < data->r; ++i) {
    double c = data->box0_measure;
    for (std::size_t k = 0; k < data->r; ++k) {
      if (k != i) c *= data->intervals[k].length();
    }
    data->complement_measures[i] = c;
  }
  data->measure = data->complement_measures[0] * data->intervals[0].length();
  data_ = std::move(data);
}

const Interval& RSetDomain::axis_interval(std::size_t axis) const {
  return axis < r() ? data_->intervals.at(axis) : data_->box0.at(axis - r());
}

std::span<const double> RSetDomain::nodes(std::size_t axis) const {
  return {data_->nodes.data() + axis * q(), q()};
}

std::span<const double> RSetDomain::axis_weights(std::size_t axis) const {
  return {data_->axis_weights.data() + axis * q(), q()};
}

double RSetDomain::ridge_measure(std::size_t i) const { return data_->intervals.at(i).length(); }

double RSetDomain::complement_measure(std::size_t i) const {
  return data_->complement_measures.at(i);
}

kernels::TensorGrid RSetDomain::grid() const {
  return {n(), q(), data_->nodes, data_->axis_weights, data_->weights};
}

GridFunction::GridFunction(RSetDomain domain, std::vector<double> samples)
    : domain_(std::move(domain)), samples_(std::move(samples)) {
  if (samples_.size() != domain_.size()) {
    throw InvalidArgument("sample count " + std::to_string(samples_.size()) +
                          " does not match the grid size " + std::to_string(domain_.size()));
  }
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i])) {
      throw NumericalError("non-finite sample at flat node index " + std::to_string(i));
    }
  }
}

GridFunction GridFunction::constant(const RSetDomain& domain, double value) {
  return GridFunction(domain, std::vector<double>(domain.size(), value));
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  check_same(*this, other);
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  check_same(*this, other);
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= other.samples_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(const GridFunction& other) {
  check_same(*this, other);
  for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] *= other.samples_[i];
  return *this;
}

GridFunction& GridFunction::operator*=(double s) {
  for (double& v : samples_) v *= s;
  return *this;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : samples_) m = std::max(m, std::fabs(v));
  return m;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(GridFunction a, const GridFunction& b) { return a *= b; }
GridFunction operator*(double s, GridFunction a) { return a *= s; }

GridFunction sample(const RSetDomain& dom, const PointFunction& fn) {
  std::vector<double> out(dom.size());
  kernels::omp::sample(dom.grid(), fn, out);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i])) {
      std::vector<double> y(dom.n());
      dom.grid().point(i, y);
      std::string where;
      for (double c : y) where += (where.empty() ? "" : ", ") + std::to_string(c);
      throw EvalError("non-finite value at node y = (" + where + ")");
    }
  }
  return GridFunction(dom, std::move(out));
}

double integrate_full(const GridFunction& g) {
  return kernels::omp::weighted_sum(g.domain().tensor_weights(), g.samples());
}

double inner(const GridFunction& a, const GridFunction& b) {
  check_same(a, b);
  return kernels::omp::weighted_dot(a.domain().tensor_weights(), a.samples(), b.samples());
}

RidgeComponent marginal(const GridFunction& g, std::size_t axis) {
  if (axis >= g.domain().r()) {
    throw InvalidArgument("marginal axis " + std::to_string(axis + 1) + " is not a ridge axis");
  }
  return {axis, kernels::omp::axis_marginal(g.domain().grid(), g.samples(), axis)};
}

double norm_sq(const GridFunction& g) {
  return kernels::omp::weighted_dot(g.domain().tensor_weights(), g.samples(), g.samples());
}

double ridge_norm_sq(const RidgeComponent& c, const RSetDomain& dom) {
  const auto w = dom.axis_weights(c.axis);
  if (c.values.size() != w.size()) throw InvalidArgument("component length does not match q");
  kernels::CompensatedSum s;
  for (std::size_t k = 0; k < w.size(); ++k) s.add(w[k] * c.values[k] * c.values[k]);
  return dom.complement_measure(c.axis) * s.value();
}

GridFunction combine(const RSetDomain& dom, std::span<const RidgeComponent> components,
                     std::span<const GridFunction> weights) {
  if (!weights.empty() && weights.size() != components.size()) {
    throw InvalidArgument("need one weight per component");
  }
  std::vector<std::size_t> axes;
  std::vector<std::span<const double>> values;
  std::vector<std::span<const double>> scales;
  for (std::size_t c = 0; c < components.size(); ++c) {
    if (components[c].axis >= dom.r() || components[c].values.size() != dom.q()) {
      throw InvalidArgument("component " + std::to_string(c + 1) + " does not fit the domain");
    }
    axes.push_back(components[c].axis);
    values.push_back(components[c].values);
    if (weights.empty()) {
      scales.emplace_back();
    } else {
      if (!weights[c].domain().same_as(dom)) throw InvalidArgument("weight on a different domain");
      scales.push_back(weights[c].samples());
    }
  }
  std::vector<double> out(dom.size());
  kernels::omp::combine(dom.grid(), axes, values, scales, out);
  return GridFunction(dom, std::move(out));
}

GridFunction broadcast(const RSetDomain& dom, const RidgeComponent& c) {
  return combine(dom, std::span<const RidgeComponent>(&c, 1));
}

double interpolate(const RidgeComponent& c, const RSetDomain& dom, double t) {
  return BarycentricInterpolant(dom.nodes(c.axis), c.values)(t);
}

}  // namespace ridge
