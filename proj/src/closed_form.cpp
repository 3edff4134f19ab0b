#include "ridge/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ridge/error.hpp"
#include "ridge/weighted.hpp"

namespace ridge {

std::string to_string(Method m) {
  switch (m) {
    case Method::ClosedForm:
      return "closed_form";
    case Method::FixedPoint:
      return "fixed_point";
    case Method::Oracle:
      return "oracle";
  }
  return "unknown";
}

double clamped_sqrt(double radicand) {
  if (radicand >= 0.0) return std::sqrt(radicand);
  if (radicand >= -kRadicandClamp) return 0.0;
  throw NumericalError("negative squared error " + std::to_string(radicand) +
                       " indicates inconsistent quadrature");
}

namespace {

void check_shapes(const GridFunction& f_star, const DirectionBasis& basis) {
  const RSetDomain& dom = f_star.domain();
  if (dom.n() != basis.n() || dom.r() != basis.r()) {
    throw InvalidArgument("domain (n=" + std::to_string(dom.n()) + ", r=" +
                          std::to_string(dom.r()) + ") does not match the basis (n=" +
                          std::to_string(basis.n()) + ", r=" + std::to_string(basis.r()) + ")");
  }
}

}  // namespace

ApproxSolution solve_unweighted(const GridFunction& f_star, const DirectionBasis& basis) {
  check_shapes(f_star, basis);
  const RSetDomain& dom = f_star.domain();
  const std::size_t r = dom.r();
  const double a = integrate_full(f_star);
  const double shift = static_cast<double>(r - 1) * a / dom.measure();

  ApproxSolution sol;
  sol.method = Method::ClosedForm;
  for (std::size_t i = 0; i < r; ++i) {
    RidgeComponent c = marginal(f_star, i);
    const double inv = 1.0 / dom.complement_measure(i);
    for (double& v : c.values) v *= inv;
    if (i == 0) {
      for (double& v : c.values) v -= shift;
    }
    sol.components.push_back(std::move(c));
  }

  sol.error = error_closed_form(f_star, basis);
  const GridFunction residual = f_star - combine(dom, sol.components);
  sol.residual_error = std::sqrt(norm_sq(residual) / std::fabs(basis.det()));
  sol.orthogonality_defect =
      verify_extremality(WeightedProblem::unit_weights(f_star, basis), sol.components).value;
  return sol;
}

double error_closed_form(const GridFunction& f_star, const DirectionBasis& basis) {
  check_shapes(f_star, basis);
  const RSetDomain& dom = f_star.domain();
  const std::size_t r = dom.r();
  const double a = integrate_full(f_star);
  double radicand = norm_sq(f_star);
  for (std::size_t i = 0; i < r; ++i) {
    const double ym = dom.complement_measure(i);
    radicand -= ridge_norm_sq(marginal(f_star, i), dom) / (ym * ym);
  }
  radicand += static_cast<double>(r - 1) * a * a / dom.measure();
  return clamped_sqrt(radicand) / std::sqrt(std::fabs(basis.det()));
}

Defect check_marginal_characterization(std::span<const RidgeComponent> components,
                                       const GridFunction& f_star) {
  const RSetDomain& dom = f_star.domain();
  if (components.size() != dom.r()) throw InvalidArgument("need one component per ridge axis");
  Defect worst;
  for (std::size_t j = 0; j < components.size(); ++j) {
    GridFunction rest = f_star;
    for (std::size_t i = 0; i < components.size(); ++i) {
      if (i != j) rest -= broadcast(dom, components[i]);
    }
    const RidgeComponent rhs = marginal(rest, components[j].axis);
    const double inv = 1.0 / dom.complement_measure(components[j].axis);
    for (std::size_t k = 0; k < rhs.values.size(); ++k) {
      const double d = std::fabs(components[j].values[k] - rhs.values[k] * inv);
      if (d > worst.value) worst = {d, components[j].axis, k};
    }
  }
  return worst;
}

}  // namespace ridge
