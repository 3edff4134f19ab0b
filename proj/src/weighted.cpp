#include "ridge/weighted.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ridge/closed_form.hpp"
#include "ridge/error.hpp"

namespace ridge {
namespace {

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

}  // namespace

WeightedProblem::WeightedProblem(GridFunction f_star, std::vector<GridFunction> weights,
                                 DirectionBasis basis)
    : f_star_(std::move(f_star)), weights_(std::move(weights)), basis_(std::move(basis)) {
  const RSetDomain& dom = domain();
  if (dom.n() != basis_.n() || dom.r() != basis_.r()) {
    throw InvalidArgument("domain and basis dimensions disagree");
  }
  if (weights_.size() != dom.r()) {
    throw InvalidArgument("expected " + std::to_string(dom.r()) + " weights, got " +
                          std::to_string(weights_.size()));
  }
  for (std::size_t j = 0; j < weights_.size(); ++j) {
    if (!weights_[j].domain().same_as(dom)) {
      throw InvalidArgument("weight " + std::to_string(j + 1) + " lives on a different domain");
    }
    const GridFunction sq = weights_[j] * weights_[j];
    RidgeComponent mass = marginal(sq, j);
    const double floor = 1e-12 * dom.complement_measure(j) * sq.max_abs();
    for (std::size_t k = 0; k < mass.values.size(); ++k) {
      if (!(mass.values[k] > floor)) {
        throw NumericalError("weight " + std::to_string(j + 1) +
                             " has vanishing slice mass at node " + std::to_string(k + 1) +
                             " (y" + std::to_string(j + 1) + " = " +
                             std::to_string(dom.nodes(j)[k]) + ")");
      }
    }
    slice_mass_.push_back(std::move(mass.values));
  }
}

WeightedProblem WeightedProblem::unit_weights(GridFunction f_star, DirectionBasis basis) {
  std::vector<GridFunction> ones(f_star.domain().r(),
                                 GridFunction::constant(f_star.domain(), 1.0));
  return WeightedProblem(std::move(f_star), std::move(ones), std::move(basis));
}

GridFunction WeightedProblem::approximant(std::span<const RidgeComponent> components) const {
  return combine(domain(), components, weights_);
}

void SolverConfig::validate() const {
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (max_sweeps < 1) throw InvalidArgument("max_sweeps must be at least 1");
  if (!(damping > 0.0 && damping <= 1.0)) throw InvalidArgument("damping must lie in (0, 1]");
}

RidgeComponent update_component(const WeightedProblem& p,
                                std::span<const RidgeComponent> current, std::size_t j) {
  if (current.size() != p.r() || j >= p.r()) throw InvalidArgument("bad component index");
  std::vector<RidgeComponent> others;
  std::vector<GridFunction> other_weights;
  for (std::size_t i = 0; i < current.size(); ++i) {
    if (i == j) continue;
    others.push_back(current[i]);
    other_weights.push_back(p.weights()[i]);
  }
  GridFunction rest = p.f_star();
  if (!others.empty()) rest -= combine(p.domain(), others, other_weights);
  rest *= p.weights()[j];
  RidgeComponent out = marginal(rest, j);
  const auto mass = p.slice_mass(j);
  for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] /= mass[k];
  return out;
}

ApproxSolution solve_fixed_point(const WeightedProblem& p, const SolverConfig& cfg) {
  cfg.validate();
  const RSetDomain& dom = p.domain();
  const std::size_t r = p.r();

  std::vector<RidgeComponent> g;
  if (cfg.init == InitMode::ClosedForm) {
    g = solve_unweighted(p.f_star(), p.basis()).components;
  } else {
    for (std::size_t i = 0; i < r; ++i) g.push_back({i, std::vector<double>(dom.q(), 0.0)});
  }

  auto residual_norm = [&] { return std::sqrt(norm_sq(p.f_star() - p.approximant(g))); };

  ApproxSolution sol;
  sol.method = Method::FixedPoint;
  Convergence& conv = sol.convergence;
  conv.converged = false;
  conv.residual_history.push_back(residual_norm());

  for (std::size_t sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    double change = 0.0;
    for (std::size_t j = 0; j < r; ++j) {
      RidgeComponent next = update_component(p, g, j);
      double diff = 0.0;
      for (std::size_t k = 0; k < next.values.size(); ++k) {
        next.values[k] = (1.0 - cfg.damping) * g[j].values[k] + cfg.damping * next.values[k];
        diff = std::max(diff, std::fabs(next.values[k] - g[j].values[k]));
      }
      change = std::max(change, diff / (1.0 + sup_norm(next.values)));
      g[j] = std::move(next);
    }
    conv.sweeps = sweep;
    conv.last_change = change;
    conv.residual_history.push_back(residual_norm());
    if (change < cfg.tolerance) {
      conv.converged = true;
      break;
    }
  }

  const double det = std::fabs(p.basis().det());
  const GridFunction approx = p.approximant(g);
  sol.residual_error = std::sqrt(norm_sq(p.f_star() - approx) / det);
  sol.error = sol.convergence.converged
                  ? error_from_norms(norm_sq(p.f_star()) / det, norm_sq(approx) / det)
                  : sol.residual_error;
  sol.orthogonality_defect = verify_extremality(p, g).value;
  sol.components = std::move(g);
  return sol;
}

Defect verify_extremality(const WeightedProblem& p, std::span<const RidgeComponent> components) {
  const RSetDomain& dom = p.domain();
  const GridFunction residual = p.f_star() - p.approximant(components);
  const double f_norm = std::sqrt(norm_sq(p.f_star()));
  const double scale = f_norm > 0.0 ? f_norm : 1.0;
  Defect worst;
  for (std::size_t j = 0; j < p.r(); ++j) {
    // h = k-th cardinal function vanishes at every other axis-j node, so the
    // quadrature inner product reduces to one axis-j slice.
    const RidgeComponent m = marginal(residual * p.weights()[j], j);
    const auto w = dom.axis_weights(j);
    const auto mass = p.slice_mass(j);
    for (std::size_t k = 0; k < dom.q(); ++k) {
      const double ip = w[k] * m.values[k];
      const double h_norm = std::sqrt(w[k] * mass[k]);
      const double d = std::fabs(ip) / (scale * h_norm);
      if (d > worst.value) worst = {d, j, k};
    }
  }
  return worst;
}

double error_from_norms(double f_norm_sq_x, double approximant_norm_sq_x) {
  if (f_norm_sq_x < 0.0 || approximant_norm_sq_x < 0.0) {
    throw InvalidArgument("squared norms must be nonnegative");
  }
  return clamped_sqrt(f_norm_sq_x - approximant_norm_sq_x);
}

}  // namespace ridge
