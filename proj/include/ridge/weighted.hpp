#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ridge/domain.hpp"
#include "ridge/geometry.hpp"
#include "ridge/solution.hpp"

namespace ridge {

/// Approximation of f* by w_1* g_1(y_1) + ... + w_r* g_r(y_r) on an r-set.
///
/// Construction fails with NumericalError when some slice mass
/// int_{Y^(j)} w_j*^2 vanishes (is at most 1e-12 |Y^(j)| max w_j*^2), because
/// g_j is then undetermined at that node.
class WeightedProblem {
 public:
  WeightedProblem(GridFunction f_star, std::vector<GridFunction> weights, DirectionBasis basis);

  /// All weights identically one.
  static WeightedProblem unit_weights(GridFunction f_star, DirectionBasis basis);

  const GridFunction& f_star() const { return f_star_; }
  const std::vector<GridFunction>& weights() const { return weights_; }
  const RSetDomain& domain() const { return f_star_.domain(); }
  const DirectionBasis& basis() const { return basis_; }
  std::size_t r() const { return weights_.size(); }

  /// int_{Y^(j)} w_j*^2 at each node of ridge axis j.
  std::span<const double> slice_mass(std::size_t j) const { return slice_mass_[j]; }

  /// sum_i w_i* g_i at every node.
  GridFunction approximant(std::span<const RidgeComponent> components) const;

 private:
  GridFunction f_star_;
  std::vector<GridFunction> weights_;
  DirectionBasis basis_;
  std::vector<std::vector<double>> slice_mass_;
};

enum class InitMode { Zeros, ClosedForm };

struct SolverConfig {
  double tolerance = 1e-10;
  std::size_t max_sweeps = 10000;
  double damping = 1.0;
  InitMode init = InitMode::Zeros;

  /// Throws InvalidArgument unless tolerance > 0, max_sweeps >= 1, 0 < damping <= 1.
  void validate() const;
};

/// The exact minimizer over g_j with the other components held fixed:
///   g_j(t) = int_{Y^(j)} (f* - sum_{i != j} w_i* g_i) w_j*  /  int_{Y^(j)} w_j*^2
/// evaluated at every node t of axis j.
RidgeComponent update_component(const WeightedProblem& p,
                                std::span<const RidgeComponent> current, std::size_t j);

/// Cyclic Gauss–Seidel sweeps of update_component, damped by cfg.damping,
/// until the scale-free change max_j |dg_j|_inf / (1 + |g_j|_inf) drops below
/// cfg.tolerance. Non-convergence is reported through
/// `convergence.converged == false`, never thrown.
/// E(f) comes from the norm identity when converged and is the achieved
/// residual distance otherwise.
ApproxSolution solve_fixed_point(const WeightedProblem& p, const SolverConfig& cfg);

/// Orthogonality of the residual against w_j* h(y_j) for every Lagrange
/// cardinal function h of the axis-j nodes, normalized by ||f*|| ||w_j* h||.
Defect verify_extremality(const WeightedProblem& p, std::span<const RidgeComponent> components);

/// E = sqrt(||f||^2 - ||approximant||^2), both norms on X.
double error_from_norms(double f_norm_sq_x, double approximant_norm_sq_x);

}  // namespace ridge
