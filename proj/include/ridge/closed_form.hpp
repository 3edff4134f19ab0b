#pragma once

// Best approximation by unweighted ridge sums g_1(a^1.x) + ... + g_r(a^r.x).
//
// With A = int_Y f* and f_i* the marginal of f* over Y^(i):
//   g_1 = f_1* / |Y^(1)| - (r - 1) A / |Y|,   g_j = f_j* / |Y^(j)|  (j >= 2)
//   E(f)^2 = |det J|^{-1} (||f*||^2 - sum_i ||f_i*||^2 / |Y^(i)|^2 + (r - 1) A^2 / |Y|)
// The constant correction is carried entirely by the first component.

#include <span>

#include "ridge/domain.hpp"
#include "ridge/geometry.hpp"
#include "ridge/solution.hpp"

namespace ridge {

/// Components, E(f) from the closed form, the direct residual error and the
/// orthogonality defect. `f_star` must live on an r-set matching `basis`.
ApproxSolution solve_unweighted(const GridFunction& f_star, const DirectionBasis& basis);

/// E(f) from the marginals of f* alone.
double error_closed_form(const GridFunction& f_star, const DirectionBasis& basis);

/// Max over ridge axes j and axis-j nodes of
///   | g_j - (1/|Y^(j)|) int_{Y^(j)} (f* - sum_{i != j} g_i) |,
/// which vanishes exactly for a best unweighted approximation.
Defect check_marginal_characterization(std::span<const RidgeComponent> components,
                                       const GridFunction& f_star);

}  // namespace ridge
