#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ridge/domain.hpp"

namespace ridge {

enum class Method { ClosedForm, FixedPoint, Oracle };

std::string to_string(Method m);

struct Convergence {
  bool converged = true;
  std::size_t sweeps = 0;
  double last_change = 0.0;
  /// ||f* - approximant||_{L2(Y)} before the first sweep and after each sweep.
  std::vector<double> residual_history;
};

/// Largest characterization defect and where it occurs.
struct Defect {
  double value = 0.0;
  std::size_t axis = 0;  // 0-based ridge axis
  std::size_t node = 0;  // 0-based node on that axis
};

struct ApproxSolution {
  std::vector<RidgeComponent> components;
  /// E(f), the L2(X) distance from f to the approximation manifold.
  double error = 0.0;
  /// |det J|^{-1/2} ||f* - approximant||_{L2(Y)}, computed directly.
  double residual_error = 0.0;
  /// Normalized orthogonality defect of the residual.
  double orthogonality_defect = 0.0;
  Method method = Method::ClosedForm;
  Convergence convergence;
};

/// sqrt(radicand), treating radicands in [-kRadicandClamp, 0) as zero.
/// Throws NumericalError below that.
double clamped_sqrt(double radicand);

inline constexpr double kRadicandClamp = 1e-12;

}  // namespace ridge
