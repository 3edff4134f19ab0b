#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ridge {

/// One-dimensional quadrature rule on an interval.
struct Rule1D {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // positive, summing to the interval length
};

/// q-point Gauss–Legendre rule mapped to [lo, hi]. Exact for polynomials of
/// degree <= 2q - 1.
Rule1D gauss_legendre(std::size_t q, double lo, double hi);

/// Polynomial interpolant through distinct nodes, evaluated in the second
/// (true) barycentric form.
class BarycentricInterpolant {
 public:
  BarycentricInterpolant(std::span<const double> nodes, std::span<const double> values);

  double operator()(double x) const;

  /// Value at x of the k-th Lagrange cardinal function of the nodes.
  double cardinal(std::size_t k, double x) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> bary_;
};

}  // namespace ridge
