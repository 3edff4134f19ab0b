#include "ridge/gauss_legendre.hpp"

#include <cmath>
#include <numbers>

#include "ridge/error.hpp"

namespace ridge {

Rule1D gauss_legendre(std::size_t q, double lo, double hi) {
  if (q == 0) throw InvalidArgument("quadrature order must be positive");
  if (!(hi > lo)) throw InvalidArgument("quadrature interval must have positive length");

  // Newton iteration on P_q from the Chebyshev-like initial guess; roots are
  // symmetric so only the upper half is computed.
  std::vector<double> t(q), w(q);
  const std::size_t half = (q + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(q) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= q; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(q) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::fabs(dx) <= 1e-16) break;
    }
    // Recompute the derivative at the converged root.
    {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= q; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(q) * (x * p1 - p0) / (x * x - 1.0);
    }
    const double wi = 2.0 / ((1.0 - x * x) * dp * dp);
    t[q - 1 - i] = x;
    t[i] = -x;
    w[q - 1 - i] = wi;
    w[i] = wi;
  }
  if (q % 2 == 1) t[q / 2] = 0.0;

  Rule1D rule;
  rule.nodes.resize(q);
  rule.weights.resize(q);
  const double mid = 0.5 * (lo + hi);
  const double half_len = 0.5 * (hi - lo);
  for (std::size_t i = 0; i < q; ++i) {
    rule.nodes[i] = mid + half_len * t[i];
    rule.weights[i] = half_len * w[i];
  }
  return rule;
}

BarycentricInterpolant::BarycentricInterpolant(std::span<const double> nodes,
                                               std::span<const double> values)
    : nodes_(nodes.begin(), nodes.end()), values_(values.begin(), values.end()) {
  if (nodes_.empty() || nodes_.size() != values_.size()) {
    throw InvalidArgument("interpolant needs matching, non-empty nodes and values");
  }
  const std::size_t q = nodes_.size();
  bary_.assign(q, 1.0);
  for (std::size_t j = 0; j < q; ++j) {
    for (std::size_t k = 0; k < q; ++k) {
      if (k == j) continue;
      const double d = nodes_[j] - nodes_[k];
      if (d == 0.0) throw InvalidArgument("interpolation nodes must be distinct");
      bary_[j] /= d;
    }
  }
}

double BarycentricInterpolant::operator()(double x) const {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const double d = x - nodes_[j];
    if (d == 0.0) return values_[j];
    const double c = bary_[j] / d;
    num += c * values_[j];
    den += c;
  }
  return num / den;
}

double BarycentricInterpolant::cardinal(std::size_t k, double x) const {
  double den = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const double d = x - nodes_[j];
    if (d == 0.0) return j == k ? 1.0 : 0.0;
    den += bary_[j] / d;
  }
  return (bary_[k] / (x - nodes_[k])) / den;
}

}  // namespace ridge
