#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ridge/expr.hpp"

namespace ridge {

using Vector = std::vector<double>;

/// Real-valued function of a point, called concurrently during quadrature.
using PointFunction = std::function<double(std::span<const double>)>;

/// Ridge directions a^1..a^r completed to a basis a^1..a^n of R^n.
///
/// The forward map is y = J x with J's rows a^1..a^n; the inverse map is
/// x = B y with B = J^{-1}, whose rows are b^1..b^n. Immutable once built.
class DirectionBasis {
 public:
  /// Pivots below this multiple of the largest row norm count as zero.
  static constexpr double kRankTolerance = 1e-10;

  /// Throws InvalidArgument on bad shapes and NumericalError when the
  /// directions are dependent or the supplied completion leaves J singular.
  /// Without a completion, standard basis vectors e_1, e_2, ... are appended
  /// in order whenever they raise the rank.
  static DirectionBasis build(const std::vector<Vector>& directions,
                              const std::optional<std::vector<Vector>>& completion = std::nullopt);

  std::size_t n() const { return n_; }
  std::size_t r() const { return r_; }
  double det() const { return det_; }

  /// Row i (0-based) of J.
  std::span<const double> row(std::size_t i) const { return {j_.data() + i * n_, n_}; }
  /// Row i (0-based) of B.
  std::span<const double> inverse_row(std::size_t i) const { return {b_.data() + i * n_, n_}; }

  std::vector<Vector> directions() const;
  std::vector<Vector> completion() const;

  /// y = J x.
  Vector forward(std::span<const double> x) const;
  /// x = B y.
  Vector inverse(std::span<const double> y) const;

  void forward_into(std::span<const double> x, std::span<double> y) const;
  void inverse_into(std::span<const double> y, std::span<double> x) const;

 private:
  DirectionBasis(std::size_t n, std::size_t r, Vector j);

  std::size_t n_ = 0;
  std::size_t r_ = 0;
  Vector j_;  // row-major n x n
  Vector b_;  // row-major n x n
  double det_ = 0.0;
};

/// Names prefix1..prefixN, e.g. x1..x4.
std::vector<std::string> variable_names(const std::string& prefix, std::size_t n);

/// u*(y) = u(B y) for an expression u in x1..xn.
PointFunction pullback(const DirectionBasis& basis, const Expr& u);

/// Direct evaluator for an expression already written in y1..yn.
PointFunction y_function(const Expr& u, std::size_t n);

}  // namespace ridge
