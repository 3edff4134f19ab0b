#include "ridge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "ridge/error.hpp"

namespace ridge {
namespace {

double row_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Incremental row echelon form used to test whether a new vector raises the rank.
class RankTracker {
 public:
  RankTracker(std::size_t n, double tolerance) : n_(n), tolerance_(tolerance) {}

  bool try_add(std::span<const double> v) {
    Vector w(v.begin(), v.end());
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const double c = w[pivots_[k]];
      if (c == 0.0) continue;
      for (std::size_t i = 0; i < n_; ++i) w[i] -= c * rows_[k][i];
    }
    std::size_t p = 0;
    for (std::size_t i = 1; i < n_; ++i) {
      if (std::fabs(w[i]) > std::fabs(w[p])) p = i;
    }
    if (std::fabs(w[p]) <= tolerance_) return false;
    const double inv = 1.0 / w[p];
    for (double& x : w) x *= inv;
    rows_.push_back(std::move(w));
    pivots_.push_back(p);
    return true;
  }

  std::size_t rank() const { return rows_.size(); }

 private:
  std::size_t n_;
  double tolerance_;
  std::vector<Vector> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace

DirectionBasis::DirectionBasis(std::size_t n, std::size_t r, Vector j)
    : n_(n), r_(r), j_(std::move(j)), b_(n * n, 0.0) {
  double max_norm = 0.0;
  for (std::size_t i = 0; i < n_; ++i) max_norm = std::max(max_norm, row_norm(row(i)));
  const double tol = kRankTolerance * max_norm;

  // LU with partial pivoting: P J = L U, packed in place.
  Vector lu = j_;
  std::vector<std::size_t> perm(n_);
  for (std::size_t i = 0; i < n_; ++i) perm[i] = i;
  double det = 1.0;
  for (std::size_t c = 0; c < n_; ++c) {
    std::size_t p = c;
    for (std::size_t i = c + 1; i < n_; ++i) {
      if (std::fabs(lu[i * n_ + c]) > std::fabs(lu[p * n_ + c])) p = i;
    }
    const double pivot = lu[p * n_ + c];
    if (std::fabs(pivot) <= tol) {
      throw NumericalError("basis matrix is singular: zero pivot in column " + std::to_string(c + 1));
    }
    if (p != c) {
      for (std::size_t k = 0; k < n_; ++k) std::swap(lu[p * n_ + k], lu[c * n_ + k]);
      std::swap(perm[p], perm[c]);
      det = -det;
    }
    det *= pivot;
    for (std::size_t i = c + 1; i < n_; ++i) {
      const double m = lu[i * n_ + c] / pivot;
      lu[i * n_ + c] = m;
      for (std::size_t k = c + 1; k < n_; ++k) lu[i * n_ + k] -= m * lu[c * n_ + k];
    }
  }
  det_ = det;

  // Solve J B = I column by column.
  Vector col(n_);
  for (std::size_t e = 0; e < n_; ++e) {
    for (std::size_t i = 0; i < n_; ++i) col[i] = perm[i] == e ? 1.0 : 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t k = 0; k < i; ++k) col[i] -= lu[i * n_ + k] * col[k];
    }
    for (std::size_t i = n_; i-- > 0;) {
      for (std::size_t k = i + 1; k < n_; ++k) col[i] -= lu[i * n_ + k] * col[k];
      col[i] /= lu[i * n_ + i];
    }
    for (std::size_t i = 0; i < n_; ++i) b_[i * n_ + e] = col[i];
  }
}

DirectionBasis DirectionBasis::build(const std::vector<Vector>& directions,
                                     const std::optional<std::vector<Vector>>& completion) {
  const std::size_t r = directions.size();
  if (r == 0) throw InvalidArgument("at least one direction is required");
  const std::size_t n = directions.front().size();
  if (n == 0) throw InvalidArgument("directions must have positive length");
  if (r > n) {
    throw InvalidArgument("number of directions (" + std::to_string(r) +
                          ") exceeds the dimension (" + std::to_string(n) + ")");
  }
  for (std::size_t i = 0; i < r; ++i) {
    if (directions[i].size() != n) {
      throw InvalidArgument("direction " + std::to_string(i + 1) + " has length " +
                            std::to_string(directions[i].size()) + ", expected " +
                            std::to_string(n));
    }
    if (row_norm(directions[i]) == 0.0) {
      throw InvalidArgument("direction " + std::to_string(i + 1) + " is zero");
    }
  }
  if (completion) {
    if (completion->size() != n - r) {
      throw InvalidArgument("completion has " + std::to_string(completion->size()) +
                            " rows, expected " + std::to_string(n - r));
    }
    for (std::size_t i = 0; i < completion->size(); ++i) {
      if ((*completion)[i].size() != n) {
        throw InvalidArgument("completion row " + std::to_string(i + 1) + " has wrong length");
      }
    }
  }

  double max_norm = 0.0;
  for (const auto& d : directions) max_norm = std::max(max_norm, row_norm(d));
  if (completion) {
    for (const auto& c : *completion) max_norm = std::max(max_norm, row_norm(c));
  }
  // Standard basis vectors have unit norm.
  if (!completion) max_norm = std::max(max_norm, 1.0);

  RankTracker tracker(n, kRankTolerance * max_norm);
  Vector j;
  j.reserve(n * n);
  for (std::size_t i = 0; i < r; ++i) {
    if (!tracker.try_add(directions[i])) {
      throw NumericalError("direction " + std::to_string(i + 1) +
                           " is linearly dependent on the preceding directions");
    }
    j.insert(j.end(), directions[i].begin(), directions[i].end());
  }
  if (completion) {
    for (std::size_t i = 0; i < completion->size(); ++i) {
      if (!tracker.try_add((*completion)[i])) {
        throw NumericalError("completion row " + std::to_string(i + 1) +
                             " (basis row " + std::to_string(r + i + 1) +
                             ") does not yield an invertible basis");
      }
      j.insert(j.end(), (*completion)[i].begin(), (*completion)[i].end());
    }
  } else {
    Vector e(n, 0.0);
    for (std::size_t k = 0; k < n && tracker.rank() < n; ++k) {
      std::fill(e.begin(), e.end(), 0.0);
      e[k] = 1.0;
      if (tracker.try_add(e)) j.insert(j.end(), e.begin(), e.end());
    }
  }
  return DirectionBasis(n, r, std::move(j));
}

std::vector<Vector> DirectionBasis::directions() const {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < r_; ++i) out.emplace_back(row(i).begin(), row(i).end());
  return out;
}

std::vector<Vector> DirectionBasis::completion() const {
  std::vector<Vector> out;
  for (std::size_t i = r_; i < n_; ++i) out.emplace_back(row(i).begin(), row(i).end());
  return out;
}

void DirectionBasis::forward_into(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < n_; ++k) s += j_[i * n_ + k] * x[k];
    y[i] = s;
  }
}

void DirectionBasis::inverse_into(std::span<const double> y, std::span<double> x) const {
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < n_; ++k) s += b_[i * n_ + k] * y[k];
    x[i] = s;
  }
}

Vector DirectionBasis::forward(std::span<const double> x) const {
  if (x.size() != n_) throw InvalidArgument("point has wrong dimension");
  Vector y(n_);
  forward_into(x, y);
  return y;
}

Vector DirectionBasis::inverse(std::span<const double> y) const {
  if (y.size() != n_) throw InvalidArgument("point has wrong dimension");
  Vector x(n_);
  inverse_into(y, x);
  return x;
}

std::vector<std::string> variable_names(const std::string& prefix, std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= n; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

namespace {

void require_variables(const Expr& u, const std::vector<std::string>& allowed, const char* what) {
  for (const auto& v : u.free_variables()) {
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
      throw InvalidArgument("variable '" + v + "' is not one of the " + what);
    }
  }
}

}  // namespace

PointFunction pullback(const DirectionBasis& basis, const Expr& u) {
  const auto names = variable_names("x", basis.n());
  require_variables(u, names, "x-variables x1..xn");
  auto compiled = std::make_shared<const CompiledExpr>(u, names);
  auto shared_basis = std::make_shared<const DirectionBasis>(basis);
  return [compiled, shared_basis](std::span<const double> y) {
    constexpr std::size_t kInline = 16;
    const std::size_t n = shared_basis->n();
    double buf[kInline];
    std::vector<double> heap;
    std::span<double> x;
    if (n <= kInline) {
      x = std::span<double>(buf, n);
    } else {
      heap.resize(n);
      x = heap;
    }
    shared_basis->inverse_into(y, x);
    return (*compiled)(x);
  };
}

PointFunction y_function(const Expr& u, std::size_t n) {
  const auto names = variable_names("y", n);
  require_variables(u, names, "y-variables y1..yn");
  auto compiled = std::make_shared<const CompiledExpr>(u, names);
  return [compiled](std::span<const double> y) { return (*compiled)(y); };
}

}  // namespace ridge
