#include "ridge/oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "ridge/error.hpp"

namespace ridge {

DiscreteLSModel build_ls_model(const WeightedProblem& p) {
  const RSetDomain& dom = p.domain();
  const auto grid = dom.grid();
  DiscreteLSModel m;
  m.r = p.r();
  m.q = dom.q();
  m.rows = dom.size();
  m.cols = m.r * m.q;
  m.design.assign(m.rows * m.cols, 0.0);
  m.rhs.resize(m.rows);
  m.sqrt_weights.resize(m.rows);

  // Cardinal functions are evaluated at grid nodes, where e_ik(y_i) is 1 on
  // node k and 0 elsewhere; evaluate them anyway through the interpolant so
  // the model does not assume it.
  std::vector<BarycentricInterpolant> cardinal_basis;
  for (std::size_t i = 0; i < m.r; ++i) {
    const auto nodes = dom.nodes(i);
    cardinal_basis.emplace_back(nodes, std::vector<double>(m.q, 0.0));
  }
  std::vector<double> y(dom.n());
  for (std::size_t row = 0; row < m.rows; ++row) {
    grid.point(row, y);
    const double sw = std::sqrt(dom.tensor_weights()[row]);
    m.sqrt_weights[row] = sw;
    m.rhs[row] = sw * p.f_star()[row];
    for (std::size_t i = 0; i < m.r; ++i) {
      const double wi = p.weights()[i][row];
      for (std::size_t k = 0; k < m.q; ++k) {
        m.design[row * m.cols + i * m.q + k] = sw * wi * cardinal_basis[i].cardinal(k, y[i]);
      }
    }
  }
  return m;
}

OracleResult solve_ls(const DiscreteLSModel& model) {
  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  const Eigen::Map<const RowMatrix> a(model.design.data(), static_cast<Eigen::Index>(model.rows),
                                      static_cast<Eigen::Index>(model.cols));
  const Eigen::Map<const Eigen::VectorXd> b(model.rhs.data(),
                                            static_cast<Eigen::Index>(model.rows));

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-10);
  cod.compute(a);
  const Eigen::VectorXd x = cod.solve(b);
  const Eigen::VectorXd fitted = a * x;

  OracleResult out;
  out.coefficients.assign(x.data(), x.data() + x.size());
  out.residual_norm = (b - fitted).norm();
  out.rank = static_cast<std::size_t>(cod.rank());
  out.approximant.resize(model.rows);
  for (std::size_t row = 0; row < model.rows; ++row) {
    out.approximant[row] = fitted[static_cast<Eigen::Index>(row)] / model.sqrt_weights[row];
  }
  return out;
}

ApproxSolution oracle_solution(const WeightedProblem& p, const OracleResult& result) {
  const std::size_t q = p.domain().q();
  if (result.coefficients.size() != p.r() * q) {
    throw InvalidArgument("oracle result does not match the problem");
  }
  ApproxSolution sol;
  sol.method = Method::Oracle;
  for (std::size_t i = 0; i < p.r(); ++i) {
    sol.components.push_back(
        {i, std::vector<double>(result.coefficients.begin() + static_cast<std::ptrdiff_t>(i * q),
                                result.coefficients.begin() +
                                    static_cast<std::ptrdiff_t>((i + 1) * q))});
  }
  sol.error = result.residual_norm / std::sqrt(std::fabs(p.basis().det()));
  sol.residual_error = sol.error;
  sol.orthogonality_defect = verify_extremality(p, sol.components).value;
  return sol;
}

CompareReport compare(const WeightedProblem& p, const ApproxSolution& sol,
                      const OracleResult& oracle) {
  const GridFunction approx = p.approximant(sol.components);
  if (approx.size() != oracle.approximant.size()) {
    throw InvalidArgument("oracle result does not match the problem");
  }
  CompareReport rep;
  rep.solver_error = sol.error;
  rep.oracle_error = oracle.residual_norm / std::sqrt(std::fabs(p.basis().det()));
  rep.error_gap = std::fabs(rep.solver_error - rep.oracle_error);
  for (std::size_t i = 0; i < approx.size(); ++i) {
    rep.approximant_gap = std::max(rep.approximant_gap, std::fabs(approx[i] - oracle.approximant[i]));
  }
  return rep;
}

}  // namespace ridge
