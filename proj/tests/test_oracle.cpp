#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <random>

#include "ridge/closed_form.hpp"
#include "ridge/oracle.hpp"
#include "ridge/weighted.hpp"
#include "support/test_support.hpp"

using namespace ridge;

namespace {

const double kExampleError = std::sqrt(94.0) / 576.0;

WeightedProblem example_problem(std::size_t q) {
  const DirectionBasis basis = testing::example_basis();
  const RSetDomain dom = testing::example_domain(q);
  return WeightedProblem::unit_weights(
      sample(dom, pullback(basis, parse(testing::example_f_text()))), basis);
}

}  // namespace

TEST_CASE("model shape and normal equations") {
  const WeightedProblem p = example_problem(3);
  const DiscreteLSModel m = build_ls_model(p);
  CHECK(m.rows == 81);
  CHECK(m.cols == 9);
  CHECK(m.design.size() == 81 * 9);

  Eigen::MatrixXd a(m.rows, m.cols);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) a(i, j) = m.design[i * m.cols + j];
  }
  const Eigen::MatrixXd normal = a.transpose() * a;
  CHECK((normal - normal.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(normal).eigenvalues();
  CHECK(eig.minCoeff() >= -1e-12 * eig.maxCoeff());
}

TEST_CASE("oracle reproduces the worked example error") {
  const WeightedProblem p = example_problem(4);
  const OracleResult res = solve_ls(build_ls_model(p));
  CHECK(std::fabs(res.residual_norm / 4.0 - kExampleError) < 1e-9);
  // Unit weights leave r - 1 constant shifts undetermined.
  CHECK(res.rank == 3 * 4 - 2);
  const ApproxSolution sol = oracle_solution(p, res);
  CHECK(sol.method == Method::Oracle);
  CHECK(std::fabs(sol.error - kExampleError) < 1e-9);
  CHECK(sol.orthogonality_defect < 1e-10);
}

TEST_CASE("functions in the span have zero residual") {
  const DirectionBasis id = DirectionBasis::build({{1, 0}, {0, 1}});
  const RSetDomain sq({{0, 1}, {0, 1}}, {}, 5);
  const GridFunction f = sample(sq, [](std::span<const double> y) { return y[0] + y[1]; });
  CHECK(solve_ls(build_ls_model(WeightedProblem::unit_weights(f, id))).residual_norm < 1e-10);
}

TEST_CASE("closed form against the oracle") {
  const WeightedProblem p = example_problem(4);
  const ApproxSolution cf = solve_unweighted(p.f_star(), p.basis());
  const OracleResult res = solve_ls(build_ls_model(p));
  const CompareReport rep = compare(p, cf, res);
  CHECK(rep.error_gap < 1e-9);
  CHECK(rep.approximant_gap < 1e-9);
  CHECK(res.residual_norm <= std::sqrt(norm_sq(p.f_star() - p.approximant(cf.components))) + 1e-9);

  // Zeroing g_1 shifts the fitted sum by exactly g_1 everywhere.
  auto wrong = cf;
  for (double& v : wrong.components[0].values) v = 0.0;
  double sup = 0.0;
  for (double v : cf.components[0].values) sup = std::max(sup, std::fabs(v));
  CHECK(std::fabs(compare(p, wrong, res).approximant_gap - sup) < 1e-9);
}

TEST_CASE("fixed point with unit weights against the oracle on random cubics") {
  std::mt19937_64 rng(101);
  for (int t = 0; t < 10; ++t) {
    const RSetDomain dom({{0, 1}, {0.5, 2}}, {{0, 1}}, 5);
    const DirectionBasis basis = testing::random_basis(rng, 3, 2);
    const auto f = testing::random_polynomial(rng, 3, 3, 6);
    const WeightedProblem p = WeightedProblem::unit_weights(
        sample(dom, [&f](std::span<const double> y) { return f(y); }), basis);
    const ApproxSolution sol = solve_fixed_point(p, {});
    REQUIRE(sol.convergence.converged);
    const OracleResult res = solve_ls(build_ls_model(p));
    const CompareReport rep = compare(p, sol, res);
    CHECK(rep.error_gap < 1e-7);
    CHECK(rep.approximant_gap < 1e-7);
    CHECK(res.residual_norm <= std::sqrt(norm_sq(p.f_star() - p.approximant(sol.components))) + 1e-9);
  }
}

TEST_CASE("column order does not change the fitted sum") {
  std::mt19937_64 rng(111);
  const RSetDomain dom({{0, 1}, {0, 1}}, {}, 4);
  const DirectionBasis id = DirectionBasis::build({{1, 0}, {0, 1}});
  const auto f = testing::random_polynomial(rng, 2, 3, 5);
  const auto w = testing::random_positive_weight(rng, 2);
  auto fn = [](const testing::Polynomial& p) {
    return [&p](std::span<const double> y) { return p(y); };
  };
  const WeightedProblem p(sample(dom, fn(f)), {sample(dom, fn(w)), GridFunction::constant(dom, 1.0)},
                          id);
  const DiscreteLSModel m = build_ls_model(p);
  const OracleResult base = solve_ls(m);

  std::vector<std::size_t> perm(m.cols);
  for (std::size_t j = 0; j < m.cols; ++j) perm[j] = j;
  std::shuffle(perm.begin(), perm.end(), rng);
  DiscreteLSModel shuffled = m;
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      shuffled.design[i * m.cols + j] = m.design[i * m.cols + perm[j]];
    }
  }
  const OracleResult other = solve_ls(shuffled);
  CHECK(testing::max_abs_diff(base.approximant, other.approximant) < 1e-10);
  CHECK(std::fabs(base.residual_norm - other.residual_norm) < 1e-12);
}
