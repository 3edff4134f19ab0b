#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ridge/closed_form.hpp"
#include "ridge/error.hpp"
#include "ridge/oracle.hpp"
#include "ridge/weighted.hpp"
#include "support/test_support.hpp"

using namespace ridge;
using testing::rel_diff;

namespace {

const double kExampleError = std::sqrt(94.0) / 576.0;

GridFunction example_f_star(const RSetDomain& dom, const DirectionBasis& basis) {
  return sample(dom, pullback(basis, parse(testing::example_f_text())));
}

GridFunction approximant(const ApproxSolution& s, const RSetDomain& dom) {
  return combine(dom, s.components);
}

}  // namespace

TEST_CASE("worked example: components, approximant and error") {
  const DirectionBasis basis = testing::example_basis();
  const RSetDomain dom = testing::example_domain(4);
  const GridFunction f_star = example_f_star(dom, basis);
  const ApproxSolution sol = solve_unweighted(f_star, basis);

  REQUIRE(sol.components.size() == 3);
  CHECK(sol.method == Method::ClosedForm);
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t k = 0; k < dom.q(); ++k) {
      const double expect = dom.nodes(j)[k] / 8 - (j == 0 ? 0.125 : 0.0);
      CHECK(std::fabs(sol.components[j].values[k] - expect) < 1e-13);
    }
  }
  CHECK(rel_diff(sol.error, kExampleError) < 1e-12);
  CHECK(rel_diff(sol.residual_error, kExampleError) < 1e-10);
  CHECK(sol.orthogonality_defect < 1e-10);
  CHECK(rel_diff(error_closed_form(f_star, basis), kExampleError) < 1e-12);
}

TEST_CASE("a ridge sum is reproduced exactly") {
  const DirectionBasis id = DirectionBasis::build({{1, 0}, {0, 1}});
  const RSetDomain sq({{0, 1}, {0, 1}}, {}, 4);
  const GridFunction f = sample(sq, [](std::span<const double> y) { return y[0] + y[1]; });
  const ApproxSolution sol = solve_unweighted(f, id);
  CHECK(testing::max_abs_diff(approximant(sol, sq).samples(), f.samples()) < 1e-14);
  CHECK(sol.error < 1e-7);
  CHECK(sol.residual_error < 1e-14);

  const auto oracle = solve_ls(build_ls_model(WeightedProblem::unit_weights(f, id)));
  CHECK(oracle.residual_norm < 1e-10);
}

TEST_CASE("zero function") {
  const DirectionBasis basis = testing::example_basis();
  const RSetDomain dom = testing::example_domain(3);
  const ApproxSolution sol = solve_unweighted(GridFunction::constant(dom, 0.0), basis);
  for (const auto& c : sol.components) {
    for (double v : c.values) CHECK(v == 0.0);
  }
  CHECK(sol.error == 0.0);
}

TEST_CASE("closed-form error on small cases") {
  const DirectionBasis id = DirectionBasis::build({{1, 0}, {0, 1}});
  const RSetDomain sq({{0, 1}, {0, 1}}, {}, 3);
  const GridFunction c = GridFunction::constant(sq, 3.7);
  CHECK(error_closed_form(c, id) < 1e-7);

  const GridFunction xy = sample(sq, [](std::span<const double> y) { return y[0] * y[1]; });
  CHECK(rel_diff(error_closed_form(xy, id), 1.0 / 12) < 1e-13);
  const auto oracle = solve_ls(build_ls_model(WeightedProblem::unit_weights(xy, id)));
  CHECK(std::fabs(oracle.residual_norm - 1.0 / 12) < 1e-12);

  // Scaling of X by a non-unit determinant.
  const DirectionBasis scaled = DirectionBasis::build({{2, 0}, {0, 2}});
  CHECK(rel_diff(error_closed_form(xy, scaled), 1.0 / 24) < 1e-13);

  CHECK_THROWS_AS(error_closed_form(xy, testing::example_basis()), InvalidArgument);
}

TEST_CASE("negative radicands are clamped only when tiny") {
  CHECK(clamped_sqrt(4.0) == 2.0);
  CHECK(clamped_sqrt(-1e-13) == 0.0);
  CHECK_THROWS_AS(clamped_sqrt(-1e-11), NumericalError);
}

TEST_CASE("marginal characterization") {
  const DirectionBasis basis = testing::example_basis();
  const RSetDomain dom = testing::example_domain(4);
  const GridFunction f_star = example_f_star(dom, basis);
  ApproxSolution sol = solve_unweighted(f_star, basis);
  CHECK(check_marginal_characterization(sol.components, f_star).value < 1e-12);

  for (double& v : sol.components[0].values) v += 0.1;
  const Defect d = check_marginal_characterization(sol.components, f_star);
  CHECK(d.value >= 0.1 - 1e-9);

  std::mt19937_64 rng(51);
  for (int t = 0; t < 50; ++t) {
    const RSetDomain cube({{0, 1}, {0, 1}}, {{0, 1}}, 5);
    const DirectionBasis b = testing::random_basis(rng, 3, 2);
    const auto p = testing::random_polynomial(rng, 3, 3, 5);
    const GridFunction f = sample(cube, [&p](std::span<const double> y) { return p(y); });
    CHECK(check_marginal_characterization(solve_unweighted(f, b).components, f).value < 1e-10);
  }
}

TEST_CASE("averaging identity and cross moments") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 20; ++t) {
    const auto inst = testing::random_instance(rng, 4, 4, 2);
    const RSetDomain& dom = inst.dom;
    const std::size_t r = dom.r();
    const double a = integrate_full(inst.f_star);
    std::vector<GridFunction> fi;
    for (std::size_t i = 0; i < r; ++i) fi.push_back(broadcast(dom, marginal(inst.f_star, i)));

    for (std::size_t j = 0; j < r; ++j) {
      double lhs = 0.0;
      for (std::size_t i = 0; i < r; ++i) {
        if (i == j) continue;
        // int over Y^(j) of f_i*, a function of y_j, is constant in y_j.
        const RidgeComponent inner = marginal(fi[i], j);
        lhs += inner.values[0] / (dom.complement_measure(j) * dom.complement_measure(i));
      }
      const double rhs = static_cast<double>(r - 1) * a / dom.measure();
      CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::max(std::fabs(rhs), 1.0));
    }

    for (std::size_t i = 0; i < r; ++i) {
      const double ci = dom.measure() / dom.ridge_measure(i);
      CHECK(std::fabs(integrate_full(fi[i]) - ci * a) <= 1e-12 * std::max(1.0, std::fabs(ci * a)));
      for (std::size_t j = 0; j < r; ++j) {
        if (j == i) continue;
        const double cij = dom.measure() / (dom.ridge_measure(i) * dom.ridge_measure(j));
        const double expect = cij * a * a;
        CHECK(std::fabs(inner(fi[i], fi[j]) - expect) <= 1e-12 * std::max(1.0, std::fabs(expect)));
      }
    }
  }
}

TEST_CASE("Pythagoras: error^2 + |approximant|^2 = |f|^2 on X") {
  std::mt19937_64 rng(71);
  for (int t = 0; t < 30; ++t) {
    const auto inst = testing::random_instance(rng, 4, 4);
    const ApproxSolution sol = solve_unweighted(inst.f_star, inst.basis);
    const double det = std::fabs(inst.basis.det());
    const double f2 = norm_sq(inst.f_star) / det;
    const double a2 = norm_sq(approximant(sol, inst.dom)) / det;
    CHECK(std::fabs(sol.error * sol.error + a2 - f2) <= 1e-9 * f2);
  }
}

TEST_CASE("optimality against random perturbations") {
  std::mt19937_64 rng(81);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (int t = 0; t < 5; ++t) {
    const auto inst = testing::random_instance(rng, 4, 3);
    const ApproxSolution sol = solve_unweighted(inst.f_star, inst.basis);
    const double best = std::sqrt(norm_sq(inst.f_star - approximant(sol, inst.dom)));
    for (int k = 0; k < 20; ++k) {
      auto comps = sol.components;
      for (auto& c : comps) {
        for (double& v : c.values) v += noise(rng);
      }
      const double worse = std::sqrt(norm_sq(inst.f_star - combine(inst.dom, comps)));
      CHECK(worse >= best - 1e-12);
    }
  }
}

TEST_CASE("adding ridge functions to f leaves the error unchanged") {
  std::mt19937_64 rng(91);
  for (int t = 0; t < 20; ++t) {
    const auto inst = testing::random_instance(rng, 4, 4);
    const double e0 = error_closed_form(inst.f_star, inst.basis);
    const auto h = testing::random_polynomial(rng, 1, 3, 3);
    const std::size_t r = inst.dom.r();
    const GridFunction shifted = inst.f_star + sample(inst.dom, [&](std::span<const double> y) {
                                   double s = 0.0;
                                   for (std::size_t i = 0; i < r; ++i) s += (i + 1) * h(y.subspan(i, 1));
                                   return s;
                                 });
    const double e1 = error_closed_form(shifted, inst.basis);
    CHECK(std::fabs(e1 - e0) <= 1e-9 * std::max(e0, 1e-3));
  }
}

TEST_CASE("constant shifts between components do not change the approximant") {
  const DirectionBasis basis = testing::example_basis();
  const RSetDomain dom = testing::example_domain(4);
  const GridFunction f_star = example_f_star(dom, basis);
  const ApproxSolution sol = solve_unweighted(f_star, basis);
  auto shifted = sol.components;
  for (double& v : shifted[0].values) v += 0.3;
  for (double& v : shifted[1].values) v -= 0.3;
  CHECK(testing::max_abs_diff(combine(dom, shifted).samples(), approximant(sol, dom).samples()) <
        1e-15);
  const double e_shift = std::sqrt(norm_sq(f_star - combine(dom, shifted)) / 16.0);
  CHECK(std::fabs(e_shift - sol.residual_error) < 1e-15);
}
