#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <omp.h>

#include <random>

#include "ridge/domain.hpp"
#include "ridge/error.hpp"
#include "ridge/gauss_legendre.hpp"
#include "ridge/kernels.hpp"
#include "support/test_support.hpp"

using namespace ridge;
using testing::rel_diff;

namespace {

GridFunction example_f_star(const RSetDomain& dom) {
  return sample(dom, [](std::span<const double> y) { return y[0] * y[1] * y[2] * y[3]; });
}

}  // namespace

TEST_CASE("Gauss-Legendre weights sum to the interval length") {
  for (std::size_t q = 1; q <= 24; ++q) {
    const Rule1D rule = gauss_legendre(q, -0.5, 2.0);
    double s = 0.0;
    for (double w : rule.weights) s += w;
    CHECK(std::fabs(s - 2.5) < 1e-13);
    CHECK(std::is_sorted(rule.nodes.begin(), rule.nodes.end()));
    for (double w : rule.weights) CHECK(w > 0.0);
  }
  CHECK_THROWS_AS(gauss_legendre(0, 0, 1), InvalidArgument);
  CHECK_THROWS_AS(gauss_legendre(3, 1, 1), InvalidArgument);
}

TEST_CASE("Gauss-Legendre is exact through degree 2q-1") {
  for (std::size_t q = 1; q <= 12; ++q) {
    const double lo = -0.3, hi = 1.7;
    const Rule1D rule = gauss_legendre(q, lo, hi);
    for (int d = 0; d <= static_cast<int>(2 * q - 1); ++d) {
      double s = 0.0;
      for (std::size_t k = 0; k < q; ++k) s += rule.weights[k] * std::pow(rule.nodes[k], d);
      const double exact = (std::pow(hi, d + 1) - std::pow(lo, d + 1)) / (d + 1);
      CHECK(std::fabs(s - exact) <= 1e-12 * std::max(1.0, std::fabs(exact)));
    }
  }
}

TEST_CASE("barycentric interpolation reproduces polynomials below the node count") {
  const Rule1D rule = gauss_legendre(6, 0.0, 2.0);
  std::vector<double> v;
  auto p = [](double t) { return 1.0 - 2.0 * t + 0.5 * t * t * t - 0.1 * std::pow(t, 5); };
  for (double t : rule.nodes) v.push_back(p(t));
  const BarycentricInterpolant interp(rule.nodes, v);
  for (double t = 0.0; t <= 2.0; t += 0.05) CHECK(interp(t) == doctest::Approx(p(t)).epsilon(1e-12));
  CHECK(interp(rule.nodes[2]) == v[2]);
  double sum = 0.0;
  for (std::size_t k = 0; k < 6; ++k) sum += interp.cardinal(k, 0.77);
  CHECK(sum == doctest::Approx(1.0));
  CHECK(interp.cardinal(3, rule.nodes[3]) == 1.0);
  CHECK(interp.cardinal(2, rule.nodes[3]) == 0.0);
}

TEST_CASE("domain construction and measures") {
  const RSetDomain dom({{0, 2}, {1, 4}}, {{-1, 0.5}}, 3);
  CHECK(dom.r() == 2);
  CHECK(dom.m() == 1);
  CHECK(dom.n() == 3);
  CHECK(dom.size() == 27);
  CHECK(dom.ridge_measure(0) == 2.0);
  CHECK(dom.box0_measure() == 1.5);
  CHECK(dom.complement_measure(0) == 4.5);
  CHECK(dom.complement_measure(1) == 3.0);
  CHECK(dom.measure() == 9.0);

  CHECK_THROWS_AS(RSetDomain({{0, 0}}, {}, 3), InvalidArgument);
  CHECK_THROWS_AS(RSetDomain({{1, 0}}, {}, 3), InvalidArgument);
  CHECK_THROWS_AS(RSetDomain({{0, 1}}, {{2, 2}}, 3), InvalidArgument);
  CHECK_THROWS_AS(RSetDomain({}, {{0, 1}}, 3), InvalidArgument);
  CHECK_THROWS_AS(RSetDomain({{0, 1}}, {}, 0), InvalidArgument);

  const RSetDomain no_box({{0, 3}}, {}, 4);
  CHECK(no_box.m() == 0);
  CHECK(no_box.box0_measure() == 1.0);
  CHECK(no_box.complement_measure(0) == 1.0);
}

TEST_CASE("measures multiply to |Y| for every ridge axis") {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 50; ++t) {
    const auto inst = testing::random_instance(rng, 4, 4);
    for (std::size_t j = 0; j < inst.dom.r(); ++j) {
      const double prod = inst.dom.complement_measure(j) * inst.dom.ridge_measure(j);
      // Same factors, different association order: at most a few ulps apart.
      CHECK(rel_diff(prod, inst.dom.measure()) <= 4 * std::numeric_limits<double>::epsilon());
    }
  }
}

TEST_CASE("sample") {
  const RSetDomain unit({{0, 1}, {0, 1}, {0, 1}}, {{0, 1}}, 3);
  const GridFunction one = sample(unit, [](std::span<const double>) { return 1.0; });
  CHECK(one.size() == 81);
  for (double v : one.samples()) CHECK(v == 1.0);

  const GridFunction prod = example_f_star(unit);
  const auto grid = unit.grid();
  std::vector<double> y(4);
  for (std::size_t i = 0; i < prod.size(); ++i) {
    grid.point(i, y);
    CHECK(prod[i] == y[0] * y[1] * y[2] * y[3]);
  }

  const RSetDomain rect({{0, 2}}, {{0, 1}}, 4);
  const GridFunction g = sample(rect, [](std::span<const double> p) { return p[0]; });
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g[i] == rect.nodes(0)[rect.grid().position(i, 0)]);
  }
}

TEST_CASE("sample reports the failing node") {
  const RSetDomain dom({{-1, 1}}, {}, 2);
  try {
    sample(dom, y_function(parse("sqrt(y1)"), 1));
    FAIL("expected evaluation error");
  } catch (const EvalError& e) {
    CHECK(std::string(e.what()).find("node y = (-0.57735") != std::string::npos);
  }
}

TEST_CASE("integrate_full") {
  for (std::size_t q : {1, 2, 3, 8}) {
    const RSetDomain dom = testing::example_domain(q);
    CHECK(rel_diff(integrate_full(example_f_star(dom)), 1.0 / 16) < 1e-14);
    CHECK(rel_diff(integrate_full(GridFunction::constant(dom, 1.0)), 1.0) < 1e-14);
  }
  const RSetDomain sq({{0, 1}, {0, 1}}, {}, 2);
  CHECK(rel_diff(integrate_full(sample(sq, [](std::span<const double> y) { return y[0] * y[0]; })),
                 1.0 / 3) < 1e-14);
}

TEST_CASE("marginal") {
  const RSetDomain dom = testing::example_domain(5);
  const GridFunction f = example_f_star(dom);
  for (std::size_t j = 0; j < 3; ++j) {
    const RidgeComponent m = marginal(f, j);
    CHECK(m.axis == j);
    for (std::size_t k = 0; k < dom.q(); ++k) {
      CHECK(rel_diff(m.values[k], dom.nodes(j)[k] / 8) < 1e-13);
    }
  }
  CHECK_THROWS_AS(marginal(f, 3), InvalidArgument);

  const RSetDomain rect({{0, 2}, {1, 4}}, {{0, 0.5}}, 3);
  const RidgeComponent c = marginal(GridFunction::constant(rect, 2.5), 1);
  for (double v : c.values) CHECK(rel_diff(v, 2.5 * rect.complement_measure(1)) < 1e-14);

  const RSetDomain sq({{0, 1}, {0, 1}}, {}, 4);
  const RidgeComponent y1 = marginal(sample(sq, [](std::span<const double> y) { return y[0]; }), 0);
  for (std::size_t k = 0; k < 4; ++k) CHECK(rel_diff(y1.values[k], sq.nodes(0)[k]) < 1e-14);
}

TEST_CASE("norms") {
  const RSetDomain dom = testing::example_domain(4);
  CHECK(rel_diff(norm_sq(example_f_star(dom)), 1.0 / 81) < 1e-13);
  CHECK(norm_sq(GridFunction::constant(dom, 0.0)) == 0.0);
  CHECK(rel_diff(norm_sq(GridFunction::constant(dom, 1.0)), 1.0) < 1e-14);

  for (std::size_t j = 0; j < 3; ++j) {
    RidgeComponent c{j, {}};
    for (double t : dom.nodes(j)) c.values.push_back(t / 8);
    CHECK(rel_diff(ridge_norm_sq(c, dom), 1.0 / 192) < 1e-13);
  }
  CHECK(ridge_norm_sq({0, std::vector<double>(4, 0.0)}, dom) == 0.0);
  CHECK(rel_diff(ridge_norm_sq({1, std::vector<double>(4, 1.0)}, dom), 1.0) < 1e-14);
  CHECK_THROWS_AS(ridge_norm_sq({1, std::vector<double>(3, 1.0)}, dom), InvalidArgument);
}

TEST_CASE("combine") {
  const RSetDomain sq({{0, 1}, {0, 1}}, {}, 3);
  const RidgeComponent c1{0, {0.3, -1.0, 2.0}};
  RidgeComponent c2{1, std::vector<double>(3, 0.0)};
  const std::vector<RidgeComponent> cancel{{0, {0.7, 0.7, 0.7}}, {1, {-0.7, -0.7, -0.7}}};
  const GridFunction zero = combine(sq, cancel);
  for (double v : zero.samples()) CHECK(v == 0.0);

  const RSetDomain line({{0, 1}}, {{0, 2}}, 3);
  const GridFunction b = broadcast(line, c1);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b[i] == c1.values[line.grid().position(i, 0)]);

  const RSetDomain dom = testing::example_domain(4);
  std::vector<RidgeComponent> sol;
  for (std::size_t j = 0; j < 3; ++j) {
    RidgeComponent c{j, {}};
    for (double t : dom.nodes(j)) c.values.push_back(t / 8 - (j == 0 ? 0.125 : 0.0));
    sol.push_back(c);
  }
  const GridFunction approx = combine(dom, sol);
  std::vector<double> y(4);
  for (std::size_t i = 0; i < approx.size(); ++i) {
    dom.grid().point(i, y);
    CHECK(std::fabs(approx[i] - ((y[0] + y[1] + y[2]) / 8 - 0.125)) < 1e-15);
  }

  const GridFunction w = sample(sq, [](std::span<const double> y) { return 1 + y[1]; });
  const std::vector<GridFunction> ws{w, GridFunction::constant(sq, 2.0)};
  const std::vector<RidgeComponent> both{c1, {1, {1.0, 2.0, 3.0}}};
  const GridFunction weighted = combine(sq, both, ws);
  for (std::size_t i = 0; i < weighted.size(); ++i) {
    const auto k0 = sq.grid().position(i, 0), k1 = sq.grid().position(i, 1);
    CHECK(weighted[i] == doctest::Approx(w[i] * c1.values[k0] + 2.0 * both[1].values[k1]));
  }
  CHECK_THROWS_AS(combine(sq, both, std::vector<GridFunction>{w}), InvalidArgument);
  c2.axis = 2;
  CHECK_THROWS_AS(combine(sq, std::vector<RidgeComponent>{c2}), InvalidArgument);
}

TEST_CASE("Fubini consistency and Gauss exactness on random polynomials") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 40; ++t) {
    const auto inst = testing::random_instance(rng, 4, 4);
    const double full = integrate_full(inst.f_star);
    for (std::size_t j = 0; j < inst.dom.r(); ++j) {
      const RidgeComponent m = marginal(inst.f_star, j);
      kernels::CompensatedSum s;
      for (std::size_t k = 0; k < inst.dom.q(); ++k) s.add(inst.dom.axis_weights(j)[k] * m.values[k]);
      CHECK(std::fabs(s.value() - full) <= 1e-12 * std::max(1.0, std::fabs(full)));
    }
    // Per-axis degree <= 3 <= 2q - 1.
    const double exact = inst.f.integral(testing::all_axes(inst.dom));
    CHECK(std::fabs(full - exact) <= 1e-12 * std::max(1.0, std::fabs(exact)));
    // Squares have per-axis degree <= 6 <= 2q - 1 for q >= 4.
    const double exact_sq = (inst.f * inst.f).integral(testing::all_axes(inst.dom));
    CHECK(std::fabs(norm_sq(inst.f_star) - exact_sq) <= 1e-12 * std::max(1.0, exact_sq));
  }
}

TEST_CASE("parallel kernels match the serial reference for any thread count") {
  std::mt19937_64 rng(41);
  const RSetDomain dom({{0, 1}, {0.5, 2}, {0, 1}}, {{0, 3}}, 9);
  const auto f = testing::random_polynomial(rng, 4, 3, 6);
  const auto grid = dom.grid();
  auto fn = [&f](std::span<const double> y) { return f(y); };

  std::vector<double> ref(dom.size());
  kernels::serial::sample(grid, fn, ref);
  const double ref_sum = kernels::serial::weighted_sum(dom.tensor_weights(), ref);
  const double ref_dot = kernels::serial::weighted_dot(dom.tensor_weights(), ref, ref);
  std::vector<std::vector<double>> ref_marg;
  for (std::size_t a = 0; a < 4; ++a) ref_marg.push_back(kernels::serial::axis_marginal(grid, ref, a));

  const std::vector<std::size_t> axes{0, 2};
  const std::vector<double> g0(9, 1.5), g2{1, 2, 3, 4, 5, 6, 7, 8, 9};
  const std::vector<std::span<const double>> comps{g0, g2};
  const std::vector<std::span<const double>> scales{ref, {}};
  std::vector<double> ref_comb(dom.size());
  kernels::serial::combine(grid, axes, comps, scales, ref_comb);

  const int saved = omp_get_max_threads();
  std::vector<double> first_marg;
  double first_sum = 0.0;
  for (int threads : {1, 2, 3, 4}) {
    kernels::set_max_threads(threads);
    std::vector<double> out(dom.size());
    kernels::omp::sample(grid, fn, out);
    CHECK(out == ref);
    const double s = kernels::omp::weighted_sum(dom.tensor_weights(), out);
    CHECK(rel_diff(s, ref_sum) < 1e-13);
    CHECK(rel_diff(kernels::omp::weighted_dot(dom.tensor_weights(), out, out), ref_dot) < 1e-13);
    for (std::size_t a = 0; a < 4; ++a) {
      const auto m = kernels::omp::axis_marginal(grid, out, a);
      for (std::size_t k = 0; k < 9; ++k) {
        CHECK(std::fabs(m[k] - ref_marg[a][k]) <= 1e-13 * std::max(1.0, std::fabs(ref_marg[a][k])));
      }
      if (a == 1) {
        if (first_marg.empty()) first_marg = m;
        CHECK(m == first_marg);
      }
    }
    if (threads == 1) first_sum = s;
    CHECK(s == first_sum);
    std::vector<double> comb(dom.size());
    kernels::omp::combine(grid, axes, comps, scales, comb);
    CHECK(comb == ref_comb);
  }
  kernels::set_max_threads(saved);
}

TEST_CASE("grid function arithmetic and validation") {
  const RSetDomain a({{0, 1}}, {}, 3);
  const RSetDomain b({{0, 1}}, {}, 3);
  CHECK_THROWS_AS(GridFunction(a, {1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(GridFunction(a, {1.0, 2.0, std::nan("")}), NumericalError);
  const GridFunction f(a, {1.0, 2.0, 3.0});
  CHECK_THROWS_AS(f + GridFunction::constant(b, 1.0), InvalidArgument);
  const GridFunction g = 2.0 * f - f * f + f;
  CHECK(std::vector<double>(g.samples().begin(), g.samples().end()) == std::vector<double>{2, 2, 0});
  CHECK(g.max_abs() == 2.0);
}

TEST_CASE("interpolate a component between nodes") {
  const RSetDomain dom({{0, 2}}, {{0, 1}}, 5);
  RidgeComponent c{0, {}};
  for (double t : dom.nodes(0)) c.values.push_back(t * t - 1);
  CHECK(interpolate(c, dom, 0.0) == doctest::Approx(-1.0));
  CHECK(interpolate(c, dom, 2.0) == doctest::Approx(3.0));
  CHECK(interpolate(c, dom, 1.3) == doctest::Approx(0.69));
}
