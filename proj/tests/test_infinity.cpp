#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "pxl/infinity.hpp"

using namespace pxl;
using pxl::test::lattice;
using pxl::test::unit_box;

namespace {

GridPtr square12(int n) { return build_grid(lattice(GridKind::Box2D, {1.0, 1.0}, {2.0, 2.0}, n)); }

XiField constant_xi(const GridPtr& g, Vec2 v) { return {ScalarField(g, v[0]), ScalarField(g, v[1])}; }

double aronsson_residual(int n) {
    const GridPtr g = square12(n);
    const ScalarField u = exact_solution("aronsson", {}, g);
    const XiField xi = zero_xi(g);
    double worst = 0.0;
    for (int k : g->interior_nodes()) worst = std::max(worst, std::abs(residual_infinity(u, xi, k)));
    return worst;
}

InfinitySolution solve(const GridPtr& g, const ScalarField& phi, const XiField& xi) {
    InfinityProblem prob;
    prob.grid = g;
    prob.phi = phi;
    prob.xi = xi;
    return solve_infinity(prob);
}

}  // namespace

TEST_CASE("residual of affine and constant fields") {
    const GridPtr g = unit_box(9);
    const auto unit = ScalarField::from_function(g, [](const Vec2& x) { return 0.6 * x[0] + 0.8 * x[1]; });
    const XiField xi = constant_xi(g, {3.0, -2.0});
    const ScalarField flat(g, 0.7);
    for (int k : g->interior_nodes()) {
        CHECK(std::abs(residual_infinity(unit, xi, k)) < 1e-12);
        CHECK(residual_infinity(flat, xi, k) == 0.0);
    }
    CHECK_THROWS_AS(residual_infinity(flat, xi, g->boundary_nodes()[0]), std::invalid_argument);
}

TEST_CASE("Aronsson residual shrinks under refinement") {
    const double r1 = aronsson_residual(17);
    const double r2 = aronsson_residual(33);
    const double r3 = aronsson_residual(65);
    CHECK(r1 <= 0.05);
    CHECK(r2 <= 0.5 * r1 * 1.05);
    CHECK(r3 <= 0.5 * r2 * 1.05);
}

TEST_CASE("expanded p-Laplacian by hand") {
    const Mat2 zero{};
    CHECK(expand_plaplacian({1.0, 0.0}, zero, 7.0, {0.0, 0.0}) == 0.0);
    const Mat2 xx{{{2.0, 0.0}, {0.0, 0.0}}};
    CHECK(expand_plaplacian({2.0, 0.0}, xx, 4.0, {0.0, 0.0}) == doctest::Approx(-24.0));
    CHECK(expand_plaplacian({0.0, 0.0}, xx, 4.0, {0.0, 0.0}) == 0.0);
    CHECK_THROWS_AS(expand_plaplacian({1.0, 0.0}, xx, 2.0, {0.0, 0.0}), std::invalid_argument);
    // Drift term alone: -|g|^{p-2} ln|g| <g, grad p>.
    const double e = expand_plaplacian({2.0, 0.0}, zero, 4.0, {0.5, 0.0});
    CHECK(e == doctest::Approx(-4.0 * std::log(2.0) * 1.0));
}

TEST_CASE("normalized expansion approaches the limit operator") {
    const Vec2 g{0.7, -1.3};
    const Mat2 h{{{0.4, -0.9}, {-0.9, 1.7}}};
    const Vec2 xi{0.8, 0.35};
    const double inf_lap = g[0] * g[0] * h[0][0] + 2.0 * g[0] * g[1] * h[0][1] + g[1] * g[1] * h[1][1];
    const double n2 = g[0] * g[0] + g[1] * g[1];
    const double limit = -inf_lap - n2 * 0.5 * std::log(n2) * (xi[0] * g[0] + xi[1] * g[1]);
    double prev = INFINITY;
    for (double p : {1e3, 1e4, 1e5}) {
        const double v = normalized_expand_plaplacian(g, h, p, {p * xi[0], p * xi[1]});
        const double err = std::abs(v / limit - 1.0);
        CHECK(err <= 1e-2);
        CHECK(err < prev);
        prev = err;
    }
    const double p = 40.0;
    const double scale = (p - 2.0) * std::pow(std::sqrt(n2), p - 4.0);
    CHECK(normalized_expand_plaplacian(g, h, p, {1.0, 2.0}) * scale ==
          doctest::Approx(expand_plaplacian(g, h, p, {1.0, 2.0})).epsilon(1e-12));
}

TEST_CASE("exact solutions at known points") {
    const GridPtr g = build_grid(lattice(GridKind::Box2D, {0.0, 0.0}, {0.5, 0.5}, 3));
    ExactParams a;
    a.a = 1.0;
    const ScalarField aff = exact_solution("affine", a, g);
    CHECK(aff[g->index(2, 1)] == doctest::Approx(0.5));
    ExactParams c;
    c.vertex = {-1.0, 0.0};
    const ScalarField cone = exact_solution("cone", c, g);
    CHECK(cone[g->index(0, 0)] == doctest::Approx(1.0));
    const GridPtr sq = square12(5);
    CHECK(exact_solution("aronsson", {}, sq)[sq->index(0, 0)] == 0.0);
    CHECK_THROWS_AS(exact_solution("aronsson", {}, unit_box(5)), std::invalid_argument);
    ExactParams inside;
    inside.vertex = {0.5, 0.5};
    CHECK_THROWS_AS(exact_solution("cone", inside, unit_box(5)), std::invalid_argument);
}

TEST_CASE("unit slope affine data is a fixed point for any drift") {
    const GridPtr g = unit_box(33);
    const auto phi = ScalarField::from_function(g, [](const Vec2& x) { return 0.8 * x[0] - 0.6 * x[1]; });
    const InfinitySolution s = solve(g, phi, constant_xi(g, {1.5, 0.5}));
    CHECK(s.converged);
    CHECK(s.residual_sup <= 1e-10);
    CHECK(sup_distance(s.u, phi) <= 1e-10);
}

TEST_CASE("cone data is reproduced") {
    const GridPtr g = unit_box(65);
    ExactParams c;
    c.vertex = {-0.5, -0.5};
    const ScalarField cone = exact_solution("cone", c, g);
    const InfinitySolution s = solve(g, cone, zero_xi(g));
    CHECK(s.converged);
    CHECK(sup_distance(s.u, cone) <= 2.0 * g->h()[0]);
}

TEST_CASE("Aronsson data converges under refinement") {
    double prev = INFINITY;
    for (int n : {33, 65}) {
        const GridPtr g = square12(n);
        const ScalarField exact = exact_solution("aronsson", {}, g);
        const InfinitySolution s = solve(g, exact, zero_xi(g));
        const double err = sup_distance(s.u, exact);
        CHECK(s.converged);
        CHECK(err <= 0.02);
        CHECK(err < prev);
        prev = err;
    }
}

TEST_CASE("monotone scheme alone keeps its contract") {
    const GridPtr g = square12(33);
    InfinityProblem prob;
    prob.grid = g;
    prob.phi = exact_solution("aronsson", {}, g);
    prob.xi = zero_xi(g);
    prob.refine = false;
    const InfinitySolution s = solve_infinity(prob);
    CHECK(s.converged);
    CHECK_FALSE(s.refined);
    CHECK(s.contract_violations == 0);
    CHECK(sup_distance(s.u, prob.phi) <= 0.02);
}

TEST_CASE("maximum principle and comparison with cones") {
    const GridPtr g = unit_box(33);
    const auto phi = ScalarField::from_function(g, [](const Vec2& x) {
        return 0.5 * std::sin(3.0 * x[0]) * std::cos(2.0 * x[1]) + 0.2 * x[1];
    });
    const InfinitySolution s = solve(g, phi, zero_xi(g));
    REQUIRE(s.converged);
    double lo = INFINITY, hi = -INFINITY;
    for (int b : g->boundary_nodes()) {
        lo = std::min(lo, phi[b]);
        hi = std::max(hi, phi[b]);
    }
    for (int k : g->interior_nodes()) {
        CHECK(s.u[k] >= lo);
        CHECK(s.u[k] <= hi);
    }

    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.141592653589793);
    std::uniform_real_distribution<double> dist(0.8, 3.0);
    std::uniform_real_distribution<double> slope(-1.0, 1.0);
    const double h = g->h()[0];
    for (int trial = 0; trial < 50; ++trial) {
        const double th = angle(rng), r = dist(rng), b = slope(rng);
        const Vec2 v{0.5 + r * std::cos(th), 0.5 + r * std::sin(th)};
        const auto cone = [&](const Vec2& x) { return b * std::hypot(x[0] - v[0], x[1] - v[1]); };
        double a = INFINITY;
        for (int k : g->boundary_nodes()) a = std::min(a, s.u[k] - cone(g->coord(k)));
        for (int k : g->interior_nodes()) CHECK(a + cone(g->coord(k)) <= s.u[k] + 2.0 * h);
    }
}

TEST_CASE("invalid problems are rejected") {
    const GridPtr g = unit_box(9);
    InfinityProblem prob;
    prob.grid = g;
    prob.phi = ScalarField(g, 0.0);
    prob.xi = zero_xi(g);
    prob.tol = 0.0;
    CHECK_THROWS_AS(solve_infinity(prob), std::invalid_argument);
    prob.tol = 1e-8;
    prob.phi = ScalarField(unit_box(5), 0.0);
    CHECK_THROWS_AS(solve_infinity(prob), std::invalid_argument);
}
