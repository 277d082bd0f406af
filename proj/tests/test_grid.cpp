#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "support.hpp"

using namespace pxl;
using pxl::test::interval;
using pxl::test::lattice;
using pxl::test::unit_box;

namespace {

double quadratic_energy(const ScalarField& u) {
    double e = 0.0;
    for (const CellGradient& c : cell_gradients(u)) e += 0.5 * c.weight * (c.g[0] * c.g[0] + c.g[1] * c.g[1]);
    return e;
}

std::vector<Vec2> p2_flux(const ScalarField& u) {
    std::vector<Vec2> f;
    for (const CellGradient& c : cell_gradients(u)) f.push_back({c.weight * c.g[0], c.weight * c.g[1]});
    return f;
}

// Lattice squares of an n x n box paired with the mean of their two triangles' gradients.
double square_mean_error(int n) {
    const GridPtr g = unit_box(n);
    const auto u = ScalarField::from_function(g, [](const Vec2& x) { return std::sin(2.0 * x[0]) * std::exp(x[1]); });
    const auto grads = cell_gradients(u);
    double worst = 0.0;
    for (std::size_t c = 0; c + 1 < grads.size(); c += 2) {
        const Vec2 m = g->cells()[c].center;
        const Vec2 m2 = g->cells()[c + 1].center;
        const Vec2 mid{0.5 * (m[0] + m2[0]), 0.5 * (m[1] + m2[1])};
        const double gx = 0.5 * (grads[c].g[0] + grads[c + 1].g[0]);
        const double gy = 0.5 * (grads[c].g[1] + grads[c + 1].g[1]);
        const double ex = 2.0 * std::cos(2.0 * mid[0]) * std::exp(mid[1]);
        const double ey = std::sin(2.0 * mid[0]) * std::exp(mid[1]);
        worst = std::max({worst, std::abs(gx - ex), std::abs(gy - ey)});
    }
    return worst;
}

}  // namespace

TEST_CASE("interval spacing and interior count") {
    const GridPtr g = interval(0.0, 1.0, 5);
    CHECK(g->h()[0] == doctest::Approx(0.25));
    CHECK(g->interior_nodes().size() == 3);
    CHECK(g->boundary_nodes().size() == 2);
    CHECK(g->measure() == doctest::Approx(1.0));
}

TEST_CASE("smallest box has one interior node at the centre") {
    const GridPtr g = unit_box(3);
    REQUIRE(g->interior_nodes().size() == 1);
    const Vec2 c = g->coord(g->interior_nodes()[0]);
    CHECK(c[0] == doctest::Approx(0.5));
    CHECK(c[1] == doctest::Approx(0.5));
    CHECK(g->measure() == doctest::Approx(1.0));
}

TEST_CASE("disk measure approaches the circle area") {
    GridSpec s = lattice(GridKind::Disk2D, {0.0, 0.0}, {1.0, 1.0}, 65);
    s.disk_radius = 0.5;
    const GridPtr g = build_grid(s);
    const double area = std::numbers::pi * 0.25;
    CHECK(std::abs(g->measure() - area) / area < 0.02);
    for (int k : g->interior_nodes())
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) CHECK(g->is_active(g->neighbor(k, di, dj)));
}

TEST_CASE("disk boundary nodes lie outside the radius and touch the interior") {
    GridSpec s = lattice(GridKind::Disk2D, {0.0, 0.0}, {1.0, 1.0}, 33);
    s.disk_radius = 0.4;
    const GridPtr g = build_grid(s);
    for (int b : g->boundary_nodes()) {
        const Vec2 x = g->coord(b);
        CHECK(std::hypot(x[0] - 0.5, x[1] - 0.5) >= 0.4 - 1e-12);
        bool touches = false;
        for (int di = -1; di <= 1; ++di)
            for (int dj = -1; dj <= 1; ++dj) {
                const int m = g->neighbor(b, di, dj);
                touches = touches || (m >= 0 && g->is_interior(m));
            }
        CHECK(touches);
    }
}

TEST_CASE("invalid grids are rejected") {
    CHECK_THROWS_AS(build_grid(lattice(GridKind::Box2D, {0.0, 0.0}, {1.0, 1.0}, 2)), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(lattice(GridKind::Box2D, {0.0, 0.0}, {0.0, 1.0}, 9)), std::invalid_argument);
    CHECK_THROWS_AS(interval(1.0, 0.5, 9), std::invalid_argument);
}

TEST_CASE("exterior nodes carry the sentinel") {
    GridSpec s = lattice(GridKind::Disk2D, {0.0, 0.0}, {1.0, 1.0}, 17);
    const GridPtr g = build_grid(s);
    const ScalarField u(g, 1.0);
    int exterior = 0;
    for (std::size_t k = 0; k < g->num_nodes(); ++k)
        if (!g->is_active(static_cast<int>(k))) {
            ++exterior;
            CHECK(std::isnan(u[static_cast<int>(k)]));
        }
    CHECK(exterior > 0);
    CHECK(u.finite_on_active());
}

TEST_CASE("fields on different grids do not mix") {
    ScalarField a(unit_box(5), 1.0);
    const ScalarField b(unit_box(9), 1.0);
    CHECK_THROWS(a += b);
}

TEST_CASE("affine fields have exact cell gradients") {
    const auto u1 = ScalarField::from_function(interval(0.0, 1.0, 9), [](const Vec2& x) { return 3.0 * x[0]; });
    for (const CellGradient& c : cell_gradients(u1)) CHECK(c.g[0] == doctest::Approx(3.0).epsilon(1e-14));

    const auto u2 = ScalarField::from_function(unit_box(9), [](const Vec2& x) { return x[0] + 2.0 * x[1]; });
    double total = 0.0;
    for (const CellGradient& c : cell_gradients(u2)) {
        CHECK(c.g[0] == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(c.g[1] == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(c.weight > 0.0);
        total += c.weight;
    }
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("x squared on five nodes") {
    const auto u = ScalarField::from_function(interval(0.0, 1.0, 5), [](const Vec2& x) { return x[0] * x[0]; });
    const auto g = cell_gradients(u);
    REQUIRE(g.size() == 4);
    const double expect[] = {0.25, 0.75, 1.25, 1.75};
    for (int i = 0; i < 4; ++i) {
        CHECK(g[i].g[0] == doctest::Approx(expect[i]));
        CHECK(g[i].weight == doctest::Approx(0.25));
    }
}

TEST_CASE("divergence of zero and constant flux vanishes") {
    const GridPtr g = unit_box(9);
    const std::vector<Vec2> zero(g->cells().size(), Vec2{0.0, 0.0});
    const ScalarField d0 = energy_divergence(g, zero);
    for (int k : g->interior_nodes()) CHECK(d0[k] == 0.0);

    const auto u = ScalarField::from_function(g, [](const Vec2& x) { return 0.3 * x[0] - 1.7 * x[1] + 2.0; });
    const ScalarField d1 = energy_divergence(g, p2_flux(u));
    for (int k : g->interior_nodes()) CHECK(std::abs(d1[k]) < 1e-14);
}

TEST_CASE("divergence is the gradient of the quadratic energy") {
    std::mt19937_64 rng(7);
    for (const GridPtr& g : {interval(0.0, 1.0, 11), unit_box(7)}) {
        const ScalarField u = pxl::test::noise(g, rng);
        const ScalarField d = energy_divergence(g, p2_flux(u));
        for (int k : g->interior_nodes()) {
            // Quadratic in u_k: the central difference is exact up to rounding.
            const double t = 1e-3;
            ScalarField up = u, dn = u;
            up[k] += t;
            dn[k] -= t;
            const double fd = (quadratic_energy(up) - quadratic_energy(dn)) / (2.0 * t);
            CHECK(std::abs(fd - d[k]) <= 1e-8 * std::max(1.0, std::abs(d[k])));
        }
    }
}

TEST_CASE("adjointness holds to rounding") {
    std::mt19937_64 rng(11);
    const GridPtr g = unit_box(17);
    std::normal_distribution<double> n01;
    for (int trial = 0; trial < 5; ++trial) {
        const ScalarField u = pxl::test::noise(g, rng, true);
        const ScalarField v = pxl::test::noise(g, rng, true);
        const auto gu = cell_gradients(u);
        const auto gv = cell_gradients(v);
        double lhs = 0.0, scale = 0.0;
        for (std::size_t c = 0; c < gu.size(); ++c) {
            const double t = gu[c].weight * (gu[c].g[0] * gv[c].g[0] + gu[c].g[1] * gv[c].g[1]);
            lhs += t;
            scale += std::abs(t);
        }
        const ScalarField d = energy_divergence(g, p2_flux(u));
        double rhs = 0.0;
        for (int k : g->interior_nodes()) rhs += v[k] * d[k];
        CHECK(std::abs(lhs - rhs) <= 1e-12 * scale);
    }
}

TEST_CASE("paired triangle gradients are second order at square centres") {
    const double e1 = square_mean_error(17);
    const double e2 = square_mean_error(33);
    const double e3 = square_mean_error(65);
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.125));
    CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.125));
}

TEST_CASE("sup distance respects the interior flag") {
    const GridPtr g = interval(0.0, 1.0, 5);
    ScalarField a(g, 0.0), b(g, 0.0);
    b[0] = 5.0;
    b[2] = 1.0;
    CHECK(sup_distance(a, b) == 5.0);
    CHECK(sup_distance(a, b, true) == 1.0);
}
