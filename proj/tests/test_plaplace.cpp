#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "pxl/plaplace.hpp"

using namespace pxl;
using pxl::test::interval;
using pxl::test::unit_box;

namespace {

std::vector<double> constant_p(const GridPtr& g, double p) { return std::vector<double>(g->cells().size(), p); }

std::vector<double> p_of_x(const GridPtr& g, double base) {
    std::vector<double> p;
    for (const Cell& c : g->cells()) p.push_back(base + c.center[0]);
    return p;
}

// Random interior values on top of phi.
ScalarField perturbed(const ScalarField& phi, std::mt19937_64& rng, double scale) {
    ScalarField u = phi + pxl::test::noise(phi.grid(), rng, true, scale);
    return u;
}

}  // namespace

TEST_CASE("energy of a three node field by hand") {
    const GridPtr g = interval(0.0, 1.0, 3);
    const auto phi = ScalarField::from_function(g, [](const Vec2& x) { return x[0]; });
    const EnergyFunctional F = make_energy(phi, constant_p(g, 2.0));
    ScalarField u = phi;
    u[1] = 0.0;
    // Edge slopes 0 and 2, weight 1/2 each: (0 + 4) / 2 * 1/2.
    CHECK(energy_value(F, u).value == doctest::Approx(1.0));
    CHECK(offset_energy(F, phi - u).value == doctest::Approx(1.0));
    CHECK(offset_energy(F, phi).value == 0.0);
}

TEST_CASE("offset energy is positive away from the minimizer") {
    const GridPtr g = unit_box(9);
    const auto phi = ScalarField::from_function(g, [](const Vec2& x) { return x[0]; });
    const EnergyFunctional F = make_energy(phi, p_of_x(g, 3.0));
    ScalarField v(g, 0.0);
    v[g->index(4, 4)] = 1e-3;
    CHECK(offset_energy(F, v).value > 0.0);
    std::mt19937_64 rng(2);
    const ScalarField u = perturbed(phi, rng, 0.3);
    CHECK(offset_energy(F, phi - u).value == doctest::Approx(energy_value(F, u).value).epsilon(1e-13));
}

TEST_CASE("affine data is stationary for unit slope or constant exponent") {
    const GridPtr g = unit_box(9);
    const auto unit = ScalarField::from_function(g, [](const Vec2& x) { return 0.6 * x[0] - 0.8 * x[1]; });
    const ScalarField r1 = energy_gradient(make_energy(unit, p_of_x(g, 2.5)), unit);
    for (int k : g->interior_nodes()) CHECK(std::abs(r1[k]) < 1e-15);

    const auto slow = ScalarField::from_function(g, [](const Vec2& x) { return 0.4 * x[0] - 0.2 * x[1]; });
    const ScalarField r2 = energy_gradient(make_energy(slow, constant_p(g, 5.0)), slow);
    for (int k : g->interior_nodes()) CHECK(std::abs(r2[k]) < 1e-15);

    // Variable p and |a| != 1: div(|a|^{p-2} a) = |a|^{p-2} ln|a| <a, grad p> is not zero.
    const ScalarField r3 = energy_gradient(make_energy(slow, p_of_x(g, 2.5)), slow);
    const double a2 = 0.4 * 0.4 + 0.2 * 0.2;
    const double h = g->h()[0];
    for (int k : g->interior_nodes()) {
        const double x = g->coord(k)[0];
        const double expect = -std::pow(a2, (2.5 + x - 2.0) / 2.0) * 0.5 * std::log(a2) * 0.4 * h * h;
        CHECK(r3[k] == doctest::Approx(expect).epsilon(0.05));
    }
}

TEST_CASE("p equal to two gives the five point Laplacian") {
    std::mt19937_64 rng(4);
    const GridPtr g = unit_box(11);
    const ScalarField u = pxl::test::noise(g, rng);
    const EnergyFunctional F = make_energy(u, constant_p(g, 2.0));
    const ScalarField r = energy_gradient(F, u);
    for (int k : g->interior_nodes()) {
        const double lap = 4.0 * u[k] - u[g->neighbor(k, 1, 0)] - u[g->neighbor(k, -1, 0)] -
                           u[g->neighbor(k, 0, 1)] - u[g->neighbor(k, 0, -1)];
        // Triangle weights h^2/2 cancel the 1/h^2 of the difference quotients.
        CHECK(std::abs(r[k] - lap) <= 1e-12);
    }
}

TEST_CASE("energy gradient matches finite differences") {
    std::mt19937_64 rng(6);
    const GridPtr g = interval(0.0, 1.0, 33);
    const auto phi = ScalarField::from_function(g, [](const Vec2& x) { return x[0]; });
    const EnergyFunctional F = make_energy(phi, p_of_x(g, 2.0));
    const ScalarField u = perturbed(phi, rng, 0.2);
    const ScalarField grad = energy_gradient(F, u);
    for (int d = 0; d < 20; ++d) {
        const ScalarField dir = pxl::test::noise(g, rng, true);
        double analytic = 0.0;
        for (int k : g->interior_nodes()) analytic += grad[k] * dir[k];
        const double t = 1e-6;
        const double fd = (energy_value(F, u + t * dir).value - energy_value(F, u - t * dir).value) / (2.0 * t);
        CHECK(std::abs(fd - analytic) <= 1e-6 * (1.0 + std::abs(analytic)));
    }
}

TEST_CASE("affine data is returned unchanged when it is a solution") {
    const GridPtr g = unit_box(17);
    const auto slope = ScalarField::from_function(g, [](const Vec2& x) { return 0.8 * x[0]; });
    const auto unit = ScalarField::from_function(g, [](const Vec2& x) { return 0.6 * x[0] + 0.8 * x[1]; });
    for (double base : {2.0, 7.0, 300.0}) {
        for (const auto& [phi, p] : {std::pair{slope, constant_p(g, base)}, std::pair{unit, p_of_x(g, base)}}) {
            const Solution s = minimize(make_energy(phi, p));
            CHECK(s.converged);
            CHECK(s.iterations <= 1);
            INFO("base " << base << " floor " << s.roundoff_floor << " rel " << s.relative_residual);
            CHECK(s.relative_residual <= std::max(1e-12, 10.0 * s.roundoff_floor));
            CHECK(sup_distance(s.u, phi) <= 1e-12);
        }
    }
}

TEST_CASE("affine data with a varying exponent is not a solution") {
    const GridPtr g = interval(0.0, 1.0, 129);
    const auto phi = ScalarField::from_function(g, [](const Vec2& x) { return 0.8 * x[0]; });
    const Solution s = minimize(make_energy(phi, p_of_x(g, 2.0)));
    const Oracle1D o = solve_1d_quadrature_oracle([](double x) { return 2.0 + x; }, 0.0, 0.8, g);
    CHECK(s.converged);
    CHECK(sup_distance(s.u, o.u) <= 1e-9);
    CHECK(sup_distance(s.u, phi) > 1e-3);
}

TEST_CASE("harmonic polynomial is its own p=2 minimizer") {
    const GridPtr g = unit_box(33);
    const auto phi = ScalarField::from_function(g, [](const Vec2& x) { return x[0] * x[0] - x[1] * x[1]; });
    ScalarField flat = phi;
    for (int k : g->interior_nodes()) flat[k] = 0.0;
    const Solution s = minimize(make_energy(flat, constant_p(g, 2.0)), flat);
    CHECK(s.converged);
    CHECK(sup_distance(s.u, phi) <= 1e-8);
    CHECK(sup_distance(harmonic_extension(flat), phi) <= 1e-10);
}

TEST_CASE("one dimensional oracle") {
    const GridPtr g = interval(0.0, 1.0, 513);
    const auto phi = ScalarField::from_function(g, [](const Vec2& x) { return x[0]; });
    const Solution s = minimize(make_energy(phi, p_of_x(g, 2.0)));
    const Oracle1D o = solve_1d_quadrature_oracle([](double x) { return 2.0 + x; }, 0.0, 1.0, g);
    CHECK(s.converged);
    CHECK(sup_distance(s.u, o.u) <= 1e-6);
}

TEST_CASE("oracle closed forms") {
    const GridPtr g = interval(0.0, 1.0, 17);
    const Oracle1D flat = solve_1d_quadrature_oracle([](double x) { return 3.0 + x; }, 0.7, 0.7, g);
    CHECK(flat.flux == 0.0);
    for (int k = 0; k < 17; ++k) CHECK(flat.u[k] == doctest::Approx(0.7));
    for (double p : {2.0, 4.0}) {
        const Oracle1D lin = solve_1d_quadrature_oracle([p](double) { return p; }, 0.0, 1.0, g);
        CHECK(lin.flux == doctest::Approx(1.0).epsilon(1e-12));
        for (int k = 0; k < 17; ++k) CHECK(lin.u[k] == doctest::Approx(g->coord(k)[0]).epsilon(1e-12));
    }
}

TEST_CASE("independent starts reach the same minimizer") {
    std::mt19937_64 rng(8);
    const GridPtr g = unit_box(17);
    const auto phi = ScalarField::from_function(g, [](const Vec2& x) { return std::sin(2.0 * x[0]) * x[1]; });
    const EnergyFunctional F = make_energy(phi, p_of_x(g, 3.0));
    const Solution a = minimize(F, perturbed(phi, rng, 1.0));
    const Solution b = minimize(F, perturbed(phi, rng, 1.0));
    CHECK(a.converged);
    CHECK(b.converged);
    CHECK(sup_distance(a.u, b.u) <= 1e-9);
}

TEST_CASE("minimizer obeys the maximum principle and the energy bound") {
    const GridPtr g = unit_box(17);
    const auto phi = ScalarField::from_function(g, [](const Vec2& x) { return 0.5 * std::hypot(x[0] + 0.5, x[1] + 0.5); });
    double lo = INFINITY, hi = -INFINITY;
    for (int b : g->boundary_nodes()) {
        lo = std::min(lo, phi[b]);
        hi = std::max(hi, phi[b]);
    }
    for (double base : {2.0, 8.0, 64.0}) {
        const EnergyFunctional F = make_energy(phi, p_of_x(g, base));
        const Solution s = minimize(F);
        CHECK(s.converged);
        for (int k : g->interior_nodes()) {
            CHECK(s.u[k] >= lo - 1e-10);
            CHECK(s.u[k] <= hi + 1e-10);
        }
        CHECK(gradient_modular(0.5 * s.u, F.p).value <= g->measure() + 1e-9);
        CHECK(gradient_modular(0.5 * (phi - s.u), F.p).value <= g->measure() + 1e-9);
    }
}

TEST_CASE("descent method converges on a small problem") {
    const GridPtr g = unit_box(9);
    const auto phi = ScalarField::from_function(g, [](const Vec2& x) { return x[0] * x[1]; });
    MinimizeOptions o;
    o.method = MinimizeMethod::Descent;
    o.tol = 1e-8;
    o.max_iter = 20000;
    const EnergyFunctional F = make_energy(phi, constant_p(g, 3.0));
    const Solution d = minimize(F, o);
    const Solution n = minimize(F);
    CHECK(d.converged);
    CHECK(sup_distance(d.u, n.u) <= 1e-6);
}

TEST_CASE("huge exponents stay finite") {
    const GridPtr g = interval(0.0, 1.0, 65);
    const auto phi = ScalarField::from_function(g, [](const Vec2& x) { return 0.5 * x[0]; });
    std::vector<double> p;
    for (const Cell& c : g->cells()) p.push_back(std::min(1e6, std::exp(1.0 / c.center[0]) / (1.0 - c.center[0])));
    const Solution s = minimize(make_energy(phi, p, true));
    CHECK(s.converged);
    CHECK(std::isfinite(s.log_energy));
    CHECK(s.saturated_iterates == 0);
}

TEST_CASE("monotonicity gap") {
    std::mt19937_64 rng(10);
    const GridPtr g = unit_box(9);
    const auto phi = ScalarField::from_function(g, [](const Vec2& x) { return x[0]; });
    const ScalarField w = perturbed(phi, rng, 0.5);
    const MonotonicityGap z = monotonicity_gap(w, w, constant_p(g, 3.0));
    CHECK(z.lhs == 0.0);
    CHECK(z.rhs == 0.0);
    for (int t = 0; t < 10; ++t) {
        const ScalarField a = perturbed(phi, rng, 0.5);
        const ScalarField b = perturbed(phi, rng, 0.5);
        const MonotonicityGap two = monotonicity_gap(a, b, constant_p(g, 2.0));
        double direct = 0.0;
        for (const CellGradient& c : cell_gradients(a - b)) direct += c.weight * (c.g[0] * c.g[0] + c.g[1] * c.g[1]);
        CHECK(two.lhs == doctest::Approx(direct).epsilon(1e-12));
        CHECK(two.rhs == doctest::Approx(direct).epsilon(1e-12));
        const MonotonicityGap four = monotonicity_gap(a, b, constant_p(g, 4.0));
        CHECK(four.lhs > four.rhs);
        CHECK(four.holds);
    }
    CHECK_THROWS(monotonicity_gap(phi, ScalarField(g, 0.0), constant_p(g, 3.0)));
}

TEST_CASE("energy construction errors") {
    const GridPtr g = interval(0.0, 1.0, 9);
    const ScalarField phi(g, 0.0);
    CHECK_THROWS_AS(make_energy(phi, constant_p(g, 1.0)), std::invalid_argument);
    CHECK_THROWS_AS(make_energy(phi, std::vector<double>(3, 2.0)), std::invalid_argument);
    ScalarField bad = phi;
    bad[0] = NAN;
    CHECK_THROWS_AS(make_energy(bad, constant_p(g, 2.0)), std::invalid_argument);
    CHECK(minimize_method_from_string("descent") == MinimizeMethod::Descent);
}
