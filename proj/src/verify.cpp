#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "pxl/harness.hpp"
#include "pxl/modular.hpp"

namespace pxl {

namespace {

std::string sci(double x) {
    std::ostringstream o;
    o.precision(3);
    o << std::scientific << x;
    return o.str();
}

GridSpec lattice(GridKind kind, Vec2 lower, Vec2 upper, int n) {
    GridSpec s;
    s.kind = kind;
    s.lower = lower;
    s.upper = upper;
    s.n = n;
    return s;
}

// Smooth random field: a few low sine/cosine modes with random amplitudes.
ScalarField random_smooth(const GridPtr& grid, std::mt19937_64& rng, bool zero_boundary) {
    std::normal_distribution<double> amp(0.0, 1.0);
    std::array<double, 6> c{};
    for (double& a : c) a = amp(rng);
    const Vec2 lo = grid->spec().lower;
    const Vec2 hi = grid->spec().upper;
    ScalarField u = ScalarField::from_function(grid, [&](const Vec2& x) {
        const double s = (x[0] - lo[0]) / (hi[0] - lo[0]);
        const double t = grid->dim() == 1 ? 0.0 : (x[1] - lo[1]) / (hi[1] - lo[1]);
        return c[0] * std::sin(std::numbers::pi * s) + c[1] * std::cos(2.0 * s + 3.0 * t) +
               c[2] * s * t + c[3] * std::sin(3.0 * t + 1.0) + c[4] * s * s + c[5];
    });
    if (zero_boundary)
        for (int b : grid->boundary_nodes()) u[b] = 0.0;
    return u;
}

CheckResult check_adjointness(std::mt19937_64& rng) {
    const GridPtr g = build_grid(lattice(GridKind::Box2D, {0.0, 0.0}, {1.0, 1.0}, 17));
    std::normal_distribution<double> n01(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        const ScalarField u = random_smooth(g, rng, true);
        std::vector<Vec2> flux(g->cells().size());
        for (Vec2& f : flux) f = {n01(rng), n01(rng)};
        const auto grads = cell_gradients(u);
        double lhs = 0.0;
        double scale = 0.0;
        for (std::size_t c = 0; c < grads.size(); ++c) {
            const double t = grads[c].g[0] * flux[c][0] + grads[c].g[1] * flux[c][1];
            lhs += t;
            scale += std::abs(t);
        }
        const ScalarField d = energy_divergence(g, flux);
        double rhs = 0.0;
        for (int k : g->interior_nodes()) rhs += u[k] * d[k];
        worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return {"adjointness", worst <= 1e-12, "max relative mismatch " + sci(worst)};
}

CheckResult check_gradient(std::mt19937_64& rng) {
    const GridPtr g = build_grid(lattice(GridKind::Box2D, {0.0, 0.0}, {1.0, 1.0}, 9));
    std::vector<double> p;
    for (const Cell& c : g->cells()) p.push_back(3.0 + c.center[0]);
    const ScalarField phi = random_smooth(g, rng, false);
    const EnergyFunctional F = make_energy(phi, p);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        ScalarField u = random_smooth(g, rng, false);
        for (int b : g->boundary_nodes()) u[b] = phi[b];
        const ScalarField dir = random_smooth(g, rng, true);
        const ScalarField grad = energy_gradient(F, u);
        double analytic = 0.0;
        for (int k : g->interior_nodes()) analytic += grad[k] * dir[k];
        const double eps = 1e-5;
        const double fd = (energy_value(F, u + eps * dir).value - energy_value(F, u - eps * dir).value) / (2.0 * eps);
        worst = std::max(worst, std::abs(fd - analytic) / std::max(std::abs(analytic), 1e-300));
    }
    return {"gradient_consistency", worst <= 1e-6, "max relative error " + sci(worst)};
}

CheckResult check_oracle_1d() {
    const GridPtr g = build_grid(lattice(GridKind::Interval1D, {0.0, 0.0}, {1.0, 0.0}, 513));
    const auto pfun = [](double x) { return 2.0 + x; };
    std::vector<double> p;
    for (const Cell& c : g->cells()) p.push_back(pfun(c.center[0]));
    const ScalarField phi = ScalarField::from_function(g, [](const Vec2& x) { return x[0]; });
    const Solution s = minimize(make_energy(phi, p));
    const Oracle1D o = solve_1d_quadrature_oracle(pfun, 0.0, 1.0, g);
    const double d = sup_distance(s.u, o.u);
    return {"oracle_1d", s.converged && d <= 1e-6, "sup difference " + sci(d)};
}

CheckResult check_uc(std::mt19937_64& rng) {
    const GridPtr g = build_grid(lattice(GridKind::Box2D, {0.0, 0.0}, {1.0, 1.0}, 17));
    const std::vector<double> p(g->cells().size(), 2.0);
    int premises = 0;
    int violations = 0;
    double least = INFINITY;
    for (int trial = 0; trial < 200; ++trial) {
        const ScalarField u = random_smooth(g, rng, false);
        const ScalarField v = random_smooth(g, rng, false);
        const UcRecord r = uc_inequality_check(u, v, p, 0.1);
        if (!r.premise_holds) continue;
        ++premises;
        least = std::min(least, *r.delta_witness);
        if (!r.conclusion_holds) ++violations;
    }
    return {"uniform_convexity", violations == 0,
            std::to_string(premises) + " premises, " + std::to_string(violations) + " violations, least delta " +
                sci(least)};
}

CheckResult check_aronsson() {
    const GridPtr g = build_grid(lattice(GridKind::Box2D, {1.0, 1.0}, {2.0, 2.0}, 33));
    const ScalarField exact = exact_solution("aronsson", {}, g);
    double res = 0.0;
    const XiField xi = zero_xi(g);
    for (int k : g->interior_nodes()) res = std::max(res, std::abs(residual_infinity(exact, xi, k)));
    InfinityProblem prob;
    prob.grid = g;
    prob.phi = exact;
    prob.xi = xi;
    const InfinitySolution s = solve_infinity(prob);
    const double err = sup_distance(s.u, exact);
    return {"aronsson", s.converged && err <= 0.02 && res <= 0.05,
            "exact residual " + sci(res) + ", solver error " + sci(err)};
}

}  // namespace

std::vector<CheckResult> run_verify_suite(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<CheckResult> out;
    out.push_back(check_adjointness(rng));
    out.push_back(check_gradient(rng));
    out.push_back(check_oracle_1d());
    out.push_back(check_uc(rng));
    out.push_back(check_aronsson());
    return out;
}

}  // namespace pxl
