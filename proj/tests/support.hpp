#pragma once

#include <random>

#include "pxl/grid.hpp"

namespace pxl::test {

inline GridSpec lattice(GridKind kind, Vec2 lower, Vec2 upper, int n) {
    GridSpec s;
    s.kind = kind;
    s.lower = lower;
    s.upper = upper;
    s.n = n;
    return s;
}

inline GridPtr interval(double a, double b, int n) { return build_grid(lattice(GridKind::Interval1D, {a, 0.0}, {b, 0.0}, n)); }

inline GridPtr unit_box(int n) { return build_grid(lattice(GridKind::Box2D, {0.0, 0.0}, {1.0, 1.0}, n)); }

// Nodal white noise; boundary values zeroed on request.
inline ScalarField noise(const GridPtr& g, std::mt19937_64& rng, bool zero_boundary = false, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    ScalarField f(g);
    for (std::size_t k = 0; k < g->num_nodes(); ++k)
        if (g->is_active(static_cast<int>(k))) f[static_cast<int>(k)] = u(rng);
    if (zero_boundary)
        for (int b : g->boundary_nodes()) f[b] = 0.0;
    return f;
}

}  // namespace pxl::test
