#pragma once

#include <array>
#include <string>

#include "pxl/exponent.hpp"
#include "pxl/grid.hpp"

namespace pxl {

/// Dirichlet problem for -Δ∞u - |∇u|² ln|∇u| <ξ, ∇u> = 0.
struct InfinityProblem {
    GridPtr grid;
    ScalarField phi;
    XiField xi;
    double eps_grad = 1e-10;
    /// Sweeps stop once the largest update is below tol * h².
    double tol = 1e-8;
    int max_sweeps = 200000;
    /// Stencil vectors v are primitive lattice vectors with |v|_inf <= radius.
    int stencil_radius = 1;
    /// Policy-iteration rounds tried before plain sweeps.
    int max_policy_iterations = 60;
    /// Polish the monotone solution with Newton on the central-difference
    /// form of the normalized equation; kept only if it converges and stays
    /// within the boundary range. Also tried when the sweeps stall.
    bool refine = true;
};

/// Zero drift field on a grid.
XiField zero_xi(const GridPtr& grid);

struct InfinitySolution {
    ScalarField u;
    /// max |residual_infinity| over interior nodes.
    double residual_sup = 0.0;
    int sweeps = 0;
    int policy_iterations = 0;
    /// Largest update of the final sweep.
    double last_change = 0.0;
    /// Updates that left the convex hull of their stencil values.
    int contract_violations = 0;
    /// Sweeps reached tolerance, or the Newton polish was accepted.
    bool converged = false;
    bool refined = false;
};

/// Central-difference residual at an interior node. Throws
/// std::invalid_argument if the 3-point (1D) / 9-point (2D) stencil is not
/// available.
double residual_infinity(const ScalarField& u, const XiField& xi, int node, double eps_grad = 1e-10);

using Mat2 = std::array<std::array<double, 2>, 2>;

/// -|∇φ|^{p-2}Δφ - (p-2)|∇φ|^{p-4}Δ∞φ - |∇φ|^{p-2} ln|∇φ| <∇φ, ∇p>.
/// Returns 0 when |∇φ| <= eps_grad. Throws std::invalid_argument if p <= 2.
double expand_plaplacian(const Vec2& gradient, const Mat2& hessian, double p, const Vec2& grad_p,
                         double eps_grad = 1e-10);

/// expand_plaplacian divided by (p-2)|∇φ|^{p-4}, evaluated without forming
/// the large powers.
double normalized_expand_plaplacian(const Vec2& gradient, const Mat2& hessian, double p, const Vec2& grad_p,
                                    double eps_grad = 1e-10);

/// Monotone wide-stencil solve: each interior value is the convex
/// combination of the stencil pair (k, l) maximizing (u_k - u_l)/(d_k + d_l)
/// and of upwind drift neighbours.
InfinitySolution solve_infinity(const InfinityProblem& problem);

struct ExactParams {
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    Vec2 vertex{-1.0, 0.0};
    double scale = 1.0;
};

/// Nodal oracle fields: "cone" scale*|x - vertex|, "aronsson"
/// scale*(x^{4/3} - y^{4/3}), "affine" a x + b y + c.
ScalarField exact_solution(const std::string& name, const ExactParams& params, const GridPtr& grid);

}  // namespace pxl
