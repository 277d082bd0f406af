#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pxl/grid.hpp"
#include "pxl/modular.hpp"

namespace pxl {

/// Dirichlet energy of the p(x)-Laplacian on a grid. `p` holds one exponent
/// per cell; `phi` is the boundary datum, defined on every active node.
struct EnergyFunctional {
    GridPtr grid;
    std::vector<double> p;
    ScalarField phi;
    bool p_saturated = false;
};

/// Validates p > 1 per cell and phi finite on active nodes.
EnergyFunctional make_energy(ScalarField phi, std::vector<double> cell_p, bool p_saturated = false);

/// sum_c w_c |grad u|^{p_c} / p_c for a field u with u = phi on the boundary.
ModularValue energy_value(const EnergyFunctional& F, const ScalarField& u);

/// The same energy written over offsets v in the zero-trace space:
/// sum_c w_c |grad (v - phi)|^{p_c} / p_c. offset_energy(F, phi - u) equals
/// energy_value(F, u).
ModularValue offset_energy(const EnergyFunctional& F, const ScalarField& v);

/// First variation of energy_value at u on interior nodes (the discrete weak
/// residual); flux w |g|^{p-2} g, zero on cells with g = 0. Entries are capped
/// at +-kModularCap.
ScalarField energy_gradient(const EnergyFunctional& F, const ScalarField& u);

/// Solution of the p = 2 problem with boundary values phi.
ScalarField harmonic_extension(const ScalarField& phi);

enum class MinimizeMethod { Newton, Descent };

std::string to_string(MinimizeMethod m);
MinimizeMethod minimize_method_from_string(const std::string& name);

struct MinimizeOptions {
    /// Bound on the scale-free residual (see Solution::relative_residual).
    double tol = 1e-10;
    /// Total iteration budget across all continuation stages.
    int max_iter = 2000;
    MinimizeMethod method = MinimizeMethod::Newton;
    /// Raise the exponent cap stage by stage (doubling) up to the target.
    bool continuation = true;
    /// Residual target for intermediate continuation stages.
    double stage_tol = 1e-6;
};

struct Solution {
    ScalarField u;
    double energy = 0.0;
    double log_energy = -INFINITY;
    bool energy_saturated = false;
    /// sup over interior nodes of |energy_gradient|.
    double residual_sup = 0.0;
    /// residual_sup divided by the largest single-cell force term.
    double relative_residual = 0.0;
    /// Residual level explained by rounding in the current iterate.
    double roundoff_floor = 0.0;
    int iterations = 0;
    int stages = 0;
    /// Accepted iterates whose energy exceeded the modular cap.
    int saturated_iterates = 0;
    bool converged = false;
};

/// Minimizes energy_value over fields equal to phi on the boundary, starting
/// from `init` (boundary values are reset to phi). Converged means
/// relative_residual <= max(tol, 10 * roundoff_floor). Throws
/// std::runtime_error if a NaN appears.
Solution minimize(const EnergyFunctional& F, const ScalarField& init, const MinimizeOptions& opts = {});
/// Same, starting from the harmonic extension of phi.
Solution minimize(const EnergyFunctional& F, const MinimizeOptions& opts = {});

struct Oracle1D {
    ScalarField u;
    /// The constant flux |u'|^{p-2} u'.
    double flux = 0.0;
};

/// Exact discrete solution in 1D: the flux is constant on edges, so the slope
/// on an edge is sgn(C)|C|^{1/(p(mid)-1)}; C is found by bisection so that
/// the slopes integrate from a to b. `p` is evaluated at edge midpoints.
Oracle1D solve_1d_quadrature_oracle(const std::function<double(double)>& p, double a, double b,
                                    const GridPtr& grid);

struct MonotonicityGap {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// lhs = sum w (|g1|^{p-2} g1 - |g2|^{p-2} g2).(g1 - g2),
/// rhs = sum w 2^{2-p} |g1 - g2|^p. Throws if boundary values differ.
MonotonicityGap monotonicity_gap(const ScalarField& w1, const ScalarField& w2, std::span<const double> cell_p);

}  // namespace pxl
