#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "pxl/grid.hpp"

namespace pxl {

/// Largest natural-log argument evaluated before a modular saturates.
inline constexpr double kLogModularCap = 700.0;
inline const double kModularCap = std::exp(kLogModularCap);

/// Modular value with saturating arithmetic: a saturated value always equals
/// kModularCap, never a silently wrong finite number.
struct ModularValue {
    double value = 0.0;
    bool saturated = false;
    /// Natural log of the unsaturated total (-inf for 0).
    double log_value = -INFINITY;

    static ModularValue from_log(double log_total);
};

/// Quadrature samples: one magnitude, exponent and weight per cell.
struct ModularSamples {
    std::span<const double> magnitude;
    std::span<const double> p;
    std::span<const double> weight;
};

/// sum_c w_c |f_c|^{p_c} (/ p_c when weighted), evaluated in the log domain.
ModularValue modular_rho(const ModularSamples& s, bool weighted);

/// Cell-averaged node values of u (midpoint quadrature).
std::vector<double> cell_average_magnitudes(const ScalarField& u);
/// Euclidean norms of the cell gradients of u.
std::vector<double> cell_gradient_magnitudes(const ScalarField& u);
std::vector<double> cell_weights(const Grid& grid);

/// rho_p(u) on cell averages of u.
ModularValue modular_rho(const ScalarField& u, std::span<const double> cell_p, bool weighted = true);
/// rho_p(|grad u|).
ModularValue gradient_modular(const ScalarField& u, std::span<const double> cell_p, bool weighted = true);
/// rho_{1,p}(u) = rho_p(u) + rho_p(|grad u|), weighted by 1/p.
ModularValue sobolev_modular(const ScalarField& u, std::span<const double> cell_p);

inline constexpr double kDefaultLuxemburgTol = 1e-10;

/// Luxemburg norm inf{lambda > 0 : rho(f / lambda) <= 1} by bisection on
/// ln lambda. Returns 0 for f == 0. Throws std::runtime_error if no bracket
/// is found within lambda in [2^-1024, 2^1024].
double luxemburg_norm(const ModularSamples& s, bool weighted, double tol = kDefaultLuxemburgTol);
double luxemburg_norm(const ScalarField& u, std::span<const double> cell_p, bool weighted,
                      double tol = kDefaultLuxemburgTol);
double gradient_luxemburg_norm(const ScalarField& u, std::span<const double> cell_p, bool weighted,
                               double tol = kDefaultLuxemburgTol);

/// Outcome of the modular midpoint (uniform convexity) inequality with
/// rho(w) = rho_p(|grad w|).
struct UcRecord {
    bool premise_holds = false;
    bool conclusion_holds = false;
    /// 1 - rho((u+v)/2) / ((rho(u)+rho(v))/2); only set when the premise holds.
    std::optional<double> delta_witness;
    double rho_half_diff = 0.0;
    double rho_half_sum = 0.0;
    double rho_mean = 0.0;
};

UcRecord uc_inequality_check(const ScalarField& u, const ScalarField& v, std::span<const double> cell_p,
                             double epsilon, double delta_floor = 1e-4, bool weighted = true);

struct EmbeddingRecord {
    double norm_p = 0.0;
    double norm_q = 0.0;
    double ratio = 0.0;
    double bound = 0.0;
    bool within_bound = false;
};

/// ||u||_p / ||u||_q for p <= q cellwise (unweighted Luxemburg norms),
/// compared against 1 + |Omega|. Throws std::invalid_argument if p > q somewhere.
EmbeddingRecord embedding_check(const ScalarField& u, std::span<const double> cell_p,
                                std::span<const double> cell_q);

/// Both Luxemburg norms of the same samples, for the equivalence
/// ||f||_weighted <= ||f||_unweighted <= e^{1/e} ||f||_weighted.
struct NormPair {
    double weighted = 0.0;
    double unweighted = 0.0;
};

NormPair norm_equivalence(const ModularSamples& s, double tol = kDefaultLuxemburgTol);

}  // namespace pxl
