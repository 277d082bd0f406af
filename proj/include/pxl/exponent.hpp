#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pxl/grid.hpp"

namespace pxl {

enum class ExponentFamily { ConstantDoubling, Affine, Paper1D, Bump2D };

std::string to_string(ExponentFamily f);
ExponentFamily exponent_family_from_string(const std::string& name);

/// Family parameters. Which fields matter depends on the family:
///  - ConstantDoubling: p_j = c 2^j
///  - Affine:           p_j(x) = c 2^j (1 + a x)        (x = first coordinate)
///  - Paper1D:          p_j(x) = j e^{1/x} / (1 - x)    (interval (0,1))
///  - Bump2D:           p_j(x) = j exp(1 / |x - center|^2)
struct ExponentParams {
    double c = 4.0;
    double a = 0.0;
    Vec2 center{0.5, 0.5};
};

inline constexpr double kDefaultExponentCap = 1e6;

/// A family j -> p_j together with its limit drift field
/// xi = lim grad ln p_j. Descriptor only; evaluation is pure.
class ExponentSequence {
public:
    ExponentSequence(ExponentFamily family, ExponentParams params, int j_first, int j_last,
                     double cap = kDefaultExponentCap);

    ExponentFamily family() const { return family_; }
    const ExponentParams& params() const { return params_; }
    int j_first() const { return j_first_; }
    int j_last() const { return j_last_; }
    double cap() const { return cap_; }

    /// ln p_j(x) without the cap; +inf at singular points.
    double log_value(int j, const Vec2& x) const;
    /// p_j(x), saturated at cap().
    double value(int j, const Vec2& x) const;
    bool saturates(int j, const Vec2& x) const;

    /// Closed-form grad ln p_j(x).
    Vec2 log_gradient(int j, const Vec2& x) const;
    /// Closed-form xi(x).
    Vec2 xi(const Vec2& x) const;
    /// Closed-form grad p_j(x) (the literal reading of the drift hypothesis).
    Vec2 raw_gradient(int j, const Vec2& x) const;

private:
    ExponentFamily family_;
    ExponentParams params_;
    int j_first_;
    int j_last_;
    double cap_;
};

/// Builds a family and checks it against the grid: paper_1d needs a 1D grid
/// inside (0,1); bump_2d needs its singular point masked out or away from
/// the interior nodes; affine needs 1 + a x > 0.
ExponentSequence make_exponent_family(ExponentFamily family, const ExponentParams& params,
                                      const Grid& grid, int j_first, int j_last,
                                      double cap = kDefaultExponentCap);

double eval_exponent(const ExponentSequence& seq, int j, const Grid& grid, int node);

enum class GradientMode { Analytic, CentralDifference };

/// grad ln p_j at a point. Central differences return nullopt when a
/// stencil evaluation saturates.
std::optional<Vec2> log_gradient(const ExponentSequence& seq, int j, const Vec2& x, GradientMode mode,
                                 double step = 0.0);

/// Cell-center exponents for the energy quadrature.
struct CellExponents {
    std::vector<double> p;
    bool any_saturated = false;
};

CellExponents cell_exponents(const ExponentSequence& seq, int j, const Grid& grid);

struct XiField {
    ScalarField x;
    ScalarField y;  // identically zero in 1D
};

XiField make_xi_field(const ExponentSequence& seq, const GridPtr& grid);

struct AdmissibilityRecord {
    int j = 0;
    double min_p = 0.0;
    double max_p = 0.0;
    bool saturated = false;
    bool exceeds_alpha = false;
    /// sup_x |grad ln p_j - xi| over interior nodes.
    double log_gradient_deviation = 0.0;
    /// sup_x |grad p_j - xi|, the literal hypothesis; reported, not enforced.
    double raw_gradient_deviation = 0.0;
};

struct AdmissibilityReport {
    double alpha = 0.0;
    int dim = 1;
    std::vector<AdmissibilityRecord> records;
    bool alpha_above_dim = false;
    bool min_p_nondecreasing = true;
    bool log_gradient_converges = true;
    bool admissible = false;
};

AdmissibilityReport validate_admissibility(const ExponentSequence& seq, const Grid& grid, double alpha);

}  // namespace pxl
