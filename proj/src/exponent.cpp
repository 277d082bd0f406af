#include "pxl/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pxl {

std::string to_string(ExponentFamily f) {
    switch (f) {
        case ExponentFamily::ConstantDoubling: return "constant_doubling";
        case ExponentFamily::Affine: return "affine";
        case ExponentFamily::Paper1D: return "paper_1d";
        case ExponentFamily::Bump2D: return "bump_2d";
    }
    return "unknown";
}

ExponentFamily exponent_family_from_string(const std::string& name) {
    if (name == "constant_doubling") return ExponentFamily::ConstantDoubling;
    if (name == "affine") return ExponentFamily::Affine;
    if (name == "paper_1d") return ExponentFamily::Paper1D;
    if (name == "bump_2d") return ExponentFamily::Bump2D;
    throw std::invalid_argument("unknown exponent family '" + name + "'");
}

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.69314718055994530942;
}  // namespace

ExponentSequence::ExponentSequence(ExponentFamily family, ExponentParams params, int j_first, int j_last,
                                   double cap)
    : family_(family), params_(params), j_first_(j_first), j_last_(j_last), cap_(cap) {
    if (!(cap > 1.0)) throw std::invalid_argument("exponent cap must exceed 1");
    if ((family == ExponentFamily::ConstantDoubling || family == ExponentFamily::Affine) && !(params.c > 0.0))
        throw std::invalid_argument("exponent family needs c > 0");
    if ((family == ExponentFamily::Paper1D || family == ExponentFamily::Bump2D) && j_first < 1 &&
        j_first <= j_last)
        throw std::invalid_argument(to_string(family) + " is defined for j >= 1");
}

double ExponentSequence::log_value(int j, const Vec2& x) const {
    switch (family_) {
        case ExponentFamily::ConstantDoubling:
            return std::log(params_.c) + j * kLn2;
        case ExponentFamily::Affine: {
            const double lin = 1.0 + params_.a * x[0];
            if (!(lin > 0.0)) return -kInf;
            return std::log(params_.c) + j * kLn2 + std::log(lin);
        }
        case ExponentFamily::Paper1D: {
            const double t = x[0];
            if (!(t > 0.0) || !(t < 1.0)) return kInf;
            return std::log(static_cast<double>(j)) + 1.0 / t - std::log1p(-t);
        }
        case ExponentFamily::Bump2D: {
            const double dx = x[0] - params_.center[0];
            const double dy = x[1] - params_.center[1];
            const double r2 = dx * dx + dy * dy;
            if (!(r2 > 0.0)) return kInf;
            return std::log(static_cast<double>(j)) + 1.0 / r2;
        }
    }
    return kInf;
}

double ExponentSequence::value(int j, const Vec2& x) const {
    const double lp = log_value(j, x);
    if (lp >= std::log(cap_)) return cap_;
    return std::exp(lp);
}

bool ExponentSequence::saturates(int j, const Vec2& x) const { return log_value(j, x) >= std::log(cap_); }

Vec2 ExponentSequence::xi(const Vec2& x) const {
    switch (family_) {
        case ExponentFamily::ConstantDoubling:
            return {0.0, 0.0};
        case ExponentFamily::Affine:
            return {params_.a / (1.0 + params_.a * x[0]), 0.0};
        case ExponentFamily::Paper1D: {
            const double t = x[0];
            return {-1.0 / (t * t) + 1.0 / (1.0 - t), 0.0};
        }
        case ExponentFamily::Bump2D: {
            const double dx = x[0] - params_.center[0];
            const double dy = x[1] - params_.center[1];
            const double r2 = dx * dx + dy * dy;
            const double s = -2.0 / (r2 * r2);
            return {s * dx, s * dy};
        }
    }
    return {0.0, 0.0};
}

// Derivative of log_value term by term. The j-dependent part of every
// builtin family is a multiplicative constant, so j drops out.
Vec2 ExponentSequence::log_gradient(int /*j*/, const Vec2& x) const {
    switch (family_) {
        case ExponentFamily::ConstantDoubling:
            return {0.0, 0.0};
        case ExponentFamily::Affine:
            return {params_.a / (1.0 + params_.a * x[0]), 0.0};
        case ExponentFamily::Paper1D: {
            const double t = x[0];
            const double d_inv = -1.0 / (t * t);       // d/dx (1/x)
            const double d_log = 1.0 / (1.0 - t);      // d/dx (-ln(1-x))
            return {d_inv + d_log, 0.0};
        }
        case ExponentFamily::Bump2D: {
            const double dx = x[0] - params_.center[0];
            const double dy = x[1] - params_.center[1];
            const double r2 = dx * dx + dy * dy;
            // d/dx (1/r^2) = -2 dx / r^4
            return {-2.0 * dx / (r2 * r2), -2.0 * dy / (r2 * r2)};
        }
    }
    return {0.0, 0.0};
}

Vec2 ExponentSequence::raw_gradient(int j, const Vec2& x) const {
    const Vec2 lg = log_gradient(j, x);
    const double p = std::exp(log_value(j, x));
    return {p * lg[0], p * lg[1]};
}

ExponentSequence make_exponent_family(ExponentFamily family, const ExponentParams& params, const Grid& grid,
                                      int j_first, int j_last, double cap) {
    ExponentSequence seq(family, params, j_first, j_last, cap);
    const GridSpec& s = grid.spec();
    switch (family) {
        case ExponentFamily::ConstantDoubling:
            break;
        case ExponentFamily::Affine:
            for (std::size_t k = 0; k < grid.num_nodes(); ++k) {
                const int node = static_cast<int>(k);
                if (grid.is_active(node) && !(1.0 + params.a * grid.coord(node)[0] > 0.0))
                    throw std::invalid_argument("affine exponent: 1 + a x must stay positive on the grid");
            }
            break;
        case ExponentFamily::Paper1D:
            if (grid.dim() != 1) throw std::invalid_argument("paper_1d needs a 1D grid");
            if (s.lower[0] < 0.0 || s.upper[0] > 1.0)
                throw std::invalid_argument("paper_1d needs the grid inside [0, 1]");
            break;
        case ExponentFamily::Bump2D: {
            if (grid.dim() != 2) throw std::invalid_argument("bump_2d needs a 2D grid");
            const Vec2& c = params.center;
            const bool inside_box =
                c[0] >= s.lower[0] && c[0] <= s.upper[0] && c[1] >= s.lower[1] && c[1] <= s.upper[1];
            const bool masked = s.mask && std::hypot(c[0] - s.mask->center[0], c[1] - s.mask->center[1]) <
                                              s.mask->radius;
            if (inside_box && !masked)
                throw std::invalid_argument("bump_2d singularity lies inside the domain; add a mask around it");
            break;
        }
    }
    return seq;
}

double eval_exponent(const ExponentSequence& seq, int j, const Grid& grid, int node) {
    return seq.value(j, grid.coord(node));
}

std::optional<Vec2> log_gradient(const ExponentSequence& seq, int j, const Vec2& x, GradientMode mode,
                                 double step) {
    if (mode == GradientMode::Analytic) return seq.log_gradient(j, x);
    if (!(step > 0.0)) throw std::invalid_argument("central differences need a positive step");
    const bool two_d = seq.family() == ExponentFamily::Bump2D;
    Vec2 g{0.0, 0.0};
    for (int a = 0; a < (two_d ? 2 : 1); ++a) {
        Vec2 xp = x, xm = x;
        xp[static_cast<std::size_t>(a)] += step;
        xm[static_cast<std::size_t>(a)] -= step;
        if (seq.saturates(j, xp) || seq.saturates(j, xm)) return std::nullopt;
        const double lp = seq.log_value(j, xp);
        const double lm = seq.log_value(j, xm);
        if (!std::isfinite(lp) || !std::isfinite(lm)) return std::nullopt;
        g[static_cast<std::size_t>(a)] = (lp - lm) / (2.0 * step);
    }
    return g;
}

CellExponents cell_exponents(const ExponentSequence& seq, int j, const Grid& grid) {
    CellExponents out;
    out.p.reserve(grid.cells().size());
    for (const Cell& c : grid.cells()) {
        out.any_saturated = out.any_saturated || seq.saturates(j, c.center);
        out.p.push_back(seq.value(j, c.center));
    }
    return out;
}

XiField make_xi_field(const ExponentSequence& seq, const GridPtr& grid) {
    XiField xi{ScalarField(grid, 0.0), ScalarField(grid, 0.0)};
    for (int node : grid->interior_nodes()) {
        const Vec2 v = seq.xi(grid->coord(node));
        xi.x[node] = v[0];
        xi.y[node] = v[1];
    }
    return xi;
}

AdmissibilityReport validate_admissibility(const ExponentSequence& seq, const Grid& grid, double alpha) {
    AdmissibilityReport rep;
    rep.alpha = alpha;
    rep.dim = grid.dim();
    rep.alpha_above_dim = alpha > grid.dim();
    bool all_exceed = true;
    double prev_min = -kInf;
    double prev_dev = kInf;
    for (int j = seq.j_first(); j <= seq.j_last(); ++j) {
        AdmissibilityRecord r;
        r.j = j;
        r.min_p = kInf;
        r.max_p = 0.0;
        for (int node : grid.interior_nodes()) {
            const Vec2 x = grid.coord(node);
            const double p = seq.value(j, x);
            r.min_p = std::min(r.min_p, p);
            r.max_p = std::max(r.max_p, p);
            r.saturated = r.saturated || seq.saturates(j, x);
            const Vec2 lg = seq.log_gradient(j, x);
            const Vec2 xi = seq.xi(x);
            r.log_gradient_deviation =
                std::max(r.log_gradient_deviation, std::hypot(lg[0] - xi[0], lg[1] - xi[1]));
            const Vec2 rg = seq.raw_gradient(j, x);
            const double raw_dev = std::hypot(rg[0] - xi[0], rg[1] - xi[1]);
            r.raw_gradient_deviation = std::max(r.raw_gradient_deviation, std::isfinite(raw_dev) ? raw_dev : kInf);
        }
        r.exceeds_alpha = r.min_p > alpha;
        all_exceed = all_exceed && r.exceeds_alpha;
        if (r.min_p < prev_min) rep.min_p_nondecreasing = false;
        if (r.log_gradient_deviation > prev_dev + 1e-12) rep.log_gradient_converges = false;
        prev_min = r.min_p;
        prev_dev = r.log_gradient_deviation;
        rep.records.push_back(r);
    }
    rep.admissible = rep.alpha_above_dim && all_exceed && rep.min_p_nondecreasing && rep.log_gradient_converges;
    return rep;
}

}  // namespace pxl
