#include "pxl/modular.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pxl {

ModularValue ModularValue::from_log(double log_total) {
    ModularValue m;
    m.log_value = log_total;
    if (log_total > kLogModularCap) {
        m.saturated = true;
        m.value = kModularCap;
    } else {
        m.value = std::exp(log_total);
    }
    return m;
}

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log sum_c w_c |f_c / lambda|^p_c (/p_c), with shift = ln lambda.
double log_modular(const ModularSamples& s, bool weighted, double shift) {
    const std::size_t n = s.magnitude.size();
    double top = kNegInf;
    // Two passes keep this allocation-free: first the max, then the sum.
    const auto term = [&](std::size_t c) {
        const double f = std::abs(s.magnitude[c]);
        if (f == 0.0 || s.weight[c] <= 0.0) return kNegInf;
        const double p = s.p[c];
        double t = std::log(s.weight[c]) + p * (std::log(f) - shift);
        if (weighted) t -= std::log(p);
        return t;
    };
    for (std::size_t c = 0; c < n; ++c) top = std::max(top, term(c));
    if (top == kNegInf) return kNegInf;
    double sum = 0.0;
    for (std::size_t c = 0; c < n; ++c) sum += std::exp(term(c) - top);
    return top + std::log(sum);
}

void check_sizes(const ModularSamples& s) {
    if (s.p.size() != s.magnitude.size() || s.weight.size() != s.magnitude.size())
        throw std::invalid_argument("modular samples have mismatched lengths");
}

}  // namespace

ModularValue modular_rho(const ModularSamples& s, bool weighted) {
    check_sizes(s);
    return ModularValue::from_log(log_modular(s, weighted, 0.0));
}

std::vector<double> cell_weights(const Grid& grid) {
    std::vector<double> w;
    w.reserve(grid.cells().size());
    for (const Cell& c : grid.cells()) w.push_back(c.weight);
    return w;
}

std::vector<double> cell_average_magnitudes(const ScalarField& u) {
    const Grid& grid = *u.grid();
    std::vector<double> out;
    out.reserve(grid.cells().size());
    for (const Cell& c : grid.cells()) {
        double s = 0.0;
        for (int k = 0; k < c.count; ++k) s += u[c.nodes[static_cast<std::size_t>(k)]];
        out.push_back(std::abs(s / c.count));
    }
    return out;
}

std::vector<double> cell_gradient_magnitudes(const ScalarField& u) {
    const Grid& grid = *u.grid();
    std::vector<double> out;
    out.reserve(grid.cells().size());
    for (const Cell& c : grid.cells()) {
        const Vec2 g = cell_gradient(grid, c, u.values());
        out.push_back(std::hypot(g[0], g[1]));
    }
    return out;
}

ModularValue modular_rho(const ScalarField& u, std::span<const double> cell_p, bool weighted) {
    const auto mag = cell_average_magnitudes(u);
    const auto w = cell_weights(*u.grid());
    return modular_rho({mag, cell_p, w}, weighted);
}

ModularValue gradient_modular(const ScalarField& u, std::span<const double> cell_p, bool weighted) {
    const auto mag = cell_gradient_magnitudes(u);
    const auto w = cell_weights(*u.grid());
    return modular_rho({mag, cell_p, w}, weighted);
}

ModularValue sobolev_modular(const ScalarField& u, std::span<const double> cell_p) {
    const ModularValue a = modular_rho(u, cell_p, true);
    const ModularValue b = gradient_modular(u, cell_p, true);
    if (a.log_value == kNegInf) return b;
    if (b.log_value == kNegInf) return a;
    const double hi = std::max(a.log_value, b.log_value);
    const double lo = std::min(a.log_value, b.log_value);
    return ModularValue::from_log(hi + std::log1p(std::exp(lo - hi)));
}

double luxemburg_norm(const ModularSamples& s, bool weighted, double tol) {
    check_sizes(s);
    if (!(tol > 0.0)) throw std::invalid_argument("luxemburg_norm: tol must be positive");
    if (log_modular(s, weighted, 0.0) == kNegInf) return 0.0;

    // g(t) = ln rho(f / e^t) is strictly decreasing; find its root.
    constexpr double kLn2 = 0.69314718055994530942;
    constexpr double kLimit = 1024.0 * kLn2;
    const auto g = [&](double t) { return log_modular(s, weighted, t); };
    double lo = 0.0, hi = 0.0;
    if (g(0.0) > 0.0) {
        while (g(hi) > 0.0) {
            lo = hi;
            hi += kLn2;
            if (hi > kLimit) throw std::runtime_error("luxemburg_norm: no bracket (field too large)");
        }
    } else {
        while (g(lo) <= 0.0) {
            hi = lo;
            lo -= kLn2;
            if (lo < -kLimit) throw std::runtime_error("luxemburg_norm: no bracket (field too small)");
        }
    }
    // Invariant: g(lo) > 0 >= g(hi).
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (std::abs(std::expm1(gm)) <= tol) return std::exp(mid);
        if (gm > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(hi);
}

double luxemburg_norm(const ScalarField& u, std::span<const double> cell_p, bool weighted, double tol) {
    const auto mag = cell_average_magnitudes(u);
    const auto w = cell_weights(*u.grid());
    return luxemburg_norm({mag, cell_p, w}, weighted, tol);
}

double gradient_luxemburg_norm(const ScalarField& u, std::span<const double> cell_p, bool weighted,
                               double tol) {
    const auto mag = cell_gradient_magnitudes(u);
    const auto w = cell_weights(*u.grid());
    return luxemburg_norm({mag, cell_p, w}, weighted, tol);
}

UcRecord uc_inequality_check(const ScalarField& u, const ScalarField& v, std::span<const double> cell_p,
                             double epsilon, double delta_floor, bool weighted) {
    UcRecord r;
    const double ru = gradient_modular(u, cell_p, weighted).value;
    const double rv = gradient_modular(v, cell_p, weighted).value;
    r.rho_half_diff = gradient_modular(0.5 * (u - v), cell_p, weighted).value;
    r.rho_half_sum = gradient_modular(0.5 * (u + v), cell_p, weighted).value;
    r.rho_mean = 0.5 * (ru + rv);
    if (r.rho_mean == 0.0) {
        r.conclusion_holds = true;
        return r;
    }
    r.premise_holds = r.rho_half_diff >= epsilon * r.rho_mean;
    if (!r.premise_holds) {
        r.conclusion_holds = true;
        return r;
    }
    r.delta_witness = 1.0 - r.rho_half_sum / r.rho_mean;
    r.conclusion_holds = *r.delta_witness >= delta_floor;
    return r;
}

EmbeddingRecord embedding_check(const ScalarField& u, std::span<const double> cell_p,
                                std::span<const double> cell_q) {
    if (cell_p.size() != cell_q.size()) throw std::invalid_argument("embedding_check: exponent sizes differ");
    for (std::size_t c = 0; c < cell_p.size(); ++c)
        if (cell_p[c] > cell_q[c]) throw std::invalid_argument("embedding_check: requires p <= q pointwise");
    EmbeddingRecord r;
    r.norm_p = luxemburg_norm(u, cell_p, false);
    r.norm_q = luxemburg_norm(u, cell_q, false);
    r.ratio = r.norm_q > 0.0 ? r.norm_p / r.norm_q : 0.0;
    r.bound = 1.0 + u.grid()->measure();
    r.within_bound = r.ratio <= r.bound;
    return r;
}

NormPair norm_equivalence(const ModularSamples& s, double tol) {
    return {luxemburg_norm(s, true, tol), luxemburg_norm(s, false, tol)};
}

}  // namespace pxl
