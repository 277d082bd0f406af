#include "pxl/plaplace.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pxl {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

void require_boundary_match(const ScalarField& u, const ScalarField& phi) {
    if (!same_grid(u.grid(), phi.grid())) throw std::invalid_argument("field and datum live on different grids");
    for (int node : u.grid()->boundary_nodes())
        if (u[node] != phi[node]) throw std::invalid_argument("field does not match the datum on the boundary");
}

// Per-cell quantities shared by the gradient, the Hessian and the residual.
struct CellState {
    Vec2 g{0.0, 0.0};
    double norm = 0.0;
    // ln of the flux coefficient w |g|^{p-2}; -inf when it vanishes.
    double logk = kNegInf;
};

std::vector<CellState> cell_states(const Grid& grid, std::span<const double> p, std::span<const double> u) {
    std::vector<CellState> out(grid.cells().size());
    for (std::size_t c = 0; c < out.size(); ++c) {
        const Cell& cell = grid.cells()[c];
        CellState& s = out[c];
        s.g = cell_gradient(grid, cell, u);
        s.norm = std::hypot(s.g[0], s.g[1]);
        if (s.norm > 0.0)
            s.logk = std::log(cell.weight) + (p[c] - 2.0) * std::log(s.norm);
        else if (p[c] == 2.0)
            s.logk = std::log(cell.weight);
    }
    return out;
}

double log_energy(const Grid& grid, std::span<const double> p, std::span<const double> u) {
    std::vector<double> mag(grid.cells().size());
    for (std::size_t c = 0; c < mag.size(); ++c) {
        const Vec2 g = cell_gradient(grid, grid.cells()[c], u);
        mag[c] = std::hypot(g[0], g[1]);
    }
    const auto w = cell_weights(grid);
    return modular_rho({mag, p, w}, true).log_value;
}

// Node-local residual diagnostics. Row i is expressed in units of the largest
// flux coefficient among the cells touching node i, so regions whose fluxes
// differ by hundreds of orders of magnitude are resolved independently.
struct Residual {
    Vec grad;                  // row-scaled energy gradient on interior dofs
    std::vector<double> shift;  // ln of each row's unit
    std::vector<double> rel;    // |grad_i| / largest force on node i
    std::vector<double> floor;  // rounding level of rel_i
    double log_sup = kNegInf;   // ln sup |unscaled gradient|
    double relative = 0.0;
    double roundoff = 0.0;

    double excess(double tol) const {
        double e = 0.0;
        for (std::size_t i = 0; i < rel.size(); ++i) e = std::max(e, rel[i] / std::max(tol, 10.0 * floor[i]));
        return e;
    }
    bool converged(double tol) const { return excess(tol) <= 1.0; }
    // Merit for steps the energy cannot resolve: every node above its
    // tolerance counts, on a log scale.
    double merit(double tol) const {
        double m = 0.0;
        for (std::size_t i = 0; i < rel.size(); ++i) m += std::log1p(rel[i] / std::max(tol, 10.0 * floor[i]));
        return m;
    }
};

std::vector<double> row_shifts(const Grid& grid, const std::vector<CellState>& st) {
    std::vector<double> out(grid.interior_nodes().size(), kNegInf);
    for (std::size_t c = 0; c < st.size(); ++c) {
        if (st[c].logk == kNegInf) continue;
        const CellStencil s = cell_stencil(grid, grid.cells()[c]);
        for (int k = 0; k < s.count; ++k) {
            const int dof = grid.dof(s.nodes[static_cast<std::size_t>(k)]);
            if (dof >= 0) out[static_cast<std::size_t>(dof)] = std::max(out[static_cast<std::size_t>(dof)], st[c].logk);
        }
    }
    return out;
}

Residual residual(const Grid& grid, std::span<const double> p, std::span<const double> u) {
    const auto st = cell_states(grid, p, u);
    const std::size_t n = grid.interior_nodes().size();
    Residual r;
    r.grad = Vec::Zero(static_cast<Eigen::Index>(n));
    r.shift = row_shifts(grid, st);
    r.rel.assign(n, 0.0);
    r.floor.assign(n, 0.0);
    double umax = 0.0;
    for (std::size_t k = 0; k < grid.num_nodes(); ++k)
        if (grid.is_active(static_cast<int>(k))) umax = std::max(umax, std::abs(u[k]));
    const double hmin = grid.h_min();
    // A relative perturbation eps in the node values moves each flux by
    // roughly (p - 1) * 2 eps U / (h |g|) of itself.
    const double du = 2.0 * kEps * std::max(umax, 1e-300) / hmin;
    std::vector<double> force(n, 0.0);
    std::vector<double> noise(n, 0.0);
    for (std::size_t c = 0; c < st.size(); ++c) {
        if (st[c].logk == kNegInf) continue;
        const CellStencil s = cell_stencil(grid, grid.cells()[c]);
        for (int k = 0; k < s.count; ++k) {
            const int dof = grid.dof(s.nodes[static_cast<std::size_t>(k)]);
            if (dof < 0) continue;
            const auto i = static_cast<std::size_t>(dof);
            const double coef = std::exp(st[c].logk - r.shift[i]);
            const Vec2& a = s.coeff[static_cast<std::size_t>(k)];
            r.grad[dof] += coef * (a[0] * st[c].g[0] + a[1] * st[c].g[1]);
            const double f = coef * st[c].norm / hmin;
            force[i] = std::max(force[i], f);
            if (f > 0.0) noise[i] = std::max(noise[i], f * std::abs(p[c] - 1.0) * du / st[c].norm);
        }
    }
    if (!r.grad.allFinite()) throw std::runtime_error("minimize: non-finite energy gradient");
    for (std::size_t i = 0; i < n; ++i) {
        const double gi = std::abs(r.grad[static_cast<Eigen::Index>(i)]);
        if (gi > 0.0) r.log_sup = std::max(r.log_sup, r.shift[i] + std::log(gi));
        if (force[i] > 0.0) {
            r.rel[i] = gi / force[i];
            r.floor[i] = noise[i] / force[i];
        }
        r.relative = std::max(r.relative, r.rel[i]);
        r.roundoff = std::max(r.roundoff, r.floor[i]);
    }
    return r;
}

// Cell Hessian blocks coeff_k^T M coeff_l. With `st` null, M is the p = 2
// tensor scaled by the largest weight; otherwise row k carries the unit
// e^{shift[k]} of its residual.
std::vector<Eigen::Triplet<double>> stiffness_triplets(const Grid& grid, const std::vector<CellState>* st,
                                                      std::span<const double> p, const std::vector<double>* shift) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(grid.cells().size() * 9);
    double wmax = 0.0;
    for (const Cell& c : grid.cells()) wmax = std::max(wmax, c.weight);
    for (std::size_t c = 0; c < grid.cells().size(); ++c) {
        const Cell& cell = grid.cells()[c];
        double m00, m01, m11;
        double logk = 0.0;
        if (st == nullptr) {
            m00 = m11 = cell.weight / wmax;
            m01 = 0.0;
        } else {
            const CellState& s = (*st)[c];
            if (s.logk == kNegInf) continue;
            logk = s.logk;
            double ex = 0.0, ey = 0.0;
            if (s.norm > 0.0) {
                ex = s.g[0] / s.norm;
                ey = s.g[1] / s.norm;
            }
            const double q = p[c] - 2.0;
            m00 = 1.0 + q * ex * ex;
            m01 = q * ex * ey;
            m11 = 1.0 + q * ey * ey;
        }
        const CellStencil sten = cell_stencil(grid, cell);
        for (int k = 0; k < sten.count; ++k) {
            const int dk = grid.dof(sten.nodes[static_cast<std::size_t>(k)]);
            if (dk < 0) continue;
            const double coef = st ? std::exp(logk - (*shift)[static_cast<std::size_t>(dk)]) : 1.0;
            if (coef == 0.0) continue;
            const Vec2& a = sten.coeff[static_cast<std::size_t>(k)];
            for (int l = 0; l < sten.count; ++l) {
                const int dl = grid.dof(sten.nodes[static_cast<std::size_t>(l)]);
                if (dl < 0) continue;
                const Vec2& b = sten.coeff[static_cast<std::size_t>(l)];
                const double v = a[0] * (m00 * b[0] + m01 * b[1]) + a[1] * (m01 * b[0] + m11 * b[1]);
                trip.emplace_back(dk, dl, coef * v);
            }
        }
    }
    return trip;
}

SpMat assemble(const Grid& grid, const std::vector<Eigen::Triplet<double>>& trip) {
    const auto n = static_cast<Eigen::Index>(grid.interior_nodes().size());
    SpMat m(n, n);
    m.setFromTriplets(trip.begin(), trip.end());
    return m;
}

void add_step(const Grid& grid, std::span<const double> base, const Vec& d, double t, std::vector<double>& out) {
    out.assign(base.begin(), base.end());
    const auto& nodes = grid.interior_nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i)
        out[static_cast<std::size_t>(nodes[i])] += t * d[static_cast<Eigen::Index>(i)];
}

struct StageResult {
    bool converged = false;
    bool stalled = false;
};

class Minimizer {
public:
    Minimizer(const EnergyFunctional& F, const MinimizeOptions& opts, Solution& sol)
        : grid_(*F.grid), opts_(opts), sol_(sol) {
        k2_diag_ = assemble(grid_, stiffness_triplets(grid_, nullptr, F.p, nullptr)).diagonal();
    }

    StageResult run_stage(std::span<const double> p, double tol, int budget) {
        constexpr double kShortStep = 1e-2;
        StageResult res;
        int used = 0;
        double mu = 1e-8;
        double descent_t = 1.0;
        while (true) {
            const Residual r = residual(grid_, p, u_);
            if (r.converged(tol)) {
                res.converged = true;
                return res;
            }
            if (sol_.iterations >= opts_.max_iter || used >= budget) return res;
            const double logE0 = log_energy(grid_, p, u_);
            if (logE0 == kNegInf) {
                res.converged = true;
                return res;
            }
            st0_ = cell_states(grid_, p, u_);
            mark_relevant(r, p, logE0);
            bool accepted = false;
            if (opts_.method == MinimizeMethod::Newton) {
                const auto& st = st0_;
                const SpMat h = assemble(grid_, stiffness_triplets(grid_, &st, p, &r.shift));
                Vec lm(h.rows());
                for (Eigen::Index i = 0; i < h.rows(); ++i) {
                    const double hi = h.coeff(i, i);
                    lm[i] = hi > 0.0 ? hi : 1.0;
                }
                for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
                    SpMat a = h;
                    for (Eigen::Index i = 0; i < a.rows(); ++i) a.coeffRef(i, i) += mu * lm[i];
                    Eigen::SparseLU<SpMat> lu;
                    lu.compute(a);
                    if (lu.info() != Eigen::Success) {
                        mu *= 100.0;
                        continue;
                    }
                    const Vec d = -lu.solve(r.grad);
                    if (lu.info() != Eigen::Success || !d.allFinite()) {
                        mu *= 100.0;
                        continue;
                    }
                    relaxed_ = false;
                    const std::vector<double> base = u_;
                    double t = line_search(p, d, r, logE0, tol, 1.0);
                    if (t < kShortStep) {
                        std::vector<double> strict;
                        strict.swap(u_);
                        u_ = base;
                        relaxed_ = true;
                        const double tr = line_search(p, d, r, logE0, tol, 1.0);
                        if (tr > t)
                            t = tr;
                        else
                            u_.swap(strict);
                    }
                    if (t > 0.0) {
                        accepted = true;
                        mu = t == 1.0 ? std::max(mu * 0.1, 1e-12) : mu * 4.0;
                    } else {
                        mu *= 100.0;
                    }
                }
            } else {
                Vec d(r.grad.size());
                for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = -r.grad[i] / k2_diag_[i];
                const double t = line_search(p, d, r, logE0, tol, std::min(descent_t * 2.0, 1e6));
                if (t > 0.0) {
                    accepted = true;
                    descent_t = t;
                }
            }
            if (!accepted) {
                res.stalled = true;
                return res;
            }
            ++sol_.iterations;
            ++used;
        }
    }

    std::vector<double> u_;

private:
    // Returns the accepted step length or 0.
    double line_search(std::span<const double> p, const Vec& d, const Residual& r, double logE0, double tol,
                       double t0) {
        constexpr double kArmijo = 1e-4;
        constexpr double kRounding = 1e-12;
        // d/dt of E / E0 at t = 0.
        double slope = 0.0;
        for (Eigen::Index i = 0; i < d.size(); ++i)
            if (r.grad[i] != 0.0)
                slope += std::exp(r.shift[static_cast<std::size_t>(i)] - logE0) * r.grad[i] * d[i];
        if (std::isnan(slope)) return 0.0;
        std::vector<double> trial;
        if (-slope >= 1e-13) {
            for (double t = t0; t >= 1e-12 * t0; t *= 0.5) {
                add_step(grid_, u_, d, t, trial);
                if (!tame(p, trial)) continue;
                const double logE = log_energy(grid_, p, trial);
                if (std::isnan(logE)) throw std::runtime_error("minimize: NaN energy");
                if (std::expm1(logE - logE0) <= kArmijo * t * slope) {
                    commit(trial, p);
                    return t;
                }
            }
        }
        // The decrease is below what the energy can resolve, or the scaled
        // direction is not a descent direction for it; fall back to the
        // node-wise residual as merit, with the energy held to rounding.
        const double before = r.merit(tol);
        const double worst = r.excess(tol);
        for (double t = t0; t >= 1e-3 * t0; t *= 0.5) {
            add_step(grid_, u_, d, t, trial);
            if (!tame(p, trial)) continue;
            if (std::expm1(log_energy(grid_, p, trial) - logE0) > kRounding) continue;
            const Residual rt = residual(grid_, p, trial);
            if (rt.merit(tol) < before || rt.excess(tol) < worst) {
                commit(trial, p);
                return t;
            }
        }
        return 0.0;
    }

    // Cells whose flux is within kRelevant of the largest flux on one of
    // their nodes take part in the balance there. Hidden cells are those
    // whose energy is below what the line search can resolve, or whose
    // exponent is too large for it to follow their flux.
    void mark_relevant(const Residual& r, std::span<const double> p, double logE0) {
        constexpr double kRelevant = 40.0;
        constexpr double kVisible = 30.0;
        constexpr double kModerate = 32.0;
        relevant_.assign(st0_.size(), false);
        hidden_.assign(st0_.size(), false);
        for (std::size_t c = 0; c < st0_.size(); ++c) {
            if (st0_[c].logk == kNegInf) continue;
            const double loge = st0_[c].logk + 2.0 * std::log(st0_[c].norm) - std::log(p[c]);
            hidden_[c] = loge <= logE0 - kVisible || p[c] > kModerate;
            const CellStencil s = cell_stencil(grid_, grid_.cells()[c]);
            for (int k = 0; k < s.count; ++k) {
                const int dof = grid_.dof(s.nodes[static_cast<std::size_t>(k)]);
                if (dof >= 0 && st0_[c].logk > r.shift[static_cast<std::size_t>(dof)] - kRelevant) relevant_[c] = true;
            }
        }
    }

    // A step may not change a relevant flux by more than a factor e^kMaxLogChange
    // or reverse its direction: the line search cannot see cells whose energy
    // is below rounding of the total, and a flux knocked far below its
    // neighbours no longer enters their Newton rows. When no step passes,
    // the guard is relaxed to hidden cells.
    bool tame(std::span<const double> p, std::span<const double> trial) const {
        constexpr double kMaxLogChange = 10.0;
        const auto st = cell_states(grid_, p, trial);
        for (std::size_t c = 0; c < st.size(); ++c) {
            if (!relevant_[c] || (relaxed_ && !hidden_[c])) continue;
            const CellState& a = st0_[c];
            const CellState& b = st[c];
            if (a.g[0] * b.g[0] + a.g[1] * b.g[1] <= 0.0 && a.norm > 0.0) return false;
            if (std::abs(b.logk - a.logk) > kMaxLogChange) return false;
        }
        return true;
    }

    void commit(std::vector<double>& trial, std::span<const double> p) {
        u_.swap(trial);
        if (log_energy(grid_, p, u_) > kLogModularCap) ++sol_.saturated_iterates;
    }

    const Grid& grid_;
    const MinimizeOptions& opts_;
    Solution& sol_;
    Vec k2_diag_;
    std::vector<CellState> st0_;
    std::vector<bool> relevant_;
    std::vector<bool> hidden_;
    bool relaxed_ = false;
};

}  // namespace

EnergyFunctional make_energy(ScalarField phi, std::vector<double> cell_p, bool p_saturated) {
    if (!phi.grid()) throw std::invalid_argument("datum has no grid");
    const Grid& g = *phi.grid();
    if (cell_p.size() != g.cells().size()) throw std::invalid_argument("one exponent per cell required");
    for (double p : cell_p)
        if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("exponents must be finite and exceed 1");
    if (!phi.finite_on_active()) throw std::invalid_argument("boundary datum must be finite");
    EnergyFunctional F;
    F.grid = phi.grid();
    F.p = std::move(cell_p);
    F.phi = std::move(phi);
    F.p_saturated = p_saturated;
    return F;
}

ModularValue energy_value(const EnergyFunctional& F, const ScalarField& u) {
    require_boundary_match(u, F.phi);
    return gradient_modular(u, F.p, true);
}

ModularValue offset_energy(const EnergyFunctional& F, const ScalarField& v) {
    return gradient_modular(v - F.phi, F.p, true);
}

ScalarField energy_gradient(const EnergyFunctional& F, const ScalarField& u) {
    require_boundary_match(u, F.phi);
    const Grid& grid = *F.grid;
    const auto st = cell_states(grid, F.p, u.values());
    std::vector<Vec2> flux(st.size(), Vec2{0.0, 0.0});
    for (std::size_t c = 0; c < st.size(); ++c) {
        if (st[c].norm == 0.0) continue;
        // |flux| = e^{logk} |g|, saturated in the log domain.
        const double mag = std::min(st[c].logk + std::log(st[c].norm), kLogModularCap);
        const double k = std::exp(mag) / st[c].norm;
        flux[c] = {k * st[c].g[0], k * st[c].g[1]};
    }
    ScalarField out = energy_divergence(F.grid, flux);
    for (int node : grid.interior_nodes()) out[node] = std::clamp(out[node], -kModularCap, kModularCap);
    return out;
}

ScalarField harmonic_extension(const ScalarField& phi) {
    const GridPtr& gp = phi.grid();
    const Grid& grid = *gp;
    const auto n = static_cast<Eigen::Index>(grid.interior_nodes().size());
    std::vector<Eigen::Triplet<double>> trip;
    Vec rhs = Vec::Zero(n);
    for (const Cell& cell : grid.cells()) {
        const CellStencil s = cell_stencil(grid, cell);
        for (int k = 0; k < s.count; ++k) {
            const int dk = grid.dof(s.nodes[static_cast<std::size_t>(k)]);
            if (dk < 0) continue;
            const Vec2& a = s.coeff[static_cast<std::size_t>(k)];
            for (int l = 0; l < s.count; ++l) {
                const int node = s.nodes[static_cast<std::size_t>(l)];
                const Vec2& b = s.coeff[static_cast<std::size_t>(l)];
                const double v = cell.weight * (a[0] * b[0] + a[1] * b[1]);
                const int dl = grid.dof(node);
                if (dl >= 0)
                    trip.emplace_back(dk, dl, v);
                else
                    rhs[dk] -= v * phi[node];
            }
        }
    }
    SpMat k(n, n);
    k.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<SpMat> ldlt(k);
    if (ldlt.info() != Eigen::Success) throw std::runtime_error("harmonic_extension: factorization failed");
    const Vec x = ldlt.solve(rhs);
    ScalarField u = phi;
    for (Eigen::Index i = 0; i < n; ++i) u[grid.interior_nodes()[static_cast<std::size_t>(i)]] = x[i];
    return u;
}

std::string to_string(MinimizeMethod m) { return m == MinimizeMethod::Newton ? "newton" : "descent"; }

MinimizeMethod minimize_method_from_string(const std::string& name) {
    if (name == "newton") return MinimizeMethod::Newton;
    if (name == "descent") return MinimizeMethod::Descent;
    throw std::invalid_argument("unknown minimize method '" + name + "'");
}

Solution minimize(const EnergyFunctional& F, const ScalarField& init, const MinimizeOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("minimize: tol must be positive");
    if (!same_grid(init.grid(), F.grid)) throw std::invalid_argument("minimize: init lives on another grid");
    const Grid& grid = *F.grid;
    Solution sol;
    Minimizer m(F, opts, sol);
    m.u_.assign(init.values().begin(), init.values().end());
    for (int node : grid.boundary_nodes()) m.u_[static_cast<std::size_t>(node)] = F.phi[node];
    for (int node : grid.interior_nodes())
        if (!std::isfinite(m.u_[static_cast<std::size_t>(node)]))
            throw std::invalid_argument("minimize: init is not finite");

    const double pmax = *std::max_element(F.p.begin(), F.p.end());
    StageResult last;
    std::vector<double> p(F.p.size());
    const auto stage = [&](double cap, double tol, int budget) {
        for (std::size_t c = 0; c < p.size(); ++c) p[c] = std::min(F.p[c], cap);
        ++sol.stages;
        return m.run_stage(p, tol, budget);
    };
    if (!opts.continuation || pmax <= 2.0) {
        last = stage(pmax, opts.tol, opts.max_iter);
    } else {
        // Geometric continuation in the exponent cap. A stage that stalls
        // or overruns its budget is retried from the last converged field
        // with the square root of the step ratio.
        constexpr double kMinRatio = 1.0 + 1e-3;
        constexpr int kStageBudget = 200;
        double done = 2.0;
        double ratio = 2.0;
        std::vector<double> anchor = m.u_;
        bool first = true;
        while (sol.iterations < opts.max_iter) {
            const double cap = first ? 2.0 : std::min(done * ratio, pmax);
            const bool final_stage = cap >= pmax;
            last = stage(cap, final_stage ? opts.tol : std::max(opts.tol, opts.stage_tol),
                         std::min(kStageBudget, opts.max_iter - sol.iterations));
            if (last.converged) {
                if (final_stage) break;
                first = false;
                done = cap;
                anchor = m.u_;
                ratio = std::min(ratio * ratio, 2.0);
                continue;
            }
            if (first || ratio < kMinRatio) break;
            m.u_ = anchor;
            ratio = std::sqrt(ratio);
        }
    }

    sol.u = ScalarField(F.grid);
    std::copy(m.u_.begin(), m.u_.end(), sol.u.values().begin());
    const ModularValue e = energy_value(F, sol.u);
    sol.energy = e.value;
    sol.log_energy = e.log_value;
    sol.energy_saturated = e.saturated;
    const Residual r = residual(grid, F.p, m.u_);
    sol.relative_residual = r.relative;
    sol.roundoff_floor = r.roundoff;
    if (r.log_sup > kNegInf) sol.residual_sup = std::exp(std::min(r.log_sup, kLogModularCap));
    sol.converged = last.converged && r.converged(opts.tol);
    return sol;
}

Solution minimize(const EnergyFunctional& F, const MinimizeOptions& opts) {
    return minimize(F, harmonic_extension(F.phi), opts);
}

Oracle1D solve_1d_quadrature_oracle(const std::function<double(double)>& p, double a, double b,
                                    const GridPtr& grid) {
    if (grid->dim() != 1) throw std::invalid_argument("1D oracle needs an interval grid");
    const int n = grid->n();
    const double h = grid->h()[0];
    std::vector<double> pm(static_cast<std::size_t>(n - 1));
    for (int i = 0; i + 1 < n; ++i) {
        pm[static_cast<std::size_t>(i)] = p(grid->spec().lower[0] + (i + 0.5) * h);
        if (!(pm[static_cast<std::size_t>(i)] > 1.0)) throw std::invalid_argument("1D oracle needs p > 1");
    }
    Oracle1D out{ScalarField(grid, a), 0.0};
    if (a == b) return out;
    const double sign = b > a ? 1.0 : -1.0;
    const double target = std::abs(b - a);
    // |C| = e^tau; the total rise is increasing in tau.
    const auto rise = [&](double tau) {
        double s = 0.0;
        for (double q : pm) s += h * std::exp(tau / (q - 1.0));
        return s;
    };
    double lo = -1.0, hi = 1.0;
    for (int k = 0; rise(lo) > target; ++k) {
        lo *= 2.0;
        if (k > 1100) throw std::runtime_error("1D oracle: bisection bracket failure");
    }
    for (int k = 0; rise(hi) < target; ++k) {
        hi *= 2.0;
        if (k > 1100) throw std::runtime_error("1D oracle: bisection bracket failure");
    }
    for (int it = 0; it < 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (rise(mid) < target ? lo : hi) = mid;
    }
    const double tau = 0.5 * (lo + hi);
    out.flux = sign * std::exp(tau);
    double acc = a;
    for (int i = 1; i < n; ++i) {
        acc += sign * h * std::exp(tau / (pm[static_cast<std::size_t>(i - 1)] - 1.0));
        out.u[i] = acc;
    }
    out.u[n - 1] = b;
    return out;
}

MonotonicityGap monotonicity_gap(const ScalarField& w1, const ScalarField& w2, std::span<const double> cell_p) {
    if (!same_grid(w1.grid(), w2.grid())) throw std::invalid_argument("monotonicity_gap: different grids");
    const Grid& grid = *w1.grid();
    for (int node : grid.boundary_nodes())
        if (w1[node] != w2[node]) throw std::invalid_argument("monotonicity_gap: boundary values differ");
    if (cell_p.size() != grid.cells().size()) throw std::invalid_argument("one exponent per cell required");
    MonotonicityGap m;
    for (std::size_t c = 0; c < cell_p.size(); ++c) {
        const Cell& cell = grid.cells()[c];
        const Vec2 g1 = cell_gradient(grid, cell, w1.values());
        const Vec2 g2 = cell_gradient(grid, cell, w2.values());
        const double p = cell_p[c];
        const double n1 = std::hypot(g1[0], g1[1]);
        const double n2 = std::hypot(g2[0], g2[1]);
        const double k1 = n1 > 0.0 ? std::pow(n1, p - 2.0) : 0.0;
        const double k2 = n2 > 0.0 ? std::pow(n2, p - 2.0) : 0.0;
        const double dx = g1[0] - g2[0], dy = g1[1] - g2[1];
        m.lhs += cell.weight * ((k1 * g1[0] - k2 * g2[0]) * dx + (k1 * g1[1] - k2 * g2[1]) * dy);
        const double dn = std::hypot(dx, dy);
        if (dn > 0.0) m.rhs += cell.weight * std::pow(2.0, 2.0 - p) * std::pow(dn, p);
    }
    m.holds = m.lhs >= m.rhs - 1e-10 * (1.0 + std::abs(m.lhs));
    return m;
}

}  // namespace pxl
