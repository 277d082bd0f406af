#include "pxl/infinity.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pxl {

XiField zero_xi(const GridPtr& grid) { return {ScalarField(grid, 0.0), ScalarField(grid, 0.0)}; }

namespace {

struct Derivatives {
    Vec2 grad{0.0, 0.0};
    Mat2 hess{};
};

Derivatives central_derivatives(const ScalarField& u, int node) {
    const Grid& g = *u.grid();
    const auto at = [&](int di, int dj) {
        const int nb = g.neighbor(node, di, dj);
        if (nb < 0 || !g.is_active(nb)) throw std::invalid_argument("residual_infinity: incomplete stencil");
        return u[nb];
    };
    Derivatives d;
    const double hx = g.h()[0];
    const double c = u[node];
    d.grad[0] = (at(1, 0) - at(-1, 0)) / (2.0 * hx);
    d.hess[0][0] = (at(1, 0) - 2.0 * c + at(-1, 0)) / (hx * hx);
    if (g.dim() == 2) {
        const double hy = g.h()[1];
        d.grad[1] = (at(0, 1) - at(0, -1)) / (2.0 * hy);
        d.hess[1][1] = (at(0, 1) - 2.0 * c + at(0, -1)) / (hy * hy);
        d.hess[0][1] = d.hess[1][0] = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hx * hy);
    }
    return d;
}

double infinity_laplacian(const Vec2& g, const Mat2& h) {
    return g[0] * g[0] * h[0][0] + 2.0 * g[0] * g[1] * h[0][1] + g[1] * g[1] * h[1][1];
}

// One stencil direction from a node: the neighbour and its distance.
struct Arm {
    int node;
    double dist;
};

struct NodeStencil {
    std::vector<Arm> arms;
    // Upwind neighbours per axis: [axis][0] backward, [axis][1] forward.
    std::array<std::array<int, 2>, 2> axis{{{-1, -1}, {-1, -1}}};
};

bool reachable(const Grid& g, int node, int dx, int dy) {
    const int m = std::max(std::abs(dx), std::abs(dy));
    for (int k = 1; k <= m; ++k) {
        const int sx = static_cast<int>(std::lround(static_cast<double>(k * dx) / m));
        const int sy = static_cast<int>(std::lround(static_cast<double>(k * dy) / m));
        const int nb = g.neighbor(node, sx, sy);
        if (nb < 0 || !g.is_active(nb)) return false;
    }
    return true;
}

std::vector<NodeStencil> build_stencils(const Grid& g, int radius) {
    if (radius < 1) throw std::invalid_argument("stencil radius must be at least 1");
    std::vector<std::array<int, 2>> dirs;
    if (g.dim() == 1) {
        dirs.push_back({1, 0});
    } else {
        // One representative of each +-v pair.
        for (int dy = 0; dy <= radius; ++dy)
            for (int dx = -radius; dx <= radius; ++dx) {
                if (dy == 0 && dx <= 0) continue;
                if (std::gcd(std::abs(dx), dy) != 1) continue;
                dirs.push_back({dx, dy});
            }
    }
    const double hx = g.h()[0];
    const double hy = g.h()[1];
    std::vector<NodeStencil> out(g.interior_nodes().size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const int node = g.interior_nodes()[i];
        NodeStencil& s = out[i];
        for (const auto& v : dirs) {
            if (!reachable(g, node, v[0], v[1]) || !reachable(g, node, -v[0], -v[1])) continue;
            const double d = std::hypot(v[0] * hx, v[1] * hy);
            s.arms.push_back({g.neighbor(node, v[0], v[1]), d});
            s.arms.push_back({g.neighbor(node, -v[0], -v[1]), d});
        }
        s.axis[0] = {g.neighbor(node, -1, 0), g.neighbor(node, 1, 0)};
        if (g.dim() == 2) s.axis[1] = {g.neighbor(node, 0, -1), g.neighbor(node, 0, 1)};
    }
    return out;
}

// Frozen local rule: u = sum coef_m u_{nb_m} / diag.
struct LocalRule {
    int k = -1, l = -1;
    double dk = 1.0, dl = 1.0;
    std::array<int, 2> drift_nb{-1, -1};
    std::array<double, 2> drift_w{0.0, 0.0};
    double c = 0.0;

    double diag() const { return 1.0 / dk + 1.0 / dl + c * (drift_w[0] + drift_w[1]); }
    double apply(std::span<const double> u) const {
        double num = u[static_cast<std::size_t>(k)] / dk + u[static_cast<std::size_t>(l)] / dl;
        for (int a = 0; a < 2; ++a)
            if (drift_w[static_cast<std::size_t>(a)] > 0.0)
                num += c * drift_w[static_cast<std::size_t>(a)] * u[static_cast<std::size_t>(drift_nb[static_cast<std::size_t>(a)])];
        return num / diag();
    }
};

class Scheme {
public:
    explicit Scheme(const InfinityProblem& p)
        : p_(p), g_(*p.grid), stencils_(build_stencils(g_, p.stencil_radius)) {}

    LocalRule rule(std::span<const double> u, std::size_t i) const {
        const NodeStencil& s = stencils_[i];
        const int node = g_.interior_nodes()[i];
        LocalRule r;
        double best = -std::numeric_limits<double>::infinity();
        // Arms come in (v, -v) pairs; pick the steepest symmetric difference.
        for (std::size_t m = 0; m + 1 < s.arms.size(); m += 2) {
            const Arm& a = s.arms[m];
            const Arm& b = s.arms[m + 1];
            const double du = u[static_cast<std::size_t>(a.node)] - u[static_cast<std::size_t>(b.node)];
            const double q = std::abs(du) / a.dist;
            if (q > best) {
                best = q;
                const bool up = du >= 0.0;
                r.k = up ? a.node : b.node;
                r.l = up ? b.node : a.node;
                r.dk = r.dl = a.dist;
            }
        }
        r.c = 0.5 * (r.dk + r.dl);
        // Drift b = ln|∇u| ξ, frozen at the current iterate.
        Vec2 grad{0.0, 0.0};
        for (int a = 0; a < g_.dim(); ++a) {
            const auto& ax = s.axis[static_cast<std::size_t>(a)];
            grad[static_cast<std::size_t>(a)] =
                (u[static_cast<std::size_t>(ax[1])] - u[static_cast<std::size_t>(ax[0])]) / (2.0 * g_.h()[static_cast<std::size_t>(a)]);
        }
        const double gn = std::hypot(grad[0], grad[1]);
        if (gn > p_.eps_grad) {
            const double lg = std::log(gn);
            const Vec2 b{lg * p_.xi.x[node], lg * p_.xi.y[node]};
            for (int a = 0; a < g_.dim(); ++a) {
                const auto ua = static_cast<std::size_t>(a);
                if (b[ua] == 0.0) continue;
                r.drift_w[ua] = std::abs(b[ua]) / g_.h()[ua];
                r.drift_nb[ua] = s.axis[ua][b[ua] > 0.0 ? 1 : 0];
            }
        }
        return r;
    }

    // One Gauss-Seidel sweep; returns the largest update.
    double sweep(std::vector<double>& u, int& violations) const {
        double change = 0.0;
        for (std::size_t i = 0; i < stencils_.size(); ++i) {
            const int node = g_.interior_nodes()[i];
            const LocalRule r = rule(u, i);
            const double v = r.apply(u);
            double lo = std::min(u[static_cast<std::size_t>(r.k)], u[static_cast<std::size_t>(r.l)]);
            double hi = std::max(u[static_cast<std::size_t>(r.k)], u[static_cast<std::size_t>(r.l)]);
            for (int a = 0; a < 2; ++a)
                if (r.drift_w[static_cast<std::size_t>(a)] > 0.0) {
                    const double ua = u[static_cast<std::size_t>(r.drift_nb[static_cast<std::size_t>(a)])];
                    lo = std::min(lo, ua);
                    hi = std::max(hi, ua);
                }
            const double slack = 1e-14 * std::max({1.0, std::abs(lo), std::abs(hi)});
            if (!(v >= lo - slack && v <= hi + slack)) ++violations;
            change = std::max(change, std::abs(v - u[static_cast<std::size_t>(node)]));
            u[static_cast<std::size_t>(node)] = v;
        }
        return change;
    }

    // Largest |u - T(u)| with T the local rule (Jacobi form).
    double defect(std::span<const double> u) const {
        double d = 0.0;
        for (std::size_t i = 0; i < stencils_.size(); ++i) {
            const int node = g_.interior_nodes()[i];
            d = std::max(d, std::abs(rule(u, i).apply(u) - u[static_cast<std::size_t>(node)]));
        }
        return d;
    }

    // Solves the linear system with every local rule frozen at u.
    bool policy_step(std::vector<double>& u) const {
        const auto n = static_cast<Eigen::Index>(stencils_.size());
        std::vector<Eigen::Triplet<double>> trip;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < stencils_.size(); ++i) {
            const LocalRule r = rule(u, i);
            const auto row = static_cast<Eigen::Index>(i);
            trip.emplace_back(row, row, r.diag());
            const auto put = [&](int nb, double w) {
                const int dof = g_.dof(nb);
                if (dof >= 0)
                    trip.emplace_back(row, dof, -w);
                else
                    rhs[row] += w * u[static_cast<std::size_t>(nb)];
            };
            put(r.k, 1.0 / r.dk);
            put(r.l, 1.0 / r.dl);
            for (int a = 0; a < 2; ++a)
                if (r.drift_w[static_cast<std::size_t>(a)] > 0.0)
                    put(r.drift_nb[static_cast<std::size_t>(a)], r.c * r.drift_w[static_cast<std::size_t>(a)]);
        }
        Eigen::SparseMatrix<double> a(n, n);
        a.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(a);
        if (lu.info() != Eigen::Success) return false;
        const Eigen::VectorXd x = lu.solve(rhs);
        if (lu.info() != Eigen::Success || !x.allFinite()) return false;
        for (Eigen::Index i = 0; i < n; ++i) u[static_cast<std::size_t>(g_.interior_nodes()[static_cast<std::size_t>(i)])] = x[i];
        return true;
    }

private:
    const InfinityProblem& p_;
    const Grid& g_;
    std::vector<NodeStencil> stencils_;
};


// Normalized equation Δ∞u/|∇u|² + ln|∇u| <ξ, ∇u> = 0 on the 3x3 stencil,
// with hybrid differencing of the drift. `v` holds the nine stencil values in
// row-major order (dj = -1..1, di = -1..1); in 1D only the middle row is used.
double local_normalized(const std::array<double, 9>& v, int dim, double hx, double hy, const Vec2& xi,
                        double eps_grad, bool& degenerate) {
    const auto at = [&](int di, int dj) { return v[static_cast<std::size_t>((dj + 1) * 3 + di + 1)]; };
    Vec2 g{(at(1, 0) - at(-1, 0)) / (2.0 * hx), 0.0};
    Mat2 h{};
    h[0][0] = (at(1, 0) - 2.0 * at(0, 0) + at(-1, 0)) / (hx * hx);
    if (dim == 2) {
        g[1] = (at(0, 1) - at(0, -1)) / (2.0 * hy);
        h[1][1] = (at(0, 1) - 2.0 * at(0, 0) + at(0, -1)) / (hy * hy);
        h[0][1] = h[1][0] = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * hx * hy);
    }
    const double g2 = g[0] * g[0] + g[1] * g[1];
    if (std::sqrt(g2) <= eps_grad) {
        degenerate = true;
        return 0.0;
    }
    const double lg = 0.5 * std::log(g2);
    // Hybrid differencing: central while the cell Peclet number |b| h / 2
    // stays below one, upwind beyond.
    const auto drift_term = [](double b, double h, double minus, double centre, double plus) {
        if (std::abs(b) * h <= 2.0) return b * (plus - minus) / (2.0 * h);
        return std::abs(b) * ((b > 0.0 ? plus : minus) - centre) / h;
    };
    double drift = 0.0;
    if (xi[0] != 0.0) drift += drift_term(lg * xi[0], hx, at(-1, 0), at(0, 0), at(1, 0));
    if (dim == 2 && xi[1] != 0.0) drift += drift_term(lg * xi[1], hy, at(0, -1), at(0, 0), at(0, 1));
    return infinity_laplacian(g, h) / g2 + drift;
}

class Refiner {
public:
    explicit Refiner(const InfinityProblem& p) : p_(p), g_(*p.grid) {
        const int dim = g_.dim();
        nodes_.resize(g_.interior_nodes().size());
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const int node = g_.interior_nodes()[i];
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    const auto slot = static_cast<std::size_t>((dj + 1) * 3 + di + 1);
                    nodes_[i][slot] = (dim == 1 && dj != 0) ? node : g_.neighbor(node, di, dj);
                }
        }
    }

    // Residual vector; sets `degenerate` if some gradient vanishes.
    Eigen::VectorXd residual(std::span<const double> u, bool& degenerate) const {
        Eigen::VectorXd r(static_cast<Eigen::Index>(nodes_.size()));
        for (std::size_t i = 0; i < nodes_.size(); ++i) r[static_cast<Eigen::Index>(i)] = local(u, i, nullptr, 0.0, degenerate);
        return r;
    }

    // Newton on the normalized equation. Returns false (leaving u untouched)
    // unless it converges.
    bool run(std::vector<double>& u, double lo, double hi) const {
        const double h2 = g_.h_min() * g_.h_min();
        const double scale = std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
        std::vector<double> x = u;
        bool degenerate = false;
        Eigen::VectorXd r = residual(x, degenerate);
        if (degenerate) return false;
        double rnorm = r.lpNorm<Eigen::Infinity>();
        for (int it = 0; it < 40; ++it) {
            const Eigen::VectorXd du = step(x, r);
            if (!du.allFinite()) return false;
            double t = 1.0;
            bool accepted = false;
            std::vector<double> trial;
            for (int k = 0; k < 12; ++k, t *= 0.5) {
                trial = x;
                for (std::size_t i = 0; i < nodes_.size(); ++i)
                    trial[static_cast<std::size_t>(g_.interior_nodes()[i])] += t * du[static_cast<Eigen::Index>(i)];
                bool deg = false;
                const Eigen::VectorXd rt = residual(trial, deg);
                const double n = rt.lpNorm<Eigen::Infinity>();
                if (!deg && n < rnorm) {
                    r = rt;
                    rnorm = n;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) break;
            x.swap(trial);
            if (t * du.lpNorm<Eigen::Infinity>() <= p_.tol * h2 * scale) break;
        }
        // Either the step fell below tolerance or the residual stopped
        // decreasing; the latter is accepted only at rounding level.
        const double noise = 1e4 * std::numeric_limits<double>::epsilon() * scale / h2;
        bool deg = false;
        if (residual(x, deg).lpNorm<Eigen::Infinity>() > std::max(noise, p_.tol) || deg) return false;
        for (int node : g_.interior_nodes())
            if (x[static_cast<std::size_t>(node)] < lo || x[static_cast<std::size_t>(node)] > hi) return false;
        u.swap(x);
        return true;
    }

private:
    double local(std::span<const double> u, std::size_t i, const int* bump_slot, double bump, bool& degenerate) const {
        std::array<double, 9> v{};
        for (std::size_t k = 0; k < 9; ++k) {
            const int nb = nodes_[i][k];
            v[k] = nb >= 0 ? u[static_cast<std::size_t>(nb)] : 0.0;
        }
        if (bump_slot) v[static_cast<std::size_t>(*bump_slot)] += bump;
        const int node = g_.interior_nodes()[i];
        return local_normalized(v, g_.dim(), g_.h()[0], g_.h()[1], {p_.xi.x[node], p_.xi.y[node]}, p_.eps_grad,
                                degenerate);
    }

    Eigen::VectorXd step(std::span<const double> u, const Eigen::VectorXd& r) const {
        const auto n = static_cast<Eigen::Index>(nodes_.size());
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(nodes_.size() * 9);
        const double delta = 1e-6 * g_.h_min();
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            const int center = g_.interior_nodes()[i];
            for (int k = 0; k < 9; ++k) {
                const int nb = nodes_[i][static_cast<std::size_t>(k)];
                if (nb < 0 || (g_.dim() == 1 && k / 3 != 1)) continue;
                const int dof = g_.dof(nb);
                if (dof < 0) continue;
                bool deg = false;
                const double fp = local(u, i, &k, delta, deg);
                const double fm = local(u, i, &k, -delta, deg);
                const double d = (fp - fm) / (2.0 * delta);
                if (d != 0.0 || nb == center) trip.emplace_back(static_cast<Eigen::Index>(i), dof, d);
            }
        }
        Eigen::SparseMatrix<double> j(n, n);
        j.setFromTriplets(trip.begin(), trip.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(j);
        if (lu.info() != Eigen::Success) return Eigen::VectorXd::Constant(n, std::numeric_limits<double>::quiet_NaN());
        return lu.solve(-r);
    }

    const InfinityProblem& p_;
    const Grid& g_;
    std::vector<std::array<int, 9>> nodes_;
};

}  // namespace

double residual_infinity(const ScalarField& u, const XiField& xi, int node, double eps_grad) {
    const Grid& g = *u.grid();
    if (!g.is_interior(node)) throw std::invalid_argument("residual_infinity: node is not interior");
    const Derivatives d = central_derivatives(u, node);
    const double lap_inf = infinity_laplacian(d.grad, d.hess);
    const double gn = std::hypot(d.grad[0], d.grad[1]);
    double drift = 0.0;
    if (gn > eps_grad) drift = gn * gn * std::log(gn) * (xi.x[node] * d.grad[0] + xi.y[node] * d.grad[1]);
    return -lap_inf - drift;
}

double expand_plaplacian(const Vec2& gradient, const Mat2& hessian, double p, const Vec2& grad_p, double eps_grad) {
    if (!(p > 2.0)) throw std::invalid_argument("expand_plaplacian: p must exceed 2");
    const double gn = std::hypot(gradient[0], gradient[1]);
    if (gn <= eps_grad) return 0.0;
    const double lap = hessian[0][0] + hessian[1][1];
    const double lap_inf = infinity_laplacian(gradient, hessian);
    const double gp2 = std::pow(gn, p - 2.0);
    const double gp4 = std::pow(gn, p - 4.0);
    return -gp2 * lap - (p - 2.0) * gp4 * lap_inf -
           gp2 * std::log(gn) * (gradient[0] * grad_p[0] + gradient[1] * grad_p[1]);
}

double normalized_expand_plaplacian(const Vec2& gradient, const Mat2& hessian, double p, const Vec2& grad_p,
                                    double eps_grad) {
    if (!(p > 2.0)) throw std::invalid_argument("normalized_expand_plaplacian: p must exceed 2");
    const double gn = std::hypot(gradient[0], gradient[1]);
    if (gn <= eps_grad) return 0.0;
    const double g2 = gn * gn;
    const double lap = hessian[0][0] + hessian[1][1];
    return -g2 * lap / (p - 2.0) - infinity_laplacian(gradient, hessian) -
           g2 * std::log(gn) * (gradient[0] * grad_p[0] + gradient[1] * grad_p[1]) / (p - 2.0);
}

InfinitySolution solve_infinity(const InfinityProblem& problem) {
    if (!(problem.eps_grad > 0.0)) throw std::invalid_argument("solve_infinity: eps_grad must be positive");
    if (!(problem.tol > 0.0)) throw std::invalid_argument("solve_infinity: tol must be positive");
    if (!same_grid(problem.grid, problem.phi.grid())) throw std::invalid_argument("solve_infinity: grid mismatch");
    const Grid& g = *problem.grid;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int node : g.boundary_nodes()) {
        if (!std::isfinite(problem.phi[node])) throw std::invalid_argument("solve_infinity: boundary datum not finite");
        lo = std::min(lo, problem.phi[node]);
        hi = std::max(hi, problem.phi[node]);
    }

    const Scheme scheme(problem);
    std::vector<double> u(problem.phi.values().begin(), problem.phi.values().end());
    // Start from the mean boundary value so that the datum need not extend inside.
    const double mid = 0.5 * (lo + hi);
    for (int node : g.interior_nodes()) u[static_cast<std::size_t>(node)] = mid;
    const auto clamp_interior = [&](std::vector<double>& v) {
        for (int node : g.interior_nodes())
            v[static_cast<std::size_t>(node)] = std::clamp(v[static_cast<std::size_t>(node)], lo, hi);
    };

    InfinitySolution sol;
    const double h2 = g.h_min() * g.h_min();
    const double target = problem.tol * h2;
    double best = scheme.defect(u);
    for (int it = 0; it < problem.max_policy_iterations && best > target; ++it) {
        std::vector<double> trial = u;
        if (!scheme.policy_step(trial)) break;
        clamp_interior(trial);
        ++sol.policy_iterations;
        const double d = scheme.defect(trial);
        if (!(d < best)) break;
        best = d;
        u.swap(trial);
    }
    // A cycle of frozen rules shows up as an update size that stops shrinking.
    constexpr int kWindow = 500;
    double checkpoint = std::numeric_limits<double>::infinity();
    while (sol.sweeps < problem.max_sweeps) {
        sol.last_change = scheme.sweep(u, sol.contract_violations);
        ++sol.sweeps;
        if (sol.last_change <= target) {
            sol.converged = true;
            break;
        }
        if (sol.sweeps % kWindow == 0) {
            if (sol.last_change > 0.99 * checkpoint) break;
            checkpoint = sol.last_change;
        }
    }

    if (problem.refine) {
        sol.refined = Refiner(problem).run(u, lo, hi);
        sol.converged = sol.converged || sol.refined;
    }

    sol.u = ScalarField(problem.grid);
    std::copy(u.begin(), u.end(), sol.u.values().begin());
    for (int node : g.interior_nodes())
        sol.residual_sup = std::max(sol.residual_sup, std::abs(residual_infinity(sol.u, problem.xi, node, problem.eps_grad)));
    return sol;
}

ScalarField exact_solution(const std::string& name, const ExactParams& params, const GridPtr& grid) {
    const GridSpec& s = grid->spec();
    if (name == "affine")
        return ScalarField::from_function(grid, [&](const Vec2& x) { return params.a * x[0] + params.b * x[1] + params.c; });
    if (name == "cone") {
        const Vec2& v = params.vertex;
        bool inside = v[0] >= s.lower[0] && v[0] <= s.upper[0];
        if (grid->dim() == 2) inside = inside && v[1] >= s.lower[1] && v[1] <= s.upper[1];
        if (inside && s.kind == GridKind::Disk2D) {
            const double r = s.disk_radius > 0.0 ? s.disk_radius
                                                  : 0.5 * std::min(s.upper[0] - s.lower[0], s.upper[1] - s.lower[1]);
            inside = std::hypot(v[0] - 0.5 * (s.lower[0] + s.upper[0]), v[1] - 0.5 * (s.lower[1] + s.upper[1])) <= r;
        }
        if (inside && s.mask && std::hypot(v[0] - s.mask->center[0], v[1] - s.mask->center[1]) < s.mask->radius)
            inside = false;
        if (inside) throw std::invalid_argument("cone vertex lies inside the domain");
        return ScalarField::from_function(
            grid, [&](const Vec2& x) { return params.scale * std::hypot(x[0] - v[0], x[1] - v[1]); });
    }
    if (name == "aronsson") {
        if (grid->dim() != 2) throw std::invalid_argument("aronsson needs a 2D grid");
        if (!(s.lower[0] > 0.0) || !(s.lower[1] > 0.0))
            throw std::invalid_argument("aronsson domain must stay off the coordinate axes");
        return ScalarField::from_function(grid, [&](const Vec2& x) {
            const double a = std::cbrt(x[0]);
            const double b = std::cbrt(x[1]);
            return params.scale * (a * a * a * a - b * b * b * b);
        });
    }
    throw std::invalid_argument("unknown exact solution '" + name + "'");
}

}  // namespace pxl
