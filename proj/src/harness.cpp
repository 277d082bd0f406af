#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "pxl/harness.hpp"
#include "pxl/modular.hpp"

namespace pxl {

namespace {

constexpr double kBoundSlack = 1e-9;
constexpr double kMonotoneSlack = 1e-9;

double half_gradient_energy(const ScalarField& u, std::span<const double> p) {
    return gradient_modular(0.5 * u, p, true).value;
}

}  // namespace

bool ConvergenceReport::all_ok() const {
    return verdicts.energy_bound_ok && verdicts.lux_bound_ok && verdicts.monotone_convergence_ok &&
           verdicts.solvers_converged;
}

ConvergenceReport run_sequence(const RunConfig& config) {
    GridPtr grid;
    try {
        grid = build_grid(config.domain);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("domain: ") + e.what());
    }
    const double alpha = effective_alpha(config);
    std::optional<ExponentSequence> seq;
    try {
        seq.emplace(make_exponent_family(config.family, config.exponent, *grid, config.j_first, config.j_last,
                                         config.exponent_cap));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("exponent: ") + e.what());
    }

    ConvergenceReport rep;
    rep.name = config.name;
    rep.dim = grid->dim();
    rep.measure = grid->measure();
    rep.alpha = alpha;
    rep.energy_bound = rep.measure;
    rep.lux_bound = 2.0 * std::exp(1.0 / std::numbers::e) * std::max(1.0, rep.measure);

    const bool empty = config.j_first > config.j_last;
    if (!empty) {
        const AdmissibilityReport adm = validate_admissibility(*seq, *grid, alpha);
        if (!adm.admissible) throw ConfigError("exponent family is not admissible for alpha = " + std::to_string(alpha));
    }
    rep.admissible = true;

    const ScalarField phi = boundary_field(config.boundary, grid);
    rep.lipschitz = lipschitz_constant(config.boundary, *grid);
    rep.lipschitz_ok = rep.lipschitz <= 1.0 + 1e-12;

    InfinityProblem prob;
    prob.grid = grid;
    prob.phi = phi;
    prob.xi = make_xi_field(*seq, grid);
    prob.eps_grad = config.eps_grad;
    prob.tol = config.infinity_tol;
    prob.max_sweeps = config.infinity_max_sweeps;
    prob.stencil_radius = config.stencil_radius;
    prob.refine = config.infinity_refine;
    const InfinitySolution lim = solve_infinity(prob);
    rep.limit = {lim.residual_sup, lim.sweeps, lim.policy_iterations, lim.contract_violations, lim.refined,
                 lim.converged};
    rep.verdicts.solvers_converged = lim.converged;

    for (int j = config.j_first; j <= config.j_last; ++j) {
        CellExponents ce = cell_exponents(*seq, j, *grid);
        JRecord r;
        r.j = j;
        r.min_p = *std::min_element(ce.p.begin(), ce.p.end());
        r.max_p = *std::max_element(ce.p.begin(), ce.p.end());
        r.p_saturated = ce.any_saturated;
        const EnergyFunctional F = make_energy(phi, ce.p, ce.any_saturated);
        const Solution s = minimize(F, config.solver);
        const ScalarField offset = phi - s.u;

        r.energy_half = half_gradient_energy(s.u, F.p);
        r.offset_energy_half = half_gradient_energy(offset, F.p);
        r.lux_grad_norm = gradient_luxemburg_norm(s.u, F.p, false);
        r.offset_lux_grad_norm = gradient_luxemburg_norm(offset, F.p, false);
        r.sup_dist_to_limit = sup_distance(s.u, lim.u, true);
        r.holder_seminorm_alpha = holder_seminorm(s.u, alpha, rep.dim, config.holder_pair_budget, config.seed);
        r.residual_sup = s.residual_sup;
        r.relative_residual = s.relative_residual;
        r.iterations = s.iterations;
        r.saturated_iterates = s.saturated_iterates;
        r.converged = s.converged;
        r.energy_bound_ok = r.energy_half <= rep.energy_bound + kBoundSlack &&
                            r.offset_energy_half <= rep.energy_bound + kBoundSlack;
        r.lux_bound_ok = r.lux_grad_norm <= rep.lux_bound + kBoundSlack &&
                         r.offset_lux_grad_norm <= rep.lux_bound + kBoundSlack;

        rep.verdicts.energy_bound_ok = rep.verdicts.energy_bound_ok && r.energy_bound_ok;
        rep.verdicts.lux_bound_ok = rep.verdicts.lux_bound_ok && r.lux_bound_ok;
        rep.verdicts.solvers_converged = rep.verdicts.solvers_converged && r.converged;
        rep.holder_max = std::max(rep.holder_max, r.holder_seminorm_alpha);
        rep.records.push_back(r);
    }

    for (std::size_t k = 1; k < rep.records.size(); ++k) {
        if (rep.records[k].j < config.j_first + 2 || rep.records[k - 1].j < config.j_first + 1) continue;
        if (rep.records[k].sup_dist_to_limit > rep.records[k - 1].sup_dist_to_limit + kMonotoneSlack)
            rep.verdicts.monotone_convergence_ok = false;
    }
    return rep;
}

double holder_seminorm(const ScalarField& u, double alpha, int dim, long pair_budget, std::uint64_t seed) {
    if (!(alpha > dim)) throw std::invalid_argument("holder_seminorm: alpha must exceed the dimension");
    if (pair_budget < 1) throw std::invalid_argument("holder_seminorm: pair budget must be positive");
    const Grid& g = *u.grid();
    const double expo = 1.0 - dim / alpha;
    std::vector<int> nodes;
    for (std::size_t k = 0; k < g.num_nodes(); ++k)
        if (g.is_active(static_cast<int>(k))) nodes.push_back(static_cast<int>(k));

    double best = 0.0;
    const auto visit = [&](int a, int b) {
        const Vec2 xa = g.coord(a);
        const Vec2 xb = g.coord(b);
        const double d = std::hypot(xa[0] - xb[0], xa[1] - xb[1]);
        if (d > 0.0) best = std::max(best, std::abs(u[a] - u[b]) / std::pow(d, expo));
    };

    const auto m = static_cast<long double>(nodes.size());
    if (m * (m - 1) / 2 <= static_cast<long double>(pair_budget)) {
        for (std::size_t a = 0; a < nodes.size(); ++a)
            for (std::size_t b = a + 1; b < nodes.size(); ++b) visit(nodes[a], nodes[b]);
        return best;
    }

    // Stratified sample: equal quotas per distance decade, log-uniform
    // distance inside the decade, uniform direction, snapped to the lattice.
    const Vec2 h = g.h();
    const double dmin = g.h_min();
    const double span_x = g.spec().upper[0] - g.spec().lower[0];
    const double span_y = dim == 1 ? 0.0 : g.spec().upper[1] - g.spec().lower[1];
    const double dmax = std::hypot(span_x, span_y);
    const int decades = std::max(1, static_cast<int>(std::ceil(std::log10(dmax / dmin) - 1e-12)));
    const long quota = std::max(1L, pair_budget / decades);

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int dec = 0; dec < decades; ++dec) {
        const double lo = std::log(dmin) + dec * std::log(10.0);
        const double hi = std::min(std::log(dmax), lo + std::log(10.0));
        long taken = 0;
        for (long attempt = 0; attempt < 8 * quota && taken < quota; ++attempt) {
            const int a = nodes[pick(rng)];
            const double r = std::exp(lo + (hi - lo) * unit(rng));
            const double theta = 2.0 * std::numbers::pi * unit(rng);
            const int di = static_cast<int>(std::lround(r * (dim == 1 ? (unit(rng) < 0.5 ? -1.0 : 1.0) : std::cos(theta)) / h[0]));
            const int dj = dim == 1 ? 0 : static_cast<int>(std::lround(r * std::sin(theta) / h[1]));
            const int b = g.neighbor(a, di, dj);
            if (b < 0 || b == a || !g.is_active(b)) continue;
            visit(a, b);
            ++taken;
        }
    }
    return best;
}

nlohmann::json to_json(const ConvergenceReport& r) {
    using nlohmann::json;
    json records = json::array();
    for (const JRecord& x : r.records) {
        records.push_back({{"j", x.j},
                           {"min_p", x.min_p},
                           {"max_p", x.max_p},
                           {"p_saturated", x.p_saturated},
                           {"energy_half", x.energy_half},
                           {"offset_energy_half", x.offset_energy_half},
                           {"lux_grad_norm", x.lux_grad_norm},
                           {"offset_lux_grad_norm", x.offset_lux_grad_norm},
                           {"sup_dist_to_limit", x.sup_dist_to_limit},
                           {"holder_seminorm_alpha", x.holder_seminorm_alpha},
                           {"residual_sup", x.residual_sup},
                           {"relative_residual", x.relative_residual},
                           {"iterations", x.iterations},
                           {"saturated_iterates", x.saturated_iterates},
                           {"converged", x.converged},
                           {"energy_bound_ok", x.energy_bound_ok},
                           {"lux_bound_ok", x.lux_bound_ok}});
    }
    return {{"name", r.name},
            {"dim", r.dim},
            {"measure", r.measure},
            {"alpha", r.alpha},
            {"energy_bound", r.energy_bound},
            {"lux_bound", r.lux_bound},
            {"lipschitz", r.lipschitz},
            {"lipschitz_ok", r.lipschitz_ok},
            {"admissible", r.admissible},
            {"records", records},
            {"limit",
             {{"residual_sup", r.limit.residual_sup},
              {"sweeps", r.limit.sweeps},
              {"policy_iterations", r.limit.policy_iterations},
              {"contract_violations", r.limit.contract_violations},
              {"refined", r.limit.refined},
              {"converged", r.limit.converged}}},
            {"holder_max", r.holder_max},
            {"verdicts",
             {{"energy_bound_ok", r.verdicts.energy_bound_ok},
              {"lux_bound_ok", r.verdicts.lux_bound_ok},
              {"monotone_convergence_ok", r.verdicts.monotone_convergence_ok},
              {"solvers_converged", r.verdicts.solvers_converged}}}};
}

ConvergenceReport report_from_json(const nlohmann::json& j) {
    ConvergenceReport r;
    j.at("name").get_to(r.name);
    j.at("dim").get_to(r.dim);
    j.at("measure").get_to(r.measure);
    j.at("alpha").get_to(r.alpha);
    j.at("energy_bound").get_to(r.energy_bound);
    j.at("lux_bound").get_to(r.lux_bound);
    j.at("lipschitz").get_to(r.lipschitz);
    j.at("lipschitz_ok").get_to(r.lipschitz_ok);
    j.at("admissible").get_to(r.admissible);
    for (const auto& x : j.at("records")) {
        JRecord k;
        x.at("j").get_to(k.j);
        x.at("min_p").get_to(k.min_p);
        x.at("max_p").get_to(k.max_p);
        x.at("p_saturated").get_to(k.p_saturated);
        x.at("energy_half").get_to(k.energy_half);
        x.at("offset_energy_half").get_to(k.offset_energy_half);
        x.at("lux_grad_norm").get_to(k.lux_grad_norm);
        x.at("offset_lux_grad_norm").get_to(k.offset_lux_grad_norm);
        x.at("sup_dist_to_limit").get_to(k.sup_dist_to_limit);
        x.at("holder_seminorm_alpha").get_to(k.holder_seminorm_alpha);
        x.at("residual_sup").get_to(k.residual_sup);
        x.at("relative_residual").get_to(k.relative_residual);
        x.at("iterations").get_to(k.iterations);
        x.at("saturated_iterates").get_to(k.saturated_iterates);
        x.at("converged").get_to(k.converged);
        x.at("energy_bound_ok").get_to(k.energy_bound_ok);
        x.at("lux_bound_ok").get_to(k.lux_bound_ok);
        r.records.push_back(k);
    }
    const auto& l = j.at("limit");
    l.at("residual_sup").get_to(r.limit.residual_sup);
    l.at("sweeps").get_to(r.limit.sweeps);
    l.at("policy_iterations").get_to(r.limit.policy_iterations);
    l.at("contract_violations").get_to(r.limit.contract_violations);
    l.at("refined").get_to(r.limit.refined);
    l.at("converged").get_to(r.limit.converged);
    j.at("holder_max").get_to(r.holder_max);
    const auto& v = j.at("verdicts");
    v.at("energy_bound_ok").get_to(r.verdicts.energy_bound_ok);
    v.at("lux_bound_ok").get_to(r.verdicts.lux_bound_ok);
    v.at("monotone_convergence_ok").get_to(r.verdicts.monotone_convergence_ok);
    v.at("solvers_converged").get_to(r.verdicts.solvers_converged);
    return r;
}

namespace {

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

const char* fmt(bool b) { return b ? "true" : "false"; }

void write_atomically(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        f << text;
        f.flush();
        if (!f) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

std::string report_csv(const ConvergenceReport& r) {
    std::ostringstream o;
    o << "j,min_p,max_p,p_saturated,energy_half,offset_energy_half,lux_grad_norm,offset_lux_grad_norm,"
         "sup_dist_to_limit,holder_seminorm_alpha,residual_sup,relative_residual,iterations,saturated_iterates,"
         "converged,energy_bound_ok,lux_bound_ok\n";
    for (const JRecord& x : r.records) {
        o << x.j << ',' << fmt(x.min_p) << ',' << fmt(x.max_p) << ',' << fmt(x.p_saturated) << ','
          << fmt(x.energy_half) << ',' << fmt(x.offset_energy_half) << ',' << fmt(x.lux_grad_norm) << ','
          << fmt(x.offset_lux_grad_norm) << ',' << fmt(x.sup_dist_to_limit) << ','
          << fmt(x.holder_seminorm_alpha) << ',' << fmt(x.residual_sup) << ',' << fmt(x.relative_residual) << ','
          << x.iterations << ',' << x.saturated_iterates << ',' << fmt(x.converged) << ','
          << fmt(x.energy_bound_ok) << ',' << fmt(x.lux_bound_ok) << '\n';
    }
    return o.str();
}

}  // namespace

std::vector<std::filesystem::path> emit_report(const ConvergenceReport& report, const std::filesystem::path& dir,
                                               const std::string& format) {
    if (format != "json" && format != "csv") throw std::invalid_argument("unknown report format '" + format + "'");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

    std::vector<std::filesystem::path> out;
    if (format == "json") {
        out.push_back(dir / "report.json");
        write_atomically(out.back(), to_json(report).dump(2) + "\n");
    } else {
        out.push_back(dir / "report.csv");
        write_atomically(out.back(), report_csv(report));
    }
    std::ostringstream plot;
    plot << "j,sup_dist_to_limit\n";
    for (const JRecord& x : report.records) plot << x.j << ',' << fmt(x.sup_dist_to_limit) << '\n';
    out.push_back(dir / "convergence_plot.csv");
    write_atomically(out.back(), plot.str());
    return out;
}

}  // namespace pxl
