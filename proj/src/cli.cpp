#include <iomanip>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "pxl/harness.hpp"

namespace pxl {

namespace {

struct Overrides {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<int> grid_n;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
};

RunConfig resolve(const Overrides& o) {
    if (o.config.empty()) throw ConfigError("--config is required");
    RunConfig c = load_config(o.config);
    if (o.out) c.out_dir = *o.out;
    if (o.format) c.format = *o.format;
    if (o.grid_n) {
        if (*o.grid_n < 3) throw ConfigError("--grid-n must be at least 3");
        c.domain.n = *o.grid_n;
    }
    if (o.tol) {
        if (!(*o.tol > 0.0)) throw ConfigError("--tol must be positive");
        c.solver.tol = *o.tol;
    }
    if (o.seed) c.seed = *o.seed;
    return c;
}

GridPtr make_grid(const RunConfig& c) {
    try {
        return build_grid(c.domain);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("domain: ") + e.what());
    }
}

ExponentSequence make_sequence(const RunConfig& c, const Grid& g) {
    try {
        return make_exponent_family(c.family, c.exponent, g, c.j_first, c.j_last, c.exponent_cap);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("exponent: ") + e.what());
    }
}

int run_solve_p(const RunConfig& c, int j, std::ostream& out) {
    const GridPtr g = make_grid(c);
    const ExponentSequence seq = make_sequence(c, *g);
    const CellExponents ce = cell_exponents(seq, j, *g);
    const EnergyFunctional F = make_energy(boundary_field(c.boundary, g), ce.p, ce.any_saturated);
    const Solution s = minimize(F, c.solver);
    out << std::setprecision(10) << "j = " << j << "\n"
        << "converged = " << (s.converged ? "true" : "false") << "\n"
        << "iterations = " << s.iterations << "\n"
        << "energy = " << s.energy << (s.energy_saturated ? " (saturated)" : "") << "\n"
        << "residual_sup = " << s.residual_sup << "\n"
        << "relative_residual = " << s.relative_residual << "\n";
    return s.converged ? 0 : 1;
}

int run_solve_inf(const RunConfig& c, std::ostream& out) {
    const GridPtr g = make_grid(c);
    const ExponentSequence seq = make_sequence(c, *g);
    InfinityProblem prob;
    prob.grid = g;
    prob.phi = boundary_field(c.boundary, g);
    prob.xi = make_xi_field(seq, g);
    prob.eps_grad = c.eps_grad;
    prob.tol = c.infinity_tol;
    prob.max_sweeps = c.infinity_max_sweeps;
    prob.stencil_radius = c.stencil_radius;
    prob.refine = c.infinity_refine;
    const InfinitySolution s = solve_infinity(prob);
    out << std::setprecision(10) << "converged = " << (s.converged ? "true" : "false") << "\n"
        << "refined = " << (s.refined ? "true" : "false") << "\n"
        << "sweeps = " << s.sweeps << "\n"
        << "policy_iterations = " << s.policy_iterations << "\n"
        << "residual_sup = " << s.residual_sup << "\n";
    return s.converged ? 0 : 1;
}

int run_converge(const RunConfig& c, std::ostream& out) {
    const ConvergenceReport r = run_sequence(c);
    out << std::setprecision(6) << std::left;
    out << std::setw(4) << "j" << std::setw(14) << "min_p" << std::setw(14) << "energy_half" << std::setw(14)
        << "lux_norm" << std::setw(14) << "sup_dist" << std::setw(8) << "iters" << "conv\n";
    for (const JRecord& x : r.records)
        out << std::setw(4) << x.j << std::setw(14) << x.min_p << std::setw(14) << x.energy_half << std::setw(14)
            << x.lux_grad_norm << std::setw(14) << x.sup_dist_to_limit << std::setw(8) << x.iterations
            << (x.converged ? "yes" : "no") << "\n";
    out << "limit: residual_sup = " << r.limit.residual_sup << ", sweeps = " << r.limit.sweeps
        << ", converged = " << (r.limit.converged ? "true" : "false") << "\n";
    out << "energy_bound_ok = " << r.verdicts.energy_bound_ok << ", lux_bound_ok = " << r.verdicts.lux_bound_ok
        << ", monotone_convergence_ok = " << r.verdicts.monotone_convergence_ok
        << ", solvers_converged = " << r.verdicts.solvers_converged << "\n";
    for (const auto& p : emit_report(r, c.out_dir, c.format)) out << "wrote " << p.string() << "\n";
    return r.all_ok() ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Variable-exponent p(x)-Laplacian solver and p -> infinity convergence harness", "pxl"};
    app.require_subcommand(1);
    app.fallthrough();

    Overrides o;
    app.add_option("--config", o.config, "Config file or preset name");
    app.add_option("--out", o.out, "Output directory");
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--grid-n", o.grid_n, "Override nodes per axis");
    app.add_option("--tol", o.tol, "Override solver tolerance");
    app.add_option("--seed", o.seed, "Seed for sampling and verify");

    int j = 0;
    auto* solve_p = app.add_subcommand("solve-p", "Solve a single u_j");
    solve_p->add_option("--j", j, "Exponent index")->required();
    auto* solve_inf = app.add_subcommand("solve-inf", "Solve the limit problem");
    auto* converge = app.add_subcommand("converge", "Run the full sequence and write reports");
    auto* verify = app.add_subcommand("verify", "Run the property and oracle suite");
    auto* presets = app.add_subcommand("presets", "List shipped presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (presets->parsed()) {
            for (const auto& [name, text] : preset_texts()) out << name << "\n";
            return 0;
        }
        if (verify->parsed()) {
            bool ok = true;
            for (const CheckResult& r : run_verify_suite(o.seed.value_or(1))) {
                out << (r.ok ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
                ok = ok && r.ok;
            }
            return ok ? 0 : 1;
        }
        const RunConfig c = resolve(o);
        if (solve_p->parsed()) return run_solve_p(c, j, out);
        if (solve_inf->parsed()) return run_solve_inf(c, out);
        if (converge->parsed()) return run_converge(c, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace pxl
