#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "pxl/exponent.hpp"
#include "pxl/grid.hpp"
#include "pxl/infinity.hpp"
#include "pxl/plaplace.hpp"

namespace pxl {

/// Invalid or inconsistent run configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Builtin Dirichlet data:
///  affine        a x + b y + c
///  cone          scale |x - (x0, y0)|
///  aronsson      scale (x^{4/3} - y^{4/3})
///  harmonic_poly scale (x^2 - y^2)
struct BoundarySpec {
    std::string kind = "affine";
    double a = 1.0;
    double b = 0.0;
    double c = 0.0;
    Vec2 vertex{-0.5, -0.5};
    double scale = 1.0;

    bool operator==(const BoundarySpec&) const = default;
};

double boundary_value(const BoundarySpec& spec, const Vec2& x);
Vec2 boundary_gradient(const BoundarySpec& spec, const Vec2& x);
ScalarField boundary_field(const BoundarySpec& spec, const GridPtr& grid);
/// sup |grad phi| over active nodes and cell centers.
double lipschitz_constant(const BoundarySpec& spec, const Grid& grid);

struct RunConfig {
    std::string name = "custom";
    GridSpec domain;
    BoundarySpec boundary;
    ExponentFamily family = ExponentFamily::ConstantDoubling;
    ExponentParams exponent;
    int j_first = 0;
    int j_last = 6;
    /// 0 selects dim + 1.
    double alpha = 0.0;
    MinimizeOptions solver;
    double infinity_tol = 1e-8;
    int infinity_max_sweeps = 200000;
    double eps_grad = 1e-10;
    int stencil_radius = 1;
    bool infinity_refine = true;
    std::string out_dir = "out";
    std::string format = "json";
    double exponent_cap = kDefaultExponentCap;
    long holder_pair_budget = 200000;
    std::uint64_t seed = 1;
};

/// Parses the flat key = value format documented in docs/config.md.
RunConfig parse_config(const std::string& text);
/// Reads a config file, or a shipped preset when `path_or_preset` names one.
RunConfig load_config(const std::string& path_or_preset);

/// Shipped presets: name -> config text.
const std::map<std::string, std::string>& preset_texts();

double effective_alpha(const RunConfig& config);

struct JRecord {
    int j = 0;
    double min_p = 0.0;
    double max_p = 0.0;
    bool p_saturated = false;
    /// ∫|∇(u_j/2)|^p/p for the solution and for its zero-trace offset phi - u_j.
    double energy_half = 0.0;
    double offset_energy_half = 0.0;
    /// Unweighted Luxemburg norms of |∇u_j| and |∇(phi - u_j)|.
    double lux_grad_norm = 0.0;
    double offset_lux_grad_norm = 0.0;
    double sup_dist_to_limit = 0.0;
    double holder_seminorm_alpha = 0.0;
    double residual_sup = 0.0;
    double relative_residual = 0.0;
    int iterations = 0;
    int saturated_iterates = 0;
    bool converged = false;
    bool energy_bound_ok = false;
    bool lux_bound_ok = false;

    bool operator==(const JRecord&) const = default;
};

struct LimitRecord {
    double residual_sup = 0.0;
    int sweeps = 0;
    int policy_iterations = 0;
    int contract_violations = 0;
    bool refined = false;
    bool converged = false;

    bool operator==(const LimitRecord&) const = default;
};

struct Verdicts {
    bool energy_bound_ok = true;
    bool lux_bound_ok = true;
    bool monotone_convergence_ok = true;
    bool solvers_converged = true;

    bool operator==(const Verdicts&) const = default;
};

struct ConvergenceReport {
    std::string name;
    int dim = 1;
    double measure = 0.0;
    double alpha = 0.0;
    double energy_bound = 0.0;
    double lux_bound = 0.0;
    double lipschitz = 0.0;
    bool lipschitz_ok = false;
    bool admissible = false;
    std::vector<JRecord> records;
    LimitRecord limit;
    double holder_max = 0.0;
    Verdicts verdicts;

    bool operator==(const ConvergenceReport&) const = default;
    bool all_ok() const;
};

/// Solves every u_j and the limit problem and evaluates the bounds.
/// Throws ConfigError when the exponent family is not admissible.
ConvergenceReport run_sequence(const RunConfig& config);

/// max |u(x)-u(y)| / |x-y|^{1-dim/alpha} over node pairs: all pairs when
/// they fit in `pair_budget`, otherwise a seeded sample stratified by
/// distance decade. Throws std::invalid_argument if alpha <= dim.
double holder_seminorm(const ScalarField& u, double alpha, int dim, long pair_budget, std::uint64_t seed = 1);

nlohmann::json to_json(const ConvergenceReport& report);
ConvergenceReport report_from_json(const nlohmann::json& j);

/// Writes report.json or report.csv plus convergence_plot.csv into `dir`
/// (write-then-rename). Returns the paths written.
std::vector<std::filesystem::path> emit_report(const ConvergenceReport& report, const std::filesystem::path& dir,
                                               const std::string& format);

struct CheckResult {
    std::string name;
    bool ok = false;
    std::string detail;
};

/// Property and oracle checks run by `pxl verify`.
std::vector<CheckResult> run_verify_suite(std::uint64_t seed);

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace pxl
