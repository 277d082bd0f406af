#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "pxl/harness.hpp"

namespace pxl {

namespace {

#include "pxl_presets.inc"

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError("'" + key + "' expects a finite number, got '" + v + "'");
    return out;
}

long to_long(const std::string& key, const std::string& v) {
    long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("'" + key + "' expects an integer, got '" + v + "'");
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    const long l = to_long(key, v);
    if (l < -1000000000L || l > 1000000000L) throw ConfigError("'" + key + "' is out of range");
    return static_cast<int>(l);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("'" + key + "' expects true or false, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string& key, const std::string& value)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"name", [](RunConfig& c, const std::string&, const std::string& v) { c.name = v; }},
        {"domain.kind",
         [](RunConfig& c, const std::string&, const std::string& v) {
             try {
                 c.domain.kind = grid_kind_from_string(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(e.what());
             }
         }},
        {"domain.lower_x", [](RunConfig& c, const std::string& k, const std::string& v) { c.domain.lower[0] = to_double(k, v); }},
        {"domain.lower_y", [](RunConfig& c, const std::string& k, const std::string& v) { c.domain.lower[1] = to_double(k, v); }},
        {"domain.upper_x", [](RunConfig& c, const std::string& k, const std::string& v) { c.domain.upper[0] = to_double(k, v); }},
        {"domain.upper_y", [](RunConfig& c, const std::string& k, const std::string& v) { c.domain.upper[1] = to_double(k, v); }},
        {"domain.n", [](RunConfig& c, const std::string& k, const std::string& v) { c.domain.n = to_int(k, v); }},
        {"domain.radius", [](RunConfig& c, const std::string& k, const std::string& v) { c.domain.disk_radius = to_double(k, v); }},
        {"domain.mask.x",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             if (!c.domain.mask) c.domain.mask = Mask{};
             c.domain.mask->center[0] = to_double(k, v);
         }},
        {"domain.mask.y",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             if (!c.domain.mask) c.domain.mask = Mask{};
             c.domain.mask->center[1] = to_double(k, v);
         }},
        {"domain.mask.radius",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             if (!c.domain.mask) c.domain.mask = Mask{};
             c.domain.mask->radius = to_double(k, v);
         }},
        {"boundary.kind",
         [](RunConfig& c, const std::string&, const std::string& v) {
             static const std::set<std::string> kinds{"affine", "cone", "aronsson", "harmonic_poly"};
             if (!kinds.count(v)) throw ConfigError("unknown boundary.kind '" + v + "'");
             c.boundary.kind = v;
         }},
        {"boundary.a", [](RunConfig& c, const std::string& k, const std::string& v) { c.boundary.a = to_double(k, v); }},
        {"boundary.b", [](RunConfig& c, const std::string& k, const std::string& v) { c.boundary.b = to_double(k, v); }},
        {"boundary.c", [](RunConfig& c, const std::string& k, const std::string& v) { c.boundary.c = to_double(k, v); }},
        {"boundary.x0", [](RunConfig& c, const std::string& k, const std::string& v) { c.boundary.vertex[0] = to_double(k, v); }},
        {"boundary.y0", [](RunConfig& c, const std::string& k, const std::string& v) { c.boundary.vertex[1] = to_double(k, v); }},
        {"boundary.scale", [](RunConfig& c, const std::string& k, const std::string& v) { c.boundary.scale = to_double(k, v); }},
        {"exponent.family",
         [](RunConfig& c, const std::string&, const std::string& v) {
             try {
                 c.family = exponent_family_from_string(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(e.what());
             }
         }},
        {"exponent.c", [](RunConfig& c, const std::string& k, const std::string& v) { c.exponent.c = to_double(k, v); }},
        {"exponent.a", [](RunConfig& c, const std::string& k, const std::string& v) { c.exponent.a = to_double(k, v); }},
        {"exponent.x0", [](RunConfig& c, const std::string& k, const std::string& v) { c.exponent.center[0] = to_double(k, v); }},
        {"exponent.y0", [](RunConfig& c, const std::string& k, const std::string& v) { c.exponent.center[1] = to_double(k, v); }},
        {"exponent.j_first", [](RunConfig& c, const std::string& k, const std::string& v) { c.j_first = to_int(k, v); }},
        {"exponent.j_last", [](RunConfig& c, const std::string& k, const std::string& v) { c.j_last = to_int(k, v); }},
        {"alpha", [](RunConfig& c, const std::string& k, const std::string& v) { c.alpha = to_double(k, v); }},
        {"solver.tol", [](RunConfig& c, const std::string& k, const std::string& v) { c.solver.tol = to_double(k, v); }},
        {"solver.max_iter", [](RunConfig& c, const std::string& k, const std::string& v) { c.solver.max_iter = to_int(k, v); }},
        {"solver.method",
         [](RunConfig& c, const std::string&, const std::string& v) {
             try {
                 c.solver.method = minimize_method_from_string(v);
             } catch (const std::invalid_argument& e) {
                 throw ConfigError(e.what());
             }
         }},
        {"solver.continuation", [](RunConfig& c, const std::string& k, const std::string& v) { c.solver.continuation = to_bool(k, v); }},
        {"infinity.tol", [](RunConfig& c, const std::string& k, const std::string& v) { c.infinity_tol = to_double(k, v); }},
        {"infinity.max_sweeps", [](RunConfig& c, const std::string& k, const std::string& v) { c.infinity_max_sweeps = to_int(k, v); }},
        {"infinity.eps_grad", [](RunConfig& c, const std::string& k, const std::string& v) { c.eps_grad = to_double(k, v); }},
        {"infinity.stencil_radius", [](RunConfig& c, const std::string& k, const std::string& v) { c.stencil_radius = to_int(k, v); }},
        {"infinity.refine", [](RunConfig& c, const std::string& k, const std::string& v) { c.infinity_refine = to_bool(k, v); }},
        {"output.dir", [](RunConfig& c, const std::string&, const std::string& v) { c.out_dir = v; }},
        {"output.format",
         [](RunConfig& c, const std::string&, const std::string& v) {
             if (v != "json" && v != "csv") throw ConfigError("output.format must be json or csv");
             c.format = v;
         }},
        {"caps.exponent", [](RunConfig& c, const std::string& k, const std::string& v) { c.exponent_cap = to_double(k, v); }},
        {"holder.pair_budget", [](RunConfig& c, const std::string& k, const std::string& v) { c.holder_pair_budget = to_long(k, v); }},
        {"seed",
         [](RunConfig& c, const std::string& k, const std::string& v) {
             const long s = to_long(k, v);
             if (s < 0) throw ConfigError("seed must be non-negative");
             c.seed = static_cast<std::uint64_t>(s);
         }},
    };
    return table;
}

void validate(RunConfig& c) {
    if (c.domain.kind == GridKind::Interval1D) {
        c.domain.lower[1] = 0.0;
        c.domain.upper[1] = 0.0;
    }
    if (c.domain.n < 3) throw ConfigError("domain.n must be at least 3");
    if (c.domain.mask && !(c.domain.mask->radius > 0.0)) throw ConfigError("domain.mask.radius must be positive");
    if (c.j_first > c.j_last + 1) throw ConfigError("exponent.j_first exceeds exponent.j_last");
    if (!(c.solver.tol > 0.0)) throw ConfigError("solver.tol must be positive");
    if (c.solver.max_iter < 1) throw ConfigError("solver.max_iter must be positive");
    if (!(c.infinity_tol > 0.0)) throw ConfigError("infinity.tol must be positive");
    if (!(c.eps_grad > 0.0)) throw ConfigError("infinity.eps_grad must be positive");
    if (c.stencil_radius < 1) throw ConfigError("infinity.stencil_radius must be at least 1");
    if (c.infinity_max_sweeps < 1) throw ConfigError("infinity.max_sweeps must be positive");
    if (!(c.exponent_cap > 1.0)) throw ConfigError("caps.exponent must exceed 1");
    if (c.holder_pair_budget < 1) throw ConfigError("holder.pair_budget must be positive");
    const int dim = c.domain.kind == GridKind::Interval1D ? 1 : 2;
    if (c.alpha != 0.0 && !(c.alpha > dim)) throw ConfigError("alpha must exceed the dimension");
    if (c.boundary.kind == "aronsson" && dim != 2) throw ConfigError("aronsson data needs a 2D domain");
}

}  // namespace

const std::map<std::string, std::string>& preset_texts() {
    static const std::map<std::string, std::string> table(std::begin(kPresetTable), std::end(kPresetTable));
    return table;
}

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (!seen.insert(key).second) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty value for '" + key + "'");
        try {
            it->second(c, key, value);
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path_or_preset) {
    std::ifstream f(path_or_preset);
    if (f) {
        std::stringstream ss;
        ss << f.rdbuf();
        return parse_config(ss.str());
    }
    std::string name = path_or_preset;
    if (name == "cone_preset") name = "cone_square";
    if (name.size() > 7 && name.ends_with("_preset")) name.resize(name.size() - 7);
    const auto& presets = preset_texts();
    if (const auto it = presets.find(name); it != presets.end()) return parse_config(it->second);
    throw ConfigError("cannot read config '" + path_or_preset + "' (no such file or preset)");
}

double effective_alpha(const RunConfig& config) {
    if (config.alpha != 0.0) return config.alpha;
    return config.domain.kind == GridKind::Interval1D ? 2.0 : 3.0;
}

double boundary_value(const BoundarySpec& s, const Vec2& x) {
    if (s.kind == "affine") return s.a * x[0] + s.b * x[1] + s.c;
    if (s.kind == "cone") return s.scale * std::hypot(x[0] - s.vertex[0], x[1] - s.vertex[1]);
    if (s.kind == "aronsson") {
        const double a = std::cbrt(x[0]);
        const double b = std::cbrt(x[1]);
        return s.scale * (a * a * a * a - b * b * b * b);
    }
    if (s.kind == "harmonic_poly") return s.scale * (x[0] * x[0] - x[1] * x[1]);
    throw ConfigError("unknown boundary kind '" + s.kind + "'");
}

Vec2 boundary_gradient(const BoundarySpec& s, const Vec2& x) {
    if (s.kind == "affine") return {s.a, s.b};
    if (s.kind == "cone") {
        const double dx = x[0] - s.vertex[0];
        const double dy = x[1] - s.vertex[1];
        const double r = std::hypot(dx, dy);
        if (r == 0.0) return {0.0, 0.0};
        return {s.scale * dx / r, s.scale * dy / r};
    }
    if (s.kind == "aronsson") return {s.scale * 4.0 / 3.0 * std::cbrt(x[0]), -s.scale * 4.0 / 3.0 * std::cbrt(x[1])};
    if (s.kind == "harmonic_poly") return {2.0 * s.scale * x[0], -2.0 * s.scale * x[1]};
    throw ConfigError("unknown boundary kind '" + s.kind + "'");
}

ScalarField boundary_field(const BoundarySpec& spec, const GridPtr& grid) {
    if (spec.kind == "aronsson" && !(grid->spec().lower[0] > 0.0 && grid->spec().lower[1] > 0.0))
        throw ConfigError("aronsson data needs a domain off the coordinate axes");
    if (spec.kind == "cone") {
        for (std::size_t k = 0; k < grid->num_nodes(); ++k)
            if (grid->is_interior(static_cast<int>(k)) &&
                std::hypot(grid->coord(static_cast<int>(k))[0] - spec.vertex[0],
                           grid->coord(static_cast<int>(k))[1] - spec.vertex[1]) < 0.5 * grid->h_min())
                throw ConfigError("cone vertex lies inside the domain");
    }
    return ScalarField::from_function(grid, [&](const Vec2& x) { return boundary_value(spec, x); });
}

double lipschitz_constant(const BoundarySpec& spec, const Grid& grid) {
    double m = 0.0;
    const auto probe = [&](const Vec2& x) {
        const Vec2 g = boundary_gradient(spec, x);
        m = std::max(m, grid.dim() == 1 ? std::abs(g[0]) : std::hypot(g[0], g[1]));
    };
    for (std::size_t k = 0; k < grid.num_nodes(); ++k)
        if (grid.is_active(static_cast<int>(k))) probe(grid.coord(static_cast<int>(k)));
    for (const Cell& c : grid.cells()) probe(c.center);
    return m;
}

}  // namespace pxl
