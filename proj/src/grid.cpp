#include "pxl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pxl {

std::string to_string(GridKind kind) {
    switch (kind) {
        case GridKind::Interval1D: return "interval_1d";
        case GridKind::Box2D: return "box_2d";
        case GridKind::Disk2D: return "disk_2d";
    }
    return "unknown";
}

GridKind grid_kind_from_string(const std::string& name) {
    if (name == "interval_1d") return GridKind::Interval1D;
    if (name == "box_2d") return GridKind::Box2D;
    if (name == "disk_2d") return GridKind::Disk2D;
    throw std::invalid_argument("unknown grid kind '" + name + "'");
}

namespace {

double dist(const Vec2& a, const Vec2& b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

Vec2 disk_center(const GridSpec& s) {
    return {0.5 * (s.lower[0] + s.upper[0]), 0.5 * (s.lower[1] + s.upper[1])};
}

double disk_radius(const GridSpec& s) {
    if (s.disk_radius > 0.0) return s.disk_radius;
    return 0.5 * std::min(s.upper[0] - s.lower[0], s.upper[1] - s.lower[1]);
}

// Whether a point belongs to the open region the grid discretizes.
bool in_region(const GridSpec& s, const Vec2& x) {
    if (s.kind == GridKind::Disk2D && !(dist(x, disk_center(s)) < disk_radius(s))) return false;
    if (s.mask && dist(x, s.mask->center) <= s.mask->radius) return false;
    return true;
}

}  // namespace

Grid::Grid(const GridSpec& spec) : spec_(spec) {
    const int n = spec.n;
    if (n < 3) throw std::invalid_argument("grid needs at least 3 nodes per axis");
    const int d = dim();
    for (int a = 0; a < d; ++a) {
        if (!(spec.upper[a] > spec.lower[a]) || !std::isfinite(spec.upper[a] - spec.lower[a]))
            throw std::invalid_argument("degenerate grid bounds");
        h_[a] = (spec.upper[a] - spec.lower[a]) / (n - 1);
    }
    if (d == 1 && spec.mask) throw std::invalid_argument("masks are only supported on 2D grids");
    if (spec.kind == GridKind::Disk2D) {
        const double r = disk_radius(spec);
        const Vec2 c = disk_center(spec);
        if (c[0] - r < spec.lower[0] || c[0] + r > spec.upper[0] || c[1] - r < spec.lower[1] ||
            c[1] + r > spec.upper[1])
            throw std::invalid_argument("disk does not fit in its bounding box");
    }

    const std::size_t total = d == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n;
    node_class_.assign(total, NodeClass::Exterior);
    dof_.assign(total, -1);

    // Interior: strictly inside the lattice and inside the region.
    for (std::size_t k = 0; k < total; ++k) {
        const int node = static_cast<int>(k);
        const int i = ix(node), j = iy(node);
        const bool lattice_inner = i > 0 && i < n - 1 && (d == 1 || (j > 0 && j < n - 1));
        if (lattice_inner && in_region(spec, coord(node))) node_class_[k] = NodeClass::Interior;
    }
    // Boundary: any non-interior node adjacent (8-neighborhood) to an interior node.
    for (std::size_t k = 0; k < total; ++k) {
        if (node_class_[k] != NodeClass::Interior) continue;
        const int node = static_cast<int>(k);
        for (int dj = (d == 1 ? 0 : -1); dj <= (d == 1 ? 0 : 1); ++dj)
            for (int di = -1; di <= 1; ++di) {
                const int nb = neighbor(node, di, dj);
                if (nb >= 0 && node_class_[static_cast<std::size_t>(nb)] == NodeClass::Exterior)
                    node_class_[static_cast<std::size_t>(nb)] = NodeClass::Boundary;
            }
    }
    for (std::size_t k = 0; k < total; ++k) {
        if (node_class_[k] == NodeClass::Interior) {
            dof_[k] = static_cast<int>(interior_.size());
            interior_.push_back(static_cast<int>(k));
        } else if (node_class_[k] == NodeClass::Boundary) {
            boundary_.push_back(static_cast<int>(k));
        }
    }
    if (interior_.empty()) throw std::invalid_argument("grid has no interior nodes");

    if (d == 1) {
        for (int i = 0; i + 1 < n; ++i) {
            Cell c;
            c.nodes = {i, i + 1, -1};
            c.count = 2;
            c.dir = {1.0, 0.0};
            c.center = {spec.lower[0] + (i + 0.5) * h_[0], 0.0};
            c.weight = h_[0];
            cells_.push_back(c);
        }
    } else {
        const double third = 1.0 / 3.0;
        for (int j = 0; j + 1 < n; ++j)
            for (int i = 0; i + 1 < n; ++i) {
                Cell lo;
                lo.nodes = {index(i, j), index(i + 1, j), index(i, j + 1)};
                lo.dir = {1.0, 1.0};
                lo.center = {spec.lower[0] + (i + third) * h_[0], spec.lower[1] + (j + third) * h_[1]};
                Cell up;
                up.nodes = {index(i + 1, j + 1), index(i, j + 1), index(i + 1, j)};
                up.dir = {-1.0, -1.0};
                up.center = {spec.lower[0] + (i + 1 - third) * h_[0], spec.lower[1] + (j + 1 - third) * h_[1]};
                for (Cell* c : {&lo, &up}) {
                    c->count = 3;
                    c->weight = 0.5 * h_[0] * h_[1];
                    const bool corners_ok = std::all_of(c->nodes.begin(), c->nodes.end(),
                                                        [&](int v) { return is_active(v); });
                    if (corners_ok && in_region(spec, c->center)) cells_.push_back(*c);
                }
            }
    }
    for (const Cell& c : cells_) measure_ += c.weight;

    // Every interior node must be seen by the energy.
    std::vector<char> touched(total, 0);
    for (const Cell& c : cells_)
        for (int k = 0; k < c.count; ++k)
            if (const int v = c.nodes[static_cast<std::size_t>(k)]; v >= 0) touched[static_cast<std::size_t>(v)] = 1;
    for (int v : interior_)
        if (!touched[static_cast<std::size_t>(v)])
            throw std::invalid_argument("interior node without an adjacent cell");
}

double Grid::h_min() const { return dim() == 1 ? h_[0] : std::min(h_[0], h_[1]); }

Vec2 Grid::coord(int node) const {
    return {spec_.lower[0] + ix(node) * h_[0], dim() == 1 ? 0.0 : spec_.lower[1] + iy(node) * h_[1]};
}

int Grid::neighbor(int node, int di, int dj) const {
    const int i = ix(node) + di;
    const int j = iy(node) + dj;
    if (i < 0 || i >= spec_.n) return -1;
    if (dim() == 1) return dj == 0 ? i : -1;
    if (j < 0 || j >= spec_.n) return -1;
    return index(i, j);
}

GridPtr build_grid(const GridSpec& spec) { return std::make_shared<const Grid>(spec); }

ScalarField::ScalarField(GridPtr grid, double fill) : grid_(std::move(grid)) {
    values_.assign(grid_->num_nodes(), fill);
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (!grid_->is_active(static_cast<int>(k))) values_[k] = kExteriorSentinel;
}

bool ScalarField::finite_on_active() const {
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (grid_->is_active(static_cast<int>(k)) && !std::isfinite(values_[k])) return false;
    return true;
}

bool same_grid(const GridPtr& a, const GridPtr& b) {
    if (a == b) return true;
    return a && b && *a == *b;
}

namespace {
void require_same(const ScalarField& a, const ScalarField& b) {
    if (!same_grid(a.grid(), b.grid())) throw std::invalid_argument("fields live on different grids");
}
}  // namespace

ScalarField& ScalarField::operator+=(const ScalarField& other) {
    require_same(*this, other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
    require_same(*this, other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

ScalarField& ScalarField::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

double sup_distance(const ScalarField& a, const ScalarField& b, bool interior_only) {
    require_same(a, b);
    const Grid& g = *a.grid();
    double m = 0.0;
    for (std::size_t k = 0; k < g.num_nodes(); ++k) {
        const int node = static_cast<int>(k);
        if (interior_only ? !g.is_interior(node) : !g.is_active(node)) continue;
        m = std::max(m, std::abs(a[node] - b[node]));
    }
    return m;
}

CellStencil cell_stencil(const Grid& grid, const Cell& cell) {
    CellStencil s;
    s.count = cell.count;
    s.nodes = cell.nodes;
    const double ax = cell.dir[0] / grid.h()[0];
    if (cell.count == 2) {
        s.coeff[0] = {-ax, 0.0};
        s.coeff[1] = {ax, 0.0};
        return s;
    }
    const double ay = cell.dir[1] / grid.h()[1];
    s.coeff[0] = {-ax, -ay};
    s.coeff[1] = {ax, 0.0};
    s.coeff[2] = {0.0, ay};
    return s;
}

Vec2 cell_gradient(const Grid& grid, const Cell& c, std::span<const double> u) {
    const auto at = [&](int k) { return u[static_cast<std::size_t>(c.nodes[static_cast<std::size_t>(k)])]; };
    const double gx = c.dir[0] * (at(1) - at(0)) / grid.h()[0];
    if (c.count == 2) return {gx, 0.0};
    return {gx, c.dir[1] * (at(2) - at(0)) / grid.h()[1]};
}

std::vector<CellGradient> cell_gradients(const ScalarField& u) {
    const Grid& grid = *u.grid();
    std::vector<CellGradient> out;
    out.reserve(grid.cells().size());
    for (std::size_t c = 0; c < grid.cells().size(); ++c) {
        const Cell& cell = grid.cells()[c];
        out.push_back({static_cast<int>(c), cell_gradient(grid, cell, u.values()), cell.weight});
    }
    return out;
}

ScalarField energy_divergence(const GridPtr& grid, std::span<const Vec2> flux) {
    if (flux.size() != grid->cells().size())
        throw std::invalid_argument("energy_divergence: one flux per cell required");
    ScalarField out(grid, 0.0);
    for (std::size_t c = 0; c < flux.size(); ++c) {
        const CellStencil s = cell_stencil(*grid, grid->cells()[c]);
        for (int k = 0; k < s.count; ++k) {
            const int node = s.nodes[static_cast<std::size_t>(k)];
            if (!grid->is_interior(node)) continue;
            const Vec2& a = s.coeff[static_cast<std::size_t>(k)];
            out[node] += a[0] * flux[c][0] + a[1] * flux[c][1];
        }
    }
    return out;
}

}  // namespace pxl
