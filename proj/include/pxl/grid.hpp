#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pxl {

using Vec2 = std::array<double, 2>;

enum class GridKind { Interval1D, Box2D, Disk2D };

enum class NodeClass : std::uint8_t { Interior, Boundary, Exterior };

std::string to_string(GridKind kind);
GridKind grid_kind_from_string(const std::string& name);

/// Circular mask removed from a 2D domain. Masked nodes become Dirichlet
/// boundary nodes when they touch the interior, exterior otherwise.
struct Mask {
    Vec2 center{0.0, 0.0};
    double radius = 0.0;

    bool operator==(const Mask&) const = default;
};

struct GridSpec {
    GridKind kind = GridKind::Box2D;
    Vec2 lower{0.0, 0.0};
    Vec2 upper{1.0, 1.0};
    int n = 33;
    /// Disk2D only; 0 selects the circle inscribed in the bounding box.
    double disk_radius = 0.0;
    std::optional<Mask> mask;

    bool operator==(const GridSpec&) const = default;
};

/// One quadrature cell: an edge in 1D, a right triangle in 2D (each lattice
/// square is split along its anti-diagonal). nodes[0] is the right-angle
/// vertex, nodes[1] its x-neighbour and nodes[2] its y-neighbour; `dir`
/// holds the sign of the step from nodes[0] to each neighbour.
struct Cell {
    std::array<int, 3> nodes{-1, -1, -1};
    int count = 0;
    Vec2 dir{1.0, 1.0};
    Vec2 center{0.0, 0.0};
    double weight = 0.0;
};

class Grid {
public:
    explicit Grid(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    GridKind kind() const { return spec_.kind; }
    int dim() const { return spec_.kind == GridKind::Interval1D ? 1 : 2; }
    /// Nodes per axis.
    int n() const { return spec_.n; }
    const Vec2& h() const { return h_; }
    double h_min() const;
    std::size_t num_nodes() const { return node_class_.size(); }

    int index(int i, int j = 0) const { return j * spec_.n + i; }
    int ix(int node) const { return node % spec_.n; }
    int iy(int node) const { return dim() == 1 ? 0 : node / spec_.n; }
    Vec2 coord(int node) const;

    NodeClass node_class(int node) const { return node_class_[static_cast<std::size_t>(node)]; }
    bool is_interior(int node) const { return node_class(node) == NodeClass::Interior; }
    bool is_active(int node) const { return node_class(node) != NodeClass::Exterior; }

    const std::vector<int>& interior_nodes() const { return interior_; }
    const std::vector<int>& boundary_nodes() const { return boundary_; }
    /// Position of `node` in interior_nodes(), or -1.
    int dof(int node) const { return dof_[static_cast<std::size_t>(node)]; }

    const std::vector<Cell>& cells() const { return cells_; }
    /// Discrete measure of the domain: sum of cell weights.
    double measure() const { return measure_; }

    /// Node with offset (di, dj) from `node`, or -1 if it leaves the lattice.
    int neighbor(int node, int di, int dj = 0) const;

    bool operator==(const Grid& other) const { return spec_ == other.spec_; }

private:
    GridSpec spec_;
    Vec2 h_{0.0, 0.0};
    std::vector<NodeClass> node_class_;
    std::vector<int> interior_;
    std::vector<int> boundary_;
    std::vector<int> dof_;
    std::vector<Cell> cells_;
    double measure_ = 0.0;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Validates and builds a grid. Throws std::invalid_argument on n < 3,
/// degenerate bounds, or a disk/mask layout that leaves no interior.
GridPtr build_grid(const GridSpec& spec);

/// Value stored at exterior nodes. Reading it is always a bug.
inline constexpr double kExteriorSentinel = std::numeric_limits<double>::quiet_NaN();

class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(GridPtr grid, double fill = 0.0);

    template <class F>
    static ScalarField from_function(GridPtr grid, F&& f) {
        ScalarField out(grid);
        for (std::size_t k = 0; k < grid->num_nodes(); ++k) {
            const int node = static_cast<int>(k);
            if (grid->is_active(node)) out.values_[k] = f(grid->coord(node));
        }
        return out;
    }

    const GridPtr& grid() const { return grid_; }
    std::span<double> values() { return values_; }
    std::span<const double> values() const { return values_; }
    double& operator[](int node) { return values_[static_cast<std::size_t>(node)]; }
    double operator[](int node) const { return values_[static_cast<std::size_t>(node)]; }

    /// True when every interior and boundary value is finite.
    bool finite_on_active() const;

    ScalarField& operator+=(const ScalarField& other);
    ScalarField& operator-=(const ScalarField& other);
    ScalarField& operator*=(double s);

private:
    GridPtr grid_;
    std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

bool same_grid(const GridPtr& a, const GridPtr& b);

/// max |a - b| over the given node classes.
double sup_distance(const ScalarField& a, const ScalarField& b, bool interior_only = false);

struct CellGradient {
    int cell = -1;
    Vec2 g{0.0, 0.0};
    double weight = 0.0;
};

/// Coefficients d g / d u(node) for every corner of a cell.
struct CellStencil {
    int count = 0;
    std::array<int, 3> nodes{};
    std::array<Vec2, 3> coeff{};
};

CellStencil cell_stencil(const Grid& grid, const Cell& cell);

/// Gradient of the piecewise-linear interpolant of u on each cell.
/// Exact for affine u; for a quadratic energy it yields the 5-point stencil.
std::vector<CellGradient> cell_gradients(const ScalarField& u);

/// Gradient of a single cell (used by hot loops that avoid allocation).
Vec2 cell_gradient(const Grid& grid, const Cell& cell, std::span<const double> u);

/// Exact transpose of cell_gradients: returns sum_c (dg_c/du_node)^T flux_c
/// at interior nodes (0 at boundary nodes, sentinel at exterior nodes).
/// Each flux is expected to already carry its cell weight, so that for
/// F(u) = sum_c w_c f(g_c) the energy gradient is
/// energy_divergence({w_c f'(g_c)}).
ScalarField energy_divergence(const GridPtr& grid, std::span<const Vec2> flux);

}  // namespace pxl
