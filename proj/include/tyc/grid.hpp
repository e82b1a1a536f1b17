#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

namespace tyc {

// Uniform cell-centered rectangular grid, 1D or 2D, with zero-flux
// (reflecting) boundaries. Cell (i, j) has center
// ((i+1/2)hx, (j+1/2)hy) and every cell has the same volume.
struct Grid {
    int dim = 1;
    std::array<int, 2> cells{1, 1};      // nx, ny (ny == 1 in 1D)
    std::array<double, 2> extent{1, 1};  // Lx, Ly (Ly unused in 1D)
    std::array<double, 2> h{1, 1};       // hx, hy

    int nx() const { return cells[0]; }
    int ny() const { return cells[1]; }
    int cell_count() const { return cells[0] * cells[1]; }
    double cell_volume() const { return dim == 2 ? h[0] * h[1] : h[0]; }
    double domain_measure() const { return dim == 2 ? extent[0] * extent[1] : extent[0]; }
    int index(int i, int j = 0) const { return j * cells[0] + i; }
    double center_x(int i) const { return (i + 0.5) * h[0]; }
    double center_y(int j) const { return (j + 0.5) * h[1]; }
};

// Validates dim in {1,2}, positive extents, and at least 2 cells per
// axis; throws ConfigError otherwise.
Grid build_grid(int dim, std::span<const double> extents, std::span<const int> cells);

// Scalar field over the cells of a grid, stored x-fastest.
struct Field {
    std::vector<double> v;

    Field() = default;
    Field(const Grid& g, double fill) : v(static_cast<size_t>(g.cell_count()), fill) {}
    explicit Field(std::vector<double> values) : v(std::move(values)) {}

    size_t size() const { return v.size(); }
    bool empty() const { return v.empty(); }
    double& operator[](size_t i) { return v[i]; }
    double operator[](size_t i) const { return v[i]; }
    double* data() { return v.data(); }
    const double* data() const { return v.data(); }
};

// Discrete L2 norm sqrt(sum u_i^2 * vol). Throws on grid mismatch.
double l2_norm(const Field& u, const Grid& g);

// (min, max) over all cells. Throws on empty field.
std::pair<double, double> field_bounds(const Field& u);

// sum u_i * vol: the conserved quantity of the diffusion operator.
double field_mass(const Field& u, const Grid& g);

} // namespace tyc
