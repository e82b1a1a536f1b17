#include "tyc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tyc/errors.hpp"

namespace tyc {

Grid build_grid(int dim, std::span<const double> extents, std::span<const int> cells) {
    if (dim != 1 && dim != 2)
        throw ConfigError("grid.dim = " + std::to_string(dim) + ": dimension must be 1 or 2");
    if (static_cast<int>(extents.size()) != dim)
        throw ConfigError("grid.extents: expected " + std::to_string(dim) +
                          " entries, got " + std::to_string(extents.size()));
    if (static_cast<int>(cells.size()) != dim)
        throw ConfigError("grid.cells: expected " + std::to_string(dim) +
                          " entries, got " + std::to_string(cells.size()));

    Grid g;
    g.dim = dim;
    for (int a = 0; a < dim; ++a) {
        if (!std::isfinite(extents[a]) || extents[a] <= 0)
            throw ConfigError("grid.extents[" + std::to_string(a) + "] = " +
                              std::to_string(extents[a]) + ": extent must be positive");
        if (cells[a] < 2)
            throw ConfigError("grid.cells[" + std::to_string(a) + "] = " +
                              std::to_string(cells[a]) + ": need at least 2 cells per axis");
        g.extent[a] = extents[a];
        g.cells[a] = cells[a];
        g.h[a] = extents[a] / cells[a];
    }
    if (dim == 1) {
        g.cells[1] = 1;
        g.extent[1] = 1.0;
        g.h[1] = 1.0;
    }
    return g;
}

namespace {
void require_match(const Field& u, const Grid& g, const char* op) {
    if (static_cast<int>(u.size()) != g.cell_count())
        throw ConfigError(std::string(op) + ": field has " + std::to_string(u.size()) +
                          " values but the grid has " + std::to_string(g.cell_count()) +
                          " cells");
}
} // namespace

double l2_norm(const Field& u, const Grid& g) {
    require_match(u, g, "l2_norm");
    double acc = 0.0;
    for (double x : u.v)
        acc += x * x;
    return std::sqrt(acc * g.cell_volume());
}

std::pair<double, double> field_bounds(const Field& u) {
    if (u.empty())
        throw ConfigError("field_bounds: empty field");
    auto [lo, hi] = std::minmax_element(u.v.begin(), u.v.end());
    return {*lo, *hi};
}

double field_mass(const Field& u, const Grid& g) {
    require_match(u, g, "field_mass");
    double acc = 0.0;
    for (double x : u.v)
        acc += x;
    return acc * g.cell_volume();
}

} // namespace tyc
