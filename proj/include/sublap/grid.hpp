#pragma once

#include "sublap/error.hpp"

#include <cstddef>
#include <vector>

namespace sublap {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;

    double length() const noexcept { return hi - lo; }
    bool operator==(const Interval&) const = default;
};

/// Axis-aligned rectangular chart. A periodic axis identifies its endpoints.
struct Chart2D {
    Interval x;
    Interval y;
    bool periodic_x = false;
    bool periodic_y = false;

    bool operator==(const Chart2D&) const = default;
};

/// Throws PreconditionError unless both intervals have positive length.
Chart2D make_chart(Interval x, Interval y, bool periodic_x = false, bool periodic_y = false);

/// Uniform tensor grid on a chart. Node (i, j) has flat index i + nx * j.
///
/// On a non-periodic axis the nodes include both endpoints (h = L / (n - 1));
/// on a periodic axis the upper endpoint is the image of the lower one and is
/// not stored (h = L / n).
struct Grid2D {
    Chart2D chart;
    int nx = 0;
    int ny = 0;
    double hx = 0.0;
    double hy = 0.0;

    std::size_t node_count() const noexcept { return static_cast<std::size_t>(nx) * ny; }
    int index(int i, int j) const noexcept { return i + nx * j; }
    double x(int i) const noexcept { return chart.x.lo + i * hx; }
    double y(int j) const noexcept { return chart.y.lo + j * hy; }

    int cells_x() const noexcept { return chart.periodic_x ? nx : nx - 1; }
    int cells_y() const noexcept { return chart.periodic_y ? ny : ny - 1; }

    /// Node index along x of the (wrapped) neighbour i + 1.
    int next_x(int i) const noexcept { return i + 1 == nx ? 0 : i + 1; }
    int next_y(int j) const noexcept { return j + 1 == ny ? 0 : j + 1; }

    /// True for nodes on a non-periodic edge of the chart.
    bool on_boundary(int i, int j) const noexcept;

    bool operator==(const Grid2D&) const = default;
};

Grid2D build_grid(const Chart2D& chart, int nx, int ny);

/// Real values attached to every node of a grid.
struct GridFunction {
    Grid2D grid;
    std::vector<double> values;

    GridFunction() = default;
    GridFunction(Grid2D g, std::vector<double> v);
    explicit GridFunction(Grid2D g) : grid(g), values(g.node_count(), 0.0) {}

    double operator()(int i, int j) const { return values[grid.index(i, j)]; }
};

template <class F>
GridFunction sample(const Grid2D& g, F&& f)
{
    GridFunction u(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            u.values[g.index(i, j)] = f(g.x(i), g.y(j));
    return u;
}

} // namespace sublap
