#include "sublap/grid.hpp"

#include "sublap/error.hpp"

#include <cmath>
#include <string>

namespace sublap {

Chart2D make_chart(Interval x, Interval y, bool periodic_x, bool periodic_y)
{
    if (!(x.length() > 0.0) || !std::isfinite(x.length()))
        throw PreconditionError("chart: x interval must have positive finite length");
    if (!(y.length() > 0.0) || !std::isfinite(y.length()))
        throw PreconditionError("chart: y interval must have positive finite length");
    return Chart2D{x, y, periodic_x, periodic_y};
}

bool Grid2D::on_boundary(int i, int j) const noexcept
{
    if (!chart.periodic_x && (i == 0 || i == nx - 1))
        return true;
    if (!chart.periodic_y && (j == 0 || j == ny - 1))
        return true;
    return false;
}

Grid2D build_grid(const Chart2D& chart, int nx, int ny)
{
    if (nx < 3 || ny < 3)
        throw PreconditionError("build_grid: need at least 3 nodes per axis, got " +
                                std::to_string(nx) + "x" + std::to_string(ny));
    const Chart2D c = make_chart(chart.x, chart.y, chart.periodic_x, chart.periodic_y);
    Grid2D g;
    g.chart = c;
    g.nx = nx;
    g.ny = ny;
    g.hx = c.x.length() / (c.periodic_x ? nx : nx - 1);
    g.hy = c.y.length() / (c.periodic_y ? ny : ny - 1);
    return g;
}

GridFunction::GridFunction(Grid2D g, std::vector<double> v) : grid(g), values(std::move(v))
{
    if (values.size() != grid.node_count())
        throw GridMismatchError("grid function: " + std::to_string(values.size()) +
                                " values for " + std::to_string(grid.node_count()) + " nodes");
}

} // namespace sublap
