#include "sublap/geometry.hpp"

#include "sublap/error.hpp"

#include <cmath>
#include <numbers>
#include <span>

namespace sublap {

namespace {

void require_compatible(const CCStructure& s, const Grid2D& g, const char* op)
{
    if (!(s.chart == g.chart))
        throw GridMismatchError(std::string(op) + ": grid chart does not match structure '" +
                                s.name + "'");
}

// Second-order derivative of a node array along one axis.
struct AxisDiff {
    int n;
    int stride;
    double h;
    bool periodic;

    double operator()(std::span<const double> f, int base, int i) const
    {
        auto at = [&](int k) { return f[base + k * stride]; };
        if (periodic) {
            const int ip = i + 1 == n ? 0 : i + 1;
            const int im = i == 0 ? n - 1 : i - 1;
            return (at(ip) - at(im)) / (2.0 * h);
        }
        if (i == 0)
            return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
        if (i == n - 1)
            return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h);
        return (at(i + 1) - at(i - 1)) / (2.0 * h);
    }
};

AxisDiff diff_x(const Grid2D& g) { return {g.nx, 1, g.hx, g.chart.periodic_x}; }
AxisDiff diff_y(const Grid2D& g) { return {g.ny, g.nx, g.hy, g.chart.periodic_y}; }

} // namespace

double CCStructure::rho(double x, double y) const
{
    const double r = density(x, y);
    if (!(r > 0.0) || !std::isfinite(r))
        throw PreconditionError("structure '" + name + "': density must be positive at (" +
                                std::to_string(x) + ", " + std::to_string(y) + ")");
    return r;
}

CCStructure make_structure(Chart2D chart, std::vector<FieldCoeffs> fields, ScalarField density,
                           std::string name)
{
    chart = make_chart(chart.x, chart.y, chart.periodic_x, chart.periodic_y);
    if (fields.empty())
        throw PreconditionError("structure: need at least one generating field");
    for (const auto& f : fields)
        if (!f.ax || !f.ay)
            throw PreconditionError("structure: empty coefficient function");
    if (!density)
        throw PreconditionError("structure: empty density function");
    CCStructure s;
    s.chart = chart;
    s.fields = std::move(fields);
    s.density = std::move(density);
    s.name = std::move(name);
    return s;
}

CCStructure builtin_grushin_cylinder()
{
    const Chart2D chart{{0.0, 1.0}, {0.0, 2.0 * std::numbers::pi}, false, true};
    std::vector<FieldCoeffs> fields{
        {[](double, double) { return 1.0; }, [](double, double) { return 0.0; }},
        {[](double, double) { return 0.0; }, [](double x, double) { return x; }},
    };
    auto s = make_structure(chart, std::move(fields), [](double, double) { return 1.0; },
                            "grushin_cylinder");
    s.kind = StructureKind::grushin_cylinder;
    return s;
}

CCStructure builtin_euclidean(Interval x_range, Interval y_range)
{
    std::vector<FieldCoeffs> fields{
        {[](double, double) { return 1.0; }, [](double, double) { return 0.0; }},
        {[](double, double) { return 0.0; }, [](double, double) { return 1.0; }},
    };
    auto s = make_structure(make_chart(x_range, y_range), std::move(fields),
                            [](double, double) { return 1.0; }, "euclidean");
    s.kind = StructureKind::euclidean;
    return s;
}

double HorizontalField::squared_norm(std::size_t k) const
{
    double s = 0.0;
    for (const auto& p : phi)
        s += p[k] * p[k];
    return s;
}

HorizontalField sample_field(const Grid2D& g, const std::vector<ScalarField>& phi)
{
    HorizontalField v{g, {}};
    for (const auto& f : phi)
        v.phi.push_back(sample(g, f).values);
    return v;
}

HorizontalField horizontal_gradient(const CCStructure& s, const GridFunction& u)
{
    const Grid2D& g = u.grid;
    require_compatible(s, g, "horizontal_gradient");
    const auto dx = diff_x(g);
    const auto dy = diff_y(g);
    std::span<const double> f(u.values);

    HorizontalField out{g, std::vector<std::vector<double>>(s.m(), std::vector<double>(g.node_count()))};
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const double ux = dx(f, g.nx * j, i);
            const double uy = dy(f, i, j);
            const int k = g.index(i, j);
            for (int f_i = 0; f_i < s.m(); ++f_i) {
                const auto a = s.field(f_i, g.x(i), g.y(j));
                out.phi[f_i][k] = a[0] * ux + a[1] * uy;
            }
        }
    }
    return out;
}

GridFunction divergence(const CCStructure& s, const HorizontalField& v)
{
    const Grid2D& g = v.grid;
    require_compatible(s, g, "divergence");
    if (v.m() != s.m())
        throw GridMismatchError("divergence: field has " + std::to_string(v.m()) +
                                " coefficients, structure has " + std::to_string(s.m()));

    std::vector<double> fx(g.node_count()), fy(g.node_count()), rho(g.node_count());
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            const double r = s.rho(g.x(i), g.y(j));
            double cx = 0.0, cy = 0.0;
            for (int f_i = 0; f_i < s.m(); ++f_i) {
                const auto a = s.field(f_i, g.x(i), g.y(j));
                cx += v.phi[f_i][k] * a[0];
                cy += v.phi[f_i][k] * a[1];
            }
            fx[k] = r * cx;
            fy[k] = r * cy;
            rho[k] = r;
        }
    }

    const auto dx = diff_x(g);
    const auto dy = diff_y(g);
    GridFunction out(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            out.values[k] = (dx(fx, g.nx * j, i) + dy(fy, i, j)) / rho[k];
        }
    return out;
}

GridFunction sub_laplacian_apply(const CCStructure& s, const GridFunction& u)
{
    return divergence(s, horizontal_gradient(s, u));
}

} // namespace sublap
