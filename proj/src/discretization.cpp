#include "sublap/discretization.hpp"

#include "sublap/error.hpp"
#include "sublap/io.hpp"

#include <array>
#include <cmath>
#include <ostream>

namespace sublap {

namespace {

bool edge_is_periodic(Edge e, const Chart2D& c)
{
    return (e == Edge::x_min || e == Edge::x_max) ? c.periodic_x : c.periodic_y;
}

// Range of the coordinate that runs along edge e.
const Interval& along(Edge e, const Chart2D& c)
{
    return (e == Edge::x_min || e == Edge::x_max) ? c.y : c.x;
}

double edge_tol(Edge e, const Chart2D& c) { return 1e-12 * along(e, c).length(); }

bool covers(const BoundarySegment& s, const Chart2D& c, double coord)
{
    const double tol = edge_tol(s.edge, c);
    return coord >= s.range.lo - tol && coord <= s.range.hi + tol;
}

} // namespace

BoundarySpec BoundarySpec::all_dirichlet(const Chart2D& chart)
{
    BoundarySpec bc;
    if (!chart.periodic_x) {
        bc.segments.push_back({Edge::x_min, chart.y, Condition::dirichlet});
        bc.segments.push_back({Edge::x_max, chart.y, Condition::dirichlet});
    }
    if (!chart.periodic_y) {
        bc.segments.push_back({Edge::y_min, chart.x, Condition::dirichlet});
        bc.segments.push_back({Edge::y_max, chart.x, Condition::dirichlet});
    }
    return bc;
}

void validate(const BoundarySpec& bc, const Chart2D& chart)
{
    for (const auto& s : bc.segments) {
        if (edge_is_periodic(s.edge, chart))
            throw PreconditionError("boundary: segment placed on an edge of a periodic axis");
        if (!(s.range.lo <= s.range.hi))
            throw PreconditionError("boundary: segment range is empty");
        const Interval& full = along(s.edge, chart);
        const double tol = edge_tol(s.edge, chart);
        if (s.range.lo < full.lo - tol || s.range.hi > full.hi + tol)
            throw PreconditionError("boundary: segment range lies outside its edge");
    }
}

bool is_dirichlet_node(const BoundarySpec& bc, const Grid2D& g, int i, int j)
{
    for (const auto& s : bc.segments) {
        if (s.condition != Condition::dirichlet)
            continue;
        switch (s.edge) {
        case Edge::x_min:
            if (!g.chart.periodic_x && i == 0 && covers(s, g.chart, g.y(j)))
                return true;
            break;
        case Edge::x_max:
            if (!g.chart.periodic_x && i == g.nx - 1 && covers(s, g.chart, g.y(j)))
                return true;
            break;
        case Edge::y_min:
            if (!g.chart.periodic_y && j == 0 && covers(s, g.chart, g.x(i)))
                return true;
            break;
        case Edge::y_max:
            if (!g.chart.periodic_y && j == g.ny - 1 && covers(s, g.chart, g.x(i)))
                return true;
            break;
        }
    }
    return false;
}

GridFunction AssembledForms::expand(const Eigen::VectorXd& u) const
{
    if (u.size() != size())
        throw GridMismatchError("expand: vector length does not match active node count");
    GridFunction out(grid);
    for (int a = 0; a < size(); ++a)
        out.values[active_node[a]] = u[a];
    return out;
}

Eigen::VectorXd AssembledForms::restrict(const GridFunction& u) const
{
    if (!(u.grid == grid))
        throw GridMismatchError("restrict: grid function lives on a different grid");
    Eigen::VectorXd out(size());
    for (int a = 0; a < size(); ++a)
        out[a] = u.values[active_node[a]];
    return out;
}

AssembledForms assemble(const CCStructure& s, const Grid2D& g, const BoundarySpec& bc)
{
    if (!(s.chart == g.chart))
        throw GridMismatchError("assemble: grid chart does not match structure '" + s.name + "'");
    validate(bc, g.chart);

    AssembledForms f;
    f.grid = g;
    f.node_active.assign(g.node_count(), -1);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (!is_dirichlet_node(bc, g, i, j)) {
                f.node_active[g.index(i, j)] = static_cast<int>(f.active_node.size());
                f.active_node.push_back(g.index(i, j));
            }

    const int n = f.size();
    if (n == 0)
        throw PreconditionError("assemble: every node is Dirichlet");

    std::vector<double> node_rho(g.node_count());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            node_rho[g.index(i, j)] = s.rho(g.x(i), g.y(j));

    const double g0 = 0.5 - 0.5 / std::sqrt(3.0);
    const std::array<double, 2> gauss{g0, 1.0 - g0};
    const double qweight = 0.25 * g.hx * g.hy;

    std::vector<Eigen::Triplet<double, int>> upper;
    upper.reserve(static_cast<std::size_t>(g.cells_x()) * g.cells_y() * 10);
    std::vector<double> mass_full(g.node_count(), 0.0);

    for (int cj = 0; cj < g.cells_y(); ++cj) {
        for (int ci = 0; ci < g.cells_x(); ++ci) {
            const std::array<int, 4> nodes{g.index(ci, cj), g.index(g.next_x(ci), cj),
                                           g.index(ci, g.next_y(cj)),
                                           g.index(g.next_x(ci), g.next_y(cj))};
            const double x0 = g.x(ci);
            const double y0 = g.y(cj);

            std::array<std::array<double, 4>, 4> k{};
            for (double gs : gauss) {
                for (double gt : gauss) {
                    const double x = x0 + gs * g.hx;
                    const double y = y0 + gt * g.hy;
                    const double w = qweight * s.rho(x, y);
                    const std::array<double, 4> dnx{-(1.0 - gt) / g.hx, (1.0 - gt) / g.hx,
                                                    -gt / g.hx, gt / g.hx};
                    const std::array<double, 4> dny{-(1.0 - gs) / g.hy, -gs / g.hy,
                                                    (1.0 - gs) / g.hy, gs / g.hy};
                    for (int fi = 0; fi < s.m(); ++fi) {
                        const auto a = s.field(fi, x, y);
                        if (!std::isfinite(a[0]) || !std::isfinite(a[1]))
                            throw PreconditionError("assemble: non-finite field coefficient");
                        std::array<double, 4> d{};
                        for (int q = 0; q < 4; ++q)
                            d[q] = a[0] * dnx[q] + a[1] * dny[q];
                        for (int p = 0; p < 4; ++p)
                            for (int q = p; q < 4; ++q)
                                k[p][q] += w * d[p] * d[q];
                    }
                }
            }

            for (int p = 0; p < 4; ++p) {
                mass_full[nodes[p]] += 0.25 * g.hx * g.hy * node_rho[nodes[p]];
                const int ip = f.node_active[nodes[p]];
                if (ip < 0)
                    continue;
                for (int q = p; q < 4; ++q) {
                    const int iq = f.node_active[nodes[q]];
                    if (iq < 0)
                        continue;
                    upper.emplace_back(std::min(ip, iq), std::max(ip, iq), k[p][q]);
                }
            }
        }
    }

    SparseMatrix u(n, n);
    u.setFromTriplets(upper.begin(), upper.end());
    f.stiffness = u.selfadjointView<Eigen::Upper>();
    f.stiffness.makeCompressed();

    f.mass.resize(n);
    for (int a = 0; a < n; ++a)
        f.mass[a] = mass_full[f.active_node[a]];
    return f;
}

double rayleigh_quotient(const AssembledForms& f, const Eigen::VectorXd& u)
{
    if (u.size() != f.size())
        throw GridMismatchError("rayleigh_quotient: vector length does not match forms");
    const double den = u.dot(f.mass.cwiseProduct(u));
    if (!(den > 0.0))
        throw PreconditionError("rayleigh_quotient: zero vector");
    return u.dot(f.stiffness * u) / den;
}

void write_matrix_market(std::ostream& os, const SparseMatrix& a)
{
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
    for (int c = 0; c < a.outerSize(); ++c)
        for (SparseMatrix::InnerIterator it(a, c); it; ++it)
            os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << format_double(it.value()) << '\n';
}

void write_matrix_market(std::ostream& os, const Eigen::VectorXd& diagonal)
{
    os << "%%MatrixMarket matrix coordinate real general\n";
    os << diagonal.size() << ' ' << diagonal.size() << ' ' << diagonal.size() << '\n';
    for (Eigen::Index i = 0; i < diagonal.size(); ++i)
        os << i + 1 << ' ' << i + 1 << ' ' << format_double(diagonal[i]) << '\n';
}

} // namespace sublap
