#include "sublap/cheeger.hpp"

#include "sublap/error.hpp"
#include "sublap/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace sublap {

namespace {

double wrap(double v, const Interval& r)
{
    const double len = r.length();
    double w = std::fmod(v - r.lo, len);
    if (w < 0.0)
        w += len;
    return r.lo + w;
}

Point2 to_chart(const Chart2D& c, Point2 p)
{
    return {c.periodic_x ? wrap(p.x, c.x) : p.x, c.periodic_y ? wrap(p.y, c.y) : p.y};
}

void require_inside(const Chart2D& c, Point2 p)
{
    const double tx = 1e-9 * c.x.length();
    const double ty = 1e-9 * c.y.length();
    const bool ok_x = c.periodic_x || (p.x >= c.x.lo - tx && p.x <= c.x.hi + tx);
    const bool ok_y = c.periodic_y || (p.y >= c.y.lo - ty && p.y <= c.y.hi + ty);
    if (!ok_x || !ok_y || !std::isfinite(p.x) || !std::isfinite(p.y))
        throw PreconditionError("horizontal_perimeter: segment endpoint (" + std::to_string(p.x) + ", " +
                                std::to_string(p.y) + ") lies outside the chart");
}

double segment_perimeter(const CCStructure& s, const Segment& seg)
{
    const double dx = seg.b.x - seg.a.x;
    const double dy = seg.b.y - seg.a.y;
    const double len = std::hypot(dx, dy);
    if (len == 0.0)
        return 0.0;
    const Point2 normal{dy / len, -dx / len};

    auto midpoint_rule = [&](int pieces) {
        double sum = 0.0;
        for (int q = 0; q < pieces; ++q) {
            const double tau = (q + 0.5) / pieces;
            sum += perimeter_integrand(s, to_chart(s.chart, {seg.a.x + tau * dx, seg.a.y + tau * dy}), normal);
        }
        return sum * len / pieces;
    };

    int pieces = 1;
    double prev = midpoint_rule(pieces);
    for (int level = 0; level < 24; ++level) {
        pieces *= 2;
        const double next = midpoint_rule(pieces);
        if (std::abs(next - prev) <= 1e-6 * std::abs(next) || std::abs(next) < 1e-300)
            return next;
        prev = next;
    }
    return prev;
}

struct CellCorners {
    std::array<Point2, 4> p; // (i,j), (i+1,j), (i,j+1), (i+1,j+1)
    std::array<double, 4> u;
};

CellCorners corners(const GridFunction& u, int ci, int cj)
{
    const Grid2D& g = u.grid;
    const double x0 = g.x(ci);
    const double y0 = g.y(cj);
    const int i1 = g.next_x(ci);
    const int j1 = g.next_y(cj);
    return {{Point2{x0, y0}, Point2{x0 + g.hx, y0}, Point2{x0, y0 + g.hy}, Point2{x0 + g.hx, y0 + g.hy}},
            {u(ci, cj), u(i1, cj), u(ci, j1), u(i1, j1)}};
}

void contour_cell(const CellCorners& c, double t, std::vector<Segment>& out)
{
    // Corners walked counter-clockwise: 0, 1, 3, 2.
    static constexpr std::array<int, 4> ring{0, 1, 3, 2};
    std::array<bool, 4> in{};
    for (int q = 0; q < 4; ++q)
        in[q] = c.u[q] > t;
    if (in[0] == in[1] && in[1] == in[2] && in[2] == in[3])
        return;

    // Crossing on ring edge e (between ring[e] and ring[e + 1]).
    std::array<Point2, 4> cross{};
    std::array<bool, 4> has{};
    for (int e = 0; e < 4; ++e) {
        const int a = ring[e];
        const int b = ring[(e + 1) % 4];
        if (in[a] == in[b])
            continue;
        const double f = (t - c.u[a]) / (c.u[b] - c.u[a]);
        cross[e] = {c.p[a].x + f * (c.p[b].x - c.p[a].x), c.p[a].y + f * (c.p[b].y - c.p[a].y)};
        has[e] = true;
    }

    auto emit = [&](int e0, int e1) {
        const Segment seg{cross[e0], cross[e1]};
        if (seg.a.x != seg.b.x || seg.a.y != seg.b.y)
            out.push_back(seg);
    };

    const int n_cross = static_cast<int>(std::count(has.begin(), has.end(), true));
    if (n_cross == 2) {
        int e0 = -1, e1 = -1;
        for (int e = 0; e < 4; ++e)
            if (has[e])
                (e0 < 0 ? e0 : e1) = e;
        emit(e0, e1);
        return;
    }

    // Saddle: ring corners 0 and 2 share a state, 1 and 3 the other.
    // Edge e is adjacent to ring corners e and e + 1.
    const double centre = 0.25 * (c.u[0] + c.u[1] + c.u[2] + c.u[3]);
    const bool centre_in = centre > t;
    if (centre_in == in[ring[0]]) {
        // Ring corners 0 and 2 are joined through the centre; isolate 1 and 3.
        emit(0, 1);
        emit(2, 3);
    } else {
        emit(3, 0);
        emit(1, 2);
    }
}

double bilinear(const CellCorners& c, double s, double r)
{
    return (1 - s) * (1 - r) * c.u[0] + s * (1 - r) * c.u[1] + (1 - s) * r * c.u[2] + s * r * c.u[3];
}

} // namespace

const char* to_string(CutKind kind) noexcept
{
    switch (kind) {
    case CutKind::level_set: return "level_set";
    case CutKind::vertical_circle: return "vertical_circle";
    case CutKind::line_pair: return "line_pair";
    case CutKind::custom: return "custom";
    }
    return "custom";
}

const char* to_string(CertificateMode mode) noexcept
{
    return mode == CertificateMode::dirichlet ? "dirichlet" : "neumann";
}

const char* to_string(InequalityKind kind) noexcept
{
    switch (kind) {
    case InequalityKind::dirichlet: return "dirichlet";
    case InequalityKind::neumann: return "neumann";
    case InequalityKind::mixed: return "mixed";
    }
    return "dirichlet";
}

Cut make_cut(std::vector<Segment> segments, double sigma, double vol1, double vol2, CutKind kind,
             double parameter)
{
    Cut c;
    c.segments = std::move(segments);
    c.sigma = sigma;
    c.vol1 = vol1;
    c.vol2 = vol2;
    c.kind = kind;
    c.parameter = parameter;
    const double small = std::min(vol1, vol2);
    c.ratio = small > 0.0 ? sigma / small : std::numeric_limits<double>::infinity();
    return c;
}

double perimeter_integrand(const CCStructure& s, Point2 p, Point2 unit_normal)
{
    double sum = 0.0;
    for (int i = 0; i < s.m(); ++i) {
        const auto a = s.field(i, p.x, p.y);
        const double c = a[0] * unit_normal.x + a[1] * unit_normal.y;
        sum += c * c;
    }
    return s.rho(p.x, p.y) * std::sqrt(sum);
}

double horizontal_perimeter(const CCStructure& s, std::span<const Segment> segments)
{
    for (const auto& seg : segments) {
        require_inside(s.chart, seg.a);
        require_inside(s.chart, seg.b);
    }
    double total = 0.0;
    for (const auto& seg : segments)
        total += segment_perimeter(s, seg);
    return total;
}

double region_volume(const CCStructure& s, const Grid2D& g, std::span<const double> cell_fraction)
{
    const std::size_t cells = static_cast<std::size_t>(g.cells_x()) * g.cells_y();
    if (cell_fraction.size() != cells)
        throw GridMismatchError("region_volume: mask size does not match the cell count");
    double vol = 0.0;
    for (int cj = 0; cj < g.cells_y(); ++cj)
        for (int ci = 0; ci < g.cells_x(); ++ci) {
            const double f = cell_fraction[ci + static_cast<std::size_t>(g.cells_x()) * cj];
            if (f != 0.0)
                vol += f * s.rho(g.x(ci) + 0.5 * g.hx, g.y(cj) + 0.5 * g.hy) * g.hx * g.hy;
        }
    return vol;
}

double total_volume(const CCStructure& s, const Grid2D& g)
{
    const std::vector<double> ones(static_cast<std::size_t>(g.cells_x()) * g.cells_y(), 1.0);
    return region_volume(s, g, ones);
}

std::vector<Segment> level_set_contour(const GridFunction& u, double t)
{
    const Grid2D& g = u.grid;
    std::vector<Segment> out;
    for (int cj = 0; cj < g.cells_y(); ++cj)
        for (int ci = 0; ci < g.cells_x(); ++ci)
            contour_cell(corners(u, ci, cj), t, out);
    return out;
}

std::vector<double> superlevel_fraction(const GridFunction& u, double t)
{
    constexpr int sub = 8;
    const Grid2D& g = u.grid;
    std::vector<double> frac(static_cast<std::size_t>(g.cells_x()) * g.cells_y(), 0.0);
    for (int cj = 0; cj < g.cells_y(); ++cj) {
        for (int ci = 0; ci < g.cells_x(); ++ci) {
            const auto c = corners(u, ci, cj);
            const int above = static_cast<int>(std::count_if(c.u.begin(), c.u.end(), [t](double v) { return v > t; }));
            double f = 0.0;
            if (above == 4) {
                f = 1.0;
            } else if (above > 0) {
                int hits = 0;
                for (int a = 0; a < sub; ++a)
                    for (int b = 0; b < sub; ++b)
                        hits += bilinear(c, (a + 0.5) / sub, (b + 0.5) / sub) > t ? 1 : 0;
                f = static_cast<double>(hits) / (sub * sub);
            } else {
                // All corners at or below t; the interpolant cannot exceed t.
                f = 0.0;
            }
            frac[ci + static_cast<std::size_t>(g.cells_x()) * cj] = f;
        }
    }
    return frac;
}

Cut cut_from_level_set(const CCStructure& s, const GridFunction& u, double t)
{
    if (!(s.chart == u.grid.chart))
        throw GridMismatchError("cut_from_level_set: grid chart does not match structure");
    const auto [lo, hi] = std::minmax_element(u.values.begin(), u.values.end());
    if (!(t > *lo && t < *hi))
        throw PreconditionError("cut_from_level_set: level must lie strictly between min and max of u");

    auto segments = level_set_contour(u, t);
    const double sigma = horizontal_perimeter(s, segments);
    const auto frac = superlevel_fraction(u, t);
    std::vector<double> rest(frac.size());
    std::transform(frac.begin(), frac.end(), rest.begin(), [](double f) { return 1.0 - f; });
    const double v1 = region_volume(s, u.grid, frac);
    const double v2 = region_volume(s, u.grid, rest);
    return make_cut(std::move(segments), sigma, v1, v2, CutKind::level_set, t);
}

Cut sweep_level_sets(const CCStructure& s, const GridFunction& u, int n_levels)
{
    if (n_levels < 1)
        throw PreconditionError("sweep_level_sets: need at least one level");
    std::vector<double> sorted = u.values;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.empty() || !(sorted.front() < 0.0 && sorted.back() > 0.0))
        throw PreconditionError("sweep_level_sets: u must change sign");

    const std::size_t last = sorted.size() - 1;
    Cut best;
    best.ratio = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= n_levels; ++k) {
        const double q = static_cast<double>(k) / (n_levels + 1);
        const double t = sorted[static_cast<std::size_t>(std::lround(q * static_cast<double>(last)))];
        if (!(t > sorted.front() && t < sorted.back()))
            continue;
        Cut c = cut_from_level_set(s, u, t);
        if (c.ratio < best.ratio)
            best = std::move(c);
    }
    if (!std::isfinite(best.ratio))
        throw PreconditionError("sweep_level_sets: no admissible level");
    return best;
}

std::vector<Cut> candidate_cuts_grushin(const CCStructure& s, const Grid2D& g)
{
    if (s.kind != StructureKind::grushin_cylinder)
        throw PreconditionError("candidate_cuts_grushin: structure '" + s.name + "' is not the Grushin cylinder");
    if (!(s.chart == g.chart))
        throw GridMismatchError("candidate_cuts_grushin: grid chart does not match structure");

    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<Cut> cuts;
    for (int i = 1; i + 1 < g.nx; ++i) {
        const double h = g.x(i);
        std::vector<Segment> segs{{{h, 0.0}, {h, two_pi}}};
        const double sigma = horizontal_perimeter(s, segs);
        cuts.push_back(make_cut(std::move(segs), sigma, two_pi * h, two_pi * (1.0 - h),
                                CutKind::vertical_circle, h));
    }
    for (int j = 0; j < g.ny && g.y(j) < std::numbers::pi; ++j) {
        const double y0 = g.y(j);
        std::vector<Segment> segs{{{0.0, y0}, {1.0, y0}}, {{0.0, y0 + std::numbers::pi}, {1.0, y0 + std::numbers::pi}}};
        const double sigma = horizontal_perimeter(s, segs);
        cuts.push_back(make_cut(std::move(segs), sigma, std::numbers::pi, std::numbers::pi, CutKind::line_pair, y0));
    }
    return cuts;
}

const Cut& best_cut(std::span<const Cut> cuts)
{
    if (cuts.empty())
        throw PreconditionError("best_cut: no cuts");
    return *std::min_element(cuts.begin(), cuts.end(),
                             [](const Cut& a, const Cut& b) { return a.ratio < b.ratio; });
}

DirichletUpperBound dirichlet_cheeger_upper(const CCStructure& s, const GridFunction& u_in, int n_levels)
{
    if (n_levels < 1)
        throw PreconditionError("dirichlet_cheeger_upper: need at least one level");
    if (!(s.chart == u_in.grid.chart))
        throw GridMismatchError("dirichlet_cheeger_upper: grid chart does not match structure");
    const Grid2D& g = u_in.grid;

    GridFunction u = u_in;
    const auto [lo, hi] = std::minmax_element(u.values.begin(), u.values.end());
    if (-*lo > *hi)
        for (double& v : u.values)
            v = -v;
    double umax = 0.0;
    for (double v : u.values)
        umax = std::max(umax, std::abs(v));
    if (!(umax > 0.0))
        throw PreconditionError("dirichlet_cheeger_upper: u vanishes identically");
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if (g.on_boundary(i, j) && std::abs(u(i, j)) > 1e-9 * umax)
                throw PreconditionError("dirichlet_cheeger_upper: u does not vanish on the boundary");

    std::vector<double> positive;
    for (double v : u.values)
        if (v > 0.0)
            positive.push_back(v);
    std::sort(positive.begin(), positive.end());
    const double top = positive.back();

    DirichletUpperBound out;
    out.best_ratio = std::numeric_limits<double>::infinity();
    const std::size_t last = positive.size() - 1;
    for (int k = 1; k <= n_levels; ++k) {
        const double q = static_cast<double>(k) / (n_levels + 1);
        const double t = positive[static_cast<std::size_t>(std::lround(q * static_cast<double>(last)))];
        if (!(t > 0.0 && t < top))
            continue;
        if (!out.sweep.empty() && out.sweep.back().t == t)
            continue;
        DirichletSweepPoint pt;
        pt.t = t;
        pt.sigma = horizontal_perimeter(s, level_set_contour(u, t));
        pt.volume = region_volume(s, g, superlevel_fraction(u, t));
        pt.ratio = pt.volume > 0.0 ? pt.sigma / pt.volume : std::numeric_limits<double>::infinity();
        if (pt.ratio < out.best_ratio) {
            out.best_ratio = pt.ratio;
            out.best_t = t;
        }
        out.sweep.push_back(pt);
    }
    if (out.sweep.empty())
        throw PreconditionError("dirichlet_cheeger_upper: no admissible level");
    return out;
}

FlowCertificate mfmc_certify(const CCStructure& s, const HorizontalField& v, CertificateMode mode)
{
    const Grid2D& g = v.grid;
    const GridFunction div = divergence(s, v);

    FlowCertificate c;
    c.field = v;
    c.mode = mode;
    c.min_divergence = std::numeric_limits<double>::infinity();
    c.min_inward = std::numeric_limits<double>::infinity();
    bool any_boundary = false;

    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            c.max_coeff_norm = std::max(c.max_coeff_norm, std::sqrt(v.squared_norm(k)));
            if (!g.on_boundary(i, j)) {
                c.min_divergence = std::min(c.min_divergence, div.values[k]);
                continue;
            }
            any_boundary = true;
            // Chart components of V at the node, paired with each inward normal.
            double vx = 0.0, vy = 0.0;
            for (int f = 0; f < s.m(); ++f) {
                const auto a = s.field(f, g.x(i), g.y(j));
                vx += v.phi[f][k] * a[0];
                vy += v.phi[f][k] * a[1];
            }
            if (!g.chart.periodic_x) {
                if (i == 0) c.min_inward = std::min(c.min_inward, vx);
                if (i == g.nx - 1) c.min_inward = std::min(c.min_inward, -vx);
            }
            if (!g.chart.periodic_y) {
                if (j == 0) c.min_inward = std::min(c.min_inward, vy);
                if (j == g.ny - 1) c.min_inward = std::min(c.min_inward, -vy);
            }
        }
    }
    if (!any_boundary)
        c.min_inward = 0.0;

    c.h_certified = c.min_divergence;
    c.boundary_inward_ok = c.min_inward >= -c.tol;
    c.valid = c.max_coeff_norm <= 1.0 + c.tol && c.min_divergence >= c.h_certified - c.tol &&
              (mode == CertificateMode::dirichlet || c.boundary_inward_ok);
    c.note = "divergence minimum taken over interior nodes; boundary nodes use one-sided stencils and are excluded";
    if (mode == CertificateMode::neumann && !c.boundary_inward_ok)
        c.note += "; field points outward somewhere on the boundary";
    return c;
}

InequalityReport verify_inequality(double lambda, double h, InequalityKind kind, std::string h_source,
                                   double constant, double tol)
{
    if (!(h >= 0.0) || !(constant > 0.0))
        throw PreconditionError("verify_inequality: need h >= 0 and a positive constant");
    InequalityReport r;
    r.kind = kind;
    r.lambda = lambda;
    r.h = h;
    r.constant = constant;
    r.bound = 0.25 * constant * h * h;
    r.slack = lambda - r.bound;
    r.holds = r.slack >= -tol;
    r.h_source = std::move(h_source);
    return r;
}

InequalityReport verify_inequality(double lambda, const FlowCertificate& cert, InequalityKind kind)
{
    if (!cert.valid)
        throw PreconditionError("verify_inequality: certificate is invalid");
    return verify_inequality(lambda, std::max(0.0, cert.h_certified), kind,
                             std::string("certificate:") + to_string(cert.mode));
}

CoareaReport coarea_check(const CCStructure& s, const GridFunction& u, int levels)
{
    const Grid2D& g = u.grid;
    if (!(s.chart == g.chart))
        throw GridMismatchError("coarea_check: grid chart does not match structure");
    if (levels == 0)
        levels = 4 * std::max(g.nx, g.ny) + 1;
    if (levels < 2)
        throw PreconditionError("coarea_check: need at least two levels");
    const auto [lo_it, hi_it] = std::minmax_element(u.values.begin(), u.values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo))
        throw PreconditionError("coarea_check: u is constant");

    CoareaReport r;
    r.levels = levels;

    // Gradient side: 2x2 Gauss quadrature of the bilinear interpolant.
    const double g0 = 0.5 - 0.5 / std::sqrt(3.0);
    const std::array<double, 2> gauss{g0, 1.0 - g0};
    for (int cj = 0; cj < g.cells_y(); ++cj) {
        for (int ci = 0; ci < g.cells_x(); ++ci) {
            const auto c = corners(u, ci, cj);
            for (double gs : gauss)
                for (double gt : gauss) {
                    const double ux = ((1 - gt) * (c.u[1] - c.u[0]) + gt * (c.u[3] - c.u[2])) / g.hx;
                    const double uy = ((1 - gs) * (c.u[2] - c.u[0]) + gs * (c.u[3] - c.u[1])) / g.hy;
                    const double x = c.p[0].x + gs * g.hx;
                    const double y = c.p[0].y + gt * g.hy;
                    double sq = 0.0;
                    for (int f = 0; f < s.m(); ++f) {
                        const auto a = s.field(f, x, y);
                        const double xu = a[0] * ux + a[1] * uy;
                        sq += xu * xu;
                    }
                    r.gradient_integral += 0.25 * g.hx * g.hy * s.rho(x, y) * std::sqrt(sq);
                }
        }
    }

    // Perimeter side: P_H({u > t}) relative to the domain, trapezoid in t.
    const double dt = (hi - lo) / (levels - 1);
    for (int k = 0; k < levels; ++k) {
        const double t = lo + k * dt;
        const double p = (k == 0 || k == levels - 1) ? 0.0 : horizontal_perimeter(s, level_set_contour(u, t));
        r.perimeter_integral += (k == 0 || k == levels - 1 ? 0.5 : 1.0) * p * dt;
    }
    r.rel_gap = std::abs(r.gradient_integral - r.perimeter_integral) / r.gradient_integral;
    return r;
}

void write_cuts_csv(std::ostream& os, std::span<const Cut> cuts)
{
    os << "kind,sigma,vol1,vol2,ratio\n";
    for (const auto& c : cuts)
        os << to_string(c.kind) << ',' << format_double(c.sigma) << ',' << format_double(c.vol1) << ','
           << format_double(c.vol2) << ',' << format_double(c.ratio) << '\n';
}

} // namespace sublap
