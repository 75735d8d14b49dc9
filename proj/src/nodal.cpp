#include "sublap/nodal.hpp"

#include "sublap/error.hpp"
#include "sublap/io.hpp"
#include "sublap/union_find.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace sublap {

NodalDecomposition nodal_domains(const GridFunction& u, double rel_threshold)
{
    const Grid2D& g = u.grid;
    if (u.values.empty())
        throw PreconditionError("nodal_domains: empty function");
    if (!(rel_threshold >= 0.0 && rel_threshold <= 0.1))
        throw PreconditionError("nodal_domains: rel_threshold must lie in [0, 0.1]");

    double umax = 0.0;
    for (double v : u.values)
        umax = std::max(umax, std::abs(v));

    NodalDecomposition d;
    d.threshold = rel_threshold * umax;
    const int n = static_cast<int>(g.node_count());
    std::vector<int> sign(n, 0);
    for (int k = 0; k < n; ++k) {
        const double v = u.values[k];
        if (std::abs(v) > d.threshold)
            sign[k] = v > 0.0 ? 1 : -1;
    }

    UnionFind uf(n);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int k = g.index(i, j);
            if (sign[k] == 0)
                continue;
            if (i + 1 < g.nx || g.chart.periodic_x) {
                const int r = g.index(g.next_x(i), j);
                if (sign[r] == sign[k])
                    uf.unite(k, r);
            }
            if (j + 1 < g.ny || g.chart.periodic_y) {
                const int t = g.index(i, g.next_y(j));
                if (sign[t] == sign[k])
                    uf.unite(k, t);
            }
        }
    }

    d.labels.assign(n, 0);
    std::unordered_map<int, int> root_label;
    for (int k = 0; k < n; ++k) {
        if (sign[k] == 0)
            continue;
        const int root = uf.find(k);
        auto it = root_label.find(root);
        if (it == root_label.end()) {
            const int label = sign[k] > 0 ? ++d.n_positive : -(++d.n_negative);
            it = root_label.emplace(root, label).first;
        }
        d.labels[k] = it->second;
    }
    d.n_domains = d.n_positive + d.n_negative;
    return d;
}

NodalDecomposition nodal_domains(const AssembledForms& f, const Eigen::VectorXd& u, double rel_threshold)
{
    return nodal_domains(f.expand(u), rel_threshold);
}

CourantReport check_courant(const AssembledForms& f, const Eigenpairs& e, double rel_threshold)
{
    CourantReport report;
    report.rel_threshold = rel_threshold;
    const int k = e.k();

    std::vector<int> cluster_top(k);
    for (int i = k - 1; i >= 0; --i) {
        cluster_top[i] = i;
        if (i + 1 < k) {
            const double gap = e.lambdas[i + 1] - e.lambdas[i];
            if (gap <= 1e-6 * std::max(1.0, std::abs(e.lambdas[i + 1])))
                cluster_top[i] = cluster_top[i + 1];
        }
    }

    for (int i = 0; i < k; ++i) {
        CourantEntry entry;
        entry.index = i + 1;
        entry.lambda = e.lambdas[i];
        entry.domains = nodal_domains(f, e.vectors.col(i), rel_threshold).n_domains;
        entry.bound = cluster_top[i] + 1;
        entry.ok = entry.domains <= entry.bound;
        if (!entry.ok)
            report.violations.push_back(entry.index);
        report.entries.push_back(entry);
    }
    return report;
}

namespace {

// Image rows run from y max (top) to y min; columns follow x.
template <class Shade>
std::vector<std::uint8_t> render(const Grid2D& g, Shade&& shade)
{
    std::vector<std::uint8_t> px(g.node_count());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            px[static_cast<std::size_t>(g.ny - 1 - j) * g.nx + i] = shade(g.index(i, j));
    return px;
}

} // namespace

void write_nodal_pgm(const std::filesystem::path& path, const Grid2D& g, const NodalDecomposition& d)
{
    const int levels = std::max(1, d.n_domains);
    const auto px = render(g, [&](int k) -> std::uint8_t {
        const int label = d.labels[k];
        if (label == 0)
            return 0;
        const int ordinal = label > 0 ? label - 1 : d.n_positive + (-label) - 1;
        return static_cast<std::uint8_t>(64 + (191 * (ordinal + 1)) / levels);
    });
    write_pgm(path, g.nx, g.ny, px);
}

void write_heatmap_pgm(const std::filesystem::path& path, const GridFunction& u)
{
    const auto [lo, hi] = std::minmax_element(u.values.begin(), u.values.end());
    const double span = *hi - *lo;
    const auto px = render(u.grid, [&](int k) -> std::uint8_t {
        if (!(span > 0.0))
            return 128;
        return static_cast<std::uint8_t>(std::lround(255.0 * (u.values[k] - *lo) / span));
    });
    write_pgm(path, u.grid.nx, u.grid.ny, px);
}

} // namespace sublap
