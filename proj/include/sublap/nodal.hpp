#pragma once

#include "sublap/discretization.hpp"
#include "sublap/eigensolver.hpp"
#include "sublap/grid.hpp"

#include <filesystem>
#include <vector>

namespace sublap {

/// Sign components of a grid function outside a near-zero band.
struct NodalDecomposition {
    /// Per node: 0 in the zero band, +c for the c-th positive component,
    /// -c for the c-th negative component.
    std::vector<int> labels;
    int n_positive = 0;
    int n_negative = 0;
    int n_domains = 0;
    double threshold = 0.0; ///< absolute band half-width, rel_threshold * max|u|
};

/// Nodes with |u| <= rel_threshold * max|u| form the zero band; the rest are
/// split by sign and 4-connectivity, wrapping across periodic axes.
NodalDecomposition nodal_domains(const GridFunction& u, double rel_threshold = 1e-6);

/// Same, for a vector over the active nodes of `f` (Dirichlet nodes are zero).
NodalDecomposition nodal_domains(const AssembledForms& f, const Eigen::VectorXd& u,
                                 double rel_threshold = 1e-6);

struct CourantEntry {
    int index = 0; ///< 1-based
    double lambda = 0.0;
    int domains = 0;
    int bound = 0; ///< top index of the eigenvalue cluster containing `index`
    bool ok = false;
};

struct CourantReport {
    std::vector<CourantEntry> entries;
    std::vector<int> violations; ///< indices whose count exceeds the bound
    double rel_threshold = 0.0;

    bool ok() const noexcept { return violations.empty(); }
};

/// Eigenvalues within 1e-6 * max(1, lambda) of their predecessor share a
/// cluster; each eigenvector is bounded by its cluster's top index.
CourantReport check_courant(const AssembledForms& f, const Eigenpairs& e, double rel_threshold = 1e-6);

/// Gray level per domain, zero band black. Row 0 of the image is the top (y max).
void write_nodal_pgm(const std::filesystem::path& path, const Grid2D& g, const NodalDecomposition& d);
/// Linear min..max heatmap.
void write_heatmap_pgm(const std::filesystem::path& path, const GridFunction& u);

} // namespace sublap
