#pragma once

#include "sublap/geometry.hpp"
#include "sublap/grid.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <iosfwd>
#include <vector>

namespace sublap {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

enum class Edge { x_min, x_max, y_min, y_max };
enum class Condition { dirichlet, neumann };

/// A piece of one chart edge. `range` is given in the coordinate that runs
/// along the edge (y for the x_min/x_max edges, x for the others).
struct BoundarySegment {
    Edge edge = Edge::x_min;
    Interval range;
    Condition condition = Condition::neumann;

    bool operator==(const BoundarySegment&) const = default;
};

/// Boundary conditions on the non-periodic edges. Uncovered boundary is
/// Neumann; a node is Dirichlet iff it lies in the closure of some
/// Dirichlet segment.
struct BoundarySpec {
    std::vector<BoundarySegment> segments;

    static BoundarySpec all_neumann() { return {}; }
    /// Dirichlet on every non-periodic edge of the chart.
    static BoundarySpec all_dirichlet(const Chart2D& chart);

    bool operator==(const BoundarySpec&) const = default;
};

/// Throws PreconditionError for segments on periodic edges or outside the edge.
void validate(const BoundarySpec& bc, const Chart2D& chart);

/// True iff node (i, j) of g is constrained by a Dirichlet segment.
bool is_dirichlet_node(const BoundarySpec& bc, const Grid2D& g, int i, int j);

/// Discrete quadratic forms over the active (non-Dirichlet) nodes.
struct AssembledForms {
    Grid2D grid;
    SparseMatrix stiffness;       ///< A: discrete integral of |grad_H u|^2 omega
    Eigen::VectorXd mass;         ///< diagonal of the lumped omega-mass matrix
    std::vector<int> active_node; ///< matrix index -> grid node
    std::vector<int> node_active; ///< grid node -> matrix index, -1 if Dirichlet

    int size() const noexcept { return static_cast<int>(active_node.size()); }

    /// Scatter an active-node vector onto the full grid (zero on Dirichlet nodes).
    GridFunction expand(const Eigen::VectorXd& u) const;
    /// Gather the active entries of a grid function.
    Eigen::VectorXd restrict(const GridFunction& u) const;
};

/// Bilinear (Q1) elements with 2x2 Gauss quadrature of
/// sum_i (X_i u)(X_i v) rho per cell, lumped mass with nodal rho.
/// Dirichlet nodes are eliminated; Neumann is the natural condition.
AssembledForms assemble(const CCStructure& s, const Grid2D& g, const BoundarySpec& bc);

/// u^T A u / u^T M u for a vector over the active nodes.
double rayleigh_quotient(const AssembledForms& f, const Eigen::VectorXd& u);

/// Coordinate Matrix Market ("general") with shortest round-trip decimals.
void write_matrix_market(std::ostream& os, const SparseMatrix& a);
void write_matrix_market(std::ostream& os, const Eigen::VectorXd& diagonal);

} // namespace sublap
