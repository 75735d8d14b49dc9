#pragma once

#include "sublap/grid.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace sublap {

using ScalarField = std::function<double(double x, double y)>;

/// Coefficients of X = ax * d/dx + ay * d/dy in chart coordinates.
struct FieldCoeffs {
    ScalarField ax;
    ScalarField ay;
};

enum class StructureKind { custom, euclidean, grushin_cylinder };

/// A Carnot-Caratheodory structure on a 2D chart: a generating family
/// X_1..X_m and a volume form rho * dx ^ dy with rho > 0.
///
/// The sub-Riemannian metric itself is never materialised. The length of a
/// horizontal vector sum_i phi_i X_i is bounded by |phi|_2, with equality
/// wherever the family is pointwise linearly independent.
struct CCStructure {
    Chart2D chart;
    std::vector<FieldCoeffs> fields;
    ScalarField density;
    std::string name;
    StructureKind kind = StructureKind::custom;

    int m() const noexcept { return static_cast<int>(fields.size()); }

    /// Chart-coordinate components of X_i at (x, y).
    std::array<double, 2> field(int i, double x, double y) const
    {
        return {fields[i].ax(x, y), fields[i].ay(x, y)};
    }

    /// Checked density evaluation; throws if rho is not positive and finite.
    double rho(double x, double y) const;
};

/// Validates field count and chart; callables are checked when evaluated.
CCStructure make_structure(Chart2D chart, std::vector<FieldCoeffs> fields, ScalarField density,
                           std::string name);

/// (0,1) x S^1 with X_1 = d/dx, X_2 = x d/dy and rho = 1.
CCStructure builtin_grushin_cylinder();

/// The Euclidean structure X_1 = d/dx, X_2 = d/dy, rho = 1 on a rectangle.
CCStructure builtin_euclidean(Interval x_range = {0.0, 1.0}, Interval y_range = {0.0, 1.0});

/// Coefficients phi_i of V = sum_i phi_i X_i at every grid node.
struct HorizontalField {
    Grid2D grid;
    std::vector<std::vector<double>> phi;

    int m() const noexcept { return static_cast<int>(phi.size()); }

    /// sum_i phi_i^2 at node k; the squared horizontal length for a
    /// pointwise independent family.
    double squared_norm(std::size_t k) const;
};

/// Samples V = sum_i phi_i X_i from callables phi_i(x, y).
HorizontalField sample_field(const Grid2D& g, const std::vector<ScalarField>& phi);

/// phi_i = X_i u by centred differences, second-order one-sided at
/// non-periodic edges.
HorizontalField horizontal_gradient(const CCStructure& s, const GridFunction& u);

/// div_omega V = rho^-1 [d_x(rho sum phi_i a_i1) + d_y(rho sum phi_i a_i2)].
GridFunction divergence(const CCStructure& s, const HorizontalField& v);

/// div_omega(grad_H u). A pointwise verification operator; the spectral
/// problems use the variational assembly in discretization.hpp.
GridFunction sub_laplacian_apply(const CCStructure& s, const GridFunction& u);

} // namespace sublap
