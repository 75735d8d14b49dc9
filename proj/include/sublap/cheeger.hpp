#pragma once

#include "sublap/geometry.hpp"
#include "sublap/grid.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace sublap {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

/// Straight segment in chart coordinates; coordinates on a periodic axis may
/// leave the chart range and are wrapped when the structure is evaluated.
struct Segment {
    Point2 a;
    Point2 b;
};

enum class CutKind { level_set, vertical_circle, line_pair, custom };

const char* to_string(CutKind kind) noexcept;

/// A hypersurface splitting the domain in two, with its horizontal
/// perimeter sigma and the omega-volumes of both sides.
struct Cut {
    std::vector<Segment> segments;
    double sigma = 0.0;
    double vol1 = 0.0;
    double vol2 = 0.0;
    double ratio = 0.0; ///< sigma / min(vol1, vol2)
    CutKind kind = CutKind::custom;
    double parameter = 0.0; ///< level t, circle abscissa h, or first line ordinate
};

/// Builds a Cut and fills `ratio` from the other fields.
Cut make_cut(std::vector<Segment> segments, double sigma, double vol1, double vol2, CutKind kind,
             double parameter = 0.0);

/// rho(p) * || (<X_i(p), nu>)_i ||_2 for a chart-Euclidean unit normal nu.
///
/// This is the pointwise maximum of sum_i phi_i <X_i, nu> rho over |phi| <= 1,
/// i.e. the density of iota_{n_H} omega against chart arc length. It vanishes
/// at characteristic points.
double perimeter_integrand(const CCStructure& s, Point2 p, Point2 unit_normal);

/// Horizontal perimeter of a polyline by composite midpoint quadrature per
/// segment, doubling until the relative change is below 1e-6.
double horizontal_perimeter(const CCStructure& s, std::span<const Segment> segments);

/// sum over cells of rho(centre) * hx * hy * fraction[c]; fraction is indexed
/// ci + cells_x * cj and may take values in [0, 1].
double region_volume(const CCStructure& s, const Grid2D& g, std::span<const double> cell_fraction);

/// omega(Omega) on the grid's cells.
double total_volume(const CCStructure& s, const Grid2D& g);

/// Marching-squares polyline of {u = t}; saddles are resolved by the cell mean.
std::vector<Segment> level_set_contour(const GridFunction& u, double t);

/// Fraction of each cell where the bilinear interpolant of u exceeds t.
std::vector<double> superlevel_fraction(const GridFunction& u, double t);

/// Cut along {u = t}; vol1 is the omega-volume of {u > t}.
Cut cut_from_level_set(const CCStructure& s, const GridFunction& u, double t);

/// Minimal-ratio level-set cut over `n_levels` quantiles of a sign-changing u.
Cut sweep_level_sets(const CCStructure& s, const GridFunction& u, int n_levels = 33);

/// Vertical circles {h} x S^1 at the interior grid abscissae and line pairs
/// (0,1) x {y0, y0 + pi} for grid ordinates y0 in [0, pi).
std::vector<Cut> candidate_cuts_grushin(const CCStructure& s, const Grid2D& g);

/// Smallest ratio in a list of cuts; throws on an empty list.
const Cut& best_cut(std::span<const Cut> cuts);

struct DirichletSweepPoint {
    double t = 0.0;
    double sigma = 0.0;
    double volume = 0.0;
    double ratio = 0.0;
};

struct DirichletUpperBound {
    double best_ratio = 0.0;
    double best_t = 0.0;
    std::vector<DirichletSweepPoint> sweep; ///< ascending t
};

/// Upper bound on the Dirichlet-Cheeger constant from the super-level sets
/// {u > t}, t > 0, of a function vanishing on the boundary.
DirichletUpperBound dirichlet_cheeger_upper(const CCStructure& s, const GridFunction& u, int n_levels = 64);

enum class CertificateMode { dirichlet, neumann };

const char* to_string(CertificateMode mode) noexcept;

/// Max-flow min-cut lower bound: a horizontal field with |V| <= 1 and
/// div_omega V >= h certifies h as a lower Cheeger bound.
struct FlowCertificate {
    HorizontalField field;
    CertificateMode mode = CertificateMode::dirichlet;
    double h_certified = 0.0;
    double max_coeff_norm = 0.0; ///< sup over nodes of |phi|_2
    double min_divergence = 0.0; ///< inf over interior nodes of div_omega V
    double min_inward = 0.0;     ///< inf over boundary nodes of <V, inward normal> (neumann)
    bool boundary_inward_ok = true;
    bool valid = false;
    double tol = 1e-9;
    std::string note;
};

FlowCertificate mfmc_certify(const CCStructure& s, const HorizontalField& v, CertificateMode mode);

enum class InequalityKind { dirichlet, neumann, mixed };

const char* to_string(InequalityKind kind) noexcept;

struct InequalityReport {
    InequalityKind kind = InequalityKind::dirichlet;
    double lambda = 0.0;
    double h = 0.0;
    double constant = 1.0; ///< multiplies h^2 / 4 (alpha^2 on Carnot groups)
    double bound = 0.0;
    double slack = 0.0;
    bool holds = false;
    std::string h_source;
};

/// lambda >= constant * h^2 / 4 - tol.
InequalityReport verify_inequality(double lambda, double h, InequalityKind kind,
                                   std::string h_source = "given", double constant = 1.0,
                                   double tol = 1e-9);

/// As above with h taken from a certificate; throws PreconditionError if
/// the certificate is invalid.
InequalityReport verify_inequality(double lambda, const FlowCertificate& cert, InequalityKind kind);

struct CoareaReport {
    double gradient_integral = 0.0;  ///< integral of |grad_H u| omega
    double perimeter_integral = 0.0; ///< integral over t of P_H({u > t})
    double rel_gap = 0.0;
    int levels = 0;
};

/// Compares both sides of the coarea formula; levels are spread uniformly
/// over [min u, max u] and integrated with the trapezoid rule. levels = 0
/// uses 4 * max(nx, ny) + 1 so the level spacing refines with the grid.
CoareaReport coarea_check(const CCStructure& s, const GridFunction& u, int levels = 0);

/// CSV with header kind,sigma,vol1,vol2,ratio.
void write_cuts_csv(std::ostream& os, std::span<const Cut> cuts);

} // namespace sublap
