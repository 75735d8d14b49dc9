#include "sublap/cheeger.hpp"
#include "sublap/eigensolver.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace sublap;
using std::numbers::pi;

namespace {

// Independent value of the horizontal perimeter for the Grushin fields along
// a straight chart segment: integrand sqrt(<X1,nu>^2 + <X2,nu>^2) with
// X1 = (1, 0), X2 = (0, x) and nu the Euclidean unit normal.
double grushin_segment_oracle(Point2 a, Point2 b)
{
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len = std::hypot(dx, dy);
    const double nx = -dy / len, ny = dx / len;
    return len * oracle::simpson([&](double s) {
        const double x = a.x + s * dx;
        return std::hypot(nx, x * ny);
    }, 0.0, 1.0);
}

} // namespace

TEST(Perimeter, GrushinHorizontalLine)
{
    const CCStructure s = builtin_grushin_cylinder();
    const std::vector<Segment> one{{{0.0, 1.0}, {1.0, 1.0}}};
    EXPECT_NEAR(horizontal_perimeter(s, one), 0.5, 1e-6);
    EXPECT_NEAR(horizontal_perimeter(s, one), grushin_segment_oracle({0.0, 1.0}, {1.0, 1.0}), 1e-6);
    const std::vector<Segment> two{{{0.0, 1.0}, {1.0, 1.0}}, {{0.0, 1.0 + pi}, {1.0, 1.0 + pi}}};
    EXPECT_NEAR(horizontal_perimeter(s, two), 1.0, 1e-6);
}

TEST(Perimeter, GrushinVerticalCircle)
{
    const CCStructure s = builtin_grushin_cylinder();
    for (double h : {0.1, 0.5, 0.9}) {
        const std::vector<Segment> circle{{{h, 0.0}, {h, 2 * pi}}};
        EXPECT_NEAR(horizontal_perimeter(s, circle), 2 * pi, 1e-6);
    }
}

TEST(Perimeter, GrushinSlantedSegmentMatchesOracle)
{
    const CCStructure s = builtin_grushin_cylinder();
    const Point2 a{0.1, 0.3}, b{0.8, 2.0};
    const std::vector<Segment> seg{{a, b}};
    EXPECT_NEAR(horizontal_perimeter(s, seg), grushin_segment_oracle(a, b), 1e-6 * grushin_segment_oracle(a, b));
}

TEST(Perimeter, EuclideanIsArcLength)
{
    const CCStructure s = builtin_euclidean();
    const std::vector<Segment> path{{{0.1, 0.1}, {0.4, 0.5}}, {{0.4, 0.5}, {0.9, 0.5}}};
    EXPECT_NEAR(horizontal_perimeter(s, path), 0.5 + 0.5, 1e-9);
}

TEST(Perimeter, IntegrandVanishesAtCharacteristicPoints)
{
    const CCStructure s = builtin_grushin_cylinder();
    EXPECT_EQ(perimeter_integrand(s, {0.0, 1.0}, {0.0, 1.0}), 0.0);
    EXPECT_DOUBLE_EQ(perimeter_integrand(s, {0.5, 1.0}, {0.0, 1.0}), 0.5);
}

TEST(Perimeter, PointOutsideChartIsRejected)
{
    const CCStructure s = builtin_euclidean();
    const std::vector<Segment> seg{{{0.5, 0.5}, {1.5, 0.5}}};
    EXPECT_THROW(horizontal_perimeter(s, seg), PreconditionError);
}

TEST(Volume, GrushinRegions)
{
    const CCStructure s = builtin_grushin_cylinder();
    const Grid2D g = build_grid(s.chart, 17, 32);
    EXPECT_NEAR(total_volume(s, g), 2 * pi, 1e-12);
    std::vector<double> half(static_cast<std::size_t>(g.cells_x()) * g.cells_y(), 0.0);
    for (int cj = 0; cj < g.cells_y() / 2; ++cj)
        for (int ci = 0; ci < g.cells_x(); ++ci)
            half[ci + g.cells_x() * cj] = 1.0;
    EXPECT_NEAR(region_volume(s, g, half), pi, 1e-12);
    EXPECT_EQ(region_volume(s, g, std::vector<double>(half.size(), 0.0)), 0.0);
    EXPECT_THROW(region_volume(s, g, std::vector<double>(3, 1.0)), GridMismatchError);
}

TEST(LevelSet, LinearFunctionOnSquare)
{
    const CCStructure s = builtin_euclidean();
    const Grid2D g = build_grid(s.chart, 21, 21);
    const Cut c = cut_from_level_set(s, sample(g, [](double x, double) { return x; }), 0.5 + 1e-9);
    EXPECT_NEAR(c.sigma, 1.0, 1e-9);
    EXPECT_NEAR(c.vol1, 0.5, 1e-6);
    EXPECT_NEAR(c.vol2, 0.5, 1e-6);
    EXPECT_NEAR(c.ratio, 2.0, 1e-5);
}

TEST(LevelSet, SinYGivesTheLinePair)
{
    // {sin y = 0} is the pair of lines y = 0 and y = pi; each has horizontal
    // perimeter 1/2, the halves have volume pi.
    const CCStructure s = builtin_grushin_cylinder();
    const Grid2D g = build_grid(s.chart, 33, 64);
    const Cut c = cut_from_level_set(s, sample(g, [](double, double y) { return std::sin(y); }), 0.0);
    const double sigma_oracle = 2.0 * grushin_segment_oracle({0.0, 0.0}, {1.0, 0.0});
    EXPECT_NEAR(c.sigma, sigma_oracle, 1e-6);
    EXPECT_NEAR(c.vol1, pi, 0.01);
    EXPECT_NEAR(c.ratio, 1.0 / pi, 0.01 / pi);
}

TEST(LevelSet, LevelOutsideRangeIsRejected)
{
    const CCStructure s = builtin_euclidean();
    const Grid2D g = build_grid(s.chart, 5, 5);
    const GridFunction u = sample(g, [](double x, double) { return x; });
    EXPECT_THROW(cut_from_level_set(s, u, 1.0), PreconditionError);
    EXPECT_THROW(cut_from_level_set(s, u, -0.1), PreconditionError);
}

TEST(Sweep, OneSignedFunctionIsRejected)
{
    const CCStructure s = builtin_euclidean();
    const Grid2D g = build_grid(s.chart, 5, 5);
    EXPECT_THROW(sweep_level_sets(s, sample(g, [](double x, double) { return 1.0 + x; })), PreconditionError);
}

TEST(Sweep, EuclideanSquareBisector)
{
    // cos(pi x) spans the second Neumann eigenspace's x-direction; its best
    // level set is the vertical bisector with ratio 1 / (1/2) = 2.
    const CCStructure s = builtin_euclidean();
    const Grid2D g = build_grid(s.chart, 128, 128);
    const Cut c = sweep_level_sets(s, sample(g, [](double x, double) { return std::cos(pi * x); }));
    EXPECT_LE(c.ratio, 2.0 + 0.05);
    EXPECT_GE(c.ratio, 2.0 - 1e-6);
}

TEST(Sweep, GrushinSecondEigenfunction)
{
    const CCStructure s = builtin_grushin_cylinder();
    const Grid2D g = build_grid(s.chart, 64, 128);
    const AssembledForms f = assemble(s, g, BoundarySpec::all_neumann());
    SolverOptions o;
    o.k = 2;
    const Eigenpairs e = solve_smallest(f, o);
    const GridFunction v2 = f.expand(e.vectors.col(1));
    EXPECT_LE(cut_from_level_set(s, v2, 0.0).ratio, 2.0 / pi + 0.05);
    EXPECT_LE(sweep_level_sets(s, v2).ratio, 2.0 / pi + 0.05);
}

TEST(Candidates, GrushinFamilies)
{
    const CCStructure s = builtin_grushin_cylinder();
    const Grid2D g = build_grid(s.chart, 33, 64);
    const std::vector<Cut> cuts = candidate_cuts_grushin(s, g);
    int circles = 0, pairs = 0;
    for (const Cut& c : cuts) {
        if (c.kind == CutKind::vertical_circle) {
            ++circles;
            // sigma = 2 pi, smaller side 2 pi min(h, 1 - h).
            EXPECT_NEAR(c.sigma, 2 * pi, 1e-6);
            EXPECT_NEAR(c.ratio, 1.0 / std::min(c.parameter, 1.0 - c.parameter), 1e-6);
        } else {
            ++pairs;
            EXPECT_EQ(c.kind, CutKind::line_pair);
            EXPECT_NEAR(c.ratio, 1.0 / pi, 1e-6);
        }
    }
    EXPECT_EQ(circles, 31);
    EXPECT_EQ(pairs, 32);
    const Cut& mid = cuts[15];
    EXPECT_DOUBLE_EQ(mid.parameter, 0.5);
    EXPECT_NEAR(mid.ratio, 2.0, 1e-6);
    EXPECT_EQ(best_cut(cuts).kind, CutKind::line_pair);
    EXPECT_NEAR(best_cut(cuts).ratio, 1.0 / pi, 1e-6);
}

TEST(Candidates, OnlyForTheGrushinCylinder)
{
    const CCStructure s = builtin_euclidean();
    EXPECT_THROW(candidate_cuts_grushin(s, build_grid(s.chart, 5, 5)), PreconditionError);
    EXPECT_THROW(best_cut(std::vector<Cut>{}), PreconditionError);
}

TEST(DirichletUpper, GrushinFirstEigenfunction)
{
    // Superlevel sets of sin(pi x) are bands a < x < 1 - a bounded by two
    // circles: ratio 2 / (1 - 2a) >= 2, consistent with h_D >= 1. The lowest
    // levels approach the infimum 2.
    const CCStructure s = builtin_grushin_cylinder();
    const Grid2D g = build_grid(s.chart, 65, 32);
    const DirichletUpperBound ub =
        dirichlet_cheeger_upper(s, sample(g, [](double x, double) { return std::sin(pi * x); }));
    EXPECT_GE(ub.best_ratio, 1.0);
    EXPECT_GE(ub.best_ratio, 2.0 - 1e-6);
    EXPECT_LE(ub.best_ratio, 2.0 / (1.0 - 2.0 * g.hx));
}

TEST(DirichletUpper, EuclideanSquareAboveCertificateFloor)
{
    const CCStructure s = builtin_euclidean();
    const Grid2D g = build_grid(s.chart, 65, 65);
    const DirichletUpperBound ub = dirichlet_cheeger_upper(
        s, sample(g, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); }));
    EXPECT_GE(ub.best_ratio, 2.0 * std::sqrt(2.0) - 0.1);
    // The minimum is interior: the smallest superlevel sets are worse.
    ASSERT_GE(ub.sweep.size(), 3u);
    EXPECT_GT(ub.sweep.back().ratio, ub.best_ratio);
    EXPECT_LT(ub.best_t, ub.sweep.back().t);
}

TEST(DirichletUpper, NonVanishingBoundaryIsRejected)
{
    const CCStructure s = builtin_euclidean();
    const Grid2D g = build_grid(s.chart, 9, 9);
    EXPECT_THROW(dirichlet_cheeger_upper(s, sample(g, [](double x, double) { return 1.0 + x; })),
                 PreconditionError);
}

TEST(Certificate, GrushinFieldXDirichletMode)
{
    const CCStructure s = builtin_grushin_cylinder();
    const Grid2D g = build_grid(s.chart, 65, 64);
    const HorizontalField v =
        sample_field(g, {[](double x, double) { return x; }, [](double, double) { return 0.0; }});
    const FlowCertificate c = mfmc_certify(s, v, CertificateMode::dirichlet);
    EXPECT_TRUE(c.valid);
    EXPECT_NEAR(c.h_certified, 1.0, 1e-9);
    EXPECT_NEAR(c.max_coeff_norm, 1.0, 1e-12);
}

TEST(Certificate, GrushinFieldXNeumannModeIsRejected)
{
    const CCStructure s = builtin_grushin_cylinder();
    const Grid2D g = build_grid(s.chart, 65, 64);
    const HorizontalField v =
        sample_field(g, {[](double x, double) { return x; }, [](double, double) { return 0.0; }});
    const FlowCertificate c = mfmc_certify(s, v, CertificateMode::neumann);
    EXPECT_FALSE(c.valid);
    EXPECT_FALSE(c.boundary_inward_ok);
    EXPECT_NEAR(c.min_inward, -1.0, 1e-12);
    EXPECT_THROW(verify_inequality(0.325, c, InequalityKind::neumann), PreconditionError);
}

TEST(Certificate, EuclideanRadialField)
{
    const CCStructure s = builtin_euclidean();
    const Grid2D g = build_grid(s.chart, 33, 33);
    const double r2 = std::sqrt(2.0);
    const HorizontalField v = sample_field(
        g, {[=](double x, double) { return r2 * (x - 0.5); }, [=](double, double y) { return r2 * (y - 0.5); }});
    const FlowCertificate c = mfmc_certify(s, v, CertificateMode::dirichlet);
    EXPECT_TRUE(c.valid);
    EXPECT_NEAR(c.h_certified, 2.0 * r2, 1e-9);
}

TEST(Certificate, OversizedFieldIsInvalid)
{
    const CCStructure s = builtin_euclidean();
    const Grid2D g = build_grid(s.chart, 9, 9);
    const HorizontalField v =
        sample_field(g, {[](double x, double) { return 2.0 * x; }, [](double, double) { return 0.0; }});
    EXPECT_FALSE(mfmc_certify(s, v, CertificateMode::dirichlet).valid);
}

TEST(Inequality, GrushinChecks)
{
    const InequalityReport d = verify_inequality(pi * pi, 1.0, InequalityKind::dirichlet);
    EXPECT_TRUE(d.holds);
    EXPECT_DOUBLE_EQ(d.bound, 0.25);
    EXPECT_GT(d.slack, 0.0);
    const InequalityReport n = verify_inequality(0.325, 2.0 / pi, InequalityKind::neumann, "hypothetical");
    EXPECT_TRUE(n.holds);
    EXPECT_NEAR(n.bound, 1.0 / (pi * pi), 1e-15);
    EXPECT_NEAR(n.bound, 0.1013, 1e-4);
    EXPECT_GT(n.slack, 0.0);
    EXPECT_TRUE(verify_inequality(0.0, 0.0, InequalityKind::mixed).holds);
    EXPECT_FALSE(verify_inequality(0.1, 1.0, InequalityKind::neumann).holds);
    EXPECT_THROW(verify_inequality(1.0, -1.0, InequalityKind::neumann), PreconditionError);
}

TEST(Coarea, EuclideanLinear)
{
    const CCStructure s = builtin_euclidean();
    const Grid2D g = build_grid(s.chart, 33, 33);
    const CoareaReport r = coarea_check(s, sample(g, [](double x, double) { return x; }));
    EXPECT_NEAR(r.gradient_integral, 1.0, 1e-12);
    EXPECT_NEAR(r.perimeter_integral, 1.0, 1e-2);
}

TEST(Coarea, GrushinLinear)
{
    const CCStructure s = builtin_grushin_cylinder();
    const Grid2D g = build_grid(s.chart, 33, 64);
    const CoareaReport r = coarea_check(s, sample(g, [](double x, double) { return x; }));
    EXPECT_NEAR(r.gradient_integral, 2 * pi, 1e-10);
    EXPECT_NEAR(r.perimeter_integral, 2 * pi, 2e-2 * 2 * pi);
}

TEST(Coarea, GapShrinksUnderRefinement)
{
    const CCStructure s = builtin_grushin_cylinder();
    const auto u = [](double x, double y) { return std::sin(pi * x) * std::sin(y); };
    const double coarse = coarea_check(s, sample(build_grid(s.chart, 64, 64), u)).rel_gap;
    const double fine = coarea_check(s, sample(build_grid(s.chart, 128, 128), u)).rel_gap;
    EXPECT_LE(fine, 0.02);
    EXPECT_LT(fine, coarse);
}

TEST(CutsCsv, Header)
{
    std::ostringstream os;
    const std::vector<Cut> cuts{make_cut({}, 1.0, 2.0, 4.0, CutKind::custom)};
    write_cuts_csv(os, cuts);
    EXPECT_EQ(os.str(), "kind,sigma,vol1,vol2,ratio\ncustom,1,2,4,0.5\n");
}
