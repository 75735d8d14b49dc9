#include "sublap/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace sublap;
using std::numbers::pi;

namespace {

double max_interior_error(const GridFunction& u, const std::function<double(double, double)>& exact, int margin)
{
    const Grid2D& g = u.grid;
    double err = 0.0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = margin; i < g.nx - margin; ++i)
            if (g.chart.periodic_y || (j >= margin && j < g.ny - margin))
                err = std::max(err, std::abs(u(i, j) - exact(g.x(i), g.y(j))));
    return err;
}

} // namespace

TEST(Grid, UnitSquareThreeByThree)
{
    const Grid2D g = build_grid(make_chart({0, 1}, {0, 1}), 3, 3);
    EXPECT_EQ(g.node_count(), 9u);
    EXPECT_DOUBLE_EQ(g.hx, 0.5);
    EXPECT_DOUBLE_EQ(g.hy, 0.5);
}

TEST(Grid, PeriodicAxisHasNoDuplicateEndpoint)
{
    const Grid2D g = build_grid(builtin_grushin_cylinder().chart, 5, 4);
    EXPECT_DOUBLE_EQ(g.hy, 2.0 * pi / 4.0);
    EXPECT_EQ(g.cells_y(), 4);
    EXPECT_EQ(g.cells_x(), 4);
}

TEST(Grid, RejectsTooFewNodes)
{
    EXPECT_THROW(build_grid(make_chart({0, 1}, {0, 1}), 2, 5), PreconditionError);
}

TEST(Grid, RejectsEmptyInterval)
{
    EXPECT_THROW(make_chart({1, 1}, {0, 1}), PreconditionError);
}

TEST(Grid, GridFunctionSizeIsChecked)
{
    const Grid2D g = build_grid(make_chart({0, 1}, {0, 1}), 3, 3);
    EXPECT_THROW(GridFunction(g, std::vector<double>(8)), GridMismatchError);
}

TEST(Geometry, GrushinFieldsAndDensity)
{
    const CCStructure s = builtin_grushin_cylinder();
    ASSERT_EQ(s.m(), 2);
    EXPECT_DOUBLE_EQ(s.fields[1].ax(0.5, 1.0), 0.0);
    EXPECT_DOUBLE_EQ(s.fields[1].ay(0.5, 1.0), 0.5);
    EXPECT_DOUBLE_EQ(s.fields[1].ay(0.0, 3.0), 0.0);
    EXPECT_DOUBLE_EQ(s.fields[0].ax(0.0, 3.0), 1.0);
    for (double x : {0.0, 0.3, 1.0})
        EXPECT_DOUBLE_EQ(s.rho(x, 2.0), 1.0);
    EXPECT_TRUE(s.chart.periodic_y);
    EXPECT_FALSE(s.chart.periodic_x);
}

TEST(Geometry, NonPositiveDensityIsRejected)
{
    CCStructure s = builtin_euclidean();
    s.density = [](double x, double) { return x - 0.5; };
    EXPECT_THROW(s.rho(0.2, 0.2), PreconditionError);
}

TEST(Geometry, EuclideanGradientOfLinearFunction)
{
    const CCStructure s = builtin_euclidean();
    const Grid2D g = build_grid(s.chart, 9, 9);
    const HorizontalField v = horizontal_gradient(s, sample(g, [](double x, double) { return x; }));
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        EXPECT_NEAR(v.phi[0][k], 1.0, 1e-12);
        EXPECT_NEAR(v.phi[1][k], 0.0, 1e-12);
    }
}

TEST(Geometry, EuclideanGradientOfProduct)
{
    const CCStructure s = builtin_euclidean();
    const Grid2D g = build_grid(s.chart, 11, 11);
    const HorizontalField v = horizontal_gradient(s, sample(g, [](double x, double y) { return x * y; }));
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            EXPECT_NEAR(v.phi[0][g.index(i, j)], g.y(j), 1e-12);
            EXPECT_NEAR(v.phi[1][g.index(i, j)], g.x(i), 1e-12);
        }
}

TEST(Geometry, GrushinGradientOfX)
{
    const CCStructure s = builtin_grushin_cylinder();
    const Grid2D g = build_grid(s.chart, 17, 32);
    const HorizontalField v = horizontal_gradient(s, sample(g, [](double x, double) { return x; }));
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        EXPECT_NEAR(v.phi[0][k], 1.0, 1e-12);
        EXPECT_NEAR(v.phi[1][k], 0.0, 1e-12);
    }
}

TEST(Geometry, GrushinGradientOfSinYIsSecondOrder)
{
    const CCStructure s = builtin_grushin_cylinder();
    std::vector<double> errors;
    for (int ny : {32, 64}) {
        const Grid2D g = build_grid(s.chart, 17, ny);
        const HorizontalField v = horizontal_gradient(s, sample(g, [](double, double y) { return std::sin(y); }));
        double err = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                err = std::max(err, std::abs(v.phi[0][g.index(i, j)]));
                err = std::max(err, std::abs(v.phi[1][g.index(i, j)] - g.x(i) * std::cos(g.y(j))));
            }
        errors.push_back(err);
    }
    // Leading truncation term of the centred difference: h^2 / 6.
    const double hy = 2.0 * pi / 32.0;
    EXPECT_LT(errors[0], 1.1 * hy * hy / 6.0);
    EXPECT_GT(errors[0] / errors[1], 3.5);
}

TEST(Geometry, DivergenceOfGrushinCertificateFieldIsOne)
{
    const CCStructure s = builtin_grushin_cylinder();
    const Grid2D g = build_grid(s.chart, 33, 64);
    const GridFunction d =
        divergence(s, sample_field(g, {[](double x, double) { return x; }, [](double, double) { return 0.0; }}));
    for (double v : d.values)
        EXPECT_NEAR(v, 1.0, 1e-10);
}

TEST(Geometry, DivergenceOfZeroField)
{
    const CCStructure s = builtin_grushin_cylinder();
    const Grid2D g = build_grid(s.chart, 9, 16);
    const auto zero = [](double, double) { return 0.0; };
    for (double v : divergence(s, sample_field(g, {zero, zero})).values)
        EXPECT_EQ(v, 0.0);
}

TEST(Geometry, EuclideanDivergenceOfPositionField)
{
    const CCStructure s = builtin_euclidean();
    const Grid2D g = build_grid(s.chart, 9, 9);
    const GridFunction d =
        divergence(s, sample_field(g, {[](double x, double) { return x; }, [](double, double y) { return y; }}));
    for (double v : d.values)
        EXPECT_NEAR(v, 2.0, 1e-10);
}

TEST(Geometry, EuclideanLaplacianOfQuadratic)
{
    const CCStructure s = builtin_euclidean();
    const Grid2D g = build_grid(s.chart, 21, 21);
    const GridFunction lap = sub_laplacian_apply(s, sample(g, [](double x, double y) { return x * x + y * y; }));
    EXPECT_LT(max_interior_error(lap, [](double, double) { return 4.0; }, 2), 1e-8);
}

TEST(Geometry, ConstantsAreHarmonic)
{
    for (const CCStructure& s : {builtin_euclidean(), builtin_grushin_cylinder()}) {
        const Grid2D g = build_grid(s.chart, 11, 12);
        for (double v : sub_laplacian_apply(s, sample(g, [](double, double) { return 3.5; })).values)
            EXPECT_NEAR(v, 0.0, 1e-9);
    }
}

TEST(Geometry, GrushinSubLaplacianOfSinPiX)
{
    const CCStructure s = builtin_grushin_cylinder();
    const Grid2D g = build_grid(s.chart, 129, 16);
    const GridFunction lap = sub_laplacian_apply(s, sample(g, [](double x, double) { return std::sin(pi * x); }));
    EXPECT_LT(max_interior_error(lap, [](double x, double) { return -pi * pi * std::sin(pi * x); }, 2), 1e-2);
}

TEST(Geometry, GrushinSubLaplacianOfCosY)
{
    const CCStructure s = builtin_grushin_cylinder();
    const Grid2D g = build_grid(s.chart, 33, 256);
    const GridFunction lap = sub_laplacian_apply(s, sample(g, [](double, double y) { return std::cos(y); }));
    EXPECT_LT(max_interior_error(lap, [](double x, double y) { return -x * x * std::cos(y); }, 2), 1e-3);
}

TEST(Geometry, SubLaplacianDependsOnlyOnTheSpanOfTheFields)
{
    // Rotating the generating family pointwise leaves grad_H and the
    // sub-Laplacian unchanged.
    const CCStructure base = builtin_grushin_cylinder();
    const double c = std::cos(0.7), sn = std::sin(0.7);
    const CCStructure rotated = make_structure(
        base.chart,
        {{[=](double, double) { return c; }, [=](double x, double) { return -sn * x; }},
         {[=](double, double) { return sn; }, [=](double x, double) { return c * x; }}},
        [](double, double) { return 1.0; }, "rotated grushin");
    const Grid2D g = build_grid(base.chart, 33, 64);
    const GridFunction u = sample(g, [](double x, double y) { return std::sin(2 * x) * std::cos(y) + x * x; });
    const GridFunction a = sub_laplacian_apply(base, u);
    const GridFunction b = sub_laplacian_apply(rotated, u);
    EXPECT_LT(max_interior_error(a, [&](double x, double y) {
        const Grid2D& gg = b.grid;
        return b(static_cast<int>(std::lround((x - gg.chart.x.lo) / gg.hx)),
                 static_cast<int>(std::lround((y - gg.chart.y.lo) / gg.hy)));
    }, 2), 1e-2);
}
