#include "sublap/carnot.hpp"

#include "sublap/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace sublap::carnot {

namespace {

void require_same_n(const HeisenbergPoint& p, const HeisenbergPoint& q)
{
    if (p.z.size() != q.z.size())
        throw PreconditionError("heisenberg: dimension mismatch (" + std::to_string(p.n()) + " vs " +
                                std::to_string(q.n()) + ")");
}

// Gamma(k / 2) for integer k >= 1.
double gamma_half(int k)
{
    double g = (k % 2 == 0) ? 1.0 : std::sqrt(std::numbers::pi);
    for (int j = (k % 2 == 0) ? 2 : 1; j < k; j += 2)
        g *= 0.5 * j;
    return g;
}

} // namespace

HeisenbergPoint::HeisenbergPoint(std::vector<double> z_coords, double t_coord) : z(std::move(z_coords)), t(t_coord)
{
    if (z.empty() || z.size() % 2 != 0)
        throw PreconditionError("heisenberg point: need 2n > 0 real coordinates");
}

HeisenbergPoint::HeisenbergPoint(std::vector<std::complex<double>> z_coords, double t_coord) : t(t_coord)
{
    if (z_coords.empty())
        throw PreconditionError("heisenberg point: need n >= 1");
    for (const auto& c : z_coords) {
        z.push_back(c.real());
        z.push_back(c.imag());
    }
}

HeisenbergPoint identity(int n)
{
    if (n < 1)
        throw PreconditionError("heisenberg: n must be >= 1");
    return HeisenbergPoint(std::vector<double>(2 * static_cast<std::size_t>(n), 0.0), 0.0);
}

HeisenbergPoint h_mul(const HeisenbergPoint& p, const HeisenbergPoint& q)
{
    require_same_n(p, q);
    HeisenbergPoint r = p;
    double im = 0.0;
    for (int i = 0; i < p.n(); ++i) {
        // Im(z conj(z')) = y x' - x y'
        im += p.z[2 * i + 1] * q.z[2 * i] - p.z[2 * i] * q.z[2 * i + 1];
        r.z[2 * i] += q.z[2 * i];
        r.z[2 * i + 1] += q.z[2 * i + 1];
    }
    r.t = p.t + q.t + 2.0 * im;
    return r;
}

HeisenbergPoint h_inv(const HeisenbergPoint& p)
{
    HeisenbergPoint r = p;
    for (double& c : r.z)
        c = -c;
    r.t = -p.t;
    return r;
}

double gauge(const HeisenbergPoint& p)
{
    double sq = 0.0;
    for (double c : p.z)
        sq += c * c;
    return std::max(std::sqrt(sq), std::sqrt(std::abs(p.t)));
}

double d_infty(const HeisenbergPoint& p, const HeisenbergPoint& q)
{
    require_same_n(p, q);
    return gauge(h_mul(h_inv(p), q));
}

HeisenbergPoint dilate(double r, const HeisenbergPoint& p)
{
    if (!(r > 0.0))
        throw PreconditionError("dilate: r must be positive");
    HeisenbergPoint out = p;
    for (double& c : out.z)
        c *= r;
    out.t = r * r * p.t;
    return out;
}

int homogeneous_dimension(const CarnotSpec& c)
{
    if (c.strata_dims.empty())
        throw PreconditionError("carnot spec: step must be >= 1");
    int q = 0;
    for (int j = 0; j < c.step(); ++j) {
        if (c.strata_dims[j] < 1)
            throw PreconditionError("carnot spec: strata dimensions must be >= 1");
        q += (j + 1) * c.strata_dims[j];
    }
    return q;
}

CarnotSpec heisenberg_spec(int n)
{
    if (n < 1)
        throw PreconditionError("heisenberg: n must be >= 1");
    return CarnotSpec{{2 * n, 1}};
}

double unit_ball_volume(double a)
{
    if (!(a >= 0.0) || a != std::floor(a) || a > 340.0)
        throw PreconditionError("unit_ball_volume: dimension must be a non-negative integer");
    const int k = static_cast<int>(a);
    // Gamma(1 + a/2) = Gamma((k + 2) / 2)
    return std::pow(std::numbers::pi, 0.5 * a) / gamma_half(k + 2);
}

double hausdorff_constant_heisenberg(int n)
{
    if (n < 1)
        throw PreconditionError("hausdorff_constant_heisenberg: n must be >= 1");
    const int q = homogeneous_dimension(heisenberg_spec(n));
    return 2.0 * unit_ball_volume(2 * n - 1) / unit_ball_volume(q - 1);
}

} // namespace sublap::carnot
