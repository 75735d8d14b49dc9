#pragma once

#include "sublap/error.hpp"

#include <complex>
#include <vector>

namespace sublap::carnot {

/// Point of the Heisenberg group H^{2n+1} in complex coordinates (z, t),
/// z in C^n stored as interleaved real/imaginary parts.
struct HeisenbergPoint {
    std::vector<double> z;
    double t = 0.0;

    HeisenbergPoint() = default;
    HeisenbergPoint(std::vector<double> z_coords, double t_coord);
    HeisenbergPoint(std::vector<std::complex<double>> z_coords, double t_coord);

    int n() const noexcept { return static_cast<int>(z.size() / 2); }
    std::complex<double> zc(int i) const { return {z[2 * i], z[2 * i + 1]}; }

    bool operator==(const HeisenbergPoint&) const = default;
};

HeisenbergPoint identity(int n);

/// (z, t)(z', t') = (z + z', t + t' + 2 Im <z, z'>), <z, z'> = sum z_i conj(z'_i).
HeisenbergPoint h_mul(const HeisenbergPoint& p, const HeisenbergPoint& q);
HeisenbergPoint h_inv(const HeisenbergPoint& p);

/// Gauge N(z, t) = max{|z|, |t|^(1/2)}.
double gauge(const HeisenbergPoint& p);
/// d(p, q) = N(p^-1 q).
double d_infty(const HeisenbergPoint& p, const HeisenbergPoint& q);
/// (r z, r^2 t); r > 0.
HeisenbergPoint dilate(double r, const HeisenbergPoint& p);

/// Dimensions (m_1, ..., m_s) of the strata V_1 + ... + V_s.
struct CarnotSpec {
    std::vector<int> strata_dims;

    int step() const noexcept { return static_cast<int>(strata_dims.size()); }
};

/// Q = sum_j j * m_j.
int homogeneous_dimension(const CarnotSpec& c);

/// CarnotSpec of H^{2n+1}: strata (2n, 1).
CarnotSpec heisenberg_spec(int n);

/// Volume pi^(a/2) / Gamma(1 + a/2) of the Euclidean unit ball in dimension
/// a, for integer a >= 0 (Gamma by half-integer recurrence).
double unit_ball_volume(double a);

/// alpha_{Q-1} = 2 omega_{2n-1} / omega_{Q-1} with Q = 2n + 2.
double hausdorff_constant_heisenberg(int n);

} // namespace sublap::carnot
