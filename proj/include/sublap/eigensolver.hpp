#pragma once

#include "sublap/discretization.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace sublap {

enum class SolverMethod { automatic, dense, krylov };

struct SolverOptions {
    int k = 1;
    double tol = 1e-8;
    SolverMethod method = SolverMethod::automatic;
    int dense_threshold = 2000; ///< automatic picks dense at or below this many active nodes
    int block_size = 0;         ///< 0: min(k, 4); bounds the multiplicity that is resolved reliably
    int max_basis = 0;          ///< 0: chosen from k and the block size
    int max_restarts = 0;       ///< 0: 50 * k
    std::uint64_t seed = 0x5eed5eedULL;
};

/// k smallest generalized eigenpairs of (A, M), ascending, M-orthonormal.
struct Eigenpairs {
    std::vector<double> lambdas;
    Eigen::MatrixXd vectors; ///< one column per pair, active-node ordering
    std::vector<double> residuals;
    std::string method;
    int restarts = 0;

    int k() const noexcept { return static_cast<int>(lambdas.size()); }
};

/// ||A u - lambda M u||_{M^-1} / (||u||_M max(1, |lambda|)).
///
/// The dual norm makes the residual carry the units of lambda, so the
/// number is comparable across grid sizes.
double relative_residual(const AssembledForms& f, double lambda, const Eigen::VectorXd& u);

/// Dense solve for small problems, otherwise a block Krylov iteration with
/// full reorthogonalisation and thick restarts on (A + eps M)^-1 M, where
/// eps = 1e-8 trace(A) / trace(M) keeps pure-Neumann problems factorable.
///
/// Throws ConvergenceError (carrying the achieved residuals) when the
/// restart budget runs out.
Eigenpairs solve_smallest(const AssembledForms& f, const SolverOptions& opts);

struct MinMaxEntry {
    int index = 0; ///< 1-based
    double lambda = 0.0;
    double rayleigh = 0.0;       ///< R[v_i]
    double min_random = 0.0;     ///< smallest R over random vectors M-orthogonal to v_1..v_{i-1}
    bool rayleigh_ok = false;
    bool random_ok = false;
};

struct MinMaxReport {
    std::vector<MinMaxEntry> entries;
    double tol = 0.0;
    bool ok = true;
};

/// Checks R[v_i] = lambda_i and R[u] >= lambda_i - tol for `samples`
/// random u M-orthogonal to the preceding eigenvectors.
MinMaxReport check_minmax(const AssembledForms& f, const Eigenpairs& e, double tol = 1e-8,
                          int samples = 50, std::uint64_t seed = 7);

} // namespace sublap
