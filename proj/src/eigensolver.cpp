#include "sublap/eigensolver.hpp"

#include "sublap/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <random>

namespace sublap {

namespace {

void normalize_sign(Eigen::Ref<Eigen::VectorXd> v)
{
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v[imax] < 0.0)
        v = -v;
}

Eigen::MatrixXd random_block(Eigen::Index n, int cols, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal;
    Eigen::MatrixXd x(n, cols);
    for (int c = 0; c < cols; ++c)
        for (Eigen::Index i = 0; i < n; ++i)
            x(i, c) = normal(rng);
    return x;
}

void finish(const AssembledForms& f, Eigenpairs& e)
{
    e.residuals.resize(e.lambdas.size());
    for (int i = 0; i < e.k(); ++i) {
        normalize_sign(e.vectors.col(i));
        e.residuals[i] = relative_residual(f, e.lambdas[i], e.vectors.col(i));
    }
}

Eigenpairs solve_dense(const AssembledForms& f, int k)
{
    const Eigen::VectorXd isq = f.mass.cwiseSqrt().cwiseInverse();
    const Eigen::MatrixXd a = Eigen::MatrixXd(f.stiffness);
    const Eigen::MatrixXd c = isq.asDiagonal() * a * isq.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c);
    if (es.info() != Eigen::Success)
        throw ConvergenceError("dense eigensolver failed", {});

    Eigenpairs e;
    e.method = "dense";
    e.lambdas.assign(es.eigenvalues().data(), es.eigenvalues().data() + k);
    e.vectors = isq.asDiagonal() * es.eigenvectors().leftCols(k);
    finish(f, e);
    return e;
}

// Grows an M-orthonormal basis V with W = Op V, Op = (A + eps M)^-1 M.
class KrylovBasis {
public:
    using Factor = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;

    KrylovBasis(const Factor& factor, const Eigen::VectorXd& mass, int capacity)
        : factor_(factor), mass_(mass), v_(mass.size(), capacity), w_(mass.size(), capacity)
    {
    }

    int size() const noexcept { return cols_; }
    int capacity() const noexcept { return static_cast<int>(v_.cols()); }
    auto v() const { return v_.leftCols(cols_); }
    auto w() const { return w_.leftCols(cols_); }

    // Two-pass classical Gram-Schmidt in the M inner product. Returns false
    // if x is (numerically) inside the current span.
    bool append(Eigen::VectorXd x)
    {
        if (cols_ == capacity())
            return false;
        const double start = std::sqrt(x.dot(mass_.cwiseProduct(x)));
        if (!(start > 0.0))
            return false;
        for (int pass = 0; pass < 2; ++pass)
            if (cols_ > 0)
                x -= v() * (v().transpose() * mass_.cwiseProduct(x));
        const double norm = std::sqrt(x.dot(mass_.cwiseProduct(x)));
        if (!(norm > 1e-10 * start))
            return false;
        x /= norm;
        v_.col(cols_) = x;
        w_.col(cols_) = factor_.solve(mass_.cwiseProduct(x));
        ++cols_;
        return true;
    }

    Eigen::MatrixXd projected() const
    {
        Eigen::MatrixXd h = v().transpose() * (mass_.asDiagonal() * w());
        return 0.5 * (h + h.transpose());
    }

    // Replace the basis by V S (and W by W S); S has orthonormal columns.
    void compress(const Eigen::MatrixXd& s)
    {
        const Eigen::MatrixXd nv = v() * s;
        const Eigen::MatrixXd nw = w() * s;
        cols_ = static_cast<int>(s.cols());
        v_.leftCols(cols_) = nv;
        w_.leftCols(cols_) = nw;
    }

private:
    const Factor& factor_;
    const Eigen::VectorXd& mass_;
    Eigen::MatrixXd v_;
    Eigen::MatrixXd w_;
    int cols_ = 0;
};

Eigenpairs solve_krylov(const AssembledForms& f, const SolverOptions& opts)
{
    const int n = f.size();
    const int k = opts.k;
    const int p = opts.block_size > 0 ? std::min(opts.block_size, n) : std::min(k, 4);
    const int capacity =
        std::min(n, opts.max_basis > 0 ? std::max(opts.max_basis, k + p) : std::max(3 * k + 2 * p, k + 24));
    const int max_restarts = opts.max_restarts > 0 ? opts.max_restarts : 50 * k;

    const double eps = 1e-8 * f.stiffness.diagonal().sum() / f.mass.sum();
    SparseMatrix shifted = f.stiffness;
    for (int i = 0; i < n; ++i)
        shifted.coeffRef(i, i) += eps * f.mass[i];
    KrylovBasis::Factor factor(shifted);
    if (factor.info() != Eigen::Success)
        throw ConvergenceError("sparse factorisation of A + eps M failed", {});

    KrylovBasis basis(factor, f.mass, capacity);
    std::mt19937_64 rng(opts.seed);
    {
        const Eigen::MatrixXd start = random_block(n, p, rng);
        for (int c = 0; c < p; ++c)
            basis.append(start.col(c));
    }

    std::vector<double> achieved(k, std::numeric_limits<double>::infinity());
    int restarts = 0;
    for (;;) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(basis.projected());
        const int j = basis.size();
        // Descending theta <=> ascending lambda.
        const Eigen::VectorXd theta = es.eigenvalues().reverse();
        const Eigen::MatrixXd s = es.eigenvectors().rowwise().reverse();
        const int have = std::min(k, j);

        std::vector<int> pending;
        for (int i = 0; i < have; ++i) {
            if (theta[i] <= 0.0) {
                achieved[i] = std::numeric_limits<double>::infinity();
                pending.push_back(i);
                continue;
            }
            const double lambda = 1.0 / theta[i] - eps;
            const Eigen::VectorXd y = basis.v() * s.col(i);
            achieved[i] = relative_residual(f, lambda, y);
            if (!(achieved[i] <= opts.tol))
                pending.push_back(i);
        }

        if (have == k && pending.empty()) {
            Eigenpairs e;
            e.method = "krylov";
            e.restarts = restarts;
            e.vectors = basis.v() * s.leftCols(k);
            for (int i = 0; i < k; ++i)
                e.lambdas.push_back(1.0 / theta[i] - eps);
            finish(f, e);
            return e;
        }

        // New directions: residuals of the leading unconverged Ritz pairs in
        // the shift-inverted space (these lie in span W and are M-orthogonal
        // to V). Fill up to the block size with further wanted pairs.
        std::vector<Eigen::VectorXd> fresh;
        for (int i = 0; i < j && static_cast<int>(fresh.size()) < p; ++i) {
            const bool wanted = i >= have || std::find(pending.begin(), pending.end(), i) != pending.end();
            if (!wanted && i < k)
                continue;
            fresh.push_back(basis.w() * s.col(i) - theta[i] * (basis.v() * s.col(i)));
        }

        if (j + static_cast<int>(fresh.size()) > basis.capacity()) {
            if (++restarts > max_restarts)
                throw ConvergenceError("eigensolver: restart budget exhausted", achieved);
            const int keep = std::min(j, std::max(k + p, basis.capacity() / 2));
            basis.compress(s.leftCols(keep));
        }

        int added = 0;
        for (auto& x : fresh)
            added += basis.append(std::move(x)) ? 1 : 0;
        if (added == 0 && basis.size() < n) {
            // Residual directions vanished without reaching tol: stagnation
            // at working precision. Try one random direction before giving up.
            if (!basis.append(random_block(n, 1, rng).col(0)))
                throw ConvergenceError("eigensolver: stagnated before reaching tolerance", achieved);
            if (++restarts > max_restarts)
                throw ConvergenceError("eigensolver: restart budget exhausted", achieved);
        }
        if (added == 0 && basis.size() == n && j == n)
            throw ConvergenceError("eigensolver: full space reached without meeting tolerance", achieved);
    }
}

} // namespace

double relative_residual(const AssembledForms& f, double lambda, const Eigen::VectorXd& u)
{
    const Eigen::VectorXd mu = f.mass.cwiseProduct(u);
    const Eigen::VectorXd r = f.stiffness * u - lambda * mu;
    const double num = std::sqrt(r.dot(r.cwiseQuotient(f.mass)));
    const double unorm = std::sqrt(u.dot(mu));
    return num / (unorm * std::max(1.0, std::abs(lambda)));
}

Eigenpairs solve_smallest(const AssembledForms& f, const SolverOptions& opts)
{
    if (opts.k < 1 || opts.k > f.size())
        throw PreconditionError("solve_smallest: k must lie in [1, active node count]");
    if (!(opts.tol > 0.0))
        throw PreconditionError("solve_smallest: tol must be positive");

    const bool dense = opts.method == SolverMethod::dense ||
                       (opts.method == SolverMethod::automatic && f.size() <= opts.dense_threshold);
    Eigenpairs e = dense ? solve_dense(f, opts.k) : solve_krylov(f, opts);
    for (double r : e.residuals)
        if (!(r <= opts.tol))
            throw ConvergenceError("eigensolver: residual above tolerance", e.residuals);
    return e;
}

MinMaxReport check_minmax(const AssembledForms& f, const Eigenpairs& e, double tol, int samples,
                          std::uint64_t seed)
{
    MinMaxReport report;
    report.tol = tol;
    std::mt19937_64 rng(seed);
    const Eigen::VectorXd& m = f.mass;
    for (int i = 0; i < e.k(); ++i) {
        MinMaxEntry entry;
        entry.index = i + 1;
        entry.lambda = e.lambdas[i];
        const double slack = tol * std::max(1.0, std::abs(entry.lambda));
        entry.rayleigh = rayleigh_quotient(f, e.vectors.col(i));
        entry.rayleigh_ok = std::abs(entry.rayleigh - entry.lambda) <= slack;

        entry.min_random = std::numeric_limits<double>::infinity();
        const Eigen::MatrixXd block = random_block(f.size(), samples, rng);
        for (int sidx = 0; sidx < samples; ++sidx) {
            Eigen::VectorXd u = block.col(sidx);
            for (int pass = 0; pass < 2; ++pass)
                for (int jdx = 0; jdx < i; ++jdx) {
                    const auto vj = e.vectors.col(jdx);
                    u -= (vj.dot(m.cwiseProduct(u)) / vj.dot(m.cwiseProduct(vj))) * vj;
                }
            entry.min_random = std::min(entry.min_random, rayleigh_quotient(f, u));
        }
        entry.random_ok = entry.min_random >= entry.lambda - slack;
        report.ok = report.ok && entry.rayleigh_ok && entry.random_ok;
        report.entries.push_back(entry);
    }
    return report;
}

} // namespace sublap
