#include "sublap/grushin.hpp"

#include "sublap/io.hpp"

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace sublap {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 2>;

void validate(const ModeProblem& p)
{
    if (p.n < 0)
        throw PreconditionError("mode problem: n must be >= 0");
    if (!(p.lambda_lo >= 0.0 && p.lambda_hi > p.lambda_lo))
        throw PreconditionError("mode problem: lambda window must be nonempty with lower bound >= 0");
    if (!(p.ode_tol > 0.0) || !(p.scan_step > 0.0))
        throw PreconditionError("mode problem: ode_tol and scan_step must be positive");
}

// Without an observer the step size is left to the controller; with one,
// the solution is also reported every 1e-3.
template <class Observer>
State integrate(const ModeProblem& p, double lambda, Observer&& observe, bool sampled)
{
    const double n2 = static_cast<double>(p.n) * p.n;
    auto rhs = [&](const State& v, State& dv, double x) {
        dv[0] = v[1];
        dv[1] = -(lambda - n2 * x * x) * v[0];
    };
    State v = p.bc == EndCondition::neumann ? State{1.0, 0.0} : State{0.0, 1.0};
    try {
        auto stepper = odeint::make_controlled(p.ode_tol, p.ode_tol, odeint::runge_kutta_dopri5<State>());
        if (sampled)
            odeint::integrate_const(stepper, rhs, v, 0.0, 1.0, 1.0 / 1000.0, observe);
        else
            odeint::integrate_adaptive(stepper, rhs, v, 0.0, 1.0, 1.0 / 64.0);
    } catch (const std::exception& ex) {
        throw Error(std::string("shoot: integrator failure: ") + ex.what());
    }
    return v;
}

double mismatch(const ModeProblem& p, const State& v)
{
    return p.bc == EndCondition::neumann ? v[1] : v[0];
}

} // namespace

double upper_bound(int n, int m)
{
    // The potential n^2 x^2 is at most n^2, so by comparison with the
    // Dirichlet string the m-th root lies below n^2 + ((m + 1) pi)^2.
    const double k = (m + 1) * std::numbers::pi;
    return static_cast<double>(n) * n + k * k + 1.0;
}

const char* to_string(EndCondition bc) noexcept
{
    return bc == EndCondition::neumann ? "neumann" : "dirichlet";
}

double shoot(const ModeProblem& p, double lambda)
{
    validate(p);
    if (!(lambda >= p.lambda_lo && lambda <= p.lambda_hi))
        throw PreconditionError("shoot: lambda outside the search window");
    return mismatch(p, integrate(p, lambda, [](const State&, double) {}, false));
}

int count_sign_changes(const ModeProblem& p, double lambda)
{
    validate(p);
    std::vector<double> samples;
    integrate(p, lambda, [&](const State& v, double x) {
        // Skip both ends: v vanishes there for dirichlet.
        if (x > 0.5e-3 && x < 1.0 - 0.5e-3)
            samples.push_back(v[0]);
    }, true);
    int changes = 0;
    double prev = 0.0;
    for (double v : samples) {
        if (v == 0.0)
            continue;
        if (prev != 0.0 && (v > 0.0) != (prev > 0.0))
            ++changes;
        prev = v;
    }
    return changes;
}

std::vector<double> find_eigenvalues(const ModeProblem& p, int count)
{
    validate(p);
    if (count < 1)
        throw PreconditionError("find_eigenvalues: count must be >= 1");

    std::vector<double> roots;
    const bool zero_mode = p.n == 0 && p.bc == EndCondition::neumann && p.lambda_lo == 0.0;
    if (zero_mode)
        roots.push_back(0.0);

    auto f = [&](double l) { return mismatch(p, integrate(p, l, [](const State&, double) {}, false)); };

    double a = p.lambda_lo;
    double fa = f(a);
    if (fa == 0.0 && !zero_mode)
        roots.push_back(a);
    while (static_cast<int>(roots.size()) < count) {
        if (a >= p.lambda_hi)
            throw RootFindingError("find_eigenvalues: window exhausted after " + std::to_string(roots.size()) +
                                       " roots",
                                   roots);
        const double b = std::min(a + p.scan_step, p.lambda_hi);
        const double fb = f(b);
        if (fb == 0.0) {
            roots.push_back(b);
        } else if (fa != 0.0 && (fa > 0.0) != (fb > 0.0)) {
            double lo = a, hi = b, flo = fa;
            while (hi - lo > 1e-8) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if ((fm > 0.0) == (flo > 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            roots.push_back(0.5 * (lo + hi));
        }
        a = b;
        fa = fb;
    }
    roots.resize(count);
    return roots;
}

double ModeTable::lambda(int n, int m) const
{
    for (const auto& e : entries)
        if (e.n == n && e.m == m)
            return e.lambda;
    throw PreconditionError("mode table: entry (" + std::to_string(n) + ", " + std::to_string(m) + ") not present");
}

ModeTable build_table(int max_n, int max_m, EndCondition bc)
{
    if (max_n < 0 || max_m < 0)
        throw PreconditionError("build_table: max_n and max_m must be >= 0");
    ModeTable t;
    t.max_n = max_n;
    t.max_m = max_m;
    t.bc = bc;
    t.complete_below = std::numeric_limits<double>::infinity();
    for (int n = 0; n <= max_n; ++n) {
        ModeProblem p;
        p.n = n;
        p.bc = bc;
        p.lambda_hi = std::max(p.lambda_hi, upper_bound(n, max_m + 1));
        const auto roots = find_eigenvalues(p, max_m + 2);
        for (int m = 0; m <= max_m; ++m)
            t.entries.push_back({n, m, roots[m], n == 0 ? 1 : 2});
        t.complete_below = std::min(t.complete_below, roots[max_m + 1]);
    }
    ModeProblem next;
    next.n = max_n + 1;
    next.bc = bc;
    next.lambda_hi = std::max(next.lambda_hi, upper_bound(max_n + 1, 0));
    t.complete_below = std::min(t.complete_below, find_eigenvalues(next, 1).front());
    return t;
}

void write_table_csv(std::ostream& os, const ModeTable& t)
{
    os << "n,m,lambda,multiplicity\n";
    for (const auto& e : t.entries)
        os << e.n << ',' << e.m << ',' << format_double(e.lambda) << ',' << e.multiplicity << '\n';
}

CrossValidationReport cross_validate(const ModeTable& t, const Eigenpairs& e)
{
    std::vector<double> expected;
    for (const auto& entry : t.entries)
        if (entry.lambda < t.complete_below)
            for (int r = 0; r < entry.multiplicity; ++r)
                expected.push_back(entry.lambda);
    std::sort(expected.begin(), expected.end());
    if (static_cast<int>(expected.size()) < e.k())
        throw PreconditionError("cross_validate: table covers " + std::to_string(expected.size()) +
                                " eigenvalues, need " + std::to_string(e.k()));

    CrossValidationReport r;
    for (int i = 0; i < e.k(); ++i) {
        CrossValidationEntry entry;
        entry.index = i + 1;
        entry.lambda_2d = e.lambdas[i];
        entry.lambda_table = expected[i];
        const double diff = std::abs(entry.lambda_2d - entry.lambda_table);
        entry.rel_error = entry.lambda_table != 0.0 ? diff / std::abs(entry.lambda_table) : diff;
        r.max_rel_error = std::max(r.max_rel_error, entry.rel_error);
        r.entries.push_back(entry);
    }
    return r;
}

} // namespace sublap
