#pragma once

#include "sublap/eigensolver.hpp"
#include "sublap/error.hpp"

#include <iosfwd>
#include <vector>

namespace sublap {

enum class EndCondition { neumann, dirichlet };

const char* to_string(EndCondition bc) noexcept;

/// One Fourier mode e^{iny} of the Grushin cylinder: the ODE
/// v'' + (lambda - n^2 x^2) v = 0 on (0, 1) with matching end conditions.
struct ModeProblem {
    int n = 0;
    EndCondition bc = EndCondition::neumann;
    double lambda_lo = 0.0;
    double lambda_hi = 120.0;
    double ode_tol = 1e-10;
    double scan_step = 0.05;
};

/// Root search ran out of window (or a bracket failed to shrink).
class RootFindingError : public Error {
public:
    RootFindingError(const std::string& what, std::vector<double> found)
        : Error(what), found_(std::move(found)) {}

    const std::vector<double>& found() const noexcept { return found_; }

private:
    std::vector<double> found_;
};

/// A value above lambda_{n,m} for either end condition; build_table widens
/// its search window to this.
double upper_bound(int n, int m);

/// Boundary mismatch at x = 1 after integrating from x = 0 with
/// (v, v') = (1, 0) (neumann) or (0, 1) (dirichlet): returns v'(1) or v(1).
double shoot(const ModeProblem& p, double lambda);

/// Interior sign changes of the shot solution on (0, 1).
int count_sign_changes(const ModeProblem& p, double lambda);

/// First `count` roots of the mismatch in the window, ascending, each
/// bisected to |d lambda| <= 1e-8. For n = 0 with Neumann ends the exact
/// root 0 comes first.
std::vector<double> find_eigenvalues(const ModeProblem& p, int count);

struct ModeEntry {
    int n = 0;
    int m = 0;
    double lambda = 0.0;
    int multiplicity = 1; ///< 2 for n >= 1 (e^{+iny} and e^{-iny})
};

struct ModeTable {
    std::vector<ModeEntry> entries; ///< ordered by n, then m
    int max_n = 0;
    int max_m = 0;
    EndCondition bc = EndCondition::neumann;
    /// Every eigenvalue of the 2D problem strictly below this value appears
    /// in the table: min(lambda_{max_n + 1, 0}, min_n lambda_{n, max_m + 1}).
    double complete_below = 0.0;

    double lambda(int n, int m) const;
};

ModeTable build_table(int max_n, int max_m, EndCondition bc);

/// CSV with header n,m,lambda,multiplicity.
void write_table_csv(std::ostream& os, const ModeTable& t);

struct CrossValidationEntry {
    int index = 0; ///< 1-based position in the 2D spectrum
    double lambda_2d = 0.0;
    double lambda_table = 0.0;
    double rel_error = 0.0; ///< absolute error when the table value is 0
};

struct CrossValidationReport {
    std::vector<CrossValidationEntry> entries;
    double max_rel_error = 0.0;
};

/// Compares the table (expanded by multiplicity, ascending) with a 2D
/// spectrum in order. Throws PreconditionError if the table's complete range
/// holds fewer values than there are eigenpairs.
CrossValidationReport cross_validate(const ModeTable& t, const Eigenpairs& e);

} // namespace sublap
