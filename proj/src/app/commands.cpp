#include "sublap/app/commands.hpp"

#include "sublap/carnot.hpp"
#include "sublap/cheeger.hpp"
#include "sublap/expression.hpp"
#include "sublap/grushin.hpp"
#include "sublap/io.hpp"
#include "sublap/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

namespace sublap::app {

using nlohmann::json;

namespace {

enum class BoundaryClass { neumann, dirichlet, mixed };

BoundaryClass classify(const AssembledForms& f)
{
    const Grid2D& g = f.grid;
    bool any_dirichlet = false, all_dirichlet = true;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (!g.on_boundary(i, j))
                continue;
            const bool d = f.node_active[g.index(i, j)] < 0;
            any_dirichlet = any_dirichlet || d;
            all_dirichlet = all_dirichlet && d;
        }
    if (!any_dirichlet)
        return BoundaryClass::neumann;
    return all_dirichlet ? BoundaryClass::dirichlet : BoundaryClass::mixed;
}

void prepare(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
}

void say(const CommandOptions& o, const std::string& line)
{
    if (!o.quiet)
        std::cout << line << '\n';
}

std::string dump(const json& j)
{
    return j.dump(2) + "\n";
}

json to_json(const InequalityReport& r)
{
    return {{"kind", to_string(r.kind)},
            {"lambda", r.lambda},
            {"h", r.h},
            {"constant", r.constant},
            {"bound", r.bound},
            {"slack", r.slack},
            {"holds", r.holds},
            {"h_source", r.h_source}};
}

Eigenpairs solve(const AssembledForms& f, const RunConfig& c, int k)
{
    SolverOptions opts = build_solver_options(c);
    opts.k = std::min(k, f.size());
    return solve_smallest(f, opts);
}

} // namespace

void cmd_spectrum(const RunConfig& c, const CommandOptions& o)
{
    validate(c);
    const CCStructure s = build_structure(c);
    const Grid2D g = build_run_grid(c, s);
    const AssembledForms f = assemble(s, g, build_boundary(c, g.chart));
    const Eigenpairs e = solve_smallest(f, build_solver_options(c));

    prepare(o.out_dir);
    std::ostringstream csv;
    csv << "index,lambda,residual\n";
    for (int i = 0; i < e.k(); ++i)
        csv << i + 1 << ',' << format_double(e.lambdas[i]) << ',' << format_double(e.residuals[i]) << '\n';
    write_text(o.out_dir / "eigenvalues.csv", csv.str());

    const CourantReport courant = check_courant(f, e);
    for (int i = 0; i < e.k(); ++i) {
        const std::string tag = std::to_string(i + 1);
        const GridFunction u = f.expand(e.vectors.col(i));
        write_heatmap_pgm(o.out_dir / ("eig_" + tag + ".pgm"), u);
        write_nodal_pgm(o.out_dir / ("nodal_" + tag + ".pgm"), g, nodal_domains(f, e.vectors.col(i)));
    }

    json report;
    report["structure"] = s.name;
    report["grid"] = {{"nx", g.nx}, {"ny", g.ny}};
    report["method"] = e.method;
    report["rel_threshold"] = courant.rel_threshold;
    report["entries"] = json::array();
    for (const auto& entry : courant.entries)
        report["entries"].push_back({{"index", entry.index},
                                     {"lambda", entry.lambda},
                                     {"domains", entry.domains},
                                     {"bound", entry.bound},
                                     {"ok", entry.ok}});
    report["violations"] = courant.violations;
    report["ok"] = courant.ok();
    write_text(o.out_dir / "nodal_report.json", dump(report));

    for (int i = 0; i < e.k(); ++i)
        say(o, "lambda_" + std::to_string(i + 1) + " = " + format_double(e.lambdas[i]));
    say(o, std::string("courant: ") + (courant.ok() ? "ok" : "violated"));
}

void cmd_cheeger(const RunConfig& c, const CommandOptions& o)
{
    validate(c);
    const CCStructure s = build_structure(c);
    const Grid2D g = build_run_grid(c, s);
    const AssembledForms f = assemble(s, g, build_boundary(c, g.chart));
    const BoundaryClass kind = classify(f);
    const std::vector<ScalarField> phi = build_certificate_phi(c, s.m());

    prepare(o.out_dir);
    json reports = json::array();
    std::vector<Cut> cuts;
    double lambda_run = 0.0;

    if (kind == BoundaryClass::neumann) {
        const Eigenpairs e = solve(f, c, 2);
        if (e.k() < 2)
            throw PreconditionError("cheeger: the grid has too few nodes for a second eigenpair");
        lambda_run = e.lambdas[1];
        cuts.push_back(sweep_level_sets(s, f.expand(e.vectors.col(1)), c.cheeger.levels));
        if (s.kind == StructureKind::grushin_cylinder) {
            const auto family = candidate_cuts_grushin(s, g);
            cuts.insert(cuts.end(), family.begin(), family.end());
        }
        const Cut& best = best_cut(cuts);
        reports.push_back(to_json(verify_inequality(lambda_run, best.ratio, InequalityKind::neumann,
                                                    std::string("best_cut:") + to_string(best.kind))));
        say(o, "lambda_2 = " + format_double(lambda_run));
        say(o, std::string("best cut: ") + to_string(best.kind) + " ratio " + format_double(best.ratio));
    } else if (kind == BoundaryClass::dirichlet) {
        const Eigenpairs e = solve(f, c, 1);
        lambda_run = e.lambdas[0];
        const DirichletUpperBound ub = dirichlet_cheeger_upper(s, f.expand(e.vectors.col(0)), c.cheeger.levels);
        const double total = total_volume(s, g);
        std::ostringstream sweep;
        sweep << "t,sigma,volume,ratio\n";
        for (const auto& p : ub.sweep) {
            sweep << format_double(p.t) << ',' << format_double(p.sigma) << ',' << format_double(p.volume) << ','
                  << format_double(p.ratio) << '\n';
            Cut cut;
            cut.kind = CutKind::level_set;
            cut.parameter = p.t;
            cut.sigma = p.sigma;
            cut.vol1 = p.volume;
            cut.vol2 = total - p.volume;
            cut.ratio = p.ratio;
            cuts.push_back(cut);
        }
        write_text(o.out_dir / "dirichlet_sweep.csv", sweep.str());
        reports.push_back(to_json(verify_inequality(lambda_run, ub.best_ratio, InequalityKind::dirichlet,
                                                    "best_cut:level_set")));
        say(o, "lambda_1 = " + format_double(lambda_run));
        say(o, "best superlevel ratio " + format_double(ub.best_ratio));
    } else {
        const Eigenpairs e = solve(f, c, 1);
        lambda_run = e.lambdas[0];
        say(o, "lambda_1 = " + format_double(lambda_run) + " (mixed boundary: no cut family)");
    }

    std::ostringstream csv;
    write_cuts_csv(csv, cuts);
    write_text(o.out_dir / "cuts.csv", csv.str());

    if (!phi.empty()) {
        const CertificateMode mode =
            c.cheeger.certificate_mode == "neumann" ? CertificateMode::neumann : CertificateMode::dirichlet;
        const FlowCertificate cert = mfmc_certify(s, sample_field(g, phi), mode);
        json cj = {{"mode", to_string(cert.mode)},
                   {"valid", cert.valid},
                   {"h_certified", cert.h_certified},
                   {"max_coeff_norm", cert.max_coeff_norm},
                   {"min_divergence", cert.min_divergence},
                   {"min_inward", cert.min_inward},
                   {"boundary_inward_ok", cert.boundary_inward_ok},
                   {"tol", cert.tol},
                   {"note", cert.note},
                   {"phi", c.cheeger.certificate_phi}};
        write_text(o.out_dir / "certificate.json", dump(cj));
        say(o, std::string("certificate (") + to_string(cert.mode) + "): " + (cert.valid ? "valid" : "invalid") +
                   ", h = " + format_double(cert.h_certified));

        if (cert.valid) {
            // The certificate bounds the constant of its own boundary type, so
            // pair it with the eigenvalue of that type.
            double lambda = 0.0;
            InequalityKind ik = InequalityKind::dirichlet;
            if (mode == CertificateMode::dirichlet) {
                if (kind == BoundaryClass::dirichlet)
                    lambda = lambda_run;
                else
                    lambda = solve(assemble(s, g, BoundarySpec::all_dirichlet(g.chart)), c, 1).lambdas[0];
            } else {
                ik = InequalityKind::neumann;
                if (kind == BoundaryClass::neumann)
                    lambda = lambda_run;
                else
                    lambda = solve(assemble(s, g, BoundarySpec::all_neumann()), c, 2).lambdas.at(1);
            }
            reports.push_back(to_json(verify_inequality(lambda, cert, ik)));
        }
    }

    json inequality = {{"structure", s.name},
                       {"boundary", kind == BoundaryClass::neumann     ? "neumann"
                                    : kind == BoundaryClass::dirichlet ? "dirichlet"
                                                                       : "mixed"},
                       {"lambda", lambda_run},
                       {"reports", reports}};
    write_text(o.out_dir / "inequality_report.json", dump(inequality));
}

void cmd_grushin_table(const RunConfig& c, const CommandOptions& o)
{
    validate(c);
    const EndCondition bc = c.table.bc == "dirichlet" ? EndCondition::dirichlet : EndCondition::neumann;
    const ModeTable table = build_table(c.table.max_n, c.table.max_m, bc);

    prepare(o.out_dir);
    std::ostringstream csv;
    write_table_csv(csv, table);
    write_text(o.out_dir / "grushin_table.csv", csv.str());
    for (const auto& e : table.entries)
        say(o, "lambda(" + std::to_string(e.n) + "," + std::to_string(e.m) + ") = " + format_double(e.lambda));

    if (!(o.cross_validate || c.table.cross_validate))
        return;

    RunConfig run = c;
    run.structure = StructureConfig{};
    run.chart.reset();
    run.boundary = BoundaryConfig{};
    run.boundary.preset = c.table.bc;
    const CCStructure s = build_structure(run);
    const Grid2D g = build_run_grid(run, s);
    const AssembledForms f = assemble(s, g, build_boundary(run, g.chart));
    const Eigenpairs e = solve_smallest(f, build_solver_options(run));

    // Grow the table until its guaranteed range holds the whole 2D spectrum:
    // first in n until lambda_{max_n + 1, 0} clears the top 2D value, then in m.
    // The margin absorbs discretisation error in the 2D values.
    const double top = 1.1 * e.lambdas.back() + 1e-3;
    int max_n = std::max(c.table.max_n, 1), max_m = std::max(c.table.max_m, 1);
    auto first_root = [&](int n) {
        ModeProblem p;
        p.n = n;
        p.bc = bc;
        p.lambda_hi = std::max(p.lambda_hi, upper_bound(n, 0));
        return find_eigenvalues(p, 1).front();
    };
    while (first_root(max_n + 1) <= top) {
        if (max_n >= 256)
            throw PreconditionError("cross-validation: mode table cannot cover the requested spectrum");
        ++max_n;
    }
    ModeTable wide = build_table(max_n, max_m, bc);
    while (wide.complete_below <= top) {
        if (max_m >= 16)
            throw PreconditionError("cross-validation: mode table cannot cover the requested spectrum");
        ++max_m;
        wide = build_table(max_n, max_m, bc);
    }
    const CrossValidationReport r = cross_validate(wide, e);

    std::ostringstream cv;
    cv << "index,lambda_2d,lambda_table,rel_error\n";
    for (const auto& entry : r.entries)
        cv << entry.index << ',' << format_double(entry.lambda_2d) << ',' << format_double(entry.lambda_table) << ','
           << format_double(entry.rel_error) << '\n';
    write_text(o.out_dir / "cross_validation.csv", cv.str());
    say(o, "cross-validation max relative error " + format_double(r.max_rel_error));
}

void cmd_carnot(const RunConfig& c, const CommandOptions& o)
{
    validate(c);
    const int n = c.carnot.n;
    const carnot::CarnotSpec spec = carnot::heisenberg_spec(n);
    const int q = carnot::homogeneous_dimension(spec);
    const double alpha = carnot::hausdorff_constant_heisenberg(n);

    json omega = json::object();
    for (int a = 1; a <= q; ++a)
        omega[std::to_string(a)] = carnot::unit_ball_volume(a);
    json doc = {{"group", "heisenberg"},
                {"n", n},
                {"topological_dimension", 2 * n + 1},
                {"strata_dims", spec.strata_dims},
                {"Q", q},
                {"omega", omega},
                {"alpha", alpha},
                {"cheeger_factor", alpha * alpha / 4.0}};

    prepare(o.out_dir);
    write_text(o.out_dir / "carnot.json", dump(doc));
    if (!o.quiet)
        std::cout << dump(doc);
}

int run_command(const std::function<void()>& body)
{
    try {
        body();
        return 0;
    } catch (const ConvergenceError& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 3;
    } catch (const RootFindingError& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 3;
    } catch (const ConfigError& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    } catch (const ExpressionError& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    } catch (const PreconditionError& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    } catch (const GridMismatchError& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
}

} // namespace sublap::app
