#include "sublap/app/config.hpp"

#include "sublap/expression.hpp"

#include <fstream>
#include <set>

namespace sublap::app {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where)
{
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.contains(it.key()))
            throw ConfigError("config: unknown key '" + it.key() + "' in " + where);
}

const json& object(const json& j, const std::string& where)
{
    if (!j.is_object())
        throw ConfigError("config: " + where + " must be an object");
    return j;
}

template <class T>
void read(const json& j, const char* key, T& out, const std::string& where)
{
    if (!j.contains(key))
        return;
    try {
        out = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config: " + where + "." + key + " has the wrong type");
    }
}

Edge edge_from(const std::string& s)
{
    if (s == "x_min") return Edge::x_min;
    if (s == "x_max") return Edge::x_max;
    if (s == "y_min") return Edge::y_min;
    if (s == "y_max") return Edge::y_max;
    throw ConfigError("config: unknown edge '" + s + "'");
}

const char* edge_name(Edge e)
{
    switch (e) {
    case Edge::x_min: return "x_min";
    case Edge::x_max: return "x_max";
    case Edge::y_min: return "y_min";
    case Edge::y_max: return "y_max";
    }
    return "x_min";
}

Interval interval_from(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError("config: " + where + " must be a [lo, hi] pair of numbers");
    return {j[0].get<double>(), j[1].get<double>()};
}

ScalarField compile(const std::string& src)
{
    const Expression e = Expression::parse(src);
    return [e](double x, double y) { return e(x, y); };
}

} // namespace

RunConfig parse_config(const json& j)
{
    object(j, "document");
    reject_unknown(j, {"structure", "chart", "grid", "boundary", "solver", "cheeger", "table", "carnot"}, "document");
    RunConfig c;

    if (j.contains("structure")) {
        const json& s = object(j["structure"], "structure");
        reject_unknown(s, {"kind", "fields", "density", "name"}, "structure");
        read(s, "kind", c.structure.kind, "structure");
        read(s, "density", c.structure.density, "structure");
        read(s, "name", c.structure.name, "structure");
        read(s, "fields", c.structure.fields, "structure");
    }
    if (j.contains("chart")) {
        const json& ch = object(j["chart"], "chart");
        reject_unknown(ch, {"x", "y", "periodic_x", "periodic_y"}, "chart");
        Chart2D chart;
        if (!ch.contains("x") || !ch.contains("y"))
            throw ConfigError("config: chart needs both x and y ranges");
        chart.x = interval_from(ch["x"], "chart.x");
        chart.y = interval_from(ch["y"], "chart.y");
        read(ch, "periodic_x", chart.periodic_x, "chart");
        read(ch, "periodic_y", chart.periodic_y, "chart");
        c.chart = chart;
    }
    if (j.contains("grid")) {
        const json& g = object(j["grid"], "grid");
        reject_unknown(g, {"nx", "ny"}, "grid");
        read(g, "nx", c.grid.nx, "grid");
        read(g, "ny", c.grid.ny, "grid");
    }
    if (j.contains("boundary")) {
        const json& b = object(j["boundary"], "boundary");
        reject_unknown(b, {"preset", "segments"}, "boundary");
        read(b, "preset", c.boundary.preset, "boundary");
        if (b.contains("segments")) {
            if (!b["segments"].is_array())
                throw ConfigError("config: boundary.segments must be an array");
            for (const json& seg : b["segments"]) {
                object(seg, "boundary segment");
                reject_unknown(seg, {"edge", "range", "condition"}, "boundary segment");
                BoundarySegment out;
                std::string edge, cond = "dirichlet";
                read(seg, "edge", edge, "boundary segment");
                read(seg, "condition", cond, "boundary segment");
                out.edge = edge_from(edge);
                if (cond != "dirichlet" && cond != "neumann")
                    throw ConfigError("config: unknown boundary condition '" + cond + "'");
                out.condition = cond == "dirichlet" ? Condition::dirichlet : Condition::neumann;
                if (!seg.contains("range"))
                    throw ConfigError("config: boundary segment needs a range");
                out.range = interval_from(seg["range"], "boundary segment range");
                c.boundary.segments.push_back(out);
            }
        }
    }
    if (j.contains("solver")) {
        const json& s = object(j["solver"], "solver");
        reject_unknown(s, {"k", "tol", "method", "dense_threshold", "seed"}, "solver");
        read(s, "k", c.solver.k, "solver");
        read(s, "tol", c.solver.tol, "solver");
        read(s, "method", c.solver.method, "solver");
        read(s, "dense_threshold", c.solver.dense_threshold, "solver");
        read(s, "seed", c.solver.seed, "solver");
    }
    if (j.contains("cheeger")) {
        const json& s = object(j["cheeger"], "cheeger");
        reject_unknown(s, {"levels", "certificate_phi", "certificate_mode"}, "cheeger");
        read(s, "levels", c.cheeger.levels, "cheeger");
        read(s, "certificate_phi", c.cheeger.certificate_phi, "cheeger");
        read(s, "certificate_mode", c.cheeger.certificate_mode, "cheeger");
    }
    if (j.contains("table")) {
        const json& s = object(j["table"], "table");
        reject_unknown(s, {"max_n", "max_m", "bc", "cross_validate"}, "table");
        read(s, "max_n", c.table.max_n, "table");
        read(s, "max_m", c.table.max_m, "table");
        read(s, "bc", c.table.bc, "table");
        read(s, "cross_validate", c.table.cross_validate, "table");
    }
    if (j.contains("carnot")) {
        const json& s = object(j["carnot"], "carnot");
        reject_unknown(s, {"n"}, "carnot");
        read(s, "n", c.carnot.n, "carnot");
    }
    return c;
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is)
        throw ConfigError("config: cannot open " + path.string());
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& ex) {
        throw ConfigError(std::string("config: invalid JSON: ") + ex.what());
    }
    return parse_config(j);
}

json to_json(const RunConfig& c)
{
    json j;
    j["structure"] = {{"kind", c.structure.kind},
                      {"fields", c.structure.fields},
                      {"density", c.structure.density},
                      {"name", c.structure.name}};
    if (c.chart)
        j["chart"] = {{"x", {c.chart->x.lo, c.chart->x.hi}},
                      {"y", {c.chart->y.lo, c.chart->y.hi}},
                      {"periodic_x", c.chart->periodic_x},
                      {"periodic_y", c.chart->periodic_y}};
    j["grid"] = {{"nx", c.grid.nx}, {"ny", c.grid.ny}};
    json segs = json::array();
    for (const auto& s : c.boundary.segments)
        segs.push_back({{"edge", edge_name(s.edge)},
                        {"range", {s.range.lo, s.range.hi}},
                        {"condition", s.condition == Condition::dirichlet ? "dirichlet" : "neumann"}});
    j["boundary"] = {{"preset", c.boundary.preset}, {"segments", segs}};
    j["solver"] = {{"k", c.solver.k},
                   {"tol", c.solver.tol},
                   {"method", c.solver.method},
                   {"dense_threshold", c.solver.dense_threshold},
                   {"seed", c.solver.seed}};
    j["cheeger"] = {{"levels", c.cheeger.levels},
                    {"certificate_phi", c.cheeger.certificate_phi},
                    {"certificate_mode", c.cheeger.certificate_mode}};
    j["table"] = {{"max_n", c.table.max_n},
                  {"max_m", c.table.max_m},
                  {"bc", c.table.bc},
                  {"cross_validate", c.table.cross_validate}};
    j["carnot"] = {{"n", c.carnot.n}};
    return j;
}

CCStructure build_structure(const RunConfig& c)
{
    const auto& s = c.structure;
    if (s.kind == "grushin") {
        if (c.chart)
            throw ConfigError("config: the grushin structure has a fixed chart; remove 'chart'");
        return builtin_grushin_cylinder();
    }
    const Chart2D chart = c.chart.value_or(Chart2D{});
    if (s.kind == "euclidean") {
        try {
            CCStructure e = builtin_euclidean(chart.x, chart.y);
            e.chart = make_chart(chart.x, chart.y, chart.periodic_x, chart.periodic_y);
            return e;
        } catch (const PreconditionError& ex) {
            throw ConfigError(std::string("config: ") + ex.what());
        }
    }
    if (s.kind == "custom") {
        if (s.fields.empty())
            throw ConfigError("config: custom structure needs at least one field");
        std::vector<FieldCoeffs> fields;
        for (const auto& f : s.fields)
            fields.push_back({compile(f[0]), compile(f[1])});
        try {
            return make_structure(chart, std::move(fields), compile(s.density),
                                  s.name.empty() ? "custom" : s.name);
        } catch (const PreconditionError& ex) {
            throw ConfigError(std::string("config: ") + ex.what());
        }
    }
    throw ConfigError("config: unknown structure kind '" + s.kind + "'");
}

Grid2D build_run_grid(const RunConfig& c, const CCStructure& s)
{
    try {
        return build_grid(s.chart, c.grid.nx, c.grid.ny);
    } catch (const PreconditionError& ex) {
        throw ConfigError(std::string("config: ") + ex.what());
    }
}

BoundarySpec build_boundary(const RunConfig& c, const Chart2D& chart)
{
    BoundarySpec bc;
    if (c.boundary.preset == "dirichlet")
        bc = BoundarySpec::all_dirichlet(chart);
    else if (c.boundary.preset != "neumann")
        throw ConfigError("config: unknown boundary preset '" + c.boundary.preset + "'");
    bc.segments.insert(bc.segments.end(), c.boundary.segments.begin(), c.boundary.segments.end());
    try {
        validate(bc, chart);
    } catch (const PreconditionError& ex) {
        throw ConfigError(std::string("config: ") + ex.what());
    }
    return bc;
}

SolverOptions build_solver_options(const RunConfig& c)
{
    SolverOptions o;
    if (c.solver.k < 1)
        throw ConfigError("config: solver.k must be >= 1");
    if (!(c.solver.tol > 0.0))
        throw ConfigError("config: solver.tol must be positive");
    o.k = c.solver.k;
    o.tol = c.solver.tol;
    o.dense_threshold = c.solver.dense_threshold;
    o.seed = c.solver.seed;
    if (c.solver.method == "auto")
        o.method = SolverMethod::automatic;
    else if (c.solver.method == "dense")
        o.method = SolverMethod::dense;
    else if (c.solver.method == "krylov")
        o.method = SolverMethod::krylov;
    else
        throw ConfigError("config: unknown solver method '" + c.solver.method + "'");
    return o;
}

std::vector<ScalarField> build_certificate_phi(const RunConfig& c, int m)
{
    std::vector<ScalarField> phi;
    if (c.cheeger.certificate_phi.empty())
        return phi;
    if (static_cast<int>(c.cheeger.certificate_phi.size()) != m)
        throw ConfigError("config: certificate_phi needs one expression per generating field (" +
                          std::to_string(m) + ")");
    for (const auto& src : c.cheeger.certificate_phi)
        phi.push_back(compile(src));
    return phi;
}

void validate(const RunConfig& c)
{
    const CCStructure s = build_structure(c);
    const Grid2D g = build_run_grid(c, s);
    build_boundary(c, g.chart);
    build_solver_options(c);
    build_certificate_phi(c, s.m());
    if (c.cheeger.levels < 1)
        throw ConfigError("config: cheeger.levels must be >= 1");
    if (c.cheeger.certificate_mode != "dirichlet" && c.cheeger.certificate_mode != "neumann")
        throw ConfigError("config: certificate_mode must be dirichlet or neumann");
    if (c.table.max_n < 0 || c.table.max_m < 0)
        throw ConfigError("config: table.max_n and table.max_m must be >= 0");
    if (c.table.bc != "neumann" && c.table.bc != "dirichlet")
        throw ConfigError("config: table.bc must be neumann or dirichlet");
    if (c.carnot.n < 1)
        throw ConfigError("config: carnot.n must be >= 1");
}

} // namespace sublap::app
