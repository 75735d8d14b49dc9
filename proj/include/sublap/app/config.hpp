#pragma once

#include "sublap/discretization.hpp"
#include "sublap/eigensolver.hpp"
#include "sublap/error.hpp"
#include "sublap/geometry.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sublap::app {

/// Malformed or inconsistent run configuration (CLI exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

struct StructureConfig {
    std::string kind = "grushin"; ///< grushin | euclidean | custom
    /// custom only: per field, expressions for the d/dx and d/dy coefficients
    std::vector<std::array<std::string, 2>> fields;
    std::string density = "1";
    std::string name;

    bool operator==(const StructureConfig&) const = default;
};

struct GridConfig {
    int nx = 64;
    int ny = 128;

    bool operator==(const GridConfig&) const = default;
};

struct BoundaryConfig {
    std::string preset = "neumann"; ///< neumann | dirichlet (all non-periodic edges)
    std::vector<BoundarySegment> segments; ///< added on top of the preset

    bool operator==(const BoundaryConfig&) const = default;
};

struct SolverConfig {
    int k = 6;
    double tol = 1e-8;
    std::string method = "auto"; ///< auto | dense | krylov
    int dense_threshold = 2000;
    std::uint64_t seed = 0x5eed5eedULL;

    bool operator==(const SolverConfig&) const = default;
};

struct CheegerConfig {
    int levels = 33;
    std::vector<std::string> certificate_phi; ///< empty: no certificate
    std::string certificate_mode = "dirichlet";

    bool operator==(const CheegerConfig&) const = default;
};

struct TableConfig {
    int max_n = 2;
    int max_m = 2;
    std::string bc = "neumann";
    bool cross_validate = false;

    bool operator==(const TableConfig&) const = default;
};

struct CarnotConfig {
    int n = 1;

    bool operator==(const CarnotConfig&) const = default;
};

/// Everything a batch command needs. Serialised as a JSON document; see
/// docs/config.md for the schema.
struct RunConfig {
    StructureConfig structure;
    std::optional<Chart2D> chart; ///< euclidean/custom only; grushin has a fixed chart
    GridConfig grid;
    BoundaryConfig boundary;
    SolverConfig solver;
    CheegerConfig cheeger;
    TableConfig table;
    CarnotConfig carnot;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& c);

/// Builders; each throws ConfigError (or ExpressionError) on invalid input.
CCStructure build_structure(const RunConfig& c);
Grid2D build_run_grid(const RunConfig& c, const CCStructure& s);
BoundarySpec build_boundary(const RunConfig& c, const Chart2D& chart);
SolverOptions build_solver_options(const RunConfig& c);
std::vector<ScalarField> build_certificate_phi(const RunConfig& c, int m);

/// Runs every builder once so a bad config fails before any computation.
void validate(const RunConfig& c);

} // namespace sublap::app
