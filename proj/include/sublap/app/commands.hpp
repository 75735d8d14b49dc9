#pragma once

#include "sublap/app/config.hpp"

#include <filesystem>
#include <functional>

namespace sublap::app {

struct CommandOptions {
    std::filesystem::path out_dir = ".";
    bool quiet = false;
    bool cross_validate = false; ///< grushin-table only; ORed with table.cross_validate
};

/// eigenvalues.csv, eig_<i>.pgm, nodal_<i>.pgm, nodal_report.json.
void cmd_spectrum(const RunConfig& c, const CommandOptions& o);

/// cuts.csv, dirichlet_sweep.csv (Dirichlet runs), certificate.json (when a
/// field is configured) and inequality_report.json.
void cmd_cheeger(const RunConfig& c, const CommandOptions& o);

/// grushin_table.csv, plus cross_validation.csv when cross-validating.
void cmd_grushin_table(const RunConfig& c, const CommandOptions& o);

/// carnot.json; the same document goes to stdout unless quiet.
void cmd_carnot(const RunConfig& c, const CommandOptions& o);

/// Runs `body` and maps exceptions to exit codes: 0 success, 2 invalid
/// configuration or precondition, 3 solver or root-finding failure, 1 other.
/// The message goes to stderr.
int run_command(const std::function<void()>& body);

} // namespace sublap::app
