#include "sublap/app/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

struct Common {
    std::string config;
    std::string out = ".";
    bool quiet = false;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help, Common& common)
{
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", common.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", common.out, "output directory (created if missing)");
    sub->add_flag("--quiet", common.quiet, "suppress the summary on stdout");
    return sub;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectra, Cheeger bounds and Grushin mode tables for sub-Laplacians"};
    app.require_subcommand(1);

    Common common;
    bool cross_validate = false;
    CLI::App* spectrum = add_command(app, "spectrum", "smallest eigenpairs, heatmaps and nodal report", common);
    CLI::App* cheeger = add_command(app, "cheeger", "candidate cuts, certificate and inequality report", common);
    CLI::App* table = add_command(app, "grushin-table", "Grushin cylinder mode table by shooting", common);
    table->add_flag("--cross-validate", cross_validate, "compare against a 2D solve on the configured grid");
    CLI::App* carnot = add_command(app, "carnot", "Heisenberg group constants", common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    using namespace sublap::app;
    return run_command([&] {
        const RunConfig config = load_config(common.config);
        CommandOptions opts;
        opts.out_dir = common.out;
        opts.quiet = common.quiet;
        opts.cross_validate = cross_validate;
        if (spectrum->parsed())
            cmd_spectrum(config, opts);
        else if (cheeger->parsed())
            cmd_cheeger(config, opts);
        else if (table->parsed())
            cmd_grushin_table(config, opts);
        else if (carnot->parsed())
            cmd_carnot(config, opts);
    });
}
