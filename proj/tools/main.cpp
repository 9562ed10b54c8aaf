#include "runner.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace discenv::cli;

int main(int argc, char** argv) {
    CLI::App app{"Disc-functional envelopes and their oracles"};
    app.require_subcommand(1);

    RunOptions opts;
    std::uint64_t seed = 0;
    struct Sub {
        const char* name;
        const char* help;
        Command command;
    };
    const Sub subs[] = {
        {"envelope", "Upper envelope by disc search at each configured point", Command::Envelope},
        {"oracle", "Independent oracle values at each configured point", Command::Oracle},
        {"compare", "Envelope against oracle with the configured gap tolerance", Command::Compare},
        {"homotopy", "Trace the Hartogs homotopy of a configured disc", Command::Homotopy},
        {"cesaro", "Cesaro means of a configured loop of discs", Command::Cesaro},
    };
    std::vector<std::pair<CLI::App*, Command>> runs;
    for (const auto& s : subs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--config", opts.config_path, "JSON experiment config")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", opts.out_dir, "Output directory (overrides the config)");
        sub->add_option("--seed", seed, "Seed (overrides the config)");
        sub->add_flag("--quiet", opts.quiet, "Only report errors");
        runs.emplace_back(sub, s.command);
    }

    std::string report, kind;
    std::optional<std::string> plot_out;
    std::size_t point = 0;
    auto* plot = app.add_subcommand("emit-plot", "Plot-ready CSV from a report");
    plot->add_option("--report", report, "report.json of an earlier run")->required();
    plot->add_option("--kind", kind, "profile, convergence or homotopy")->required();
    plot->add_option("--out", plot_out, "Output CSV (default: plot_<kind>.csv next to the report)");
    plot->add_option("--point", point, "Point index for convergence plots");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitSchema;
    }

    if (*plot) return emit_plot(report, kind, plot_out, point, std::cerr);
    for (const auto& [sub, command] : runs) {
        if (!*sub) continue;
        if (sub->count("--seed")) opts.seed = seed;
        return run_command(command, opts, std::cerr);
    }
    return kExitSchema;
}
