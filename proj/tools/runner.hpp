#pragma once

#include "config.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace discenv::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitTolerance = 1;
inline constexpr int kExitSchema = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitComputation = 4;

struct RunOptions {
    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    bool quiet = false;
};

/// Validates the config, runs the command and writes report.json,
/// results.csv and auxiliary files into the output directory. Nothing is
/// written when validation or the computation fails.
int run_command(Command command, const RunOptions& options, std::ostream& log);

/// Writes plot-ready CSV of the given kind (profile, convergence, homotopy)
/// from a report. The default output is plot_<kind>.csv next to the report.
int emit_plot(const std::string& report_path, const std::string& kind, const std::optional<std::string>& out,
              std::size_t point, std::ostream& log);

}  // namespace discenv::cli
