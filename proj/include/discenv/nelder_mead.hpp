#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace discenv {

struct NelderMeadOptions {
    std::size_t budget = 2000;           // maximum objective evaluations
    double initial_step = 0.1;           // fraction of each bound interval
    double value_tol = 1e-12;            // spread of simplex values that counts as converged
    double size_tol = 1e-10;             // simplex diameter (relative to bounds) that counts as converged
    double restart_shrink = 0.5;         // step factor applied on each restart
    double min_step = 1e-12;             // stop restarting below this step fraction
};

struct NelderMeadResult {
    std::vector<double> best;
    double value = 0.0;
    std::size_t evaluations = 0;
    std::vector<double> trace;  // best value after each iteration
};

/// Box-constrained Nelder-Mead. Trial points are clamped into [lower, upper].
/// On convergence the simplex is rebuilt around the best point with a
/// smaller step until the budget or the minimum step is reached. The
/// trajectory depends only on the inputs, so a larger budget extends the
/// same run.
NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::vector<double> start, std::span<const double> lower, std::span<const double> upper,
                             const NelderMeadOptions& options);

}  // namespace discenv
