#include "discenv/nelder_mead.hpp"

#include "discenv/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace discenv {

namespace {

class BudgetExhausted {};

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& objective,
                             std::vector<double> start, std::span<const double> lower, std::span<const double> upper,
                             const NelderMeadOptions& options) {
    const std::size_t dim = start.size();
    if (lower.size() != dim || upper.size() != dim) throw ConfigError("nelder_mead: bounds do not match the start");
    if (options.budget == 0) throw ConfigError("nelder_mead: budget must be positive");

    NelderMeadResult result;
    result.value = std::numeric_limits<double>::infinity();

    auto clamp = [&](std::vector<double>& x) {
        for (std::size_t i = 0; i < dim; ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
    };
    auto eval = [&](const std::vector<double>& x) {
        if (result.evaluations >= options.budget) throw BudgetExhausted{};
        ++result.evaluations;
        double v = objective(x);
        if (std::isnan(v)) v = std::numeric_limits<double>::infinity();
        if (v < result.value) {
            result.value = v;
            result.best = x;
        }
        return v;
    };

    clamp(start);
    try {
        const double first = eval(start);
        if (dim == 0) {
            result.trace.push_back(first);
            return result;
        }

        double step = options.initial_step;
        std::vector<double> range(dim);
        for (std::size_t i = 0; i < dim; ++i) range[i] = upper[i] - lower[i];

        std::vector<std::vector<double>> simplex(dim + 1);
        std::vector<double> values(dim + 1);
        std::vector<double> centroid(dim), trial(dim), trial2(dim);

        while (step >= options.min_step) {
            // Build the simplex around the best point, stepping inward when at a bound.
            simplex[0] = result.best;
            values[0] = result.value;
            for (std::size_t i = 0; i < dim; ++i) {
                simplex[i + 1] = result.best;
                double delta = step * (range[i] > 0.0 ? range[i] : 1.0);
                if (simplex[i + 1][i] + delta > upper[i]) delta = -delta;
                simplex[i + 1][i] += delta;
                clamp(simplex[i + 1]);
                values[i + 1] = eval(simplex[i + 1]);
            }

            std::vector<std::size_t> order(dim + 1);
            for (;;) {
                std::iota(order.begin(), order.end(), 0);
                std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
                const std::size_t best = order.front(), worst = order.back(), second = order[dim - 1];
                result.trace.push_back(result.value);

                double diameter = 0.0;
                for (std::size_t k = 0; k <= dim; ++k)
                    for (std::size_t i = 0; i < dim; ++i) {
                        const double scale = range[i] > 0.0 ? range[i] : 1.0;
                        diameter = std::max(diameter, std::abs(simplex[k][i] - simplex[best][i]) / scale);
                    }
                if (std::abs(values[worst] - values[best]) <= options.value_tol && diameter <= options.size_tol) break;
                if (diameter <= options.size_tol * 1e-3) break;

                std::fill(centroid.begin(), centroid.end(), 0.0);
                for (std::size_t k = 0; k <= dim; ++k)
                    if (k != worst)
                        for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[k][i] / static_cast<double>(dim);

                for (std::size_t i = 0; i < dim; ++i) trial[i] = centroid[i] + (centroid[i] - simplex[worst][i]);
                clamp(trial);
                const double reflected = eval(trial);
                if (reflected < values[best]) {
                    for (std::size_t i = 0; i < dim; ++i) trial2[i] = centroid[i] + 2.0 * (centroid[i] - simplex[worst][i]);
                    clamp(trial2);
                    const double expanded = eval(trial2);
                    if (expanded < reflected) {
                        simplex[worst] = trial2;
                        values[worst] = expanded;
                    } else {
                        simplex[worst] = trial;
                        values[worst] = reflected;
                    }
                    continue;
                }
                if (reflected < values[second]) {
                    simplex[worst] = trial;
                    values[worst] = reflected;
                    continue;
                }
                const bool outside = reflected < values[worst];
                for (std::size_t i = 0; i < dim; ++i)
                    trial2[i] = outside ? centroid[i] + 0.5 * (trial[i] - centroid[i])
                                        : centroid[i] + 0.5 * (simplex[worst][i] - centroid[i]);
                clamp(trial2);
                const double contracted = eval(trial2);
                if (contracted < std::min(reflected, values[worst])) {
                    simplex[worst] = trial2;
                    values[worst] = contracted;
                    continue;
                }
                for (std::size_t k = 0; k <= dim; ++k) {
                    if (k == best) continue;
                    for (std::size_t i = 0; i < dim; ++i)
                        simplex[k][i] = simplex[best][i] + 0.5 * (simplex[k][i] - simplex[best][i]);
                    values[k] = eval(simplex[k]);
                }
            }
            step *= options.restart_shrink;
        }
    } catch (const BudgetExhausted&) {
        result.trace.push_back(result.value);
    }
    return result;
}

}  // namespace discenv
