#include "discenv/functional.hpp"

#include "discenv/error.hpp"

#include <cmath>
#include <optional>

namespace discenv {

namespace {

double checked_eval(const Obstacle& phi, PointView p, std::size_t node) {
    double v;
    try {
        v = phi(p);
    } catch (const std::exception& e) {
        throw EvaluationError("obstacle evaluation failed at node " + std::to_string(node) + ": " + e.what());
    }
    if (!std::isfinite(v))
        throw EvaluationError("obstacle is not finite at node " + std::to_string(node));
    return v;
}

const AnalyticDisc& on_grid(const AnalyticDisc& f, const QuadratureGrid& grid, std::optional<AnalyticDisc>& storage) {
    if (f.size() == grid.size()) return f;
    storage = f.resampled(grid.size());
    return *storage;
}

}  // namespace

QuadratureGrid::QuadratureGrid(std::size_t m) : m_(m) {
    if (!is_power_of_two(m) || m < 8) throw ConfigError("QuadratureGrid: M must be a power of two >= 8");
}

double poisson_functional(const AnalyticDisc& f, const Obstacle& phi, const QuadratureGrid& grid) {
    std::optional<AnalyticDisc> storage;
    const AnalyticDisc& g = on_grid(f, grid, storage);
    Point p(g.dim());
    double sum = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        g.boundary_point(j, p);
        sum += checked_eval(phi, p, j);
    }
    return sum * grid.weight();
}

PartialBoundaryStats partial_boundary_stats(const AnalyticDisc& f, const Obstacle& phi, const Domain& inner,
                                            const QuadratureGrid& grid) {
    std::optional<AnalyticDisc> storage;
    const AnalyticDisc& g = on_grid(f, grid, storage);
    Point p(g.dim());
    std::size_t count = 0;
    double sum = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        g.boundary_point(j, p);
        if (!(inner.margin(p) > 0.0)) continue;
        ++count;
        sum += checked_eval(phi, p, j);
    }
    return {static_cast<double>(count) * grid.weight(), sum * grid.weight()};
}

}  // namespace discenv
