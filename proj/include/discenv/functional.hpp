#pragma once

#include "discenv/disc.hpp"
#include "discenv/domain.hpp"

namespace discenv {

/// Uniform quadrature on the circle: the M-th roots of unity with weights 1/M.
class QuadratureGrid {
public:
    explicit QuadratureGrid(std::size_t m);

    std::size_t size() const { return m_; }
    Complex node(std::size_t j) const { return unit_root(j, m_); }
    double weight() const { return 1.0 / static_cast<double>(m_); }

private:
    std::size_t m_;
};

/// Boundary average of phi over the disc, (1/M) sum_j phi(f(node_j)). The
/// disc is spectrally resampled when its size differs from the grid.
/// Throws EvaluationError naming the node if phi fails or is not finite.
double poisson_functional(const AnalyticDisc& f, const Obstacle& phi, const QuadratureGrid& grid);

struct PartialBoundaryStats {
    double mass = 0.0;      // fraction of nodes mapped into W
    double integral = 0.0;  // sum of phi over those nodes, weight 1/M
};

/// Restriction of the Poisson functional to the part of the circle mapped into W.
PartialBoundaryStats partial_boundary_stats(const AnalyticDisc& f, const Obstacle& phi, const Domain& inner,
                                            const QuadratureGrid& grid);

}  // namespace discenv
