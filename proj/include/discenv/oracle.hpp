#pragma once

#include "discenv/domain.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

namespace discenv {

// ---------------------------------------------------------------------------
// Kiselman infimum function
// ---------------------------------------------------------------------------

struct KiselmanResult {
    double value = 0.0;        // min of phi(z', s) over the probed moduli
    double argmin = 0.0;       // modulus s attaining it
    double error_bound = 0.0;  // Lipschitz estimate times the larger of final spacing and gap to the open end
    std::size_t evaluations = 0;
};

/// psi(z') = inf over r(z') < |z_n| < R(z') of phi(z', z_n) for a phi that is
/// rotation invariant in the last variable, reduced to a 1-d search over the
/// modulus on a hybrid grid (uniform plus geometric clusters toward both
/// ends), refined once around the argmin.
KiselmanResult kiselman_psi(const HartogsPair& pair, const Obstacle& phi, PointView base_point,
                            std::size_t resolution = 2000);

// ---------------------------------------------------------------------------
// Planar obstacle solver
// ---------------------------------------------------------------------------

enum class CellTag : std::uint8_t { InsideW, InsideXOnly, Outside };

/// Node values of a real function on a uniform square grid over [-a, a]^2 in C.
class GridField {
public:
    GridField(double half_width, std::size_t intervals);

    double half_width() const { return half_width_; }
    std::size_t intervals() const { return n_; }
    std::size_t nodes_per_side() const { return n_ + 1; }
    double spacing() const { return h_; }
    double coord(std::size_t i) const { return -half_width_ + static_cast<double>(i) * h_; }
    std::size_t index(std::size_t i, std::size_t j) const { return j * (n_ + 1) + i; }

    double value(std::size_t i, std::size_t j) const { return values_[index(i, j)]; }
    CellTag tag(std::size_t i, std::size_t j) const { return tags_[index(i, j)]; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<CellTag>& tags() { return tags_; }
    const std::vector<CellTag>& tags() const { return tags_; }

    /// True when the four grid nodes around z are all inside X.
    bool defined_at(Complex z) const;
    /// Bilinear interpolation; throws PreconditionError where not defined.
    double interpolate(Complex z) const;

    /// CSV with header "x,y,value,mask"; mask is inside_w, inside_x_only or outside.
    void write_csv(std::ostream& out) const;

private:
    double half_width_;
    std::size_t n_;
    double h_;
    std::vector<double> values_;
    std::vector<CellTag> tags_;
};

struct ObstacleSolverConfig {
    double spacing = 1.0 / 64.0;
    /// Half-width of the square; defaults to the bounding radius of X.
    std::optional<double> half_width;
    double tolerance = 1e-10;          // stop when the largest update of a sweep is below this
    std::size_t max_sweeps = 200000;
    /// Relaxation factor; 1 is projected Gauss-Seidel (monotone from the cap),
    /// 0 selects the optimal SOR factor for the grid.
    double omega = 0.0;
    /// Initialize from the solution on the grid of twice the spacing.
    bool nested = true;
    /// Also solve at half the spacing and record a Richardson estimate.
    bool richardson = false;
    double richardson_order = 1.0;
    std::vector<Complex> probes;
};

struct ObstacleSolution {
    GridField field;                              // solution for the largest cap
    std::vector<double> caps;
    std::vector<std::vector<double>> probe_values;  // [cap][probe]
    double obstacle_sup = 0.0;                    // sup of phi over the W nodes
    std::size_t sweeps = 0;                       // total sweeps over all caps at the final spacing
    double richardson_difference = std::numeric_limits<double>::quiet_NaN();
    double richardson_estimate = std::numeric_limits<double>::quiet_NaN();
};

/// Largest discrete subharmonic function below phi on W and below each cap
/// on X minus W, by projected relaxation u <- min(obstacle, mean of the four
/// neighbours) swept in a fixed lexicographic order. Nodes of X with a
/// neighbour outside X hold the obstacle value. Caps default to
/// sup phi + {1, 2, 4, 8}; later caps start from the previous cap's solution.
ObstacleSolution grid_obstacle_solver(const DomainPair& pair, const Obstacle& phi, std::vector<double> caps,
                                      const ObstacleSolverConfig& config);

/// One relaxation solve with a fixed cap, starting from the cap everywhere.
/// Returns the per-sweep maximum over nodes of the field, for monotonicity checks.
struct RelaxationHistory {
    GridField field;
    std::vector<double> max_increase;  // largest pointwise increase in each sweep (<= 0 when monotone)
    std::size_t sweeps = 0;
};
RelaxationHistory relax_from_cap(const DomainPair& pair, const Obstacle& phi, double cap,
                                 const ObstacleSolverConfig& config);

// ---------------------------------------------------------------------------
// Sub-mean-value check
// ---------------------------------------------------------------------------

struct SubmeanOptions {
    std::vector<double> radii{0.05, 0.1};
    std::size_t directions = 4;  // complex directions per probe (coordinate axes first, then random)
    std::size_t angles = 64;
    double tolerance = 1e-3;
    std::uint64_t seed = 7;
};

struct SubmeanReport {
    double max_violation = 0.0;         // max(0, u(x) - circle average)
    double max_scaled_violation = 0.0;  // violation / max(1, oscillation of u on the circle)
    std::size_t checked = 0;
    std::size_t skipped = 0;            // circles leaving the region
    std::size_t violations = 0;         // circles with scaled violation above tolerance
    bool passed = true;
    Point worst_point;
};

/// Samples u(x) <= average of u(x + rho e^{i t} v) over probes x, radii rho and
/// unit complex directions v. Passes iff the scaled violation never exceeds the tolerance.
SubmeanReport submean_check(const std::function<double(PointView)>& u,
                            const std::function<bool(PointView)>& region, const std::vector<Point>& probes,
                            const SubmeanOptions& options = {});

}  // namespace discenv
