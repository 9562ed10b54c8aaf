#pragma once

#include "discenv/disc.hpp"
#include "discenv/domain.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace discenv {

/// zeta -> (z', s zeta^k). Throws PreconditionError unless r(z') < s < R(z').
AnalyticDisc vertical_disc(const HartogsPair& pair, PointView base_point, double s, unsigned k, std::size_t m = 256);

/// f^t(zeta) = (f'(t zeta), f_n(zeta) H(t zeta) / H(zeta)) with H the outer
/// function of f_n, built on the sampling nodes of f. f^1 = f, the centre is
/// kept, and |f_n^t| = |H(t .)| on the circle. Throws DegenerateInputError
/// if f_n vanishes at a node.
AnalyticDisc hartogs_homotopy(const AnalyticDisc& f, double t);

struct HomotopyStep {
    double t = 0.0;
    double min_margin = 0.0;        // smallest W-margin over the boundary samples of f^t
    double centre_deviation = 0.0;  // |f^t(0) - f(0)|
    int winding = 0;                // winding number of the last component
    double modulus_error = 0.0;     // max over nodes of ||f_n^t| - |H(t zeta)||
};

struct HomotopyTrace {
    std::vector<HomotopyStep> steps;
    std::vector<AnalyticDisc> discs;

    /// JSON array of {t, min_margin, centre_deviation, winding}.
    void write_json(std::ostream& out) const;
};

/// Samples t = 0, 1/T, ..., 1 along the homotopy.
HomotopyTrace homotopy_trace(const HartogsPair& pair, const AnalyticDisc& f, std::size_t steps = 32);

/// Winding number of f_n on the circle, i.e. the index k of the component of
/// discs with boundary in the Hartogs shell. Negative winding is impossible
/// for a holomorphic last component and throws InconsistencyError.
int classify_component(const AnalyticDisc& f);

/// zeta -> f(s zeta); s defaults to 1 - 1/M.
AnalyticDisc shrink(const AnalyticDisc& f, std::optional<double> s = std::nullopt);

}  // namespace discenv
