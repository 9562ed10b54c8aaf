#pragma once

#include "discenv/domain.hpp"
#include "discenv/family.hpp"
#include "discenv/functional.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace discenv {

/// Inputs for an upper approximation of the Poisson envelope of phi over
/// discs in X with boundary in W and centre x.
struct EnvelopeRequest {
    DomainPair pair;
    Obstacle phi;
    Point centre;
    std::vector<DiscFamily> families;
    double penalty_weight = 1e4;
    std::size_t starts = 8;
    std::size_t budget = 2000;  // objective evaluations per start
    std::uint64_t seed = 1;
    QuadratureGrid grid{512};
    double feasibility_tol = 1e-6;
    /// The penalty pushes margins up to this offset so that optimal discs are strictly admissible.
    double margin_offset = 1e-6;
    std::vector<double> probe_radii{0.25, 0.5, 0.75, 0.95};
    std::size_t probe_angles = 32;
    /// Admissible candidates are re-checked on a grid this many times finer.
    std::size_t refine_factor = 4;
    double quadrature_tol = 1e-6;
};

struct StartSummary {
    std::string family;
    std::size_t start = 0;
    double objective = 0.0;     // best penalized objective
    double best_feasible = 0.0; // best admissible boundary average, +inf if none
    std::size_t evaluations = 0;
};

struct EnvelopeResult {
    double value = 0.0;              // boundary average of phi over the reported disc
    std::string family;              // tag of the family of the reported disc
    std::vector<double> params;
    std::size_t start = 0;
    double max_violation = 0.0;
    bool feasible = false;
    std::vector<double> trace;       // per-iteration best objective of the reported start
    std::vector<StartSummary> starts;
    std::vector<std::string> skipped_families;  // families that cannot be centred at x
};

/// Multi-start penalized Nelder-Mead over each family. Objective:
/// H_phi(f) + w sum_nodes hinge(offset - margin_W)^2 + w sum_probes hinge(offset - margin_X)^2,
/// with phi replaced by its upper bound at nodes outside W. The result is the
/// best admissible disc seen (all nodes in W, all probes in X, and on the
/// refined grid all nodes in W with the boundary average within
/// quadrature_tol of the reported value), ties broken
/// by family order then start index; if none was seen the least violating
/// disc is reported with feasible = false.
EnvelopeResult minimize_envelope(const EnvelopeRequest& request);

struct PartialEnvelopeResult {
    double value = 0.0;  // integral of phi over the nodes mapped into W
    double mass = 0.0;   // fraction of nodes mapped into W
    std::string family;
    bool feasible = false;
};

/// Upper bound on the partial-boundary infimum at level eps: the infimum of
/// the integral of phi over f^{-1}(W) among discs in X centred at x whose
/// boundary mass in W exceeds 1 - eps. Discs with full boundary in W always
/// qualify, so the value never exceeds minimize_envelope on the same request.
PartialEnvelopeResult partial_envelope(const EnvelopeRequest& request, double eps);

/// The centre-constraint-preserving families used for a pair when none are
/// configured: constant, Blaschke of degrees 1..3 and vertical discs where the
/// pair has fibre radii, shell discs for the shell pair, and low-degree polynomials.
std::vector<DiscFamily> default_families(const DomainPair& pair, PointView centre);

}  // namespace discenv
