#include "discenv/envelope.hpp"

#include "discenv/error.hpp"
#include "discenv/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace discenv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

// splitmix64; fixed across platforms, unlike the standard distributions.
class StartRng {
public:
    StartRng(std::uint64_t seed, const std::string& tag, std::size_t start)
        : state_(seed ^ (fnv1a(tag) * 0x9E3779B97F4A7C15ull) ^ (static_cast<std::uint64_t>(start) << 32)) {}

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

inline double hinge(double x) { return x > 0.0 ? x : 0.0; }

struct Evaluation {
    double average = 0.0;     // boundary average with phi capped outside W
    double penalty = 0.0;
    double violation = 0.0;   // max(0, -margin) over nodes (W) and probes (X)
    bool admissible = false;  // every node in W and every probe in X
    bool probes_in_x = false;
    // Partial-boundary bookkeeping.
    double partial_integral = 0.0;
    std::size_t nodes_in_w = 0;
};

class DiscSampler {
public:
    explicit DiscSampler(const EnvelopeRequest& req) : req_(req) {
        const std::size_t m = req.grid.size();
        nodes_.reserve(m);
        for (std::size_t j = 0; j < m; ++j) nodes_.push_back(req.grid.node(j));
        for (double r : req.probe_radii)
            for (std::size_t a = 0; a < req.probe_angles; ++a)
                probes_.push_back(r * unit_root(a, req.probe_angles));
        margins_.resize(m);
        cap_ = std::isfinite(req.phi.upper_bound) ? std::optional<double>(req.phi.upper_bound) : std::nullopt;
    }

    Evaluation evaluate(const BoundFamily& family, std::span<const double> params) {
        Evaluation e;
        Point p(family.dim());
        const double kappa = req_.margin_offset;
        double sum = 0.0;
        for (std::size_t j = 0; j < nodes_.size(); ++j) {
            family.evaluate(params, nodes_[j], p);
            const double m = req_.pair.inner.margin_unchecked(p);
            margins_[j] = m;
            double v;
            if (m > 0.0) {
                v = req_.phi(p);
                if (!std::isfinite(v)) throw EvaluationError("obstacle not finite at node " + std::to_string(j));
                e.partial_integral += v;
                ++e.nodes_in_w;
            } else {
                v = cap_ ? *cap_ : req_.phi(p);
                if (!std::isfinite(v)) v = 0.0;
                e.violation = std::max(e.violation, -m);
            }
            sum += v;
            e.penalty += hinge(kappa - m) * hinge(kappa - m);
        }
        bool probes_inside = true;
        for (const auto& z : probes_) {
            family.evaluate(params, z, p);
            const double m = req_.pair.outer.margin_unchecked(p);
            if (!(m > 0.0)) {
                probes_inside = false;
                e.violation = std::max(e.violation, -m);
            }
            e.penalty += hinge(kappa - m) * hinge(kappa - m);
        }
        const double w = 1.0 / static_cast<double>(nodes_.size());
        e.average = sum * w;
        e.partial_integral *= w;
        e.probes_in_x = probes_inside;
        e.admissible = probes_inside && e.nodes_in_w == nodes_.size();
        return e;
    }

    /// Outer-domain penalty on the boundary nodes, for the partial search
    /// where nodes may leave W but not X.
    double boundary_outer_penalty(const BoundFamily& family, std::span<const double> params, bool& inside) {
        Point p(family.dim());
        double pen = 0.0;
        inside = true;
        for (const auto& z : nodes_) {
            family.evaluate(params, z, p);
            const double m = req_.pair.outer.margin_unchecked(p);
            if (!(m > 0.0)) inside = false;
            pen += hinge(req_.margin_offset - m) * hinge(req_.margin_offset - m);
        }
        return pen;
    }

    /// W-penalty that exempts the allowed number of worst nodes.
    double partial_w_penalty(std::size_t allowed_outside) {
        std::vector<double> shortfall;
        shortfall.reserve(margins_.size());
        for (double m : margins_) shortfall.push_back(hinge(req_.margin_offset - m));
        std::sort(shortfall.begin(), shortfall.end(), std::greater<>());
        double pen = 0.0;
        for (std::size_t j = allowed_outside; j < shortfall.size(); ++j) pen += shortfall[j] * shortfall[j];
        return pen;
    }

    std::size_t node_count() const { return nodes_.size(); }

    /// Certifies a candidate on a refined boundary grid: every refined node in W
    /// and the refined boundary average within the quadrature tolerance.
    bool verified(const BoundFamily& family, std::span<const double> params, double value) const {
        const std::size_t m = nodes_.size() * req_.refine_factor;
        Point p(family.dim());
        double sum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            family.evaluate(params, unit_root(j, m), p);
            if (!(req_.pair.inner.margin_unchecked(p) > 0.0)) return false;
            const double v = req_.phi(p);
            if (!std::isfinite(v)) return false;
            sum += v;
        }
        return std::abs(sum / static_cast<double>(m) - value) <= req_.quadrature_tol;
    }

private:
    const EnvelopeRequest& req_;
    std::vector<Complex> nodes_;
    std::vector<Complex> probes_;
    std::vector<double> margins_;
    std::optional<double> cap_;
};

void validate(const EnvelopeRequest& req) {
    if (req.centre.size() != req.pair.dim())
        throw ConfigError("envelope: centre dimension " + std::to_string(req.centre.size()) + " does not match pair");
    if (!(req.pair.outer.margin(req.centre) > 0.0)) throw PreconditionError("envelope: centre is not in X");
    if (req.families.empty()) throw ConfigError("envelope: no disc families");
    if (!(req.penalty_weight > 0.0)) throw ConfigError("envelope: penalty weight must be positive");
    if (req.starts == 0 || req.budget == 0) throw ConfigError("envelope: starts and budget must be positive");
    if (!req.phi.eval) throw ConfigError("envelope: obstacle has no evaluator");
}

std::vector<BoundFamily> bind_families(const EnvelopeRequest& req, std::vector<std::string>& skipped) {
    std::optional<ScaleRange> fallback;
    try {
        fallback = req.pair.fibre_radii(req.centre);
    } catch (const PreconditionError&) {
        fallback.reset();
    }
    std::vector<BoundFamily> bound;
    for (const auto& f : req.families) {
        try {
            bound.emplace_back(f, req.centre, fallback);
        } catch (const PreconditionError&) {
            skipped.push_back(f.tag());
        }
    }
    return bound;
}

std::vector<double> random_start(const BoundFamily& family, std::uint64_t seed, std::size_t start) {
    StartRng rng(seed, family.family().tag(), start);
    std::vector<double> x(family.parameter_count());
    for (std::size_t i = 0; i < x.size(); ++i)
        x[i] = family.lower()[i] + rng.uniform() * (family.upper()[i] - family.lower()[i]);
    return x;
}

}  // namespace

EnvelopeResult minimize_envelope(const EnvelopeRequest& req) {
    validate(req);
    EnvelopeResult result;
    const auto families = bind_families(req, result.skipped_families);
    DiscSampler sampler(req);
    NelderMeadOptions nm;
    nm.budget = req.budget;

    double best_value = kInf;
    double least_violation = kInf;
    std::optional<EnvelopeResult> fallback;

    for (const auto& family : families) {
        const std::size_t starts = family.parameter_count() == 0 ? 1 : req.starts;
        for (std::size_t s = 0; s < starts; ++s) {
            double start_best = kInf;
            std::vector<double> start_params;
            double start_least = kInf;
            std::vector<double> least_params;

            auto objective = [&](std::span<const double> x) {
                const Evaluation e = sampler.evaluate(family, x);
                if (e.admissible && e.average < start_best && sampler.verified(family, x, e.average)) {
                    start_best = e.average;
                    start_params.assign(x.begin(), x.end());
                }
                if (!e.admissible && e.violation < start_least) {
                    start_least = e.violation;
                    least_params.assign(x.begin(), x.end());
                }
                return e.average + req.penalty_weight * e.penalty;
            };
            const auto run = nelder_mead(objective, random_start(family, req.seed, s), family.lower(), family.upper(), nm);
            result.starts.push_back({family.family().tag(), s, run.value, start_best, run.evaluations});

            if (start_best < best_value) {
                best_value = start_best;
                result.value = start_best;
                result.family = family.family().tag();
                result.params = start_params;
                result.start = s;
                result.max_violation = 0.0;
                result.feasible = true;
                result.trace = run.trace;
            }
            if (!std::isfinite(best_value) && start_least < least_violation) {
                least_violation = start_least;
                EnvelopeResult f;
                f.family = family.family().tag();
                f.params = least_params;
                f.start = s;
                f.max_violation = start_least;
                f.value = sampler.evaluate(family, least_params).average;
                f.feasible = start_least <= req.feasibility_tol;
                f.trace = run.trace;
                fallback = std::move(f);
            }
        }
    }
    if (!std::isfinite(best_value)) {
        auto starts = std::move(result.starts);
        auto skipped = std::move(result.skipped_families);
        result = fallback.value_or(EnvelopeResult{});
        if (!fallback) result.value = kInf, result.max_violation = kInf;
        result.starts = std::move(starts);
        result.skipped_families = std::move(skipped);
    }
    return result;
}

PartialEnvelopeResult partial_envelope(const EnvelopeRequest& req, double eps) {
    validate(req);
    const std::size_t m = req.grid.size();
    if (!(eps > 2.0 / static_cast<double>(m) && eps < 1.0))
        throw ConfigError("partial_envelope: eps must lie in (2/M, 1)");
    // mass > 1 - eps  <=>  fewer than eps * M nodes outside W.
    const auto limit = static_cast<std::size_t>(std::ceil(eps * static_cast<double>(m)));
    const std::size_t allowed_outside = limit - 1;

    PartialEnvelopeResult best;
    best.value = kInf;
    const auto full = minimize_envelope(req);
    if (full.feasible && full.max_violation == 0.0) {
        best = {full.value, 1.0, full.family, true};
    }

    std::vector<std::string> skipped;
    const auto families = bind_families(req, skipped);
    DiscSampler sampler(req);
    NelderMeadOptions nm;
    nm.budget = req.budget;
    for (const auto& family : families) {
        const std::size_t starts = family.parameter_count() == 0 ? 1 : req.starts;
        for (std::size_t s = 0; s < starts; ++s) {
            auto objective = [&](std::span<const double> x) {
                const Evaluation e = sampler.evaluate(family, x);
                bool boundary_in_x = true;
                const double outer_pen = sampler.boundary_outer_penalty(family, x, boundary_in_x);
                const std::size_t outside = sampler.node_count() - e.nodes_in_w;
                if (outside <= allowed_outside && boundary_in_x && e.probes_in_x && e.partial_integral < best.value) {
                    best.value = e.partial_integral;
                    best.mass = static_cast<double>(e.nodes_in_w) / static_cast<double>(sampler.node_count());
                    best.family = family.family().tag();
                    best.feasible = true;
                }
                return e.partial_integral + req.penalty_weight * (sampler.partial_w_penalty(allowed_outside) + outer_pen);
            };
            nelder_mead(objective, random_start(family, req.seed, s), family.lower(), family.upper(), nm);
        }
    }
    return best;
}

std::vector<DiscFamily> default_families(const DomainPair& pair, PointView centre) {
    std::vector<DiscFamily> out{DiscFamily::constant()};
    std::optional<ScaleRange> radii;
    try {
        radii = pair.fibre_radii(centre);
    } catch (const PreconditionError&) {
        radii.reset();
    }
    if (radii) {
        for (std::size_t k = 1; k <= 3; ++k) out.push_back(DiscFamily::blaschke(k));
        if (std::abs(centre.back()) == 0.0) out.push_back(DiscFamily::vertical(1));
    }
    if (pair.kind == "shell" && norm(centre) < 2.0) out.push_back(DiscFamily::shell());
    out.push_back(DiscFamily::polynomial(2));
    return out;
}

}  // namespace discenv
