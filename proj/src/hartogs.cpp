#include "discenv/hartogs.hpp"

#include "discenv/error.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <ostream>

namespace discenv {

AnalyticDisc vertical_disc(const HartogsPair& pair, PointView base_point, double s, unsigned k, std::size_t m) {
    if (k == 0) throw ConfigError("vertical_disc: winding must be at least 1");
    const ScaleRange range = pair.radii(base_point);
    if (!(s > range.lower && s < range.upper))
        throw PreconditionError("vertical_disc: scale " + std::to_string(s) + " outside (" +
                                std::to_string(range.lower) + ", " + std::to_string(range.upper) + ")");
    const Point zb(base_point.begin(), base_point.end());
    return disc_from_function(pair.dim(), m, [&](Complex zeta, std::span<Complex> out) {
        for (std::size_t c = 0; c < zb.size(); ++c) out[c] = zb[c];
        out.back() = s * std::pow(zeta, static_cast<int>(k));
    });
}

AnalyticDisc hartogs_homotopy(const AnalyticDisc& f, double t) {
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("hartogs_homotopy: t must lie in [0, 1]");
    if (t == 1.0) return f;
    const std::size_t n = f.dim();
    const auto last = f.component(n - 1);
    const OuterFunction h = outer_function(last);
    std::vector<std::vector<Complex>> comps(n);
    for (std::size_t c = 0; c + 1 < n; ++c) comps[c] = f.component_at_radius(c, t);
    const auto h1 = h.boundary_samples();
    const auto ht = h.samples_at_radius(t);
    comps[n - 1].resize(f.size());
    for (std::size_t j = 0; j < f.size(); ++j) comps[n - 1][j] = last[j] * ht[j] / h1[j];
    return disc_from_samples(comps);
}

HomotopyTrace homotopy_trace(const HartogsPair& pair, const AnalyticDisc& f, std::size_t steps) {
    if (steps == 0) throw ConfigError("homotopy_trace: need at least one step");
    if (f.dim() != pair.dim()) throw ConfigError("homotopy_trace: disc dimension does not match the pair");
    const Domain w = pair.shell();
    const Point centre = f.centre();
    const OuterFunction h = outer_function(f.component(f.dim() - 1));
    HomotopyTrace trace;
    Point p(f.dim());
    for (std::size_t s = 0; s <= steps; ++s) {
        const double t = static_cast<double>(s) / static_cast<double>(steps);
        AnalyticDisc g = hartogs_homotopy(f, t);
        HomotopyStep step;
        step.t = t;
        step.min_margin = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < g.size(); ++j) {
            g.boundary_point(j, p);
            step.min_margin = std::min(step.min_margin, w.margin_unchecked(p));
        }
        const Point gc = g.centre();
        for (std::size_t c = 0; c < gc.size(); ++c)
            step.centre_deviation = std::max(step.centre_deviation, std::abs(gc[c] - centre[c]));
        const auto last = g.component(g.dim() - 1);
        step.winding = winding_number(last);
        const auto ht = h.samples_at_radius(t);
        for (std::size_t j = 0; j < g.size(); ++j)
            step.modulus_error = std::max(step.modulus_error, std::abs(std::abs(last[j]) - std::abs(ht[j])));
        trace.steps.push_back(step);
        trace.discs.push_back(std::move(g));
    }
    return trace;
}

void HomotopyTrace::write_json(std::ostream& out) const {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : steps)
        arr.push_back({{"t", s.t}, {"min_margin", s.min_margin}, {"centre_deviation", s.centre_deviation},
                       {"winding", s.winding}});
    out << arr.dump(2) << '\n';
}

int classify_component(const AnalyticDisc& f) {
    const int k = winding_number(f.component(f.dim() - 1));
    if (k < 0)
        throw InconsistencyError("classify_component: negative winding " + std::to_string(k) +
                                 "; the last component is not holomorphic");
    return k;
}

AnalyticDisc shrink(const AnalyticDisc& f, std::optional<double> s) {
    const double r = s.value_or(1.0 - 1.0 / static_cast<double>(f.size()));
    if (!(r > 0.0 && r <= 1.0)) throw ConfigError("shrink: factor must lie in (0, 1]");
    std::vector<std::vector<Complex>> comps(f.dim());
    for (std::size_t c = 0; c < f.dim(); ++c) comps[c] = f.component_at_radius(c, r);
    return disc_from_samples(comps);
}

}  // namespace discenv
