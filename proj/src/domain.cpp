#include "discenv/domain.hpp"

#include "discenv/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <numbers>

namespace discenv {

Domain::Domain(std::string name, std::size_t dim, MarginFn margin, double bounding_radius)
    : name_(std::move(name)), dim_(dim), margin_(std::move(margin)), bounding_radius_(bounding_radius) {}

double Domain::margin(PointView p) const {
    if (p.size() != dim_)
        throw ConfigError(name_ + ": point of dimension " + std::to_string(p.size()) + ", expected " +
                          std::to_string(dim_));
    return margin_(p);
}

Domain ball(double radius, std::size_t dim) {
    if (!(radius > 0.0)) throw ConfigError("ball: radius must be positive");
    return Domain("ball", dim, [radius](PointView p) { return radius - norm(p); }, radius);
}

Domain spherical_shell(double r_in, double r_out, std::size_t dim) {
    if (!(0.0 <= r_in && r_in < r_out)) throw ConfigError("spherical_shell: need 0 <= r_in < r_out");
    return Domain(
        "spherical_shell", dim,
        [r_in, r_out](PointView p) {
            const double r = norm(p);
            return std::min(r_out - r, r - r_in);
        },
        r_out);
}

Domain whole_space(std::size_t dim) {
    return Domain("whole_space", dim, [](PointView) { return std::numeric_limits<double>::infinity(); });
}

Domain unite(std::string name, std::vector<Domain> parts) {
    if (parts.empty()) throw ConfigError("unite: no parts");
    const std::size_t dim = parts.front().dim();
    double radius = 0.0;
    for (const auto& d : parts) {
        if (d.dim() != dim) throw ConfigError("unite: parts differ in dimension");
        radius = std::max(radius, d.bounding_radius());
    }
    auto shared = std::make_shared<std::vector<Domain>>(std::move(parts));
    return Domain(
        std::move(name), dim,
        [shared](PointView p) {
            double m = -std::numeric_limits<double>::infinity();
            for (const auto& d : *shared) m = std::max(m, d.margin_unchecked(p));
            return m;
        },
        radius);
}

Domain intersect(std::string name, std::vector<Domain> parts) {
    if (parts.empty()) throw ConfigError("intersect: no parts");
    const std::size_t dim = parts.front().dim();
    double radius = std::numeric_limits<double>::infinity();
    for (const auto& d : parts) {
        if (d.dim() != dim) throw ConfigError("intersect: parts differ in dimension");
        radius = std::min(radius, d.bounding_radius());
    }
    auto shared = std::make_shared<std::vector<Domain>>(std::move(parts));
    return Domain(
        std::move(name), dim,
        [shared](PointView p) {
            double m = std::numeric_limits<double>::infinity();
            for (const auto& d : *shared) m = std::min(m, d.margin_unchecked(p));
            return m;
        },
        radius);
}

ScaleRange HartogsPair::radii(PointView base_point) const {
    if (base_point.size() != base.dim()) throw ConfigError("HartogsPair: base point has the wrong dimension");
    if (base.dim() > 0 && !(base.margin(base_point) > 0.0))
        throw PreconditionError("HartogsPair: base point outside the base domain");
    return {inner_radius(base_point), outer_radius(base_point)};
}

Domain HartogsPair::shell() const {
    const std::size_t n = dim();
    return Domain("hartogs_shell", n, [h = *this, n](PointView p) {
        const auto zb = p.first(n - 1);
        const double base_margin = n > 1 ? h.base.margin_unchecked(zb) : std::numeric_limits<double>::infinity();
        if (!(base_margin > 0.0)) return base_margin;
        const double modulus = std::abs(p[n - 1]);
        return std::min({base_margin, modulus - h.inner_radius(zb), h.outer_radius(zb) - modulus});
    });
}

Domain HartogsPair::completion() const {
    const std::size_t n = dim();
    return Domain("hartogs_completion", n, [h = *this, n](PointView p) {
        const auto zb = p.first(n - 1);
        const double base_margin = n > 1 ? h.base.margin_unchecked(zb) : std::numeric_limits<double>::infinity();
        if (!(base_margin > 0.0)) return base_margin;
        return std::min(base_margin, h.outer_radius(zb) - std::abs(p[n - 1]));
    });
}

HartogsPair make_hartogs_pair(Domain base, std::function<double(PointView)> inner_radius,
                              std::function<double(PointView)> outer_radius) {
    if (!inner_radius || !outer_radius) throw ConfigError("make_hartogs_pair: radius functions required");
    return HartogsPair{std::move(base), std::move(inner_radius), std::move(outer_radius)};
}

HartogsPair constant_hartogs_pair(double base_radius, double r, double R) {
    if (!(0.0 <= r && r < R)) throw ConfigError("constant_hartogs_pair: need 0 <= r < R");
    return make_hartogs_pair(
        ball(base_radius, 1), [r](PointView) { return r; }, [R](PointView) { return R; });
}

std::optional<ScaleRange> DomainPair::fibre_radii(PointView x) const {
    if (!hartogs) return std::nullopt;
    return hartogs->radii(x.first(x.size() - 1));
}

DomainPair ball_pair(double radius, std::size_t dim) {
    auto b = ball(radius, dim);
    return DomainPair{"ball", b, b, std::nullopt};
}

DomainPair shell_pair(std::size_t dim) {
    if (dim < 2) throw ConfigError("shell_pair: dimension must be at least 2");
    return DomainPair{"shell", spherical_shell(1.0, 4.0, dim), ball(4.0, dim), std::nullopt};
}

DomainPair planar_annulus_pair() {
    auto h = make_hartogs_pair(
        whole_space(0), [](PointView) { return 1.0; }, [](PointView) { return 2.0; });
    return DomainPair{"planar_annulus", Domain("annulus", 1, [](PointView p) {
                          const double r = std::abs(p[0]);
                          return std::min(2.0 - r, r - 1.0);
                      }, 2.0),
                      ball(2.0, 1), h};
}

DomainPair hartogs_domain_pair(const HartogsPair& h) { return DomainPair{"hartogs", h.shell(), h.completion(), h}; }

namespace obstacles {

Obstacle constant(double value) {
    return Obstacle{[value](PointView) { return value; }, true, value, value, "constant"};
}

Obstacle log_abs_last(double lower, double upper) {
    return Obstacle{[](PointView p) { return std::log(std::abs(p.back())); }, true, lower, upper, "log|z_n|"};
}

Obstacle neg_log_abs_last(double lower, double upper) {
    return Obstacle{[](PointView p) { return -std::log(std::abs(p.back())); }, true, lower, upper, "-log|z_n|"};
}

Obstacle real_first(double lower, double upper) {
    return Obstacle{[](PointView p) { return p[0].real(); }, false, lower, upper, "Re z_1"};
}

Obstacle real_first_plus_last_squared(double lower, double upper) {
    return Obstacle{[](PointView p) { return p[0].real() + std::norm(p.back()); }, true, lower, upper,
                    "Re z_1 + |z_n|^2"};
}

Obstacle norm_squared(double lower, double upper) {
    return Obstacle{[](PointView p) { return discenv::norm_squared(p); }, true, lower, upper, "|z|^2"};
}

}  // namespace obstacles

double rotation_invariance_defect(const Obstacle& phi, const std::vector<Point>& probes,
                                  const std::vector<Complex>& rotations) {
    double worst = 0.0;
    for (const auto& p : probes) {
        const double base = phi(p);
        Point q = p;
        for (const auto& eta : rotations) {
            q.back() = eta * p.back();
            worst = std::max(worst, std::abs(phi(q) - base));
        }
    }
    return worst;
}

AnalyticDisc shell_disc(PointView x, std::size_t m) {
    if (x.size() < 2) throw PreconditionError("shell_disc: needs dimension n >= 2");
    if (!(norm(x) < 2.0)) throw PreconditionError("shell_disc: x outside the ball of radius 2");
    Point centre(x.begin(), x.end());
    return disc_from_function(x.size(), m, [&centre](Complex zeta, std::span<Complex> out) {
        shell_map(centre, zeta, out);
    });
}

Point counterexample_curve(double delta, double t) {
    return {1.0 + std::polar(1.0, kTwoPi * (2.0 * t - 1.0) / 3.0), Complex((1.0 - delta / 2.0) * t, 0.0)};
}

namespace {

double curve_distance_squared(double delta, PointView p, double t) {
    const auto c = counterexample_curve(delta, t);
    return std::norm(p[0] - c[0]) + std::norm(p[1] - c[1]);
}

// Distance from z to the closed semicircle {exp(it)/2 : t in [lo, lo + pi]}, upper (lo = 0) or lower (lo = pi).
double semicircle_distance(Complex z, bool upper) {
    const bool on_side = upper ? z.imag() >= 0.0 : z.imag() <= 0.0;
    if (on_side) return std::abs(std::abs(z) - 0.5);
    return std::min(std::abs(z - 0.5), std::abs(z + 0.5));
}

}  // namespace

double counterexample_curve_distance(double delta, PointView p) {
    constexpr int kCoarse = 48;
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= kCoarse; ++i) {
        const double d = curve_distance_squared(delta, p, static_cast<double>(i) / kCoarse);
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    // Golden-section refinement on the bracket around the best coarse sample.
    double lo = std::max(0, best - 1) / static_cast<double>(kCoarse);
    double hi = std::min(kCoarse, best + 1) / static_cast<double>(kCoarse);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = curve_distance_squared(delta, p, x1), f2 = curve_distance_squared(delta, p, x2);
    for (int it = 0; it < 40; ++it) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = curve_distance_squared(delta, p, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = curve_distance_squared(delta, p, x2);
        }
    }
    return std::sqrt(std::min({best_d, f1, f2}));
}

Counterexample counterexample_pair(const CounterexampleParams& params) {
    const double delta = params.delta, tau = params.tube_radius, rho = params.rho_u, eps = params.eps_moll;
    if (!(delta > 0.0 && delta < 0.5)) throw ConfigError("counterexample: delta must lie in (0, 1/2)");
    if (!(tau > 0.0 && tau < delta / 2.0)) throw ConfigError("counterexample: tube radius must lie in (0, delta/2)");
    if (!(rho > 0.0 && rho < 0.25)) throw ConfigError("counterexample: rho_u must lie in (0, 1/4)");
    if (!(eps > 0.0 && eps < rho)) throw ConfigError("counterexample: eps_moll must lie in (0, rho_u)");

    // Away from its endpoints the tube must stay clear of closed(D) x {|z2| <= delta}.
    const auto start = counterexample_curve(delta, 0.0);
    for (int i = 0; i <= 4000; ++i) {
        const auto c = counterexample_curve(delta, i / 4000.0);
        const double from_start = std::sqrt(std::norm(c[0] - start[0]) + std::norm(c[1] - start[1]));
        if (from_start <= 3.0 * tau) continue;
        const double dz1 = std::max(0.0, std::abs(c[0]) - 1.0);
        const double dz2 = std::max(0.0, std::abs(c[1]) - delta);
        if (std::hypot(dz1, dz2) <= tau)
            throw ConfigError("counterexample: tube radius too large, the tube meets closed(D) x {|z2| <= delta}");
    }

    Domain w1("W1", 2, [delta](PointView p) { return std::min(1.0 - std::abs(p[0]), delta - std::abs(p[1])); });
    Domain w2("W2", 2, [delta](PointView p) {
        const double r2 = std::abs(p[1]);
        return std::min({1.0 - std::abs(p[0]), r2 - (1.0 - delta), 1.0 - r2});
    });
    Domain w3("W3", 2, [delta, tau](PointView p) { return tau - counterexample_curve_distance(delta, p); });
    Domain bidisc("bidisc", 2, [](PointView p) { return std::min(1.0 - std::abs(p[0]), 1.0 - std::abs(p[1])); });

    auto inner = unite("counterexample_W", {w1, w2, w3});
    auto outer = unite("counterexample_X", {bidisc, w3});

    Obstacle phi;
    phi.eval = [delta, rho, eps](PointView p) {
        const double r2 = std::abs(p[1]);
        const double d1 = std::min(rho - semicircle_distance(p[0], true), delta - r2);
        const double d2 = std::min({rho - semicircle_distance(p[0], false), r2 - (1.0 - delta), 1.0 - r2});
        const double ramp = std::clamp(std::max(d1, d2) / eps, 0.0, 1.0);
        return -ramp;
    };
    phi.rotation_invariant_last = false;
    phi.lower_bound = -1.0;
    phi.upper_bound = 0.0;
    phi.description = "counterexample: -1 on V1 u V2, 0 elsewhere";
    return Counterexample{DomainPair{"counterexample", inner, outer, std::nullopt}, phi, params};
}

RealSection counterexample_real_section(const CounterexampleParams& params) {
    const double delta = params.delta, tau = params.tube_radius;
    // x in (1, 3) projects from W iff some z2 puts (x, z2) in the tube, i.e. the
    // planar distance from x to the z1-trace of the curve is below tau.
    auto inside = [&](double x) {
        constexpr int kSamples = 4000;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= kSamples; ++i)
            best = std::min(best, std::abs(Complex(x, 0.0) - counterexample_curve(delta, double(i) / kSamples)[0]));
        return best < tau;
    };
    constexpr int kScan = 2000;
    double first = -1.0, last = -1.0;
    for (int i = 1; i < kScan; ++i) {
        const double x = 1.0 + 2.0 * i / kScan;
        if (inside(x)) {
            if (first < 0.0) first = x;
            last = x;
        }
    }
    if (first < 0.0) throw InconsistencyError("counterexample_real_section: tube does not meet the real axis");
    auto bisect = [&](double in, double out) {
        for (int it = 0; it < 50; ++it) {
            const double mid = 0.5 * (in + out);
            (inside(mid) ? in : out) = mid;
        }
        return 0.5 * (in + out);
    };
    return {bisect(first, first - 2.0 / kScan), bisect(last, last + 2.0 / kScan)};
}

}  // namespace discenv
