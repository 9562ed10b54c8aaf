#include "discenv/family.hpp"

#include "discenv/error.hpp"

#include <algorithm>
#include <cmath>

namespace discenv {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

ScaleRange resolve_scale(const std::optional<ScaleRange>& own, const std::optional<ScaleRange>& fallback,
                         const std::string& tag) {
    if (own) return *own;
    if (fallback) return *fallback;
    throw ConfigError(tag + ": no scale range given and the domain pair provides none");
}

}  // namespace

void shell_map(PointView x, Complex zeta, std::span<Complex> out) {
    double tail = 0.0;
    for (std::size_t c = 1; c < x.size(); ++c) tail += std::norm(x[c]);
    const double rho = std::sqrt(9.0 - tail);
    out[0] = rho * (rho * zeta + x[0]) / (rho + std::conj(x[0]) * zeta);
    for (std::size_t c = 1; c < x.size(); ++c) out[c] = x[c];
}

double resolvable_zero_modulus(std::size_t m) {
    if (m < 8) throw ConfigError("resolvable_zero_modulus: need at least 8 samples");
    return std::min(1.0 - kBlaschkeZeroMargin, std::exp(-2.0 * std::log(1e14) / static_cast<double>(m)));
}

std::string DiscFamily::tag() const {
    return std::visit(Overloaded{
                          [](const Polynomial& p) { return "polynomial" + std::to_string(p.degree); },
                          [](const Blaschke& b) { return "blaschke" + std::to_string(b.degree); },
                          [](const Vertical& v) { return "vertical" + std::to_string(v.power); },
                          [](const Shell&) { return std::string("shell"); },
                          [](const Constant&) { return std::string("constant"); },
                      },
                      variant_);
}

std::optional<int> DiscFamily::winding() const {
    return std::visit(Overloaded{
                          [](const Polynomial&) -> std::optional<int> { return std::nullopt; },
                          [](const Blaschke& b) -> std::optional<int> { return static_cast<int>(b.degree); },
                          [](const Vertical& v) -> std::optional<int> { return static_cast<int>(v.power); },
                          [](const Shell&) -> std::optional<int> { return std::nullopt; },
                          [](const Constant&) -> std::optional<int> { return 0; },
                      },
                      variant_);
}

bool DiscFamily::needs_scale_range() const {
    return std::holds_alternative<Blaschke>(variant_) || std::holds_alternative<Vertical>(variant_);
}

BoundFamily::BoundFamily(DiscFamily family, Point centre, std::optional<ScaleRange> fallback_scale,
                         double max_zero_modulus)
    : family_(std::move(family)), centre_(std::move(centre)), max_zero_(max_zero_modulus) {
    if (centre_.empty()) throw ConfigError("BoundFamily: empty centre");
    if (!(max_zero_ > 0.0 && max_zero_ <= 1.0 - kBlaschkeZeroMargin))
        throw ConfigError("BoundFamily: zero modulus cap must lie in (0, 1 - 1e-6]");
    const std::string tag = family_.tag();
    const std::size_t n = centre_.size();
    const double last = std::abs(centre_.back());

    std::visit(Overloaded{
                   [&](const DiscFamily::Polynomial& p) {
                       if (p.degree == 0 || p.coeff_bound <= 0.0)
                           throw ConfigError(tag + ": degree and coefficient bound must be positive");
                       lower_.assign(2 * p.degree * n, -p.coeff_bound);
                       upper_.assign(2 * p.degree * n, p.coeff_bound);
                   },
                   [&](const DiscFamily::Blaschke& b) {
                       if (b.degree == 0) throw ConfigError(tag + ": degree must be at least 1");
                       const ScaleRange range = resolve_scale(b.scale, fallback_scale, tag);
                       const double lo = std::max(range.lower, last / max_zero_ * (1.0 + 1e-9) + 1e-12);
                       if (!(lo < range.upper))
                           throw PreconditionError(tag + ": |x_n| = " + std::to_string(last) +
                                                   " leaves no admissible scale below " + std::to_string(range.upper));
                       lower_ = {lo, 0.0};
                       upper_ = {range.upper, kTwoPi};
                       for (std::size_t k = 1; k < b.degree; ++k) {
                           lower_.insert(lower_.end(), {-1.0, -1.0});
                           upper_.insert(upper_.end(), {1.0, 1.0});
                       }
                   },
                   [&](const DiscFamily::Vertical& v) {
                       if (v.power == 0) throw ConfigError(tag + ": power must be at least 1");
                       if (last > 1e-14) throw PreconditionError(tag + ": vertical discs need a centre with x_n = 0");
                       const ScaleRange range = resolve_scale(v.scale, fallback_scale, tag);
                       if (!(range.lower < range.upper)) throw PreconditionError(tag + ": empty scale range");
                       lower_ = {range.lower};
                       upper_ = {range.upper};
                   },
                   [&](const DiscFamily::Shell&) {
                       if (n < 2) throw PreconditionError("shell: needs dimension n >= 2");
                       if (!(norm(centre_) < 2.0)) throw PreconditionError("shell: centre outside the ball of radius 2");
                   },
                   [&](const DiscFamily::Constant&) {},
               },
               family_.variant());
}

void BoundFamily::evaluate(std::span<const double> params, Complex zeta, std::span<Complex> out) const {
    const std::size_t n = dim();
    if (params.size() != parameter_count()) throw ConfigError(family_.tag() + ": wrong parameter count");
    std::visit(Overloaded{
                   [&](const DiscFamily::Polynomial& p) {
                       for (std::size_t c = 0; c < n; ++c) {
                           Complex acc = 0.0;
                           for (std::size_t k = p.degree; k >= 1; --k) {
                               const std::size_t idx = 2 * (c * p.degree + (k - 1));
                               acc = (acc + Complex(params[idx], params[idx + 1])) * zeta;
                           }
                           out[c] = centre_[c] + acc;
                       }
                   },
                   [&](const DiscFamily::Blaschke& b) {
                       const double s = params[0];
                       const Complex rot = std::polar(1.0, params[1]);
                       Complex u = rot * zeta;
                       for (std::size_t k = 0; k + 1 < b.degree; ++k) {
                           Complex a(params[2 + 2 * k], params[3 + 2 * k]);
                           const double r = std::abs(a);
                           if (r > max_zero_) a *= max_zero_ / r;
                           u *= blaschke_factor(a, zeta);
                       }
                       for (std::size_t c = 0; c + 1 < n; ++c) out[c] = centre_[c];
                       out[n - 1] = s * mobius_shift(centre_[n - 1] / s, u);
                   },
                   [&](const DiscFamily::Vertical& v) {
                       for (std::size_t c = 0; c + 1 < n; ++c) out[c] = centre_[c];
                       out[n - 1] = params[0] * std::pow(zeta, static_cast<int>(v.power));
                   },
                   [&](const DiscFamily::Shell&) { shell_map(centre_, zeta, out); },
                   [&](const DiscFamily::Constant&) {
                       for (std::size_t c = 0; c < n; ++c) out[c] = centre_[c];
                   },
               },
               family_.variant());
}

AnalyticDisc BoundFamily::disc(std::span<const double> params, std::size_t m) const {
    return disc_from_function(dim(), m, [&](Complex zeta, std::span<Complex> out) { evaluate(params, zeta, out); });
}

}  // namespace discenv
