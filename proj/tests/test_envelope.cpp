#include "discenv/envelope.hpp"
#include "discenv/error.hpp"
#include "discenv/nelder_mead.hpp"

#include <doctest.h>

#include <cmath>

using namespace discenv;

namespace {

EnvelopeRequest small_request(DomainPair pair, Obstacle phi, Point x) {
    EnvelopeRequest req{pair, phi, x, default_families(pair, x)};
    req.grid = QuadratureGrid(128);
    req.starts = 3;
    req.budget = 400;
    return req;
}

EnvelopeRequest annulus_request(Point x) {
    return small_request(planar_annulus_pair(), obstacles::log_abs_last(0.0, std::log(2.0)), std::move(x));
}

}  // namespace

TEST_CASE("Nelder-Mead minimizes a shifted quadratic inside the box") {
    const std::vector<double> lo{-2, -2, -2}, hi{2, 2, 2};
    auto f = [](std::span<const double> x) {
        return (x[0] - 0.3) * (x[0] - 0.3) + 2 * (x[1] + 0.7) * (x[1] + 0.7) + 0.5 * (x[2] - 1.1) * (x[2] - 1.1);
    };
    const auto r = nelder_mead(f, {0, 0, 0}, lo, hi, {});
    CHECK(r.value < 1e-10);
    CHECK(r.best[0] == doctest::Approx(0.3).epsilon(1e-4));
    CHECK(r.evaluations <= 2000);
}

TEST_CASE("Nelder-Mead respects the box") {
    const std::vector<double> lo{0.5}, hi{1.0};
    const auto r = nelder_mead([](std::span<const double> x) { return x[0]; }, {0.9}, lo, hi, {});
    CHECK(r.best[0] == doctest::Approx(0.5));
    CHECK(r.value >= 0.5);
}

TEST_CASE("Nelder-Mead best value is monotone in the budget") {
    const std::vector<double> lo{-2, -2}, hi{2, 2};
    auto rosen = [](std::span<const double> x) {
        return 100 * (x[1] - x[0] * x[0]) * (x[1] - x[0] * x[0]) + (1 - x[0]) * (1 - x[0]);
    };
    double prev = INFINITY;
    for (std::size_t b : {50u, 100u, 200u, 400u, 800u, 1600u}) {
        NelderMeadOptions o;
        o.budget = b;
        const auto r = nelder_mead(rosen, {-1.2, 1.0}, lo, hi, o);
        CHECK(r.value <= prev + 1e-12);
        CHECK(r.evaluations <= b);
        prev = r.value;
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("annulus envelope at the origin") {
    const auto r = minimize_envelope(annulus_request(Point{0.0}));
    CHECK(r.feasible);
    CHECK(r.max_violation == 0.0);
    CHECK(r.value >= -1e-12);
    CHECK(r.value < 2e-2);
    CHECK_FALSE(r.trace.empty());
}

TEST_CASE("constant family attains phi at a point of W") {
    const Point x{1.5};
    auto req = annulus_request(x);
    req.families = {DiscFamily::constant()};
    const auto r = minimize_envelope(req);
    CHECK(r.feasible);
    CHECK(r.family == "constant");
    CHECK(r.value <= std::log(1.5) + 1e-10);
}

TEST_CASE("reported value is the quadrature of the reported disc") {
    const auto req = annulus_request(Point{0.5});
    const auto r = minimize_envelope(req);
    REQUIRE(r.feasible);
    std::optional<DiscFamily> fam;
    for (const auto& f : req.families)
        if (f.tag() == r.family) fam = f;
    REQUIRE(fam);
    const BoundFamily bound(*fam, req.centre, req.pair.fibre_radii(req.centre));
    const auto disc = bound.disc(r.params, req.grid.size());
    Point p(1);
    double sum = 0.0;
    for (std::size_t j = 0; j < disc.size(); ++j) {
        disc.boundary_point(j, p);
        CHECK(req.pair.inner.margin(p) > 0.0);
        sum += req.phi(p);
    }
    CHECK(std::abs(sum / double(disc.size()) - r.value) < 1e-12);
    // The centre is fixed analytically; the sampled mean may alias when a zero crowds the circle.
    Point centre(1);
    bound.evaluate(r.params, 0.0, centre);
    CHECK(std::abs(centre[0] - 0.5) < 1e-14);
}

TEST_CASE("envelope is deterministic") {
    const auto req = annulus_request(Point{0.25});
    const auto a = minimize_envelope(req);
    const auto b = minimize_envelope(req);
    CHECK(a.value == b.value);
    CHECK(a.params == b.params);
    CHECK(a.family == b.family);
    CHECK(a.trace == b.trace);
}

TEST_CASE("envelope value is monotone in the budget") {
    auto req = annulus_request(Point{Complex(0.3, 0.4)});
    req.families = {DiscFamily::polynomial(2)};
    double prev = INFINITY;
    for (std::size_t b : {100u, 200u, 400u, 800u}) {
        req.budget = b;
        const auto r = minimize_envelope(req);
        CHECK(r.value <= prev + 1e-12);
        prev = r.feasible ? r.value : prev;
    }
}

TEST_CASE("adding a family never increases the value") {
    auto req = annulus_request(Point{0.5});
    req.families = {DiscFamily::polynomial(2)};
    const auto small = minimize_envelope(req);
    req.families = {DiscFamily::polynomial(2), DiscFamily::blaschke(1)};
    const auto big = minimize_envelope(req);
    if (small.feasible) CHECK(big.value <= small.value + 1e-12);
    CHECK(big.feasible);
}

TEST_CASE("infeasible requests report the least violating disc") {
    // Only constant discs at a point outside W: nothing is admissible.
    auto req = annulus_request(Point{0.5});
    req.families = {DiscFamily::constant()};
    const auto r = minimize_envelope(req);
    CHECK_FALSE(r.feasible);
    CHECK(r.max_violation == doctest::Approx(0.5));
    CHECK(r.family == "constant");
}

TEST_CASE("families that cannot be centred at x are skipped") {
    auto req = annulus_request(Point{0.5});
    req.families = {DiscFamily::vertical(1), DiscFamily::blaschke(1)};
    const auto r = minimize_envelope(req);
    REQUIRE(r.skipped_families.size() == 1);
    CHECK(r.skipped_families[0] == "vertical1");
}

TEST_CASE("request validation") {
    auto req = annulus_request(Point{0.0});
    req.centre = Point{0.0, 0.0};
    CHECK_THROWS_AS(minimize_envelope(req), ConfigError);
    req = annulus_request(Point{3.0});
    CHECK_THROWS_AS(minimize_envelope(req), PreconditionError);
    req = annulus_request(Point{0.0});
    req.families.clear();
    CHECK_THROWS_AS(minimize_envelope(req), ConfigError);
    req = annulus_request(Point{0.0});
    CHECK_THROWS_AS(partial_envelope(req, 1.0 / 128.0), ConfigError);
    CHECK_THROWS_AS(partial_envelope(req, 1.0), ConfigError);
}

TEST_CASE("partial envelope never exceeds the full envelope") {
    const auto req = annulus_request(Point{0.5});
    const auto full = minimize_envelope(req);
    for (double eps : {0.5, 0.2}) {
        const auto p = partial_envelope(req, eps);
        CHECK(p.feasible);
        CHECK(p.value <= full.value + 1e-9);
        CHECK(p.mass > 1.0 - eps);
    }
}

TEST_CASE("partial envelope with a constant disc in W") {
    auto req = annulus_request(Point{1.5});
    req.families = {DiscFamily::constant()};
    const auto p = partial_envelope(req, 0.3);
    CHECK(p.value <= std::log(1.5) + 1e-12);
    CHECK(p.mass == 1.0);
}

TEST_CASE("default families follow the pair") {
    const auto ann = default_families(planar_annulus_pair(), Point{0.0});
    std::vector<std::string> tags;
    for (const auto& f : ann) tags.push_back(f.tag());
    CHECK(tags == std::vector<std::string>{"constant", "blaschke1", "blaschke2", "blaschke3", "vertical1", "polynomial2"});
    const auto sh = default_families(shell_pair(2), Point{0.5, 0.0});
    CHECK(sh.size() == 3);
    CHECK(sh[1].tag() == "shell");
}

TEST_CASE("shell pair envelope of the squared norm is at most 9") {
    const Point x{0.4, Complex(0.0, 0.3)};
    auto req = small_request(shell_pair(2), obstacles::norm_squared(1.0, 16.0), x);
    const auto r = minimize_envelope(req);
    CHECK(r.feasible);
    CHECK(r.value <= 9.0 + 1e-10);
    // |f|^2 is subharmonic, so its boundary mean dominates |x|^2.
    CHECK(r.value >= norm_squared(x) - 1e-12);
}
