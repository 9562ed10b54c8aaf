#include "discenv/error.hpp"
#include "discenv/oracle.hpp"
#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace discenv;

namespace {

HartogsPair kiselman_pair() { return constant_hartogs_pair(1.0, 0.25, 1.0); }

ObstacleSolverConfig coarse(double h = 1.0 / 64.0) {
    ObstacleSolverConfig c;
    c.spacing = h;
    return c;
}

double sup_error(const GridField& f, const std::function<double(Complex)>& exact) {
    double err = 0.0;
    for (std::size_t j = 0; j <= f.intervals(); ++j)
        for (std::size_t i = 0; i <= f.intervals(); ++i)
            if (f.tag(i, j) != CellTag::Outside)
                err = std::max(err, std::abs(f.value(i, j) - exact(Complex(f.coord(i), f.coord(j)))));
    return err;
}

}  // namespace

TEST_CASE("Kiselman psi of a constant obstacle") {
    const auto r = kiselman_psi(kiselman_pair(), obstacles::constant(2.5), Point{0.1});
    CHECK(r.value == 2.5);
    CHECK(r.error_bound == 0.0);
}

TEST_CASE("Kiselman psi of Re z1 + |z2|^2 approaches the inner radius") {
    const auto pair = kiselman_pair();
    const auto phi = obstacles::real_first_plus_last_squared(-2.0, 2.0);
    for (Complex z1 : {Complex(0.0), Complex(0.3), Complex(-0.3), Complex(0.0, 0.3), Complex(0.0, -0.3)}) {
        const auto r = kiselman_psi(pair, phi, Point{z1});
        CHECK(std::abs(r.value - (z1.real() + 1.0 / 16.0)) <= 1e-9);
        CHECK(r.argmin > 0.25);
        CHECK(r.argmin < 0.25 + 1e-6);
        CHECK(r.value - (z1.real() + 1.0 / 16.0) <= r.error_bound + 1e-15);
    }
}

TEST_CASE("Kiselman psi of -log|z2| approaches the outer radius") {
    const auto r = kiselman_psi(kiselman_pair(), obstacles::neg_log_abs_last(-1.0, 2.0), Point{0.2});
    CHECK(std::abs(r.value) <= 1e-9);
    CHECK(r.argmin > 1.0 - 1e-6);
}

TEST_CASE("Kiselman psi is an infimum over the fibre") {
    const auto pair = kiselman_pair();
    Obstacle phi{[](PointView p) {
                     const double s = std::abs(p[1]);
                     return p[0].real() + std::cos(9.0 * s) + (s - 0.6) * (s - 0.6);
                 },
                 true, -3.0, 3.0, "wiggle"};
    const Point base{Complex(0.1, 0.2)};
    const auto r = kiselman_psi(pair, phi, base);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> s(0.25, 1.0), arg(0.0, 2.0 * M_PI);
    for (int i = 0; i < 2000; ++i)
        CHECK(r.value <= phi(Point{base[0], std::polar(s(rng), arg(rng))}) + 1e-12);
    // Oracle: a brute-force scan of the modulus.
    double brute = INFINITY;
    for (int i = 1; i < 200000; ++i) brute = std::min(brute, phi(Point{base[0], 0.25 + 0.75 * i / 200000.0}));
    CHECK(std::abs(r.value - brute) <= 1e-8);
    CHECK(std::abs(r.value - brute) <= r.error_bound + 1e-12);
}

TEST_CASE("Kiselman psi preconditions") {
    const auto pair = kiselman_pair();
    CHECK_THROWS_AS(kiselman_psi(pair, obstacles::real_first(-2, 2), Point{1.5}), PreconditionError);
    Obstacle skew{[](PointView p) { return p[1].real(); }, false, -1, 1, "Re z2"};
    CHECK_THROWS_AS(kiselman_psi(pair, skew, Point{0.0}), PreconditionError);
    const auto open = constant_hartogs_pair(1.0, 0.25, INFINITY);
    CHECK_THROWS_AS(kiselman_psi(open, obstacles::constant(1.0), Point{0.0}), ConfigError);
}

TEST_CASE("grid solver returns a constant obstacle") {
    const auto sol = grid_obstacle_solver(planar_annulus_pair(), obstacles::constant(0.7), {}, coarse(1.0 / 32.0));
    CHECK(sup_error(sol.field, [](Complex) { return 0.7; }) <= 1e-8);
    CHECK(sol.caps == std::vector<double>{1.7, 2.7, 4.7, 8.7});
}

TEST_CASE("grid solver keeps a harmonic obstacle on a disc") {
    const auto sol = grid_obstacle_solver(ball_pair(1.0, 1), obstacles::real_first(-1, 1), {}, coarse());
    CHECK(sup_error(sol.field, [](Complex z) { return z.real(); }) <= 1e-8);
}

TEST_CASE("grid solver fills the annulus hole with the harmonic extension") {
    auto cfg = coarse();
    cfg.probes = {0.0, 0.5, 1.5};
    const auto sol = grid_obstacle_solver(planar_annulus_pair(), obstacles::log_abs_last(0.0, std::log(2.0)), {}, cfg);
    const double err = sup_error(sol.field, [](Complex z) { return std::max(std::log(std::abs(z)), 0.0); });
    CHECK(err <= 2e-2);
    // Caps well above the obstacle never bind: the probes agree across caps.
    for (std::size_t c = 1; c < sol.caps.size(); ++c)
        for (std::size_t p = 0; p < cfg.probes.size(); ++p)
            CHECK(std::abs(sol.probe_values[c][p] - sol.probe_values[0][p]) <= 1e-6);
    CHECK(sol.probe_values[0][2] == doctest::Approx(std::log(1.5)).epsilon(1e-3));
}

TEST_CASE("grid solver error shrinks with the spacing") {
    const auto phi = obstacles::log_abs_last(0.0, std::log(2.0));
    auto exact = [](Complex z) { return std::max(std::log(std::abs(z)), 0.0); };
    auto cfg = coarse(1.0 / 32.0);
    cfg.richardson = true;
    const auto a = grid_obstacle_solver(planar_annulus_pair(), phi, {1.0}, cfg);
    const auto b = grid_obstacle_solver(planar_annulus_pair(), phi, {1.0}, coarse(1.0 / 64.0));
    CHECK(sup_error(b.field, exact) < sup_error(a.field, exact));
    CHECK(std::isfinite(a.richardson_difference));
    CHECK(a.richardson_estimate == doctest::Approx(a.richardson_difference));
}

TEST_CASE("projected Gauss-Seidel from the cap decreases monotonically") {
    auto cfg = coarse(1.0 / 16.0);
    cfg.omega = 1.0;
    const auto h = relax_from_cap(planar_annulus_pair(), obstacles::log_abs_last(0.0, std::log(2.0)), 2.0, cfg);
    REQUIRE(h.sweeps > 1);
    for (double inc : h.max_increase) CHECK(inc <= 0.0);
}

TEST_CASE("grid solver configuration errors") {
    const auto ann = planar_annulus_pair();
    const auto phi = obstacles::log_abs_last(0.0, std::log(2.0));
    CHECK_THROWS_AS(grid_obstacle_solver(shell_pair(2), obstacles::norm_squared(0, 16), {}, coarse()),
                    UnsupportedDimensionError);
    CHECK_THROWS_AS(grid_obstacle_solver(ann, phi, {0.1}, coarse()), ConfigError);
    CHECK_THROWS_AS(grid_obstacle_solver(ann, phi, {2.0, 1.0}, coarse()), ConfigError);
    auto bad = coarse();
    bad.omega = 2.5;
    CHECK_THROWS_AS(grid_obstacle_solver(ann, phi, {}, bad), ConfigError);
    Obstacle nan{[](PointView) { return std::nan(""); }, true, 0, 1, "nan"};
    CHECK_THROWS_AS(grid_obstacle_solver(ann, nan, {5.0}, coarse()), EvaluationError);
}

TEST_CASE("grid field interpolation and CSV export") {
    const auto sol = grid_obstacle_solver(ball_pair(1.0, 1), obstacles::real_first(-1, 1), {}, coarse(1.0 / 8.0));
    CHECK(sol.field.interpolate(Complex(0.3, 0.1)) == doctest::Approx(0.3).epsilon(1e-8));
    CHECK_THROWS_AS(sol.field.interpolate(Complex(1.2, 0.0)), PreconditionError);
    std::ostringstream os;
    sol.field.write_csv(os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "x,y,value,mask");
    std::size_t rows = 0, outside = 0;
    while (std::getline(is, line)) {
        ++rows;
        if (line.find(",nan,outside") != std::string::npos) ++outside;
    }
    CHECK(rows == sol.field.nodes_per_side() * sol.field.nodes_per_side());
    CHECK(outside > 0);
}

TEST_CASE("submean check accepts pluriharmonic functions") {
    std::mt19937_64 rng(3);
    std::vector<Point> probes;
    for (int i = 0; i < 200; ++i) probes.push_back({testing::random_in_disc(rng, 0.8), testing::random_in_disc(rng, 0.8)});
    auto region = [](PointView p) { return norm(p) < 4.0; };
    const auto rep = submean_check([](PointView p) { return p[0].real() + (p[0] * p[1]).imag(); }, region, probes);
    CHECK(rep.passed);
    CHECK(rep.max_violation <= 1e-12);
    CHECK(rep.checked == 200 * 2 * 4);
    CHECK(rep.skipped == 0);
}

TEST_CASE("submean check flags a strictly superharmonic function") {
    std::mt19937_64 rng(5);
    std::vector<Point> probes;
    for (int i = 0; i < 50; ++i) probes.push_back({testing::random_in_disc(rng, 0.5)});
    auto region = [](PointView p) { return std::abs(p[0]) < 1.0; };
    SubmeanOptions opts;
    opts.radii = {0.5};
    const auto rep = submean_check([](PointView p) { return -10.0 * std::norm(p[0]); }, region, probes, opts);
    CHECK_FALSE(rep.passed);
    // The circle mean of -10|z|^2 sits exactly 10 rho^2 below the centre value.
    CHECK(rep.max_violation == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(rep.violations == rep.checked);
}

TEST_CASE("submean check on max(log|z|, 0)") {
    std::mt19937_64 rng(9);
    std::vector<Point> probes;
    for (int i = 0; i < 1000; ++i) probes.push_back({testing::random_in_disc(rng, 1.95)});
    auto region = [](PointView p) { return std::abs(p[0]) < 2.0; };
    const auto rep = submean_check([](PointView p) { return std::max(std::log(std::abs(p[0])), 0.0); }, region,
                                   probes);
    CHECK(rep.passed);
    CHECK(rep.skipped > 0);
    // One complex direction in the plane, two radii per probe.
    CHECK(rep.checked + rep.skipped == 1000 * 2);
}
