#include "discenv/domain.hpp"
#include "discenv/error.hpp"
#include "discenv/functional.hpp"
#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace discenv;
using testing::sample_circle;

namespace {

Obstacle log_modulus() { return obstacles::log_abs_last(-50.0, 1.0); }

}  // namespace

TEST_CASE("quadrature weights sum to one") {
    const QuadratureGrid g(64);
    CHECK(g.size() == 64);
    CHECK(g.weight() * 64.0 == 1.0);
    CHECK(std::abs(g.node(16) - Complex(0.0, 1.0)) < 1e-15);
}

TEST_CASE("Poisson functional of a constant disc") {
    const auto f = disc_from_samples({std::vector<Complex>(32, Complex(0.3, 0.4))});
    CHECK(poisson_functional(f, log_modulus(), QuadratureGrid(32)) == doctest::Approx(std::log(0.5)).epsilon(1e-14));
}

TEST_CASE("Poisson functional of a scaled identity on the annulus") {
    for (double s : {1.1, 1.5, 1.9}) {
        const auto f = disc_from_samples({sample_circle(128, [&](Complex z) { return s * z; })});
        CHECK(std::abs(poisson_functional(f, log_modulus(), QuadratureGrid(128)) - std::log(s)) < 1e-10);
        // A different grid size resamples the disc spectrally.
        CHECK(std::abs(poisson_functional(f, log_modulus(), QuadratureGrid(512)) - std::log(s)) < 1e-10);
    }
}

TEST_CASE("Poisson functional of shell discs") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 20; ++i) {
        const Point x{testing::random_in_disc(rng, 1.2), testing::random_in_disc(rng, 1.2)};
        CHECK(std::abs(poisson_functional(shell_disc(x, 256), obstacles::norm_squared(0, 16), QuadratureGrid(256)) - 9.0) <
              1e-10);
    }
}

TEST_CASE("Poisson functional names the failing node") {
    const auto f = disc_from_samples({sample_circle(16, [](Complex z) { return z; })});
    Obstacle bad{[](PointView p) { return p[0].imag() > 0.99 ? std::nan("") : 0.0; }, false, -1, 1, "bad"};
    try {
        poisson_functional(f, bad, QuadratureGrid(16));
        FAIL("expected EvaluationError");
    } catch (const EvaluationError& e) {
        CHECK(std::string(e.what()).find("node 4") != std::string::npos);
    }
}

TEST_CASE("Poisson functional is monotone in phi and invariant under grid rotations") {
    std::mt19937_64 rng(4);
    const Complex a = testing::random_in_disc(rng, 0.6);
    auto fn = [&](Complex z) { return 1.5 * z * blaschke_factor(a, z) + 0.1 * z * z; };
    const std::size_t m = 256;
    const auto f = disc_from_samples({sample_circle(m, fn)});
    const auto phi1 = obstacles::real_first(-5, 5);
    Obstacle phi2{[](PointView p) { return p[0].real() + 0.1 * std::norm(p[0]); }, false, -5, 5, "bigger"};
    const QuadratureGrid g(m);
    CHECK(poisson_functional(f, phi1, g) <= poisson_functional(f, phi2, g) + 1e-12);
    for (std::size_t shift : {1u, 7u, 100u}) {
        const auto rotated =
            disc_from_samples({sample_circle(m, [&](Complex z) { return fn(z * unit_root(shift, m)); })});
        CHECK(std::abs(poisson_functional(rotated, phi2, g) - poisson_functional(f, phi2, g)) < 1e-13);
    }
}

TEST_CASE("quadrature converges for a Lipschitz integrand") {
    // |Re f| is Lipschitz but not smooth, so the trapezoid error is visible and shrinks with M.
    auto fn = [](Complex z) { return 0.3 + z + 0.2 * z * z; };
    const Obstacle phi{[](PointView p) { return std::abs(p[0].real()); }, false, 0, 5, "|Re z|"};
    double prev_gap = 1.0;
    for (std::size_t m = 64; m <= 1024; m *= 2) {
        const auto f = disc_from_samples({sample_circle(m, fn)});
        const auto f2 = disc_from_samples({sample_circle(2 * m, fn)});
        const double gap = std::abs(poisson_functional(f, phi, QuadratureGrid(m)) -
                                    poisson_functional(f2, phi, QuadratureGrid(2 * m)));
        CHECK(gap * double(m) < 10.0);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-3);
}

TEST_CASE("partial boundary statistics") {
    const auto pair = planar_annulus_pair();
    const auto phi = log_modulus();
    const QuadratureGrid g(256);
    const auto full = disc_from_samples({sample_circle(256, [](Complex z) { return 1.5 * z; })});
    const auto st = partial_boundary_stats(full, phi, pair.inner, g);
    CHECK(st.mass == 1.0);
    CHECK(st.integral == doctest::Approx(poisson_functional(full, phi, g)).epsilon(1e-14));

    const auto zero = disc_from_samples({std::vector<Complex>(256, 0.0)});
    const auto z = partial_boundary_stats(zero, phi, pair.inner, g);
    CHECK(z.mass == 0.0);
    CHECK(z.integral == 0.0);
}

TEST_CASE("partial boundary mass against a refined grid") {
    const auto pair = planar_annulus_pair();
    const auto phi = log_modulus();
    auto fn = [](Complex z) { return 0.8 + 0.8 * z; };
    for (std::size_t m : {64u, 256u, 1024u}) {
        const auto f = disc_from_samples({sample_circle(m, fn)});
        const auto st = partial_boundary_stats(f, phi, pair.inner, QuadratureGrid(m));
        // Oracle: the arc where |0.8 + 0.8 e^{it}| > 1, counted on a 100x finer grid.
        const std::size_t fine = 100 * m;
        std::size_t in = 0;
        double integral = 0.0;
        for (std::size_t j = 0; j < fine; ++j) {
            const double r = std::abs(fn(std::polar(1.0, 2.0 * M_PI * double(j) / double(fine))));
            if (r > 1.0) {
                ++in;
                integral += std::log(r);
            }
        }
        CHECK(std::abs(st.mass - double(in) / double(fine)) <= 2.0 / double(m));
        CHECK(std::abs(st.integral - integral / double(fine)) <= 2.0 / double(m));
        CHECK(st.mass >= 0.0);
        CHECK(st.mass <= 1.0);
        CHECK(std::abs(st.integral) <= st.mass * std::log(1.6) + 1e-15);
    }
}
