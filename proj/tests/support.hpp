#pragma once

#include "discenv/disc.hpp"

#include <cmath>
#include <complex>
#include <random>
#include <span>
#include <vector>

namespace testing {

using discenv::Complex;

inline Complex random_in_disc(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double r = radius * std::sqrt(u(rng));
    return std::polar(r, 2.0 * M_PI * u(rng));
}

inline std::vector<Complex> sample_circle(std::size_t m, const auto& fn) {
    std::vector<Complex> out(m);
    for (std::size_t j = 0; j < m; ++j) out[j] = fn(std::polar(1.0, 2.0 * M_PI * double(j) / double(m)));
    return out;
}

// Naive O(M^2) DFT, an independent check on the FFT path.
inline std::vector<Complex> naive_dft(const std::vector<Complex>& f) {
    const std::size_t m = f.size();
    std::vector<Complex> c(m);
    for (std::size_t k = 0; k < m; ++k) {
        Complex s = 0.0;
        for (std::size_t j = 0; j < m; ++j) s += f[j] * std::polar(1.0, -2.0 * M_PI * double(j * k % m) / double(m));
        c[k] = s / double(m);
    }
    return c;
}

// Trapezoid rule for the circle average of a function of the angle.
inline double circle_average(std::size_t m, const auto& fn) {
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += fn(2.0 * M_PI * double(j) / double(m));
    return s / double(m);
}

// A disc with boundary in {|z1| < 1} x {1/4 < |z2| < 1} whose last component
// c B_a^k exp(g) has k zeros at a and an explicit outer part c exp(g).
struct ShellDisc {
    discenv::AnalyticDisc disc;
    Complex zero;
    Complex scale;
    Complex g1, g2;

    Complex outer(Complex z) const { return scale * std::exp(g1 * z + g2 * z * z); }
};

inline ShellDisc random_shell_disc(std::mt19937_64& rng, unsigned k, std::size_t m) {
    const Complex a0 = random_in_disc(rng, 0.5), a1 = random_in_disc(rng, 0.3);
    const Complex zero = random_in_disc(rng, 0.5);
    const Complex scale = std::polar(0.5, 2.0 * M_PI * std::uniform_real_distribution<double>()(rng));
    const Complex g1 = random_in_disc(rng, 0.2), g2 = random_in_disc(rng, 0.15);
    auto fn = [&](Complex z, std::span<Complex> out) {
        out[0] = a0 + a1 * z;
        out[1] = scale * std::pow(discenv::blaschke_factor(zero, z), int(k)) * std::exp(g1 * z + g2 * z * z);
    };
    return {discenv::disc_from_function(2, m, fn), zero, scale, g1, g2};
}

}  // namespace testing
