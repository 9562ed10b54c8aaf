#pragma once

#include <complex>
#include <numbers>
#include <span>
#include <vector>

namespace discenv {

using Complex = std::complex<double>;

/// A point of C^n stored as its n complex coordinates.
using Point = std::vector<Complex>;
using PointView = std::span<const Complex>;

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Default tolerance on the negative-frequency mass of a disc.
inline constexpr double kHolomorphyTolerance = 1e-8;

inline bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

/// The j-th of the M-th roots of unity, exp(2 pi i j / M).
inline Complex unit_root(std::size_t j, std::size_t m) {
    return std::polar(1.0, kTwoPi * static_cast<double>(j) / static_cast<double>(m));
}

inline double norm_squared(PointView p) {
    double s = 0.0;
    for (const auto& z : p) s += std::norm(z);
    return s;
}

inline double norm(PointView p) { return std::sqrt(norm_squared(p)); }

}  // namespace discenv
