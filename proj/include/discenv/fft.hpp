#pragma once

#include "discenv/types.hpp"

#include <span>
#include <vector>

namespace discenv::fft {

/// Fourier coefficients of samples taken at the M-th roots of unity:
/// c_k = (1/M) sum_j f_j exp(-2 pi i j k / M), returned in FFT order
/// (index k for k < M/2, index M + k for negative k).
std::vector<Complex> forward(std::span<const Complex> samples);

/// Inverse of forward: f_j = sum_k c_k exp(2 pi i j k / M).
std::vector<Complex> inverse(std::span<const Complex> coeffs);

/// Position of signed frequency k in an FFT-ordered array of length m.
inline std::size_t slot(long k, std::size_t m) {
    const long mm = static_cast<long>(m);
    return static_cast<std::size_t>(((k % mm) + mm) % mm);
}

/// Signed frequency stored at FFT-order index i, in [-m/2, m/2).
inline long frequency(std::size_t i, std::size_t m) {
    return i < m / 2 ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(m);
}

}  // namespace discenv::fft
