#pragma once

#include "discenv/types.hpp"

#include <functional>
#include <span>
#include <vector>

namespace discenv {

/// A closed analytic disc f: closed unit disc -> C^n, represented by its
/// boundary samples at the M-th roots of unity and their discrete Fourier
/// coefficients. Interior values come from the truncated Taylor series
/// (frequencies 0..M/2-1).
class AnalyticDisc {
public:
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return m_; }

    /// Boundary samples of component c at the M-th roots of unity.
    std::span<const Complex> component(std::size_t c) const;
    /// Fourier coefficients of component c in FFT order.
    std::span<const Complex> coeffs(std::size_t c) const;
    /// Coefficient of signed frequency k in [-M/2, M/2).
    Complex coeff(std::size_t c, long k) const;

    Point boundary_point(std::size_t j) const;
    void boundary_point(std::size_t j, std::span<Complex> out) const;

    /// f(0), the frequency-0 coefficient.
    Point centre() const;

    /// Largest modulus of a coefficient at a negative frequency.
    double holomorphy_residual() const { return residual_; }
    bool is_holomorphic(double tol = kHolomorphyTolerance) const { return residual_ <= tol; }

    /// Taylor evaluation at |zeta| <= 1.
    Point evaluate(Complex zeta) const;
    void evaluate(Complex zeta, std::span<Complex> out) const;
    Complex evaluate_component(std::size_t c, Complex zeta) const;

    /// Samples of zeta -> f_c(t zeta) at the M-th roots of unity, 0 <= t <= 1.
    std::vector<Complex> component_at_radius(std::size_t c, double t) const;

    /// Spectral resampling to m points (zero padding or truncation).
    AnalyticDisc resampled(std::size_t m) const;

private:
    friend AnalyticDisc disc_from_samples(const std::vector<std::vector<Complex>>& components);

    std::size_t dim_ = 0;
    std::size_t m_ = 0;
    std::vector<Complex> samples_;  // component-major, dim_ * m_
    std::vector<Complex> coeffs_;   // component-major, FFT order
    double residual_ = 0.0;
};

/// Builds a disc from per-component boundary samples (components[c][j] is
/// f_c at exp(2 pi i j / M)). M must be a power of two, M >= 8. High
/// holomorphy residuals are recorded, not rejected.
AnalyticDisc disc_from_samples(const std::vector<std::vector<Complex>>& components);

/// Samples fn on the M-th roots of unity and builds the disc.
AnalyticDisc disc_from_function(std::size_t dim, std::size_t m,
                                const std::function<void(Complex, std::span<Complex>)>& fn);

/// Winding number about 0 of a closed curve given by samples, by summing
/// the phase increments between consecutive samples.
int winding_number(std::span<const Complex> samples);

/// (zeta - a) / (1 - conj(a) zeta)
inline Complex blaschke_factor(Complex a, Complex zeta) { return (zeta - a) / (1.0 - std::conj(a) * zeta); }

Complex blaschke_product(std::span<const Complex> zeros, Complex zeta);

/// Disc automorphism u -> (u + w) / (1 + conj(w) u), sending 0 to w.
inline Complex mobius_shift(Complex w, Complex u) { return (u + w) / (1.0 + std::conj(w) * u); }

/// Zero-free function H = exp(h + i k) on the closed disc whose modulus on
/// the circle matches given boundary data; h is the harmonic extension of
/// log|f| and k its conjugate with zero mean on the circle.
class OuterFunction {
public:
    std::size_t size() const { return m_; }
    Complex operator()(Complex zeta) const;
    /// log H at zeta, i.e. h + i k.
    Complex log_at(Complex zeta) const;
    /// H at t * exp(2 pi i j / M) for j = 0..M-1.
    std::vector<Complex> samples_at_radius(double t) const;
    std::vector<Complex> boundary_samples() const { return samples_at_radius(1.0); }
    /// Taylor coefficients of log H, frequencies 0..M/2.
    std::span<const Complex> log_coeffs() const { return log_coeffs_; }

private:
    friend OuterFunction outer_function(std::span<const Complex> boundary);

    std::size_t m_ = 0;
    std::vector<Complex> log_coeffs_;
};

/// Outer function with |H| = |f| at the sampling nodes. Throws
/// DegenerateInputError if a sample vanishes.
OuterFunction outer_function(std::span<const Complex> boundary);

/// A loop of discs F(., w), one per w = exp(2 pi i l / M_w).
class DiscLoop {
public:
    explicit DiscLoop(std::vector<AnalyticDisc> slices);

    std::size_t w_size() const { return slices_.size(); }
    std::size_t z_size() const { return slices_.front().size(); }
    std::size_t dim() const { return slices_.front().dim(); }
    const AnalyticDisc& slice(std::size_t l) const { return slices_[l]; }
    const std::vector<AnalyticDisc>& slices() const { return slices_; }
    double max_holomorphy_residual() const;

private:
    std::vector<AnalyticDisc> slices_;
};

/// Cesaro (Fejer) mean of order j in the loop variable of F - h, with h
/// added back: frequency k of F - h is weighted by (j+1-|k|)/(j+1) for
/// |k| <= j and dropped otherwise. h is a disc in w sampled on the same
/// M_w points. Requires M_w >= 4j + 4.
DiscLoop cesaro_mean(const DiscLoop& loop, const AnalyticDisc& h, std::size_t j);

/// Max over the torus grid and components of |A - B|. For discs this is the
/// sup over closed-disc x circle by the maximum principle.
double sup_distance(const DiscLoop& a, const DiscLoop& b);

/// A map G on the torus sampled at (exp(2 pi i a / M), exp(2 pi i b / M)).
class TorusMap {
public:
    using Fn = std::function<void(Complex z, Complex w, std::span<Complex> out)>;

    TorusMap(std::size_t dim, std::size_t m, std::vector<Complex> samples);
    static TorusMap from_function(std::size_t dim, std::size_t m, const Fn& fn);

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return m_; }
    /// Component c at grid node (a, b).
    Complex at(std::size_t c, std::size_t a, std::size_t b) const { return samples_[(c * m_ + a) * m_ + b]; }
    /// Two-dimensional Fourier coefficients of component c; index (p, q) in FFT order.
    const std::vector<Complex>& coeffs(std::size_t c) const { return coeffs_[c]; }
    /// Largest coefficient outside the nonnegative frequency quadrant.
    double holomorphy_residual() const { return residual_; }

private:
    std::size_t dim_;
    std::size_t m_;
    std::vector<Complex> samples_;  // [c][a][b]
    std::vector<std::vector<Complex>> coeffs_;
    double residual_ = 0.0;
};

/// The diagonal disc g(z) = G(exp(i theta0) z, z), sampled on 2M points so
/// that no frequency aliases. Throws NonHolomorphicError when G carries
/// mass outside the nonnegative quadrant beyond tol.
AnalyticDisc diagonal_disc(const TorusMap& g, double theta0, double tol = kHolomorphyTolerance);

struct ThetaSelection {
    double theta0 = 0.0;
    double value = 0.0;           // boundary average of phi over the selected diagonal disc
    double torus_average = 0.0;   // average of phi over the whole torus grid
};

/// Scans theta0 = 2 pi l / M and picks the diagonal disc with the smallest
/// boundary average of phi. On this grid the diagonal discs pass through
/// torus nodes, so the mean over l of the averages is the torus average and
/// the minimum never exceeds it.
ThetaSelection select_theta0(const TorusMap& g, const std::function<double(PointView)>& phi);

}  // namespace discenv
