#pragma once

#include "discenv/disc.hpp"
#include "discenv/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace discenv {

/// Range (lower, upper) of the boundary modulus of the last component.
struct ScaleRange {
    double lower = 0.0;
    double upper = 0.0;
};

/// Smallest allowed distance of a Blaschke zero from the unit circle.
inline constexpr double kBlaschkeZeroMargin = 1e-6;

/// Largest zero modulus whose Blaschke factor is resolved by m boundary
/// samples: the aliased tail |a|^{m/2} of one factor stays below 1e-14.
double resolvable_zero_modulus(std::size_t m);

/// Example shell disc through x in the ball of radius 2:
/// zeta -> (rho (rho zeta + x1) / (rho + conj(x1) zeta), x2, ..., xn),
/// rho = sqrt(9 - |x2|^2 - ... - |xn|^2). Its boundary lies on the sphere of radius 3.
void shell_map(PointView x, Complex zeta, std::span<Complex> out);

/// Parametrized disc families. Every family fixes the centre structurally
/// once bound to a point; the optimizer only moves the free parameters.
class DiscFamily {
public:
    /// x_c + sum_{k=1..d} a_{c,k} zeta^k in every component; coefficients in [-bound, bound]^2.
    struct Polynomial {
        std::size_t degree = 1;
        double coeff_bound = 1.0;
    };
    /// (x', s * m_w(e^{i theta} zeta B(zeta))) with B a Blaschke product of
    /// degree - 1 free zeros and m_w the automorphism sending 0 to w = x_n / s.
    /// The last component is s times a Blaschke product of the given degree.
    struct Blaschke {
        std::size_t degree = 1;
        std::optional<ScaleRange> scale;
    };
    /// (x', s zeta^k); needs x_n = 0.
    struct Vertical {
        std::size_t power = 1;
        std::optional<ScaleRange> scale;
    };
    /// shell_map through x; no parameters.
    struct Shell {};
    /// Constant disc at x; no parameters.
    struct Constant {};

    using Variant = std::variant<Polynomial, Blaschke, Vertical, Shell, Constant>;

    explicit DiscFamily(Variant v) : variant_(std::move(v)) {}

    static DiscFamily polynomial(std::size_t degree, double coeff_bound = 1.0) {
        return DiscFamily(Polynomial{degree, coeff_bound});
    }
    static DiscFamily blaschke(std::size_t degree, std::optional<ScaleRange> scale = {}) {
        return DiscFamily(Blaschke{degree, scale});
    }
    static DiscFamily vertical(std::size_t power = 1, std::optional<ScaleRange> scale = {}) {
        return DiscFamily(Vertical{power, scale});
    }
    static DiscFamily shell() { return DiscFamily(Shell{}); }
    static DiscFamily constant() { return DiscFamily(Constant{}); }

    const Variant& variant() const { return variant_; }

    /// Stable identifier such as "blaschke2" or "polynomial4".
    std::string tag() const;

    /// Winding number of the last component on the circle, when fixed by the family.
    std::optional<int> winding() const;

    /// Whether the family needs a modulus range for the last component.
    bool needs_scale_range() const;

private:
    Variant variant_;
};

/// A family bound to a centre, with resolved parameter bounds.
class BoundFamily {
public:
    /// Throws PreconditionError if the family cannot produce discs centred
    /// at x (e.g. Shell outside the ball of radius 2, Blaschke with |x_n|
    /// above the scale range). fallback_scale supplies the modulus range
    /// for families that do not carry one.
    /// max_zero_modulus caps the zeros of the last component of Blaschke discs,
    /// including the one created by centring at x_n.
    BoundFamily(DiscFamily family, Point centre, std::optional<ScaleRange> fallback_scale = {},
                double max_zero_modulus = 1.0 - kBlaschkeZeroMargin);

    const DiscFamily& family() const { return family_; }
    const Point& centre() const { return centre_; }
    std::size_t dim() const { return centre_.size(); }
    std::size_t parameter_count() const { return lower_.size(); }
    std::span<const double> lower() const { return lower_; }
    std::span<const double> upper() const { return upper_; }
    double max_zero_modulus() const { return max_zero_; }

    /// Value of the disc with the given parameters at |zeta| <= 1.
    void evaluate(std::span<const double> params, Complex zeta, std::span<Complex> out) const;

    /// The disc sampled at m boundary points.
    AnalyticDisc disc(std::span<const double> params, std::size_t m) const;

private:
    DiscFamily family_;
    Point centre_;
    std::vector<double> lower_;
    std::vector<double> upper_;
    double max_zero_;
};

}  // namespace discenv
