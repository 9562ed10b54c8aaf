#pragma once

#include "discenv/disc.hpp"
#include "discenv/family.hpp"
#include "discenv/types.hpp"

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace discenv {

using MarginFn = std::function<double(PointView)>;

/// An open set in C^n given by a signed margin: positive inside, roughly the
/// Euclidean distance to the boundary near the boundary.
class Domain {
public:
    Domain(std::string name, std::size_t dim, MarginFn margin,
           double bounding_radius = std::numeric_limits<double>::infinity());

    const std::string& name() const { return name_; }
    std::size_t dim() const { return dim_; }
    /// Throws ConfigError when p has the wrong dimension.
    double margin(PointView p) const;
    /// Margin without the dimension check, for hot loops.
    double margin_unchecked(PointView p) const { return margin_(p); }
    bool contains(PointView p) const { return margin(p) > 0.0; }
    /// Radius of a centred ball containing the domain; infinity if unknown.
    double bounding_radius() const { return bounding_radius_; }

private:
    std::string name_;
    std::size_t dim_;
    MarginFn margin_;
    double bounding_radius_;
};

Domain ball(double radius, std::size_t dim);
/// r_in < |p| < r_out
Domain spherical_shell(double r_in, double r_out, std::size_t dim);
Domain whole_space(std::size_t dim);
/// Union: margin is the max of the parts' margins.
Domain unite(std::string name, std::vector<Domain> parts);
/// Intersection: margin is the min of the parts' margins.
Domain intersect(std::string name, std::vector<Domain> parts);

/// Hartogs data {z' in Y, r(z') < |z_n| < R(z')}. The base may have
/// dimension 0, which gives a planar annulus.
struct HartogsPair {
    Domain base;
    std::function<double(PointView)> inner_radius;
    std::function<double(PointView)> outer_radius;

    std::size_t dim() const { return base.dim() + 1; }
    /// Inner and outer fibre radii over z'. Throws PreconditionError if z' is not in the base.
    ScaleRange radii(PointView base_point) const;
    /// The shell W.
    Domain shell() const;
    /// The completion X = {z' in Y, |z_n| < R(z')}.
    Domain completion() const;
};

HartogsPair make_hartogs_pair(Domain base, std::function<double(PointView)> inner_radius,
                              std::function<double(PointView)> outer_radius);

/// Hartogs pair over the disc |z1| < base_radius in C with constant radii r < R.
HartogsPair constant_hartogs_pair(double base_radius, double r, double R);

/// A pair W (inner) inside X (outer).
struct DomainPair {
    std::string kind;
    Domain inner;
    Domain outer;
    std::optional<HartogsPair> hartogs;

    std::size_t dim() const { return outer.dim(); }
    /// Fibre radii over the first n-1 coordinates of x, for Hartogs-type pairs.
    std::optional<ScaleRange> fibre_radii(PointView x) const;
};

/// W = X = ball of the given radius.
DomainPair ball_pair(double radius, std::size_t dim);
/// X = B_4, W = B_4 minus the closed unit ball, in C^n.
DomainPair shell_pair(std::size_t dim);
/// X = D_2, W = D_2 minus the closed unit disc, in C.
DomainPair planar_annulus_pair();
DomainPair hartogs_domain_pair(const HartogsPair& h);

/// A finite obstacle phi on W with metadata.
struct Obstacle {
    std::function<double(PointView)> eval;
    bool rotation_invariant_last = false;
    double lower_bound = -std::numeric_limits<double>::infinity();
    double upper_bound = std::numeric_limits<double>::infinity();
    std::string description;

    double operator()(PointView p) const { return eval(p); }
};

namespace obstacles {

Obstacle constant(double value);
/// log |z_n|
Obstacle log_abs_last(double lower, double upper);
/// -log |z_n|
Obstacle neg_log_abs_last(double lower, double upper);
/// Re z_1
Obstacle real_first(double lower, double upper);
/// Re z_1 + |z_n|^2
Obstacle real_first_plus_last_squared(double lower, double upper);
/// |z|^2
Obstacle norm_squared(double lower, double upper);

}  // namespace obstacles

/// Largest violation |phi(z', eta z_n) - phi(z', z_n)| over the probes and
/// the given unimodular factors.
double rotation_invariance_defect(const Obstacle& phi, const std::vector<Point>& probes,
                                  const std::vector<Complex>& rotations);

/// The shell disc through x in the ball of radius 2 (n >= 2), sampled at m points.
/// Its boundary lies on the sphere of radius 3 and its centre is exactly x.
AnalyticDisc shell_disc(PointView x, std::size_t m = 256);

struct CounterexampleParams {
    double delta = 0.3;        // W1 = D x {|z2| < delta}, W2 = D x {1 - delta < |z2| < 1}
    double tube_radius = 0.05; // W3 = tube around the joining curve
    double rho_u = 0.05;       // half-width of the neighbourhoods U1, U2 of the semicircles
    double eps_moll = 0.01;    // width of the band over which phi ramps from 0 to -1
};

struct Counterexample {
    DomainPair pair;
    Obstacle phi;
    CounterexampleParams params;
};

/// The joining curve t -> (1 + exp(2 pi i (2t - 1) / 3), (1 - delta/2) t).
Point counterexample_curve(double delta, double t);

/// Euclidean distance from p to the joining curve.
double counterexample_curve_distance(double delta, PointView p);

/// W = W1 u W2 u W3, X = D^2 u W3, phi = -1 on V1 u V2 and 0 elsewhere,
/// ramped over eps_moll inside V1, V2. Throws ConfigError for out-of-range
/// parameters or a tube that meets closed(D) x {|z2| <= delta} away from its endpoints.
Counterexample counterexample_pair(const CounterexampleParams& params = {});

/// The real section of the projection of W onto the z1-plane beyond 1 is an
/// interval (a, b); found by scanning and bisection.
struct RealSection {
    double a = 0.0;
    double b = 0.0;
};
RealSection counterexample_real_section(const CounterexampleParams& params);

}  // namespace discenv
