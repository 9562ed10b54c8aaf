#include "discenv/oracle.hpp"

#include "discenv/error.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <numbers>
#include <random>

namespace discenv {

// ---------------------------------------------------------------------------
// Kiselman
// ---------------------------------------------------------------------------

KiselmanResult kiselman_psi(const HartogsPair& pair, const Obstacle& phi, PointView base_point,
                            std::size_t resolution) {
    if (!phi.rotation_invariant_last)
        throw PreconditionError("kiselman_psi: obstacle is not invariant under rotation of the last variable");
    if (resolution < 16) throw ConfigError("kiselman_psi: resolution must be at least 16");
    const ScaleRange range = pair.radii(base_point);
    const double r = range.lower;
    const double big_r = range.upper;
    if (!std::isfinite(big_r)) throw ConfigError("kiselman_psi: infinite outer radius is not supported");
    if (!(r >= 0.0 && r < big_r)) throw PreconditionError("kiselman_psi: empty fibre over the base point");

    KiselmanResult out;
    Point p(base_point.begin(), base_point.end());
    p.push_back(0.0);
    auto eval = [&](double s) {
        p.back() = Complex(s, 0.0);
        const double v = phi(p);
        ++out.evaluations;
        if (!std::isfinite(v)) throw EvaluationError("kiselman_psi: obstacle not finite at modulus " + std::to_string(s));
        return v;
    };

    const double width = big_r - r;
    std::vector<double> grid;
    grid.reserve(resolution + 100);
    for (std::size_t i = 0; i < resolution; ++i)
        grid.push_back(r + width * (static_cast<double>(i) + 0.5) / static_cast<double>(resolution));
    for (int k = 4; k <= 48; ++k) {
        const double g = width * std::pow(10.0, -k / 4.0);
        grid.push_back(r + g);
        grid.push_back(big_r - g);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    std::erase_if(grid, [&](double s) { return !(s > r && s < big_r); });

    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = eval(grid[i]);

    double lipschitz = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i)
        lipschitz = std::max(lipschitz, std::abs(values[i] - values[i - 1]) / (grid[i] - grid[i - 1]));

    const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
    out.value = values[best];
    out.argmin = grid[best];

    // Refine between the neighbours of the argmin.
    const double lo = best > 0 ? grid[best - 1] : r;
    const double hi = best + 1 < grid.size() ? grid[best + 1] : big_r;
    constexpr std::size_t kRefine = 200;
    const double step = (hi - lo) / static_cast<double>(kRefine);
    double prev_s = lo;
    double prev_v = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 1; i < kRefine; ++i) {
        const double s = lo + step * static_cast<double>(i);
        const double v = eval(s);
        if (std::isfinite(prev_v)) lipschitz = std::max(lipschitz, std::abs(v - prev_v) / (s - prev_s));
        prev_s = s;
        prev_v = v;
        if (v < out.value) {
            out.value = v;
            out.argmin = s;
        }
    }

    // Near an open end the infimum may sit in the unprobed gap.
    double gap = step;
    if (best == 0) gap = std::max(gap, grid.front() - r);
    if (best + 1 == grid.size()) gap = std::max(gap, big_r - grid.back());
    out.error_bound = lipschitz * gap;
    return out;
}

// ---------------------------------------------------------------------------
// GridField
// ---------------------------------------------------------------------------

GridField::GridField(double half_width, std::size_t intervals)
    : half_width_(half_width),
      n_(intervals),
      h_(2.0 * half_width / static_cast<double>(intervals)),
      values_((intervals + 1) * (intervals + 1), 0.0),
      tags_((intervals + 1) * (intervals + 1), CellTag::Outside) {
    if (!(half_width > 0.0) || intervals < 2) throw ConfigError("GridField: invalid geometry");
}

namespace {

struct Cell {
    std::size_t i, j;
    double tx, ty;
};

Cell locate(const GridField& g, Complex z) {
    const double fx = (z.real() + g.half_width()) / g.spacing();
    const double fy = (z.imag() + g.half_width()) / g.spacing();
    const double last = static_cast<double>(g.intervals() - 1);
    const double ix = std::clamp(std::floor(fx), 0.0, last);
    const double iy = std::clamp(std::floor(fy), 0.0, last);
    return {static_cast<std::size_t>(ix), static_cast<std::size_t>(iy), fx - ix, fy - iy};
}

bool in_square(const GridField& g, Complex z) {
    return std::abs(z.real()) <= g.half_width() && std::abs(z.imag()) <= g.half_width();
}

}  // namespace

bool GridField::defined_at(Complex z) const {
    if (!in_square(*this, z)) return false;
    const Cell c = locate(*this, z);
    for (std::size_t dj = 0; dj < 2; ++dj)
        for (std::size_t di = 0; di < 2; ++di)
            if (tag(c.i + di, c.j + dj) == CellTag::Outside) return false;
    return true;
}

double GridField::interpolate(Complex z) const {
    if (!defined_at(z)) throw PreconditionError("GridField: point outside the solved region");
    const Cell c = locate(*this, z);
    const double v00 = value(c.i, c.j), v10 = value(c.i + 1, c.j);
    const double v01 = value(c.i, c.j + 1), v11 = value(c.i + 1, c.j + 1);
    return (1 - c.ty) * ((1 - c.tx) * v00 + c.tx * v10) + c.ty * ((1 - c.tx) * v01 + c.tx * v11);
}

void GridField::write_csv(std::ostream& out) const {
    out << "x,y,value,mask\n";
    const auto old = out.precision(17);
    for (std::size_t j = 0; j <= n_; ++j)
        for (std::size_t i = 0; i <= n_; ++i) {
            const CellTag t = tag(i, j);
            out << coord(i) << ',' << coord(j) << ',';
            if (t == CellTag::Outside) out << "nan";
            else out << value(i, j);
            out << ',' << (t == CellTag::InsideW ? "inside_w" : t == CellTag::InsideXOnly ? "inside_x_only" : "outside")
                << '\n';
        }
    out.precision(old);
}

// ---------------------------------------------------------------------------
// Obstacle solver
// ---------------------------------------------------------------------------

namespace {

// Geometry and obstacle data of one grid, independent of the cap.
struct Lattice {
    GridField field;
    std::vector<double> phi;             // obstacle at W nodes, NaN elsewhere
    std::vector<std::uint32_t> active;   // X nodes whose four neighbours are in X
    std::vector<std::uint32_t> fixed;    // X nodes with a neighbour outside X
    double phi_sup = -std::numeric_limits<double>::infinity();

    double obstacle(std::size_t k, double cap) const {
        return field.tags()[k] == CellTag::InsideW ? phi[k] : cap;
    }
};

Lattice build_lattice(const DomainPair& pair, const Obstacle& phi, double half_width, std::size_t n) {
    Lattice lat{GridField(half_width, n), {}, {}, {}, -std::numeric_limits<double>::infinity()};
    auto& f = lat.field;
    const std::size_t side = n + 1;
    lat.phi.assign(side * side, std::numeric_limits<double>::quiet_NaN());
    Point p(1);
    for (std::size_t j = 0; j < side; ++j)
        for (std::size_t i = 0; i < side; ++i) {
            p[0] = Complex(f.coord(i), f.coord(j));
            const std::size_t k = f.index(i, j);
            if (!(pair.outer.margin_unchecked(p) > 0.0)) continue;
            if (pair.inner.margin_unchecked(p) > 0.0) {
                const double v = phi(p);
                if (!std::isfinite(v))
                    throw EvaluationError("grid_obstacle_solver: obstacle not finite at (" + std::to_string(f.coord(i)) +
                                          ", " + std::to_string(f.coord(j)) + ")");
                f.tags()[k] = CellTag::InsideW;
                lat.phi[k] = v;
                lat.phi_sup = std::max(lat.phi_sup, v);
            } else {
                f.tags()[k] = CellTag::InsideXOnly;
            }
        }
    for (std::size_t j = 0; j < side; ++j)
        for (std::size_t i = 0; i < side; ++i) {
            const std::size_t k = f.index(i, j);
            if (f.tags()[k] == CellTag::Outside) continue;
            const bool interior = i > 0 && j > 0 && i < n && j < n && f.tag(i - 1, j) != CellTag::Outside &&
                                  f.tag(i + 1, j) != CellTag::Outside && f.tag(i, j - 1) != CellTag::Outside &&
                                  f.tag(i, j + 1) != CellTag::Outside;
            (interior ? lat.active : lat.fixed).push_back(static_cast<std::uint32_t>(k));
        }
    return lat;
}

double optimal_omega(std::size_t n) {
    return 2.0 / (1.0 + std::sin(std::numbers::pi / static_cast<double>(n)));
}

struct SweepStats {
    std::size_t sweeps = 0;
    std::vector<double> max_increase;
};

// Relaxes u in place until the largest update falls below tol.
SweepStats relax(const Lattice& lat, std::vector<double>& u, double cap, double omega, double tol,
                 std::size_t max_sweeps, bool record_increase) {
    SweepStats stats;
    const std::size_t stride = lat.field.nodes_per_side();
    for (auto k : lat.fixed) u[k] = lat.obstacle(k, cap);
    std::vector<double> ob(lat.active.size());
    for (std::size_t a = 0; a < lat.active.size(); ++a) ob[a] = lat.obstacle(lat.active[a], cap);

    double* v = u.data();
    while (stats.sweeps < max_sweeps) {
        double max_update = 0.0;
        double max_inc = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < lat.active.size(); ++a) {
            const std::size_t k = lat.active[a];
            const double old = v[k];
            const double mean = 0.25 * (v[k - 1] + v[k + 1] + v[k - stride] + v[k + stride]);
            const double next = std::min(ob[a], old + omega * (mean - old));
            v[k] = next;
            max_update = std::max(max_update, std::abs(next - old));
            if (record_increase) max_inc = std::max(max_inc, next - old);
        }
        ++stats.sweeps;
        if (record_increase) stats.max_increase.push_back(max_inc);
        if (max_update <= tol) return stats;
    }
    throw EvaluationError("grid_obstacle_solver: no convergence after " + std::to_string(max_sweeps) + " sweeps");
}

// Prolongs a coarse solution (n/2 intervals) to the fine lattice, clipped by the obstacle.
std::vector<double> prolong(const GridField& coarse, const Lattice& fine, double cap) {
    const auto& f = fine.field;
    const std::size_t side = f.nodes_per_side();
    std::vector<double> u(side * side, 0.0);
    for (std::size_t j = 0; j < side; ++j)
        for (std::size_t i = 0; i < side; ++i) {
            const std::size_t k = f.index(i, j);
            if (f.tags()[k] == CellTag::Outside) continue;
            double sum = 0.0;
            int count = 0;
            for (std::size_t cj = j / 2; cj <= (j + 1) / 2; ++cj)
                for (std::size_t ci = i / 2; ci <= (i + 1) / 2; ++ci)
                    if (coarse.tag(ci, cj) != CellTag::Outside) {
                        sum += coarse.value(ci, cj);
                        ++count;
                    }
            const double ob = fine.obstacle(k, cap);
            u[k] = count > 0 ? std::min(ob, sum / count) : ob;
        }
    return u;
}

struct SolveSettings {
    double omega;  // 0 for the optimal factor
    double tol;
    std::size_t max_sweeps;
    bool nested;
};

// Solves with one cap from scratch; nested initialization recurses on coarser grids.
GridField solve_fresh(const DomainPair& pair, const Obstacle& phi, double half_width, std::size_t n, double cap,
                      const SolveSettings& s, std::size_t& sweeps) {
    const Lattice lat = build_lattice(pair, phi, half_width, n);
    std::vector<double> u;
    if (s.nested && n % 2 == 0 && n / 2 >= 16) {
        std::size_t coarse_sweeps = 0;
        const GridField coarse = solve_fresh(pair, phi, half_width, n / 2, cap, s, coarse_sweeps);
        u = prolong(coarse, lat, cap);
    } else {
        u.assign(lat.field.values().size(), 0.0);
        for (std::size_t k = 0; k < u.size(); ++k)
            if (lat.field.tags()[k] != CellTag::Outside) u[k] = lat.obstacle(k, cap);
    }
    const double omega = s.omega > 0.0 ? s.omega : optimal_omega(n);
    sweeps += relax(lat, u, cap, omega, s.tol, s.max_sweeps, false).sweeps;
    GridField out = lat.field;
    out.values() = std::move(u);
    return out;
}

std::size_t intervals_for(const DomainPair& pair, const ObstacleSolverConfig& config, double& half_width) {
    if (pair.dim() != 1)
        throw UnsupportedDimensionError("grid_obstacle_solver: only planar pairs are supported, got dimension " +
                                        std::to_string(pair.dim()));
    half_width = config.half_width.value_or(pair.outer.bounding_radius());
    if (!std::isfinite(half_width) || !(half_width > 0.0))
        throw ConfigError("grid_obstacle_solver: X is unbounded; set half_width");
    if (!(config.spacing > 0.0)) throw ConfigError("grid_obstacle_solver: spacing must be positive");
    const auto n = static_cast<std::size_t>(std::llround(2.0 * half_width / config.spacing));
    if (n < 4) throw ConfigError("grid_obstacle_solver: spacing too coarse for the domain");
    if (!(config.omega == 0.0 || (config.omega > 0.0 && config.omega < 2.0)))
        throw ConfigError("grid_obstacle_solver: omega must lie in (0, 2)");
    return n;
}

}  // namespace

ObstacleSolution grid_obstacle_solver(const DomainPair& pair, const Obstacle& phi, std::vector<double> caps,
                                      const ObstacleSolverConfig& config) {
    double a = 0.0;
    const std::size_t n = intervals_for(pair, config, a);
    const Lattice lat = build_lattice(pair, phi, a, n);
    if (!std::isfinite(lat.phi_sup)) throw PreconditionError("grid_obstacle_solver: W contains no grid nodes");
    if (caps.empty())
        for (double d : {1.0, 2.0, 4.0, 8.0}) caps.push_back(lat.phi_sup + d);
    if (caps.front() < lat.phi_sup)
        throw ConfigError("grid_obstacle_solver: first cap is below the supremum of the obstacle on W");
    for (std::size_t c = 1; c < caps.size(); ++c)
        if (!(caps[c] > caps[c - 1])) throw ConfigError("grid_obstacle_solver: caps must increase");

    const SolveSettings settings{config.omega, config.tolerance, config.max_sweeps, config.nested};
    ObstacleSolution sol{lat.field, caps, {}, lat.phi_sup, 0, std::numeric_limits<double>::quiet_NaN(),
                         std::numeric_limits<double>::quiet_NaN()};

    const double omega = config.omega > 0.0 ? config.omega : optimal_omega(n);
    std::vector<double> u;
    for (std::size_t c = 0; c < caps.size(); ++c) {
        if (c == 0) {
            u = solve_fresh(pair, phi, a, n, caps[0], settings, sol.sweeps).values();
        } else {
            // The previous solution lies below the raised obstacle, so it is a valid start.
            sol.sweeps += relax(lat, u, caps[c], omega, config.tolerance, config.max_sweeps, false).sweeps;
        }
        sol.field.values() = u;
        std::vector<double> probes;
        probes.reserve(config.probes.size());
        for (const auto& z : config.probes) probes.push_back(sol.field.interpolate(z));
        sol.probe_values.push_back(std::move(probes));
    }

    if (config.richardson) {
        std::size_t fine_sweeps = 0;
        const GridField fine = solve_fresh(pair, phi, a, 2 * n, caps.back(), settings, fine_sweeps);
        double diff = 0.0;
        for (std::size_t j = 0; j <= n; ++j)
            for (std::size_t i = 0; i <= n; ++i) {
                if (sol.field.tag(i, j) == CellTag::Outside || fine.tag(2 * i, 2 * j) == CellTag::Outside) continue;
                diff = std::max(diff, std::abs(sol.field.value(i, j) - fine.value(2 * i, 2 * j)));
            }
        sol.richardson_difference = diff;
        sol.richardson_estimate = diff / (std::pow(2.0, config.richardson_order) - 1.0);
    }
    return sol;
}

RelaxationHistory relax_from_cap(const DomainPair& pair, const Obstacle& phi, double cap,
                                 const ObstacleSolverConfig& config) {
    double a = 0.0;
    const std::size_t n = intervals_for(pair, config, a);
    const Lattice lat = build_lattice(pair, phi, a, n);
    std::vector<double> u(lat.field.values().size(), 0.0);
    for (std::size_t k = 0; k < u.size(); ++k)
        if (lat.field.tags()[k] != CellTag::Outside) u[k] = lat.obstacle(k, cap);
    const double omega = config.omega > 0.0 ? config.omega : 1.0;
    auto stats = relax(lat, u, cap, omega, config.tolerance, config.max_sweeps, true);
    RelaxationHistory out{lat.field, std::move(stats.max_increase), stats.sweeps};
    out.field.values() = std::move(u);
    return out;
}

// ---------------------------------------------------------------------------
// Sub-mean-value check
// ---------------------------------------------------------------------------

SubmeanReport submean_check(const std::function<double(PointView)>& u,
                            const std::function<bool(PointView)>& region, const std::vector<Point>& probes,
                            const SubmeanOptions& options) {
    if (options.radii.empty() || options.angles < 4 || options.directions == 0)
        throw ConfigError("submean_check: need radii, at least 4 angles and one direction");
    for (double rho : options.radii)
        if (!(rho > 0.0)) throw ConfigError("submean_check: radii must be positive");

    SubmeanReport rep;
    std::mt19937_64 rng(options.seed);
    std::normal_distribution<double> normal;
    for (const auto& x : probes) {
        const std::size_t n = x.size();
        std::vector<Point> dirs;
        for (std::size_t c = 0; c < std::min(n, options.directions); ++c) {
            Point v(n, 0.0);
            v[c] = 1.0;
            dirs.push_back(std::move(v));
        }
        while (dirs.size() < options.directions && n > 1) {
            Point v(n);
            for (auto& c : v) c = Complex(normal(rng), normal(rng));
            const double len = norm(v);
            for (auto& c : v) c /= len;
            dirs.push_back(std::move(v));
        }

        const double ux = u(x);
        Point y(n);
        for (const auto& v : dirs)
            for (double rho : options.radii) {
                bool inside = region(x);
                double sum = 0.0;
                double lo = std::numeric_limits<double>::infinity();
                double hi = -lo;
                for (std::size_t t = 0; t < options.angles && inside; ++t) {
                    const Complex e = rho * unit_root(t, options.angles);
                    for (std::size_t c = 0; c < n; ++c) y[c] = x[c] + e * v[c];
                    if (!region(y)) {
                        inside = false;
                        break;
                    }
                    const double val = u(y);
                    sum += val;
                    lo = std::min(lo, val);
                    hi = std::max(hi, val);
                }
                if (!inside) {
                    ++rep.skipped;
                    continue;
                }
                ++rep.checked;
                const double avg = sum / static_cast<double>(options.angles);
                const double violation = std::max(0.0, ux - avg);
                const double scaled = violation / std::max(1.0, hi - lo);
                rep.max_violation = std::max(rep.max_violation, violation);
                if (scaled > rep.max_scaled_violation) {
                    rep.max_scaled_violation = scaled;
                    rep.worst_point = x;
                }
                if (scaled > options.tolerance) ++rep.violations;
            }
    }
    rep.passed = rep.violations == 0;
    return rep;
}

}  // namespace discenv
