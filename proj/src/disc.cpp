#include "discenv/disc.hpp"

#include "discenv/error.hpp"
#include "discenv/fft.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace discenv {

namespace {

void require_disc_size(std::size_t m, const char* where) {
    if (!is_power_of_two(m) || m < 8)
        throw ConfigError(std::string(where) + ": sample count " + std::to_string(m) +
                          " is not a power of two >= 8");
}

Complex horner(std::span<const Complex> coeffs, std::size_t count, Complex zeta) {
    Complex acc = 0.0;
    for (std::size_t k = count; k-- > 0;) acc = acc * zeta + coeffs[k];
    return acc;
}

}  // namespace

std::span<const Complex> AnalyticDisc::component(std::size_t c) const {
    return std::span<const Complex>(samples_).subspan(c * m_, m_);
}

std::span<const Complex> AnalyticDisc::coeffs(std::size_t c) const {
    return std::span<const Complex>(coeffs_).subspan(c * m_, m_);
}

Complex AnalyticDisc::coeff(std::size_t c, long k) const { return coeffs_[c * m_ + fft::slot(k, m_)]; }

Point AnalyticDisc::boundary_point(std::size_t j) const {
    Point p(dim_);
    boundary_point(j, p);
    return p;
}

void AnalyticDisc::boundary_point(std::size_t j, std::span<Complex> out) const {
    for (std::size_t c = 0; c < dim_; ++c) out[c] = samples_[c * m_ + j];
}

Point AnalyticDisc::centre() const {
    Point p(dim_);
    for (std::size_t c = 0; c < dim_; ++c) p[c] = coeffs_[c * m_];
    return p;
}

Point AnalyticDisc::evaluate(Complex zeta) const {
    Point p(dim_);
    evaluate(zeta, p);
    return p;
}

void AnalyticDisc::evaluate(Complex zeta, std::span<Complex> out) const {
    for (std::size_t c = 0; c < dim_; ++c) out[c] = evaluate_component(c, zeta);
}

Complex AnalyticDisc::evaluate_component(std::size_t c, Complex zeta) const {
    return horner(coeffs(c), m_ / 2, zeta);
}

std::vector<Complex> AnalyticDisc::component_at_radius(std::size_t c, double t) const {
    std::vector<Complex> scaled(m_, Complex{});
    double power = 1.0;
    for (std::size_t k = 0; k < m_ / 2; ++k) {
        scaled[k] = coeffs_[c * m_ + k] * power;
        power *= t;
    }
    return fft::inverse(scaled);
}

AnalyticDisc AnalyticDisc::resampled(std::size_t m) const {
    require_disc_size(m, "resampled");
    if (m == m_) return *this;
    std::vector<std::vector<Complex>> comps(dim_);
    const long half = static_cast<long>(std::min(m, m_) / 2);
    for (std::size_t c = 0; c < dim_; ++c) {
        std::vector<Complex> spectrum(m, Complex{});
        for (long k = -half; k < half; ++k) spectrum[fft::slot(k, m)] = coeff(c, k);
        comps[c] = fft::inverse(spectrum);
    }
    return disc_from_samples(comps);
}

AnalyticDisc disc_from_samples(const std::vector<std::vector<Complex>>& components) {
    if (components.empty()) throw ConfigError("disc_from_samples: no components");
    const std::size_t m = components.front().size();
    require_disc_size(m, "disc_from_samples");
    AnalyticDisc disc;
    disc.dim_ = components.size();
    disc.m_ = m;
    disc.samples_.reserve(disc.dim_ * m);
    disc.coeffs_.reserve(disc.dim_ * m);
    for (const auto& comp : components) {
        if (comp.size() != m) throw ConfigError("disc_from_samples: components have different lengths");
        disc.samples_.insert(disc.samples_.end(), comp.begin(), comp.end());
        auto c = fft::forward(comp);
        for (std::size_t i = m / 2; i < m; ++i) disc.residual_ = std::max(disc.residual_, std::abs(c[i]));
        disc.coeffs_.insert(disc.coeffs_.end(), c.begin(), c.end());
    }
    return disc;
}

AnalyticDisc disc_from_function(std::size_t dim, std::size_t m,
                                const std::function<void(Complex, std::span<Complex>)>& fn) {
    require_disc_size(m, "disc_from_function");
    std::vector<std::vector<Complex>> comps(dim, std::vector<Complex>(m));
    Point p(dim);
    for (std::size_t j = 0; j < m; ++j) {
        fn(unit_root(j, m), p);
        for (std::size_t c = 0; c < dim; ++c) comps[c][j] = p[c];
    }
    return disc_from_samples(comps);
}

int winding_number(std::span<const Complex> samples) {
    if (samples.size() < 2) throw ConfigError("winding_number: need at least two samples");
    for (std::size_t j = 0; j < samples.size(); ++j)
        if (std::abs(samples[j]) <= 1e-12)
            throw DegenerateInputError("winding_number: sample " + std::to_string(j) + " is zero");
    double total = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j) {
        const Complex next = samples[(j + 1) % samples.size()];
        const double step = std::arg(next / samples[j]);
        // arg() lies in (-pi, pi]; an increment of pi is ambiguous.
        if (std::abs(step) >= std::numbers::pi - 1e-12)
            throw UndersampledError("winding_number: phase increment >= pi at sample " + std::to_string(j));
        total += step;
    }
    return static_cast<int>(std::lround(total / kTwoPi));
}

Complex blaschke_product(std::span<const Complex> zeros, Complex zeta) {
    Complex b = 1.0;
    for (const auto& a : zeros) b *= blaschke_factor(a, zeta);
    return b;
}

Complex OuterFunction::log_at(Complex zeta) const { return horner(log_coeffs_, log_coeffs_.size(), zeta); }

Complex OuterFunction::operator()(Complex zeta) const { return std::exp(log_at(zeta)); }

std::vector<Complex> OuterFunction::samples_at_radius(double t) const {
    std::vector<Complex> spectrum(m_, Complex{});
    double power = 1.0;
    for (std::size_t k = 0; k < log_coeffs_.size(); ++k) {
        spectrum[k] = log_coeffs_[k] * power;
        power *= t;
    }
    auto values = fft::inverse(spectrum);
    for (auto& v : values) v = std::exp(v);
    return values;
}

OuterFunction outer_function(std::span<const Complex> boundary) {
    const std::size_t m = boundary.size();
    require_disc_size(m, "outer_function");
    std::vector<Complex> log_modulus(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double r = std::abs(boundary[j]);
        if (r <= 1e-300 || !std::isfinite(r))
            throw DegenerateInputError("outer_function: boundary sample " + std::to_string(j) + " vanishes");
        log_modulus[j] = std::log(r);
    }
    const auto c = fft::forward(log_modulus);
    OuterFunction h;
    h.m_ = m;
    h.log_coeffs_.resize(m / 2 + 1);
    // log|f| is real, so c_{-k} = conj(c_k); folding the negative half onto the
    // positive one gives an analytic function with real part log|f| at the nodes.
    h.log_coeffs_[0] = Complex(c[0].real(), 0.0);
    for (std::size_t k = 1; k < m / 2; ++k) h.log_coeffs_[k] = 2.0 * c[k];
    h.log_coeffs_[m / 2] = Complex(c[m / 2].real(), 0.0);
    return h;
}

DiscLoop::DiscLoop(std::vector<AnalyticDisc> slices) : slices_(std::move(slices)) {
    if (slices_.empty()) throw ConfigError("DiscLoop: no slices");
    for (const auto& s : slices_)
        if (s.size() != slices_.front().size() || s.dim() != slices_.front().dim())
            throw ConfigError("DiscLoop: slices differ in size or dimension");
}

double DiscLoop::max_holomorphy_residual() const {
    double r = 0.0;
    for (const auto& s : slices_) r = std::max(r, s.holomorphy_residual());
    return r;
}

DiscLoop cesaro_mean(const DiscLoop& loop, const AnalyticDisc& h, std::size_t j) {
    const std::size_t mw = loop.w_size();
    if (!is_power_of_two(mw)) throw ConfigError("cesaro_mean: loop size must be a power of two");
    if (mw < 4 * j + 4)
        throw UndersampledError("cesaro_mean: loop resolution " + std::to_string(mw) + " below 4j+4 for j = " +
                                std::to_string(j));
    if (h.size() != mw || h.dim() != loop.dim()) throw ConfigError("cesaro_mean: h does not match the loop");

    const std::size_t mz = loop.z_size();
    const std::size_t n = loop.dim();
    std::vector<std::vector<std::vector<Complex>>> out(mw, std::vector<std::vector<Complex>>(n, std::vector<Complex>(mz)));
    std::vector<Complex> seq(mw);
    const double denom = static_cast<double>(j + 1);
    for (std::size_t c = 0; c < n; ++c) {
        const auto hc = h.component(c);
        for (std::size_t i = 0; i < mz; ++i) {
            for (std::size_t l = 0; l < mw; ++l) seq[l] = loop.slice(l).component(c)[i] - hc[l];
            auto spectrum = fft::forward(seq);
            for (std::size_t s = 0; s < mw; ++s) {
                const auto k = static_cast<std::size_t>(std::abs(fft::frequency(s, mw)));
                spectrum[s] *= k <= j ? (denom - static_cast<double>(k)) / denom : 0.0;
            }
            const auto filtered = fft::inverse(spectrum);
            for (std::size_t l = 0; l < mw; ++l) out[l][c][i] = filtered[l] + hc[l];
        }
    }
    std::vector<AnalyticDisc> slices;
    slices.reserve(mw);
    for (auto& comps : out) slices.push_back(disc_from_samples(comps));
    return DiscLoop(std::move(slices));
}

double sup_distance(const DiscLoop& a, const DiscLoop& b) {
    if (a.w_size() != b.w_size() || a.z_size() != b.z_size() || a.dim() != b.dim())
        throw ConfigError("sup_distance: loops differ in shape");
    double d = 0.0;
    for (std::size_t l = 0; l < a.w_size(); ++l)
        for (std::size_t c = 0; c < a.dim(); ++c) {
            const auto x = a.slice(l).component(c);
            const auto y = b.slice(l).component(c);
            for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(x[i] - y[i]));
        }
    return d;
}

TorusMap::TorusMap(std::size_t dim, std::size_t m, std::vector<Complex> samples)
    : dim_(dim), m_(m), samples_(std::move(samples)) {
    require_disc_size(m, "TorusMap");
    if (samples_.size() != dim * m * m) throw ConfigError("TorusMap: expected dim * M * M samples");
    coeffs_.resize(dim);
    std::vector<Complex> line(m);
    for (std::size_t c = 0; c < dim; ++c) {
        auto& spectrum = coeffs_[c];
        spectrum.assign(samples_.begin() + static_cast<long>(c * m * m), samples_.begin() + static_cast<long>((c + 1) * m * m));
        for (std::size_t a = 0; a < m; ++a) {
            auto row = fft::forward(std::span<const Complex>(spectrum).subspan(a * m, m));
            std::copy(row.begin(), row.end(), spectrum.begin() + static_cast<long>(a * m));
        }
        for (std::size_t b = 0; b < m; ++b) {
            for (std::size_t a = 0; a < m; ++a) line[a] = spectrum[a * m + b];
            auto col = fft::forward(line);
            for (std::size_t a = 0; a < m; ++a) spectrum[a * m + b] = col[a];
        }
        for (std::size_t p = 0; p < m; ++p)
            for (std::size_t q = 0; q < m; ++q)
                if (p >= m / 2 || q >= m / 2) residual_ = std::max(residual_, std::abs(spectrum[p * m + q]));
    }
}

TorusMap TorusMap::from_function(std::size_t dim, std::size_t m, const Fn& fn) {
    require_disc_size(m, "TorusMap::from_function");
    std::vector<Complex> samples(dim * m * m);
    Point p(dim);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            fn(unit_root(a, m), unit_root(b, m), p);
            for (std::size_t c = 0; c < dim; ++c) samples[(c * m + a) * m + b] = p[c];
        }
    return TorusMap(dim, m, std::move(samples));
}

AnalyticDisc diagonal_disc(const TorusMap& g, double theta0, double tol) {
    if (g.holomorphy_residual() > tol)
        throw NonHolomorphicError("diagonal_disc: torus map has frequency mass " +
                                  std::to_string(g.holomorphy_residual()) + " outside the nonnegative quadrant");
    const std::size_t m = g.size();
    const std::size_t out_m = 2 * m;
    std::vector<std::vector<Complex>> comps(g.dim());
    for (std::size_t c = 0; c < g.dim(); ++c) {
        std::vector<Complex> spectrum(out_m, Complex{});
        const auto& coeffs = g.coeffs(c);
        for (std::size_t p = 0; p < m / 2; ++p) {
            const Complex rot = std::polar(1.0, static_cast<double>(p) * theta0);
            for (std::size_t q = 0; q < m / 2; ++q) spectrum[p + q] += coeffs[p * m + q] * rot;
        }
        comps[c] = fft::inverse(spectrum);
    }
    return disc_from_samples(comps);
}

ThetaSelection select_theta0(const TorusMap& g, const std::function<double(PointView)>& phi) {
    if (g.holomorphy_residual() > kHolomorphyTolerance)
        throw NonHolomorphicError("select_theta0: torus map is not holomorphic");
    const std::size_t m = g.size();
    Point p(g.dim());
    ThetaSelection best;
    best.value = std::numeric_limits<double>::infinity();
    double total = 0.0;
    for (std::size_t l = 0; l < m; ++l) {
        // g_l(w_j) = G(w_{j+l}, w_j): the diagonal disc at theta = 2 pi l / M hits torus nodes.
        double sum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            for (std::size_t c = 0; c < g.dim(); ++c) p[c] = g.at(c, (j + l) % m, j);
            sum += phi(p);
        }
        const double value = sum / static_cast<double>(m);
        total += value;
        if (value < best.value) {
            best.value = value;
            best.theta0 = kTwoPi * static_cast<double>(l) / static_cast<double>(m);
        }
    }
    best.torus_average = total / static_cast<double>(m);
    return best;
}

}  // namespace discenv
