#include "discenv/fft.hpp"

#include "discenv/error.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace discenv::fft {
namespace {

// FFTW planning is not thread-safe; execution on distinct arrays is.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_pair(n, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::vector<Complex> in(n), out(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                                          reinterpret_cast<fftw_complex*>(out.data()), sign,
                                          FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

std::vector<Complex> run(std::span<const Complex> data, int sign) {
    if (data.empty()) throw ConfigError("fft: empty input");
    std::vector<Complex> in(data.begin(), data.end());
    std::vector<Complex> out(data.size());
    fftw_execute_dft(cache().get(data.size(), sign), reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

}  // namespace

std::vector<Complex> forward(std::span<const Complex> samples) {
    auto out = run(samples, FFTW_FORWARD);
    const double scale = 1.0 / static_cast<double>(samples.size());
    for (auto& c : out) c *= scale;
    return out;
}

std::vector<Complex> inverse(std::span<const Complex> coeffs) { return run(coeffs, FFTW_BACKWARD); }

}  // namespace discenv::fft
