#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace flattop::detail {

namespace {

// FFTW's planner is not thread-safe; fftw_execute on a private plan is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct Plan {
    fftw_plan plan = nullptr;
    explicit Plan(fftw_plan p) : plan(p) {}
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
};

// FFTW_ESTIMATE keeps plan selection independent of timing, so results are
// reproducible bit for bit across runs.
constexpr unsigned kPlanFlags = FFTW_ESTIMATE;

}  // namespace

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<std::complex<double>> rfft(std::span<const double> input, std::size_t length) {
    std::vector<double> in(length, 0.0);
    std::copy_n(input.begin(), std::min(input.size(), length), in.begin());
    std::vector<std::complex<double>> out(length / 2 + 1);
    fftw_plan raw;
    {
        std::lock_guard lock(planner_mutex());
        raw = fftw_plan_dft_r2c_1d(static_cast<int>(length), in.data(),
                                   reinterpret_cast<fftw_complex*>(out.data()), kPlanFlags);
    }
    Plan plan(raw);
    fftw_execute(plan.plan);
    return out;
}

std::vector<double> irfft(std::span<const std::complex<double>> bins, std::size_t length) {
    // c2r destroys its input
    std::vector<std::complex<double>> in(bins.begin(), bins.end());
    in.resize(length / 2 + 1);
    std::vector<double> out(length);
    fftw_plan raw;
    {
        std::lock_guard lock(planner_mutex());
        raw = fftw_plan_dft_c2r_1d(static_cast<int>(length), reinterpret_cast<fftw_complex*>(in.data()),
                                   out.data(), kPlanFlags);
    }
    Plan plan(raw);
    fftw_execute(plan.plan);
    return out;
}

std::vector<std::complex<double>> fft(std::span<const std::complex<double>> input) {
    std::vector<std::complex<double>> in(input.begin(), input.end());
    std::vector<std::complex<double>> out(in.size());
    fftw_plan raw;
    {
        std::lock_guard lock(planner_mutex());
        raw = fftw_plan_dft_1d(static_cast<int>(in.size()), reinterpret_cast<fftw_complex*>(in.data()),
                               reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, kPlanFlags);
    }
    Plan plan(raw);
    fftw_execute(plan.plan);
    return out;
}

}  // namespace flattop::detail
