#include "flattop/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "fft.hpp"
#include "flattop/errors.hpp"

namespace flattop {

TimeSeries::TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
        throw InvalidArgument("time series needs at least 2 observations, got " + std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InvalidArgument("non-finite observation at index " + std::to_string(i));
        }
    }
}

double sample_mean(const TimeSeries& series) {
    const auto v = series.values();
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

AcfEstimate acf_from_gamma(std::vector<double> gamma, std::size_t n_source) {
    if (gamma.empty() || !(gamma[0] > 0.0)) {
        throw ConstantSeries("autocovariance at lag 0 is not positive (constant series)");
    }
    AcfEstimate acf;
    acf.rho.resize(gamma.size());
    acf.rho[0] = 1.0;
    for (std::size_t k = 1; k < gamma.size(); ++k) acf.rho[k] = gamma[k] / gamma[0];
    acf.gamma = std::move(gamma);
    acf.n_source = n_source;
    return acf;
}

namespace {

void check_lag(const TimeSeries& series, std::size_t max_lag) {
    if (max_lag >= series.size()) {
        throw LagOutOfRange("max_lag " + std::to_string(max_lag) + " must be below N = " +
                            std::to_string(series.size()));
    }
}

std::vector<double> centered(const TimeSeries& series) {
    const auto v = series.values();
    if (std::all_of(v.begin(), v.end(), [&](double x) { return x == v.front(); })) {
        throw ConstantSeries("series is constant; autocorrelations are undefined");
    }
    const double mean = sample_mean(series);
    std::vector<double> x(series.values().begin(), series.values().end());
    for (double& v : x) v -= mean;
    return x;
}

}  // namespace

AcfEstimate sample_autocovariance(const TimeSeries& series, std::size_t max_lag) {
    check_lag(series, max_lag);
    const std::size_t n = series.size();
    const auto x = centered(series);
    std::vector<double> gamma(max_lag + 1, 0.0);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i + k < n; ++i) s += x[i] * x[i + k];
        gamma[k] = s / static_cast<double>(n);
    }
    return acf_from_gamma(std::move(gamma), n);
}

AcfEstimate sample_autocovariance(const TimeSeries& series) {
    return sample_autocovariance(series, series.size() - 1);
}

AcfEstimate sample_autocovariance_fast(const TimeSeries& series, std::size_t max_lag) {
    check_lag(series, max_lag);
    const std::size_t n = series.size();
    const auto x = centered(series);
    // Padding to >= 2N keeps the circular correlation free of wrap-around.
    const std::size_t len = detail::next_pow2(2 * n);
    auto spectrum = detail::rfft(x, len);
    for (auto& z : spectrum) z = std::norm(z);
    const auto corr = detail::irfft(spectrum, len);

    const double scale = 1.0 / (static_cast<double>(len) * static_cast<double>(n));
    std::vector<double> gamma(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) gamma[k] = corr[k] * scale;
    return acf_from_gamma(std::move(gamma), n);
}

AcfEstimate sample_autocovariance_fast(const TimeSeries& series) {
    return sample_autocovariance_fast(series, series.size() - 1);
}

}  // namespace flattop
