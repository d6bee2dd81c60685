#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace flattop {

/// Ordered, finite, real-valued observations X_1..X_N with N >= 2.
class TimeSeries {
public:
    /// Throws InvalidArgument on fewer than two values or a non-finite value.
    explicit TimeSeries(std::vector<double> values);

    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }

private:
    std::vector<double> values_;
};

/**
 * Sample autocovariances gamma(0..L) with divisor N and the matching
 * autocorrelations rho(k) = gamma(k) / gamma(0).
 *
 * Lags at or beyond N are zero by convention; gamma_at() and rho_at() return
 * 0 for any lag past the stored range.
 */
struct AcfEstimate {
    std::vector<double> gamma;
    std::vector<double> rho;
    std::size_t n_source = 0;

    [[nodiscard]] std::size_t max_lag() const noexcept { return gamma.empty() ? 0 : gamma.size() - 1; }
    [[nodiscard]] double gamma_at(std::size_t k) const noexcept { return k < gamma.size() ? gamma[k] : 0.0; }
    [[nodiscard]] double rho_at(std::size_t k) const noexcept { return k < rho.size() ? rho[k] : 0.0; }
};

/// Builds an AcfEstimate from autocovariances, filling rho. Throws
/// ConstantSeries when gamma(0) <= 0.
[[nodiscard]] AcfEstimate acf_from_gamma(std::vector<double> gamma, std::size_t n_source);

[[nodiscard]] double sample_mean(const TimeSeries& series);

/// Definition-exact O(N * max_lag) autocovariance.
/// Throws LagOutOfRange if max_lag >= N, ConstantSeries if the series is constant.
[[nodiscard]] AcfEstimate sample_autocovariance(const TimeSeries& series, std::size_t max_lag);
[[nodiscard]] AcfEstimate sample_autocovariance(const TimeSeries& series);

/// Same quantity through a zero-padded FFT of length >= 2N, O(N log N).
[[nodiscard]] AcfEstimate sample_autocovariance_fast(const TimeSeries& series, std::size_t max_lag);
[[nodiscard]] AcfEstimate sample_autocovariance_fast(const TimeSeries& series);

}  // namespace flattop
