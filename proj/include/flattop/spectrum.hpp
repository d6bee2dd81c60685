#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "flattop/bandwidth.hpp"
#include "flattop/kernel.hpp"
#include "flattop/timeseries.hpp"

namespace flattop {

/// Strictly increasing frequencies in [-pi, pi].
class FrequencyGrid {
public:
    explicit FrequencyGrid(std::vector<double> omegas);

    /// `points` equispaced frequencies on [0, pi], endpoints included.
    [[nodiscard]] static FrequencyGrid half(std::size_t points = 512);
    /// `points` equispaced frequencies on [-pi, pi], endpoints included.
    [[nodiscard]] static FrequencyGrid full(std::size_t points);

    [[nodiscard]] std::span<const double> omegas() const noexcept { return omegas_; }
    [[nodiscard]] std::size_t size() const noexcept { return omegas_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return omegas_[i]; }

private:
    std::vector<double> omegas_;
};

enum class EstimatorKind { periodogram, lag_window, convolution, clipped, true_density };

[[nodiscard]] std::string_view to_string(EstimatorKind kind);

struct SpectrumMeta {
    std::size_t M = 0;  ///< lags retained; N-1 for the periodogram
    double c_break = 0.0;
    EstimatorKind kind = EstimatorKind::lag_window;
};

struct SpectrumEstimate {
    FrequencyGrid grid;
    std::vector<double> values;
    SpectrumMeta meta;
};

/// (1/2pi) [g(0) + 2 sum_{k>=1} g(k) cos(k omega)] for an even sequence g.
[[nodiscard]] double cosine_series(std::span<const double> coefficients, double omega);

/// I_N(omega) from all sample autocovariances.
[[nodiscard]] SpectrumEstimate periodogram(const TimeSeries& series, const FrequencyGrid& grid);
[[nodiscard]] SpectrumEstimate periodogram(const AcfEstimate& acf, const FrequencyGrid& grid);

/// Flat-top lag-window estimate. `acf` must cover lags up to min(M, N-1).
[[nodiscard]] SpectrumEstimate lag_window_estimate(const AcfEstimate& acf, const FlatTopConfig& config,
                                                   const FrequencyGrid& grid);

/// Kernel-periodogram convolution over [-pi, pi] by periodic trapezoidal
/// quadrature. Cross-check for lag_window_estimate; not the production path.
[[nodiscard]] SpectrumEstimate convolution_estimate(const TimeSeries& series, const FlatTopConfig& config,
                                                    const FrequencyGrid& grid);

/// Sample ACF, bandwidth rule, then the lag-window estimate with M = M_hat.
[[nodiscard]] std::pair<BandwidthSelection, SpectrumEstimate> estimate_auto(const TimeSeries& series,
                                                                          const RuleConfig& rule,
                                                                          const FrequencyGrid& grid);

[[nodiscard]] SpectrumEstimate clip_nonnegative(SpectrumEstimate spec);

}  // namespace flattop
