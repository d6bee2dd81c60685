#include "flattop/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"
#include "flattop/errors.hpp"

namespace flattop {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kMinQuadraturePoints = 256;

std::vector<double> equispaced(double lo, double hi, std::size_t points) {
    if (points < 2) throw InvalidArgument("frequency grid needs at least 2 points");
    std::vector<double> w(points);
    const double step = (hi - lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) w[i] = lo + step * static_cast<double>(i);
    w.back() = hi;
    return w;
}

// cosine_series via the Clenshaw recurrence in cos(omega): one cos call, O(n) flops
double cosine_series_clenshaw(std::span<const double> coefficients, double omega) {
    const double x = std::cos(omega);
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t k = coefficients.size() - 1; k >= 1; --k) {
        const double b0 = coefficients[k] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return (coefficients[0] + 2.0 * (x * b1 - b2)) / (2.0 * kPi);
}

}  // namespace

FrequencyGrid::FrequencyGrid(std::vector<double> omegas) : omegas_(std::move(omegas)) {
    if (omegas_.empty()) throw InvalidArgument("frequency grid is empty");
    for (std::size_t i = 0; i < omegas_.size(); ++i) {
        const double w = omegas_[i];
        if (!(w >= -kPi && w <= kPi)) {
            throw InvalidArgument("frequency " + std::to_string(w) + " outside [-pi, pi]");
        }
        if (i > 0 && !(w > omegas_[i - 1])) throw InvalidArgument("frequency grid must be strictly increasing");
    }
}

FrequencyGrid FrequencyGrid::half(std::size_t points) { return FrequencyGrid(equispaced(0.0, kPi, points)); }

FrequencyGrid FrequencyGrid::full(std::size_t points) {
    auto w = equispaced(-kPi, kPi, points);
    // exact mirror symmetry so that f(-w) and f(w) are evaluated at the same |w|
    for (std::size_t i = 0; i < points / 2; ++i) w[i] = -w[points - 1 - i];
    if (points % 2 == 1) w[points / 2] = 0.0;
    return FrequencyGrid(std::move(w));
}

std::string_view to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::periodogram: return "periodogram";
        case EstimatorKind::lag_window: return "lag-window";
        case EstimatorKind::convolution: return "convolution";
        case EstimatorKind::clipped: return "clipped";
        case EstimatorKind::true_density: return "true-density";
    }
    return "unknown";
}

double cosine_series(std::span<const double> coefficients, double omega) {
    if (coefficients.empty()) return 0.0;
    double s = 0.0;
    for (std::size_t k = coefficients.size() - 1; k >= 1; --k) {
        s += coefficients[k] * std::cos(static_cast<double>(k) * omega);
    }
    return (coefficients[0] + 2.0 * s) / (2.0 * kPi);
}

SpectrumEstimate periodogram(const AcfEstimate& acf, const FrequencyGrid& grid) {
    const std::size_t lags = std::min(acf.max_lag(), acf.n_source - 1);
    const std::span<const double> g(acf.gamma.data(), lags + 1);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = cosine_series(g, grid[i]);
    return {grid, std::move(values), {acf.n_source - 1, 0.0, EstimatorKind::periodogram}};
}

SpectrumEstimate periodogram(const TimeSeries& series, const FrequencyGrid& grid) {
    return periodogram(sample_autocovariance_fast(series), grid);
}

SpectrumEstimate lag_window_estimate(const AcfEstimate& acf, const FlatTopConfig& config, const FrequencyGrid& grid) {
    config.validate();
    const std::size_t needed = std::min(config.M, acf.n_source - 1);
    if (acf.gamma.empty() || acf.max_lag() < needed) {
        throw InsufficientLags("lag-window estimate with M = " + std::to_string(config.M) + " needs lags up to " +
                               std::to_string(needed) + ", have " + std::to_string(acf.max_lag()));
    }
    const auto w = lag_weights(config);
    std::vector<double> weighted(needed + 1);
    for (std::size_t k = 0; k <= needed; ++k) weighted[k] = w[k] * acf.gamma[k];

    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = cosine_series(weighted, grid[i]);
    return {grid, std::move(values), {config.M, config.c_break, EstimatorKind::lag_window}};
}

SpectrumEstimate convolution_estimate(const TimeSeries& series, const FlatTopConfig& config,
                                      const FrequencyGrid& grid) {
    config.validate();
    const std::size_t n = series.size();
    // Exact for trigonometric polynomials of total degree below the point count.
    const std::size_t points = std::max(kMinQuadraturePoints, detail::next_pow2(2 * (n + config.M)));
    const double step = 2.0 * kPi / static_cast<double>(points);

    std::vector<double> nodes(points);
    for (std::size_t j = 0; j < points; ++j) nodes[j] = -kPi + step * static_cast<double>(j);
    // periodogram at the nodes from the DFT of the centred series
    const double mean = sample_mean(series);
    std::vector<double> centred(series.values().begin(), series.values().end());
    double gamma0 = 0.0;
    for (double& v : centred) {
        v -= mean;
        gamma0 += v * v;
    }
    (void)acf_from_gamma({gamma0 / static_cast<double>(n)}, n);
    const auto bins = detail::rfft(centred, points);
    std::vector<double> pgram(points);
    for (std::size_t j = 0; j < points; ++j) {
        const std::size_t bin = j >= points / 2 ? j - points / 2 : points / 2 - j;
        pgram[j] = std::norm(bins[bin]) / (2.0 * kPi * static_cast<double>(n));
    }

    const auto w = lag_weights(config);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < points; ++j) s += cosine_series_clenshaw(w, grid[i] - nodes[j]) * pgram[j];
        values[i] = s * step;
    }
    return {grid, std::move(values), {config.M, config.c_break, EstimatorKind::convolution}};
}

std::pair<BandwidthSelection, SpectrumEstimate> estimate_auto(const TimeSeries& series, const RuleConfig& rule,
                                                              const FrequencyGrid& grid) {
    rule.validate();
    const auto acf = sample_autocovariance_fast(series);
    auto selection = pick_m_hat(acf, rule);
    FlatTopConfig window{rule.c_break, selection.M_hat};
    auto spec = lag_window_estimate(acf, window, grid);
    return {std::move(selection), std::move(spec)};
}

SpectrumEstimate clip_nonnegative(SpectrumEstimate spec) {
    for (double& v : spec.values) v = std::max(v, 0.0);
    spec.meta.kind = EstimatorKind::clipped;
    return spec;
}

}  // namespace flattop
