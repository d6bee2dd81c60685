#pragma once

#include <cstddef>
#include <vector>

namespace flattop {

/// Trapezoidal lag window parameters: breakpoint c in (0,1) and the number of
/// retained lags M >= 1 (bandwidth h = 1/M).
struct FlatTopConfig {
    double c_break = 0.5;
    std::size_t M = 1;

    /// Throws InvalidBreakpoint or InvalidArgument.
    void validate() const;
    [[nodiscard]] double bandwidth() const noexcept { return 1.0 / static_cast<double>(M); }
};

/// The trapezoid: 1 on |t| <= c, (1 - |t|)/(1 - c) on c < |t| <= 1, 0 beyond.
[[nodiscard]] double lambda_trap(double t, double c_break);

/// Weights lambda(k/M) for k = 0..M.
[[nodiscard]] std::vector<double> lag_weights(const FlatTopConfig& config);

/// Frequency-domain kernel (1/2pi) sum_{|k|<=M} lambda(k/M) e^{ik omega}.
[[nodiscard]] double kernel_function(double omega, const FlatTopConfig& config);

}  // namespace flattop
