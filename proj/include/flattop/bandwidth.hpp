#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "flattop/timeseries.hpp"

namespace flattop {

/// Parameters of the correlogram-threshold bandwidth rule.
struct RuleConfig {
    double c_thresh = 2.0;              ///< threshold constant
    std::size_t k_n = 5;                ///< lookahead: consecutive sub-threshold lags required
    double c_break = 0.5;               ///< trapezoid breakpoint used for M = ceil(m / c_break)
    std::optional<std::size_t> max_m;   ///< scan cap; defaults to floor(N/2)

    void validate() const;
    /// Non-fatal notes, e.g. a lookahead that is large relative to log N.
    [[nodiscard]] std::vector<std::string> diagnostics(std::size_t n) const;
};

struct ScanEntry {
    std::size_t lag = 0;
    double abs_rho = 0.0;
    bool below = false;

    bool operator==(const ScanEntry&) const = default;
};

struct BandwidthSelection {
    std::size_t m_hat = 1;
    std::size_t M_hat = 2;
    double threshold = 0.0;
    bool capped = false;
    /// |rho(k)| against the threshold for lags 1..m_hat + k_n.
    std::vector<ScanEntry> scan_trace;

    bool operator==(const BandwidthSelection&) const = default;
};

/// c_thresh * sqrt(ln n / n).
[[nodiscard]] double threshold(std::size_t n, double c_thresh);

/// ceil(m_hat / c_break).
[[nodiscard]] std::size_t m_to_M(std::size_t m_hat, double c_break);

/**
 * Smallest m >= 1 with |rho(m+k)| < threshold for every k = 1..k_n.
 *
 * The scan stops at min(max_m, L - k_n) where L is the last available lag;
 * if nothing qualifies, the cap itself is returned with `capped` set.
 * Throws InsufficientLags when L < k_n + 1.
 */
[[nodiscard]] BandwidthSelection pick_m_hat(const AcfEstimate& acf, const RuleConfig& config);

}  // namespace flattop
