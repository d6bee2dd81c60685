#include "flattop/bandwidth.hpp"

#include <algorithm>
#include <cmath>

#include "flattop/errors.hpp"
#include "flattop/kernel.hpp"

namespace flattop {

void RuleConfig::validate() const {
    if (!(c_thresh > 0.0) || !std::isfinite(c_thresh)) {
        throw InvalidArgument("c_thresh must be a positive finite number");
    }
    if (k_n < 1) throw InvalidArgument("k_n must be at least 1");
    if (!(c_break > 0.0 && c_break < 1.0)) throw InvalidBreakpoint("c_break must lie in (0, 1)");
    if (max_m && *max_m < 1) throw InvalidArgument("max_m must be at least 1");
}

std::vector<std::string> RuleConfig::diagnostics(std::size_t n) const {
    std::vector<std::string> notes;
    if (n >= 2 && static_cast<double>(k_n) >= std::log(static_cast<double>(n))) {
        notes.push_back("k_n = " + std::to_string(k_n) + " is not small relative to log N = " +
                        std::to_string(std::log(static_cast<double>(n))));
    }
    return notes;
}

double threshold(std::size_t n, double c_thresh) {
    if (n < 2) throw InvalidArgument("threshold needs N >= 2");
    const double nn = static_cast<double>(n);
    return c_thresh * std::sqrt(std::log(nn) / nn);
}

std::size_t m_to_M(std::size_t m_hat, double c_break) {
    if (m_hat < 1) throw InvalidArgument("m_hat must be at least 1");
    if (!(c_break > 0.0 && c_break < 1.0)) throw InvalidBreakpoint("c_break must lie in (0, 1)");
    const double ratio = static_cast<double>(m_hat) / c_break;
    // Guard against ratios like 3/0.6 landing at 5.000000000000001.
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * nearest) return static_cast<std::size_t>(nearest);
    return static_cast<std::size_t>(std::ceil(ratio));
}

BandwidthSelection pick_m_hat(const AcfEstimate& acf, const RuleConfig& config) {
    config.validate();
    const std::size_t last = acf.max_lag();
    if (acf.rho.empty() || last < config.k_n + 1) {
        throw InsufficientLags("bandwidth rule needs lags up to k_n + 1 = " + std::to_string(config.k_n + 1) +
                               ", have " + std::to_string(last));
    }

    BandwidthSelection sel;
    sel.threshold = threshold(acf.n_source, config.c_thresh);
    const std::size_t cap = std::min(config.max_m.value_or(std::max<std::size_t>(acf.n_source / 2, 1)),
                                     last - config.k_n);

    // run = number of consecutive sub-threshold lags ending at the current lag.
    // m qualifies once the run covering lags m+1..m+k_n reaches k_n.
    std::size_t run = 0;
    std::size_t found = 0;
    for (std::size_t lag = 1; lag <= cap + config.k_n; ++lag) {
        const double a = std::abs(acf.rho[lag]);
        const bool below = a < sel.threshold;
        sel.scan_trace.push_back({lag, a, below});
        run = below ? run + 1 : 0;
        if (run >= config.k_n && lag - config.k_n >= 1) {
            found = lag - config.k_n;
            break;
        }
    }
    if (found == 0) {
        sel.m_hat = cap;
        sel.capped = true;
    } else {
        sel.m_hat = found;
    }
    sel.M_hat = m_to_M(sel.m_hat, config.c_break);
    return sel;
}

}  // namespace flattop
