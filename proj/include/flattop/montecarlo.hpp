#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flattop/bandwidth.hpp"
#include "flattop/synthetic.hpp"

namespace flattop {

/// Growth law checked by a rate experiment.
enum class RateLaw {
    polynomial_rate,   ///< M ~ A1 (N / log N)^{1/(2d)}
    exponential_rate,  ///< M ~ A2 log N, A2 = -1 / log|xi|
};

[[nodiscard]] std::string_view to_string(RateLaw law);
[[nodiscard]] RateLaw rate_law_from_string(std::string_view name);

struct ExperimentConfig {
    AcfModel model;
    std::vector<std::size_t> n_values;
    std::size_t replicates = 100;
    std::uint64_t seed_base = 1;
    RuleConfig rule;
    RateLaw law = RateLaw::exponential_rate;
    /// Truncation lag of the realised ACF; 0 selects max(1024, 8 m_det).
    std::size_t l_max = 0;
    /// Worker threads; 0 uses the hardware concurrency. Never affects results.
    unsigned threads = 0;

    void validate() const;
};

struct ReplicateRecord {
    std::size_t n = 0;
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::size_t m_hat = 0;
    std::size_t M_hat = 0;
    bool capped = false;
    bool ok = true;
    std::string error;

    bool operator==(const ReplicateRecord&) const = default;
};

struct CellSummary {
    std::size_t n = 0;
    std::vector<ReplicateRecord> replicates;
    std::size_t median_m_hat = 0;
    std::size_t median_M_hat = 0;
    std::size_t m_det = 0;
    std::size_t M_det = 0;
    double capped_fraction = 0.0;
    std::size_t failures = 0;

    bool operator==(const CellSummary&) const = default;
};

struct FitResult {
    RateLaw law = RateLaw::exponential_rate;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    std::vector<double> residuals;
    /// A1 = exp(intercept) for the polynomial law; A2 = slope for the exponential law.
    double fitted_constant = 0.0;
    /// Asymptotic slope 1/(2d) (polynomial) or A2 = -1/log|xi| (exponential), when the model fixes it.
    std::optional<double> reference;

    bool operator==(const FitResult&) const = default;
};

struct ExperimentResult {
    std::vector<CellSummary> cells;
    std::optional<FitResult> fit;
    std::size_t l_max = 0;
    double inflation = 0.0;
    bool quality_ok = true;
    std::vector<std::string> diagnostics;

    bool operator==(const ExperimentResult&) const = default;
};

/// The bandwidth rule applied to the true autocorrelations with the threshold for sample size n.
[[nodiscard]] BandwidthSelection deterministic_oracle(const ValidAcf& acf, std::size_t n, const RuleConfig& rule);
[[nodiscard]] std::size_t deterministic_oracle_m(const ValidAcf& acf, std::size_t n, const RuleConfig& rule);

/// simulate -> sample ACF -> bandwidth rule. Errors propagate.
[[nodiscard]] ReplicateRecord run_replicate(const ValidAcf& acf, std::size_t n, std::uint64_t seed,
                                            const RuleConfig& rule);

/// Least-squares fit of median M against the law's regressor:
/// log M on log(N / log N), or M on log N. Needs >= 3 points.
[[nodiscard]] FitResult fit_scaling(const std::vector<std::pair<std::size_t, double>>& points, RateLaw law);

/// Lower median; an element of `values`. Throws on empty input.
[[nodiscard]] std::size_t lower_median(std::vector<std::size_t> values);

[[nodiscard]] ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace flattop
