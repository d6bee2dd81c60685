#include "flattop/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "flattop/errors.hpp"

namespace flattop {

namespace {

constexpr double kMinSuccessFraction = 0.8;
constexpr double kMaxCappedFraction = 0.1;
constexpr std::size_t kDefaultLMax = 1024;

}  // namespace

std::string_view to_string(RateLaw law) {
    return law == RateLaw::polynomial_rate ? "polynomial_rate" : "exponential_rate";
}

RateLaw rate_law_from_string(std::string_view name) {
    if (name == "polynomial_rate") return RateLaw::polynomial_rate;
    if (name == "exponential_rate") return RateLaw::exponential_rate;
    throw InvalidArgument("unknown rate law '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
    model.validate();
    rule.validate();
    if (n_values.empty()) throw InvalidArgument("experiment needs at least one N");
    for (std::size_t i = 0; i < n_values.size(); ++i) {
        if (n_values[i] < 64) throw InvalidArgument("every N must be at least 64");
        if (i > 0 && n_values[i] <= n_values[i - 1]) throw InvalidArgument("N values must be strictly increasing");
    }
    if (replicates < 10) throw InvalidArgument("experiment needs at least 10 replicates");
    if (!model.satisfies_zero_condition(rule.k_n)) {
        throw InvalidArgument("model has more than k_n - 1 zeros among lags 1..k0");
    }
}

BandwidthSelection deterministic_oracle(const ValidAcf& acf, std::size_t n, const RuleConfig& rule) {
    return pick_m_hat(acf_from_gamma(acf.gamma, n), rule);
}

std::size_t deterministic_oracle_m(const ValidAcf& acf, std::size_t n, const RuleConfig& rule) {
    return deterministic_oracle(acf, n, rule).m_hat;
}

ReplicateRecord run_replicate(const ValidAcf& acf, std::size_t n, std::uint64_t seed, const RuleConfig& rule) {
    const auto series = simulate_gaussian(acf, n, seed);
    const auto sel = pick_m_hat(sample_autocovariance_fast(series), rule);
    ReplicateRecord rec;
    rec.n = n;
    rec.seed = seed;
    rec.m_hat = sel.m_hat;
    rec.M_hat = sel.M_hat;
    rec.capped = sel.capped;
    return rec;
}

std::size_t lower_median(std::vector<std::size_t> values) {
    if (values.empty()) throw InvalidArgument("median of an empty sample");
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
    std::nth_element(values.begin(), mid, values.end());
    return *mid;
}

FitResult fit_scaling(const std::vector<std::pair<std::size_t, double>>& points, RateLaw law) {
    if (points.size() < 3) throw InvalidArgument("scaling fit needs at least 3 sample sizes");
    std::vector<double> x, y;
    for (const auto& [n, m] : points) {
        const double logn = std::log(static_cast<double>(n));
        if (law == RateLaw::polynomial_rate) {
            if (!(m > 0.0)) throw DegenerateFit("log-log fit needs positive M values");
            x.push_back(std::log(static_cast<double>(n) / logn));
            y.push_back(std::log(m));
        } else {
            x.push_back(logn);
            y.push_back(m);
        }
    }
    const double count = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= count;
    my /= count;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw DegenerateFit("regressor has zero variance");

    FitResult fit;
    fit.law = law;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        fit.residuals.push_back(r);
        sse += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    fit.fitted_constant = law == RateLaw::polynomial_rate ? std::exp(fit.intercept) : fit.slope;
    return fit;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    for (auto& note : config.model.diagnostics(config.rule.k_n)) result.diagnostics.push_back(std::move(note));
    for (auto& note : config.rule.diagnostics(config.n_values.front())) result.diagnostics.push_back(std::move(note));

    std::size_t l_max = config.l_max == 0 ? kDefaultLMax : config.l_max;
    ValidAcf acf = make_psd(config.model, l_max);
    if (config.l_max == 0) {
        std::size_t widest = 0;
        for (std::size_t n : config.n_values) widest = std::max(widest, deterministic_oracle_m(acf, n, config.rule));
        if (8 * widest > l_max) {
            l_max = 8 * widest;
            acf = make_psd(config.model, l_max);
        }
    }
    result.l_max = l_max;
    result.inflation = acf.inflation;

    const std::size_t cells = config.n_values.size();
    const std::size_t reps = config.replicates;
    std::vector<ReplicateRecord> records(cells * reps);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t task = next++; task < records.size(); task = next++) {
            const std::size_t n = config.n_values[task / reps];
            const std::size_t idx = task % reps;
            const std::uint64_t seed = config.seed_base + idx;
            ReplicateRecord rec;
            try {
                rec = run_replicate(acf, n, seed, config.rule);
            } catch (const Error& e) {
                rec.n = n;
                rec.seed = seed;
                rec.ok = false;
                rec.error = e.what();
            }
            rec.index = idx;
            records[task] = std::move(rec);
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned threads = std::min<std::size_t>(config.threads == 0 ? hw : config.threads, records.size());
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }

    std::vector<std::pair<std::size_t, double>> fit_points;
    for (std::size_t c = 0; c < cells; ++c) {
        CellSummary cell;
        cell.n = config.n_values[c];
        cell.replicates.assign(records.begin() + static_cast<std::ptrdiff_t>(c * reps),
                               records.begin() + static_cast<std::ptrdiff_t>((c + 1) * reps));
        const auto oracle = deterministic_oracle(acf, cell.n, config.rule);
        cell.m_det = oracle.m_hat;
        cell.M_det = oracle.M_hat;

        std::vector<std::size_t> m_values, big_m_values;
        std::size_t capped = 0;
        for (const auto& rec : cell.replicates) {
            if (!rec.ok) {
                ++cell.failures;
                continue;
            }
            if (rec.capped) {
                ++capped;
                continue;
            }
            m_values.push_back(rec.m_hat);
            big_m_values.push_back(rec.M_hat);
        }
        const double total = static_cast<double>(reps);
        cell.capped_fraction = static_cast<double>(capped) / total;
        if (static_cast<double>(reps - cell.failures) < kMinSuccessFraction * total) {
            throw Error("N = " + std::to_string(cell.n) + ": only " + std::to_string(reps - cell.failures) + " of " +
                        std::to_string(reps) + " replicates succeeded");
        }
        if (cell.capped_fraction > kMaxCappedFraction) {
            result.quality_ok = false;
            result.diagnostics.push_back("N = " + std::to_string(cell.n) + ": capped fraction " +
                                         std::to_string(cell.capped_fraction) + " exceeds 0.1");
        }
        if (!m_values.empty()) {
            cell.median_m_hat = lower_median(m_values);
            cell.median_M_hat = lower_median(big_m_values);
            fit_points.emplace_back(cell.n, static_cast<double>(cell.median_M_hat));
        }
        result.cells.push_back(std::move(cell));
    }

    if (fit_points.size() >= 3) {
        try {
            auto fit = fit_scaling(fit_points, config.law);
            if (config.law == RateLaw::polynomial_rate) {
                if (auto d = config.model.min_degree()) fit.reference = 1.0 / (2.0 * *d);
            } else if (auto xi = config.model.max_rate(); xi && *xi > 0.0) {
                fit.reference = -1.0 / std::log(*xi);
            }
            result.fit = std::move(fit);
        } catch (const DegenerateFit& e) {
            result.diagnostics.push_back(std::string("fit skipped: ") + e.what());
        }
    }
    return result;
}

}  // namespace flattop
