// Acceptance suite: prints one PASS/FAIL line per criterion, exits nonzero on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "../unit/oracles.hpp"
#include "flattop/bandwidth.hpp"
#include "flattop/errors.hpp"
#include "flattop/kernel.hpp"
#include "flattop/montecarlo.hpp"
#include "flattop/spectrum.hpp"
#include "flattop/synthetic.hpp"
#include "flattop/timeseries.hpp"

using namespace flattop;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void report(const std::string& id, const std::string& title, const std::function<Outcome()>& body,
            double time_limit_s = 0.0) {
    const auto start = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (time_limit_s > 0.0 && secs >= time_limit_s) {
        out.pass = false;
        out.detail += " (runtime limit " + std::to_string(time_limit_s) + " s exceeded)";
    }
    if (!out.pass) ++failures;
    std::printf("[%s] %s %s: %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", id.c_str(), title.c_str(),
                out.detail.c_str(), secs);
    std::fflush(stdout);
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

// ---------------------------------------------------------------------------

Outcome ac1() {
    std::mt19937_64 rng(20240101);
    std::uniform_int_distribution<std::size_t> len(8, 512);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto x = testing::random_series(rng, len(rng));
        const auto fast = sample_autocovariance_fast(TimeSeries(x));
        const auto ref = testing::brute_force_acov(x, x.size() - 1);
        for (std::size_t k = 0; k < ref.size(); ++k) {
            worst = std::max(worst, std::abs(fast.gamma[k] - ref[k]) / ref[0]);
        }
    }
    return {worst <= 1e-10, fmt("max relative gap %.3e (tol 1e-10) over 200 series", worst)};
}

Outcome ac2() {
    std::mt19937_64 rng(20240202);
    std::uniform_int_distribution<std::size_t> len(16, 512);
    const auto grid = FrequencyGrid::full(257);
    double worst_ratio = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const TimeSeries series(testing::random_series(rng, len(rng)));
        const std::size_t M = std::uniform_int_distribution<std::size_t>(1, series.size() - 1)(rng);
        const double c = std::uniform_real_distribution<double>(0.2, 0.9)(rng);
        const FlatTopConfig cfg{c, M};
        const auto lag = lag_window_estimate(sample_autocovariance(series), cfg, grid);
        const auto conv = convolution_estimate(series, cfg, grid);
        double gap = 0.0, peak = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            gap = std::max(gap, std::abs(lag.values[i] - conv.values[i]));
            peak = std::max(peak, std::abs(lag.values[i]));
        }
        worst_ratio = std::max(worst_ratio, gap / (1e-4 * (1.0 + peak)));
    }
    return {worst_ratio <= 1.0, fmt("max gap / (1e-4 (1+max|f|)) = %.3e over 50 pairs", worst_ratio)};
}

Outcome ac3() {
    std::mt19937_64 rng(20240303);
    std::uniform_int_distribution<std::size_t> len(8, 512);
    double worst_parseval = 0.0, worst_neg = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const TimeSeries series(testing::random_series(rng, len(rng)));
        const std::size_t nodes = 2 * series.size();
        std::vector<double> omegas(nodes);
        for (std::size_t j = 0; j < nodes; ++j) omegas[j] = -kPi + 2.0 * kPi * static_cast<double>(j) / nodes;
        const auto acf = sample_autocovariance(series);
        const auto pn = periodogram(acf, FrequencyGrid(omegas));
        double integral = 0.0, lo = 0.0, hi = 0.0;
        for (double v : pn.values) {
            integral += v * 2.0 * kPi / static_cast<double>(nodes);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        worst_parseval = std::max(worst_parseval, std::abs(integral - acf.gamma[0]));
        worst_neg = std::max(worst_neg, -lo / hi);
    }
    return {worst_parseval <= 1e-6 && worst_neg <= 1e-12,
            fmt("max |int I_N - gamma(0)| = %.3e (tol 1e-6), max -min/max = %.3e (tol 1e-12)", worst_parseval,
                worst_neg)};
}

Outcome ac4() {
    const ArmaSpec ma1{{}, {1.0}, 1.0};
    const RuleConfig rule;
    int hits = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto sel = pick_m_hat(sample_autocovariance_fast(simulate_arma(ma1, 10000, seed)), rule);
        if (sel.m_hat == 1 && sel.M_hat == 2) ++hits;
    }
    return {hits >= 95, fmt("m_hat = 1 (M_hat = 2) in %d/100 runs (need >= 95)", hits)};
}

struct Sweep {
    ExperimentResult result;
    std::size_t k_n = 0;
};

ExperimentConfig ar2_config(std::uint64_t seed_base) {
    ExperimentConfig cfg;
    cfg.model = exponential_model_from_pole(0.9, kPi / 4);
    cfg.n_values = {1u << 12, 1u << 14, 1u << 16};
    cfg.replicates = 100;
    cfg.seed_base = seed_base;
    cfg.law = RateLaw::exponential_rate;
    return cfg;
}

ExperimentConfig polynomial_config() {
    ExperimentConfig cfg;
    cfg.model = AcfModel::polynomial({{1.0, 2, kPi / 8, 0.0}});
    cfg.n_values = {1u << 12, 1u << 14, 1u << 16};
    cfg.replicates = 100;
    cfg.seed_base = 1;
    cfg.law = RateLaw::polynomial_rate;
    return cfg;
}

std::string cells_text(const ExperimentResult& r) {
    std::string s;
    for (const auto& c : r.cells) {
        s += fmt(" N=%zu:M=%zu/Mdet=%zu", c.n, c.median_M_hat, c.M_det);
    }
    return s;
}

Outcome ac5a(const Sweep& sweep) {
    bool ok = true;
    std::string ratios;
    for (const auto& c : sweep.result.cells) {
        const double ratio = static_cast<double>(c.median_M_hat) / (2.0 * static_cast<double>(c.m_det));
        ok = ok && ratio >= 0.8 && ratio <= 1.25;
        ratios += fmt(" %.3f", ratio);
    }
    return {ok, "median M_hat/(2 m_det) =" + ratios + " (need [0.8, 1.25]);" + cells_text(sweep.result)};
}

Outcome ac5b(const Sweep& sweep) {
    const double reference = -1.0 / std::log(0.9);
    const double a2 = sweep.result.fit->fitted_constant;
    const double rel = std::abs(a2 - reference) / reference;
    return {rel <= 0.35, fmt("fitted A2 = %.4f vs %.4f, relative error %.3f (tol 0.35)", a2, reference, rel)};
}

Outcome ac6(const Sweep& sweep) {
    const double slope = sweep.result.fit->slope;
    return {slope >= 0.15 && slope <= 0.35,
            fmt("slope %.4f (need [0.15, 0.35]), inflation %.4f;", slope, sweep.result.inflation) +
                cells_text(sweep.result)};
}

Outcome ac7(const std::vector<const Sweep*>& sweeps) {
    bool ok = true;
    std::string text;
    for (const auto* sweep : sweeps) {
        for (const auto& c : sweep->result.cells) {
            const auto m_det = static_cast<long>(c.m_det);
            const long slack = std::max(2L, static_cast<long>(std::ceil(0.25 * static_cast<double>(m_det))));
            const long lo = m_det - static_cast<long>(sweep->k_n) - slack;
            const long hi = m_det + slack;
            const auto med = static_cast<long>(c.median_m_hat);
            const bool in = med >= lo && med <= hi;
            ok = ok && in;
            text += fmt(" %ld in [%ld,%ld]%s", med, lo, hi, in ? "" : "!");
        }
    }
    return {ok, "median m_hat per cell:" + text};
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FLATTOP_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome ac8(const Sweep& previous) {
    // library: rerun the AR(2) sweep, once with a different thread count
    auto cfg = ar2_config(1);
    cfg.threads = 3;
    const bool lib_same = run_experiment(cfg) == previous.result;

    const fs::path dir = fs::temp_directory_path() / "flattop_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path fixtures{FLATTOP_FIXTURES};
    int mismatches = 0, errors = 0;
    const auto twice = [&](const std::string& args_a, const std::string& args_b,
                           const std::vector<std::pair<fs::path, fs::path>>& files) {
        if (run_cli(args_a) != 0 || run_cli(args_b) != 0) ++errors;
        for (const auto& [a, b] : files) {
            if (!fs::exists(a) || slurp(a) != slurp(b)) ++mismatches;
        }
    };
    twice("simulate " + (fixtures / "ma1_model.json").string() + " --n 4096 --seed 7 --out " + (dir / "s1.csv").string(),
          "simulate " + (fixtures / "ma1_model.json").string() + " --n 4096 --seed 7 --out " + (dir / "s2.csv").string(),
          {{dir / "s1.csv", dir / "s2.csv"}});
    twice("acf " + (dir / "s1.csv").string() + " --out " + (dir / "a1.csv").string(),
          "acf " + (dir / "s1.csv").string() + " --out " + (dir / "a2.csv").string(), {{dir / "a1.csv", dir / "a2.csv"}});
    twice("estimate " + (dir / "s1.csv").string() + " --out " + (dir / "e1.csv").string(),
          "estimate " + (dir / "s1.csv").string() + " --out " + (dir / "e2.csv").string(),
          {{dir / "e1.csv", dir / "e2.csv"}});
    twice("experiment " + (fixtures / "ar1_rate.json").string() + " --out-dir " + (dir / "x1").string(),
          "experiment " + (fixtures / "ar1_rate.json").string() + " --out-dir " + (dir / "x2").string() + " --threads 2",
          {{dir / "x1" / "replicates.csv", dir / "x2" / "replicates.csv"},
           {dir / "x1" / "summary.csv", dir / "x2" / "summary.csv"},
           {dir / "x1" / "fit.json", dir / "x2" / "fit.json"}});
    fs::remove_all(dir);
    return {lib_same && mismatches == 0 && errors == 0,
            fmt("library rerun identical: %s; CLI artifacts differing: %d of 6, command failures: %d",
                lib_same ? "yes" : "no", mismatches, errors)};
}

Outcome ac9() {
    const ArmaSpec ar1{{0.5}, {}, 1.0};
    const auto grid = FrequencyGrid::half(64);
    const auto truth = true_spectral_density(ar1, grid);
    const RuleConfig rule;
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto series = simulate_arma(ar1, 1u << 15, seed);
        const auto est = estimate_auto(series, rule, grid).second;
        const auto raw = periodogram(series, grid);
        double mse_est = 0.0, mse_raw = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            mse_est += std::pow(est.values[i] - truth.values[i], 2);
            mse_raw += std::pow(raw.values[i] - truth.values[i], 2);
        }
        if (mse_est < mse_raw) ++wins;
    }
    return {wins >= 95, fmt("flat-top beats periodogram in %d/100 runs (need >= 95)", wins)};
}

}  // namespace

int main() {
    std::printf("flattop acceptance suite\n");
    report("AC1", "fast vs brute-force autocovariance", ac1, 10.0);
    report("AC2", "convolution vs lag-window form", ac2, 30.0);
    report("AC3", "Parseval and periodogram nonnegativity", ac3);
    report("AC4", "MA(1) hard-cutoff recovery", ac4, 60.0);

    Sweep ar2, poly;
    const auto sweep_start = Clock::now();
    report("AC5", "sweep setup (AR(2) pole r=0.9, a=pi/4, R=100, seed_base=1)", [&] {
        ar2.result = run_experiment(ar2_config(1));
        ar2.k_n = RuleConfig{}.k_n;
        return Outcome{ar2.result.fit.has_value(), "quality_ok=" + std::string(ar2.result.quality_ok ? "yes" : "no")};
    }, 600.0);
    report("AC5a", "median M_hat tracks 2 m_det", [&] { return ac5a(ar2); });
    report("AC5b", "fitted A2 near -1/ln 0.9", [&] { return ac5b(ar2); });
    const double ar2_secs = std::chrono::duration<double>(Clock::now() - sweep_start).count();

    report("AC6", "polynomial d=2 growth slope", [&] {
        poly.result = run_experiment(polynomial_config());
        poly.k_n = RuleConfig{}.k_n;
        return ac6(poly);
    }, 600.0);
    report("AC7", "oracle sandwich", [&] { return ac7({&ar2, &poly}); });
    report("AC8", "determinism", [&] { return ac8(ar2); });
    report("AC9", "MSE against the periodogram", ac9);

    // informational only: spread of the AC5b statistic across independent seed bases
    std::string spread;
    for (std::uint64_t base : {100001u, 200001u, 300001u, 400001u, 500001u}) {
        const auto r = run_experiment(ar2_config(base));
        spread += fmt(" %.2f", r.fit->fitted_constant);
    }
    std::printf("[INFO] AC5b fitted A2 at seed_base 100001..500001:%s (AC5 sweep took %.1f s)\n", spread.c_str(),
                ar2_secs);

    std::printf("%s: %d criterion line(s) failed\n", failures == 0 ? "ALL PASSED" : "FAILED", failures);
    return failures == 0 ? 0 : 1;
}
