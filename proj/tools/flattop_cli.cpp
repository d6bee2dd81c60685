// flattop: flat-top lag-window spectral estimation from the command line.
//
//   flattop acf <series.csv> [--max-lag L] [--out file]
//   flattop estimate <series.csv> [rule flags] [--grid P] [--full-grid] [--clip] [--out file]
//   flattop simulate <model.json> --n N --seed S [--out file]
//   flattop experiment <experiment.json> --out-dir DIR
//
// Exit codes: 0 ok, 2 input/spec error, 3 degenerate data, 4 simulation
// failure, 5 experiment quality gate.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include "flattop/errors.hpp"
#include "flattop/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kInput = 2, kDegenerate = 3, kSimulation = 4, kQuality = 5 };

struct Options {
    std::string input;
    std::string out;
    std::string out_dir;
    std::string config;
    std::optional<double> c_thresh;
    std::optional<std::size_t> k_n;
    std::optional<double> c_break;
    std::optional<std::size_t> max_m;
    std::optional<std::size_t> max_lag;
    std::optional<std::size_t> grid;
    bool full_grid = false;
    bool clip = false;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

// Settings resolved from --config then flag overrides.
struct Settings {
    flattop::RuleConfig rule;
    std::optional<std::size_t> max_lag;
    std::size_t grid_points = 512;
    bool full_grid = false;
    bool clip = false;
};

Settings resolve(const Options& opt) {
    Settings s;
    if (!opt.config.empty()) {
        const auto doc = flattop::io::read_json_file(opt.config);
        if (!doc.is_object()) throw flattop::ParseError(opt.config + ": expected a JSON object");
        for (const auto& [key, value] : doc.items()) {
            static const std::vector<std::string> known{"c_thresh", "k_n",       "c_break", "max_m",
                                                        "max_lag",  "grid_points", "full_grid", "clip"};
            if (std::find(known.begin(), known.end(), key) == known.end()) {
                throw flattop::ParseError(opt.config + ": unknown key '" + key + "'");
            }
        }
        try {
            flattop::io::apply_rule_json(doc, s.rule);
            if (doc.contains("max_lag")) s.max_lag = doc.at("max_lag").get<std::size_t>();
            s.grid_points = doc.value("grid_points", s.grid_points);
            s.full_grid = doc.value("full_grid", s.full_grid);
            s.clip = doc.value("clip", s.clip);
        } catch (const json::exception& e) {
            throw flattop::ParseError(opt.config + ": " + e.what());
        }
    }
    if (opt.c_thresh) s.rule.c_thresh = *opt.c_thresh;
    if (opt.k_n) s.rule.k_n = *opt.k_n;
    if (opt.c_break) s.rule.c_break = *opt.c_break;
    if (opt.max_m) s.rule.max_m = *opt.max_m;
    if (opt.max_lag) s.max_lag = *opt.max_lag;
    if (opt.grid) s.grid_points = *opt.grid;
    s.full_grid = s.full_grid || opt.full_grid;
    s.clip = s.clip || opt.clip;
    s.rule.validate();
    return s;
}

// Writes to --out when given, stdout otherwise.
void emit(const std::string& path, const std::function<void(std::ostream&)>& body) {
    if (path.empty()) {
        body(std::cout);
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw flattop::ParseError("cannot write " + path);
    body(out);
}

int cmd_acf(const Options& opt) {
    const auto settings = resolve(opt);
    const auto series = flattop::io::read_series_csv(opt.input);
    const auto acf = flattop::sample_autocovariance_fast(series, settings.max_lag.value_or(series.size() - 1));
    const double thr = flattop::threshold(series.size(), settings.rule.c_thresh);
    emit(opt.out, [&](std::ostream& out) { flattop::io::write_acf_csv(out, acf, thr); });
    return kOk;
}

int cmd_estimate(const Options& opt) {
    const auto settings = resolve(opt);
    const auto series = flattop::io::read_series_csv(opt.input);
    const auto grid = settings.full_grid ? flattop::FrequencyGrid::full(settings.grid_points)
                                         : flattop::FrequencyGrid::half(settings.grid_points);
    auto [sel, spec] = flattop::estimate_auto(series, settings.rule, grid);
    if (settings.clip) spec = flattop::clip_nonnegative(std::move(spec));

    const json header{{"N", series.size()},
                      {"m_hat", sel.m_hat},
                      {"M_hat", sel.M_hat},
                      {"threshold", sel.threshold},
                      {"c_thresh", settings.rule.c_thresh},
                      {"k_n", settings.rule.k_n},
                      {"c_break", settings.rule.c_break},
                      {"capped", sel.capped},
                      {"kind", std::string(flattop::to_string(spec.meta.kind))}};
    emit(opt.out, [&](std::ostream& out) { flattop::io::write_spectrum(out, header, spec); });
    for (const auto& note : settings.rule.diagnostics(series.size())) std::cerr << "note: " << note << '\n';
    return kOk;
}

int cmd_simulate(const Options& opt) {
    const auto spec = flattop::io::simulation_spec_from_json(flattop::io::read_json_file(opt.input));
    if (opt.n < 2) throw flattop::InvalidArgument("--n must be at least 2");
    std::optional<flattop::TimeSeries> series;
    if (spec.generator == flattop::io::Generator::recursion) {
        series = flattop::simulate_arma(spec.model.arma, opt.n, opt.seed);
    } else {
        series = flattop::simulate_gaussian(flattop::make_psd(spec.model, spec.l_max), opt.n, opt.seed);
    }
    emit(opt.out, [&](std::ostream& out) { flattop::io::write_series(out, *series); });
    return kOk;
}

int cmd_experiment(const Options& opt) {
    auto config = flattop::io::experiment_from_json(flattop::io::read_json_file(opt.input));
    if (opt.threads != 0) config.threads = opt.threads;
    if (config.n_values.size() < 3) {
        throw flattop::InvalidArgument("experiment needs at least 3 N values for the scaling fit");
    }
    const auto result = flattop::run_experiment(config);

    fs::create_directories(opt.out_dir);
    const fs::path dir(opt.out_dir);
    emit((dir / "replicates.csv").string(), [&](std::ostream& out) { flattop::io::write_replicates_csv(out, result); });
    emit((dir / "summary.csv").string(), [&](std::ostream& out) { flattop::io::write_summary_csv(out, result); });
    emit((dir / "fit.json").string(),
         [&](std::ostream& out) { out << flattop::io::fit_to_json(result, config).dump(2) << '\n'; });
    for (const auto& note : result.diagnostics) std::cerr << "note: " << note << '\n';
    if (!result.quality_ok) {
        std::cerr << "error: experiment failed the capped-fraction quality gate\n";
        return kQuality;
    }
    return kOk;
}

void add_rule_flags(CLI::App* cmd, Options& opt) {
    cmd->add_option("--c-thresh", opt.c_thresh, "threshold constant (default 2)");
    cmd->add_option("--k-n", opt.k_n, "lookahead K_N (default 5)");
    cmd->add_option("--c-break", opt.c_break, "trapezoid breakpoint (default 0.5)");
    cmd->add_option("--max-m", opt.max_m, "cap on the bandwidth scan (default N/2)");
    cmd->add_option("--config", opt.config, "flat JSON config; flags override its values");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flat-top lag-window spectral density estimation"};
    app.require_subcommand(1);
    Options opt;

    auto* acf = app.add_subcommand("acf", "sample autocovariance and autocorrelation");
    acf->add_option("input", opt.input, "series CSV")->required();
    acf->add_option("--max-lag", opt.max_lag, "largest lag (default N-1)");
    acf->add_option("--out", opt.out, "output CSV (default stdout)");
    add_rule_flags(acf, opt);

    auto* est = app.add_subcommand("estimate", "automatic-bandwidth spectral density estimate");
    est->add_option("input", opt.input, "series CSV")->required();
    est->add_option("--grid", opt.grid, "number of frequencies (default 512)");
    est->add_flag("--full-grid", opt.full_grid, "use [-pi, pi] instead of [0, pi]");
    est->add_flag("--clip", opt.clip, "clip negative estimates to zero");
    est->add_option("--out", opt.out, "output file (default stdout)");
    add_rule_flags(est, opt);

    auto* sim = app.add_subcommand("simulate", "simulate a stationary Gaussian series");
    sim->add_option("spec", opt.input, "model spec JSON")->required();
    sim->add_option("--n", opt.n, "series length")->required();
    sim->add_option("--seed", opt.seed, "random seed")->required();
    sim->add_option("--out", opt.out, "output file (default stdout)");

    auto* exp = app.add_subcommand("experiment", "Monte Carlo bandwidth-rate experiment");
    exp->add_option("spec", opt.input, "experiment spec JSON")->required();
    exp->add_option("--out-dir", opt.out_dir, "output directory")->required();
    exp->add_option("--threads", opt.threads, "worker threads (results do not depend on it)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }

    try {
        if (*acf) return cmd_acf(opt);
        if (*est) return cmd_estimate(opt);
        if (*sim) return cmd_simulate(opt);
        return cmd_experiment(opt);
    } catch (const flattop::ConstantSeries& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDegenerate;
    } catch (const flattop::InsufficientLags& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDegenerate;
    } catch (const flattop::EmbeddingFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kSimulation;
    } catch (const flattop::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInput;
    }
}
