#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "flattop/bandwidth.hpp"
#include "flattop/montecarlo.hpp"
#include "flattop/spectrum.hpp"
#include "flattop/synthetic.hpp"

namespace flattop::io {

/// Shortest locale-independent decimal form with 17 significant digits.
[[nodiscard]] std::string format_number(double value);

/**
 * One numeric column, one value per line. A non-numeric first line is taken
 * as a header; blank lines are skipped. Throws ParseError (message names the
 * file) on an unreadable, empty or malformed file.
 */
[[nodiscard]] TimeSeries read_series_csv(const std::filesystem::path& path);

[[nodiscard]] nlohmann::json read_json_file(const std::filesystem::path& path);

/// Model document, e.g. {"kind": "exponential", "terms": [{"C": 1, "xi": 0.5, "a": 0, "theta": 0}]}.
/// Kinds: polynomial, exponential, cutoff, white_noise, arma, ar2_pole.
[[nodiscard]] AcfModel model_from_json(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json model_to_json(const AcfModel& model);

enum class Generator { circulant, recursion };

struct SimulationSpec {
    AcfModel model;
    std::size_t l_max = 1024;
    Generator generator = Generator::circulant;
};

/// A model document plus optional "l_max" and "generator" ("circulant" | "recursion").
[[nodiscard]] SimulationSpec simulation_spec_from_json(const nlohmann::json& doc);

/// Overrides rule fields present in a flat object (c_thresh, k_n, c_break, max_m).
void apply_rule_json(const nlohmann::json& doc, RuleConfig& rule);

/// {"model": {...}, "n_values": [...], "replicates": R, "seed_base": s, "rule": {...}, "law": "..."}
[[nodiscard]] ExperimentConfig experiment_from_json(const nlohmann::json& doc);

/// Columns lag, gamma, rho, threshold.
void write_acf_csv(std::ostream& out, const AcfEstimate& acf, double threshold);

/// "# {json header}" followed by omega,f_hat rows.
void write_spectrum(std::ostream& out, const nlohmann::json& header, const SpectrumEstimate& spec);

void write_series(std::ostream& out, const TimeSeries& series);

void write_replicates_csv(std::ostream& out, const ExperimentResult& result);
void write_summary_csv(std::ostream& out, const ExperimentResult& result);
[[nodiscard]] nlohmann::json fit_to_json(const ExperimentResult& result, const ExperimentConfig& config);

}  // namespace flattop::io
