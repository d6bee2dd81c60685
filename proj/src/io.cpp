#include "flattop/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string_view>

#include "flattop/errors.hpp"

namespace flattop::io {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view s, double& out) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

void check_keys(const json& doc, std::initializer_list<std::string_view> allowed, std::string_view where) {
    if (!doc.is_object()) throw ParseError(std::string(where) + ": expected a JSON object");
    for (const auto& [key, _] : doc.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ParseError(std::string(where) + ": unknown key '" + key + "'");
        }
    }
}

template <class T>
T get_or(const json& doc, const char* key, T fallback) {
    if (!doc.contains(key)) return fallback;
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("key '") + key + "': " + e.what());
    }
}

template <class T>
T get_required(const json& doc, const char* key, std::string_view where) {
    if (!doc.contains(key)) throw ParseError(std::string(where) + ": missing key '" + key + "'");
    return get_or<T>(doc, key, T{});
}

std::size_t get_count(const json& doc, const char* key, std::size_t fallback) {
    if (!doc.contains(key)) return fallback;
    const auto& v = doc.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ParseError(std::string("key '") + key + "' must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

}  // namespace

std::string format_number(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, ptr);
}

TimeSeries read_series_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    std::vector<double> values;
    std::string line;
    std::size_t line_no = 0;
    bool seen_content = false;
    while (std::getline(in, line)) {
        ++line_no;
        auto field = trim(line);
        if (field.empty()) continue;
        if (const auto comma = field.find(','); comma != std::string_view::npos) field = trim(field.substr(0, comma));
        double v = 0.0;
        if (parse_double(field, v)) {
            values.push_back(v);
        } else if (!seen_content) {
            // header
        } else {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": not a number: '" + std::string(field) + "'");
        }
        seen_content = true;
    }
    if (values.empty()) throw ParseError(path.string() + ": no numeric values");
    try {
        return TimeSeries(std::move(values));
    } catch (const InvalidArgument& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

AcfModel model_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("model: expected a JSON object");
    const auto kind = get_required<std::string>(doc, "kind", "model");
    if (kind == "polynomial") {
        check_keys(doc, {"kind", "terms", "k0", "head"}, "polynomial model");
        std::vector<PolynomialTerm> terms;
        for (const auto& t : get_required<json>(doc, "terms", "polynomial model")) {
            check_keys(t, {"C", "d", "a", "theta"}, "polynomial term");
            terms.push_back({get_or(t, "C", 1.0), get_required<int>(t, "d", "polynomial term"), get_or(t, "a", 0.0),
                             get_or(t, "theta", 0.0)});
        }
        return AcfModel::polynomial(std::move(terms), get_count(doc, "k0", 0),
                                    get_or(doc, "head", std::vector<double>{}));
    }
    if (kind == "exponential") {
        check_keys(doc, {"kind", "terms", "k0", "head"}, "exponential model");
        std::vector<ExponentialTerm> terms;
        for (const auto& t : get_required<json>(doc, "terms", "exponential model")) {
            check_keys(t, {"C", "xi", "a", "theta"}, "exponential term");
            terms.push_back({get_or(t, "C", 1.0), get_required<double>(t, "xi", "exponential term"), get_or(t, "a", 0.0),
                             get_or(t, "theta", 0.0)});
        }
        return AcfModel::exponential(std::move(terms), get_count(doc, "k0", 0),
                                     get_or(doc, "head", std::vector<double>{}));
    }
    if (kind == "cutoff") {
        check_keys(doc, {"kind", "ma", "sigma2"}, "cutoff model");
        return AcfModel::cutoff(get_or(doc, "ma", std::vector<double>{}), get_or(doc, "sigma2", 1.0));
    }
    if (kind == "white_noise") {
        check_keys(doc, {"kind", "sigma2"}, "white-noise model");
        return AcfModel::white_noise(get_or(doc, "sigma2", 1.0));
    }
    if (kind == "arma") {
        check_keys(doc, {"kind", "ar", "ma", "sigma2"}, "arma model");
        return AcfModel::from_arma({get_or(doc, "ar", std::vector<double>{}), get_or(doc, "ma", std::vector<double>{}),
                                    get_or(doc, "sigma2", 1.0)});
    }
    if (kind == "ar2_pole") {
        check_keys(doc, {"kind", "r", "a", "sigma2"}, "ar2_pole model");
        return exponential_model_from_pole(get_required<double>(doc, "r", "ar2_pole model"),
                                           get_required<double>(doc, "a", "ar2_pole model"), get_or(doc, "sigma2", 1.0));
    }
    throw ParseError("model: unknown kind '" + kind + "'");
}

json model_to_json(const AcfModel& model) {
    json doc;
    doc["kind"] = std::string(to_string(model.kind));
    switch (model.kind) {
        case ModelKind::polynomial:
            doc["terms"] = json::array();
            for (const auto& t : model.polynomial_terms) {
                doc["terms"].push_back({{"C", t.C}, {"d", t.d}, {"a", t.a}, {"theta", t.theta}});
            }
            break;
        case ModelKind::exponential:
            doc["terms"] = json::array();
            for (const auto& t : model.exponential_terms) {
                doc["terms"].push_back({{"C", t.C}, {"xi", t.xi}, {"a", t.a}, {"theta", t.theta}});
            }
            break;
        case ModelKind::arma:
            doc["ar"] = model.arma.ar;
            [[fallthrough]];
        case ModelKind::cutoff:
            doc["ma"] = model.arma.ma;
            doc["sigma2"] = model.arma.sigma2;
            break;
    }
    if (model.kind == ModelKind::polynomial || model.kind == ModelKind::exponential) {
        doc["k0"] = model.k0;
        if (!model.head.empty()) doc["head"] = model.head;
    }
    return doc;
}

SimulationSpec simulation_spec_from_json(const json& doc) {
    if (!doc.is_object()) throw ParseError("simulation spec: expected a JSON object");
    json model_doc = doc;
    SimulationSpec spec{AcfModel::white_noise(), 1024, Generator::circulant};
    if (doc.contains("l_max")) {
        spec.l_max = get_count(doc, "l_max", 1024);
        model_doc.erase("l_max");
    }
    if (doc.contains("generator")) {
        const auto g = get_or<std::string>(doc, "generator", "circulant");
        if (g == "circulant") spec.generator = Generator::circulant;
        else if (g == "recursion") spec.generator = Generator::recursion;
        else throw ParseError("unknown generator '" + g + "'");
        model_doc.erase("generator");
    }
    spec.model = model_from_json(model_doc);
    if (spec.generator == Generator::recursion && spec.model.kind != ModelKind::arma &&
        spec.model.kind != ModelKind::cutoff) {
        throw ParseError("the recursion generator needs an arma or cutoff model");
    }
    return spec;
}

void apply_rule_json(const json& doc, RuleConfig& rule) {
    rule.c_thresh = get_or(doc, "c_thresh", rule.c_thresh);
    rule.k_n = get_count(doc, "k_n", rule.k_n);
    rule.c_break = get_or(doc, "c_break", rule.c_break);
    if (doc.contains("max_m")) rule.max_m = get_count(doc, "max_m", 0);
}

ExperimentConfig experiment_from_json(const json& doc) {
    check_keys(doc, {"model", "n_values", "replicates", "seed_base", "rule", "law", "l_max", "threads"}, "experiment");
    ExperimentConfig cfg;
    cfg.model = model_from_json(get_required<json>(doc, "model", "experiment"));
    cfg.n_values = get_required<std::vector<std::size_t>>(doc, "n_values", "experiment");
    cfg.replicates = get_count(doc, "replicates", cfg.replicates);
    cfg.seed_base = get_or<std::uint64_t>(doc, "seed_base", cfg.seed_base);
    if (doc.contains("rule")) {
        check_keys(doc.at("rule"), {"c_thresh", "k_n", "c_break", "max_m"}, "experiment rule");
        apply_rule_json(doc.at("rule"), cfg.rule);
    }
    try {
        cfg.law = rate_law_from_string(get_required<std::string>(doc, "law", "experiment"));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
    cfg.l_max = get_count(doc, "l_max", 0);
    cfg.threads = static_cast<unsigned>(get_count(doc, "threads", 0));
    return cfg;
}

void write_acf_csv(std::ostream& out, const AcfEstimate& acf, double threshold) {
    out << "lag,gamma,rho,threshold\n";
    const std::string thr = format_number(threshold);
    for (std::size_t k = 0; k < acf.gamma.size(); ++k) {
        out << k << ',' << format_number(acf.gamma[k]) << ',' << format_number(acf.rho[k]) << ',' << thr << '\n';
    }
}

void write_spectrum(std::ostream& out, const json& header, const SpectrumEstimate& spec) {
    out << "# " << header.dump() << '\n';
    out << "omega,f_hat\n";
    for (std::size_t i = 0; i < spec.values.size(); ++i) {
        out << format_number(spec.grid[i]) << ',' << format_number(spec.values[i]) << '\n';
    }
}

void write_series(std::ostream& out, const TimeSeries& series) {
    for (double v : series.values()) out << format_number(v) << '\n';
}

void write_replicates_csv(std::ostream& out, const ExperimentResult& result) {
    out << "N,replicate,seed,m_hat,M_hat,capped,ok,error\n";
    for (const auto& cell : result.cells) {
        for (const auto& r : cell.replicates) {
            std::string err = r.error;
            std::replace(err.begin(), err.end(), ',', ';');
            std::replace(err.begin(), err.end(), '\n', ' ');
            out << r.n << ',' << r.index << ',' << r.seed << ',' << r.m_hat << ',' << r.M_hat << ','
                << (r.capped ? 1 : 0) << ',' << (r.ok ? 1 : 0) << ',' << err << '\n';
        }
    }
}

void write_summary_csv(std::ostream& out, const ExperimentResult& result) {
    out << "N,median_M_hat,median_m_hat,m_det,M_det,capped_fraction,failures\n";
    for (const auto& c : result.cells) {
        out << c.n << ',' << c.median_M_hat << ',' << c.median_m_hat << ',' << c.m_det << ',' << c.M_det << ','
            << format_number(c.capped_fraction) << ',' << c.failures << '\n';
    }
}

json fit_to_json(const ExperimentResult& result, const ExperimentConfig& config) {
    json doc;
    doc["law"] = std::string(to_string(config.law));
    doc["model"] = model_to_json(config.model);
    doc["replicates"] = config.replicates;
    doc["seed_base"] = config.seed_base;
    doc["l_max"] = result.l_max;
    doc["inflation"] = result.inflation;
    doc["quality_ok"] = result.quality_ok;
    doc["diagnostics"] = result.diagnostics;
    if (result.fit) {
        const auto& f = *result.fit;
        json fit{{"slope", f.slope}, {"intercept", f.intercept}, {"r_squared", f.r_squared},
                 {"residuals", f.residuals}};
        if (config.law == RateLaw::exponential_rate) {
            fit["fitted_A2"] = f.fitted_constant;
            if (f.reference) fit["reference_A2"] = *f.reference;
        } else {
            fit["fitted_A1"] = f.fitted_constant;
            if (f.reference) fit["reference_slope"] = *f.reference;
        }
        doc["fit"] = fit;
    } else {
        doc["fit"] = nullptr;
    }
    return doc;
}

}  // namespace flattop::io
