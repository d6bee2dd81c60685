#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flattop/spectrum.hpp"
#include "flattop/timeseries.hpp"

namespace flattop {

/// One term C k^{-d} cos(a k + theta) of a polynomially decaying ACF.
struct PolynomialTerm {
    double C = 1.0;
    int d = 1;
    double a = 0.0;
    double theta = 0.0;
};

/// One term C xi^k cos(a k + theta) of a geometrically decaying ACF.
struct ExponentialTerm {
    double C = 1.0;
    double xi = 0.5;
    double a = 0.0;
    double theta = 0.0;
};

/// ARMA(p, q): X_t = sum phi_i X_{t-i} + e_t + sum theta_j e_{t-j}, Var e = sigma2.
struct ArmaSpec {
    std::vector<double> ar;
    std::vector<double> ma;
    double sigma2 = 1.0;
};

enum class ModelKind { polynomial, exponential, cutoff, arma };

[[nodiscard]] std::string_view to_string(ModelKind kind);

/**
 * Parametric true autocovariance.
 *
 * For polynomial and exponential kinds the parametric formula applies for
 * lags k > k0; `head` optionally pins gamma(0..k0). Without a head, lags
 * 1..k0 follow the formula and gamma(0) is the formula value at 0
 * (exponential) or sum C_i (polynomial, whose formula is singular at 0);
 * make_psd then raises gamma(0) as far as positive semidefiniteness needs.
 *
 * The cutoff kind is an MA(q) process (`arma.ma`, `arma.sigma2`); its ACF
 * vanishes beyond lag q.
 */
struct AcfModel {
    ModelKind kind = ModelKind::exponential;
    std::vector<PolynomialTerm> polynomial_terms;
    std::vector<ExponentialTerm> exponential_terms;
    ArmaSpec arma;
    std::size_t k0 = 0;
    std::vector<double> head;

    [[nodiscard]] static AcfModel polynomial(std::vector<PolynomialTerm> terms, std::size_t k0 = 0,
                                             std::vector<double> head = {});
    [[nodiscard]] static AcfModel exponential(std::vector<ExponentialTerm> terms, std::size_t k0 = 0,
                                              std::vector<double> head = {});
    [[nodiscard]] static AcfModel cutoff(std::vector<double> ma, double sigma2 = 1.0);
    [[nodiscard]] static AcfModel white_noise(double sigma2 = 1.0);
    [[nodiscard]] static AcfModel from_arma(ArmaSpec spec);

    /// Throws InvalidArgument on any violated parameter constraint.
    void validate() const;

    /// Slowest decay exponent d = min d_i (polynomial kind only).
    [[nodiscard]] std::optional<int> min_degree() const;
    /// Largest geometric rate |xi| = max |xi_i| (exponential and arma kinds).
    [[nodiscard]] std::optional<double> max_rate() const;

    /// Number of exact zeros of gamma among lags 1..k0.
    [[nodiscard]] std::size_t head_zero_count() const;
    /// At most k_n - 1 zeros among lags 1..k0.
    [[nodiscard]] bool satisfies_zero_condition(std::size_t k_n) const;
    /// Non-fatal notes about the rate conditions, e.g. frequencies below pi / k_n.
    [[nodiscard]] std::vector<std::string> diagnostics(std::size_t k_n) const;
};

/// A finitely supported, positive semidefinite autocovariance gamma(0..L).
struct ValidAcf {
    std::vector<double> gamma;
    double spectral_floor = 0.0;  ///< min of the implied density on the check grid, >= 0
    double inflation = 0.0;       ///< amount added to gamma(0)
    AcfModel source;

    [[nodiscard]] std::size_t max_lag() const noexcept { return gamma.size() - 1; }
};

/// gamma(0..max_lag) of the model.
[[nodiscard]] std::vector<double> eval_model_acf(const AcfModel& model, std::size_t max_lag);

/**
 * Truncates the model ACF at l_max and, if the implied spectral density dips
 * below zero on a grid of >= 16 l_max frequencies, raises gamma(0) by
 * -2 pi min f + 1e-6 gamma(0). Throws DegenerateModel when gamma(0) <= 0.
 */
[[nodiscard]] ValidAcf make_psd(const AcfModel& model, std::size_t l_max = 1024);

/// Exact stationary Gaussian sample by circulant embedding. Deterministic in
/// (acf, n, seed). Throws EmbeddingFailure if the embedding has eigenvalues
/// below -1e-8 times the largest.
[[nodiscard]] TimeSeries simulate_gaussian(const ValidAcf& acf, std::size_t n, std::uint64_t seed);

/// ARMA recursion with Gaussian innovations; the first `burn_in` values
/// (default 10 (p + q) + 1000) are discarded. Throws NonStationary.
[[nodiscard]] TimeSeries simulate_arma(const ArmaSpec& spec, std::size_t n, std::uint64_t seed,
                                       std::optional<std::size_t> burn_in = std::nullopt);

/// Spectral radius of the AR companion matrix; the process is stationary iff < 1.
[[nodiscard]] double ar_spectral_radius(const std::vector<double>& ar);

/// Theoretical autocovariance gamma(0..max_lag) of a stationary ARMA process.
[[nodiscard]] std::vector<double> arma_acf(const ArmaSpec& spec, std::size_t max_lag);

struct Ar2Coefficients {
    double phi1 = 0.0;
    double phi2 = 0.0;
};

/// AR(2) with complex poles r e^{+-ia}: (2 r cos a, -r^2).
[[nodiscard]] Ar2Coefficients ar2_from_pole(double r, double a);

/// The same AR(2) ACF written as a single exponential term C r^k cos(a k + theta),
/// with gamma(0) pinned as head.
[[nodiscard]] AcfModel exponential_model_from_pole(double r, double a, double sigma2 = 1.0);

/// Finite cosine sum of a ValidAcf.
[[nodiscard]] SpectrumEstimate true_spectral_density(const ValidAcf& acf, const FrequencyGrid& grid);
/// sigma2 / (2 pi) |MA(e^{-iw})|^2 / |AR(e^{-iw})|^2.
[[nodiscard]] SpectrumEstimate true_spectral_density(const ArmaSpec& spec, const FrequencyGrid& grid);

}  // namespace flattop
