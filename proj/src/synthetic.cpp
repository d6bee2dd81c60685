#include "flattop/synthetic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "fft.hpp"
#include "flattop/errors.hpp"

namespace flattop {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kEmbeddingTolerance = 1e-8;
constexpr double kInflationMargin = 1e-6;

void check_theta(double theta) {
    if (!(theta >= 0.0 && theta <= kTwoPi)) throw InvalidArgument("theta must lie in [0, 2 pi]");
}

void check_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be finite");
}

double polynomial_value(const std::vector<PolynomialTerm>& terms, std::size_t k) {
    const double kk = static_cast<double>(k);
    double s = 0.0;
    for (const auto& t : terms) s += t.C * std::pow(kk, -t.d) * std::cos(t.a * kk + t.theta);
    return s;
}

double exponential_value(const std::vector<ExponentialTerm>& terms, std::size_t k) {
    const double kk = static_cast<double>(k);
    double s = 0.0;
    for (const auto& t : terms) s += t.C * std::pow(t.xi, kk) * std::cos(t.a * kk + t.theta);
    return s;
}

std::vector<double> ma_acf(const std::vector<double>& ma, double sigma2, std::size_t max_lag) {
    std::vector<double> theta{1.0};
    theta.insert(theta.end(), ma.begin(), ma.end());
    std::vector<double> gamma(max_lag + 1, 0.0);
    for (std::size_t k = 0; k <= max_lag && k < theta.size(); ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j + k < theta.size(); ++j) s += theta[j] * theta[j + k];
        gamma[k] = sigma2 * s;
    }
    return gamma;
}

// (1/2pi)(gamma(0) + 2 sum gamma(k) cos(k w)) on P equispaced frequencies of [0, 2pi).
std::vector<double> implied_density(const std::vector<double>& gamma, std::size_t points) {
    std::vector<double> c(points, 0.0);
    c[0] = gamma[0];
    for (std::size_t k = 1; k < gamma.size(); ++k) {
        c[k] = gamma[k];
        c[points - k] = gamma[k];
    }
    const auto bins = detail::rfft(c, points);
    std::vector<double> f(bins.size());
    for (std::size_t j = 0; j < bins.size(); ++j) f[j] = bins[j].real() / kTwoPi;
    return f;
}

double density_at(const std::vector<double>& gamma, double omega) {
    double s = 0.0;
    for (std::size_t k = gamma.size() - 1; k >= 1; --k) s += gamma[k] * std::cos(static_cast<double>(k) * omega);
    return (gamma[0] + 2.0 * s) / kTwoPi;
}

// Minimum of the implied density: grid scan followed by golden-section
// refinement around the lowest local minima of the grid.
double density_minimum(const std::vector<double>& gamma) {
    const std::size_t lag = gamma.size() - 1;
    const std::size_t points = detail::next_pow2(std::max<std::size_t>(16 * lag, 64));
    const auto f = implied_density(gamma, points);  // frequencies 0..pi inclusive
    const double step = kTwoPi / static_cast<double>(points);

    std::vector<std::size_t> minima;
    for (std::size_t j = 0; j < f.size(); ++j) {
        const double left = j == 0 ? f[1] : f[j - 1];
        const double right = j + 1 == f.size() ? f[j - 1] : f[j + 1];
        if (f[j] <= left && f[j] <= right) minima.push_back(j);
    }
    std::sort(minima.begin(), minima.end(), [&](std::size_t a, std::size_t b) { return f[a] < f[b]; });
    minima.resize(std::min<std::size_t>(minima.size(), 8));

    double best = *std::min_element(f.begin(), f.end());
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    for (std::size_t j : minima) {
        double lo = std::max(0.0, (static_cast<double>(j) - 1.0) * step);
        double hi = std::min(kPi, (static_cast<double>(j) + 1.0) * step);
        double x1 = hi - golden * (hi - lo);
        double x2 = lo + golden * (hi - lo);
        double f1 = density_at(gamma, x1);
        double f2 = density_at(gamma, x2);
        for (int it = 0; it < 60 && hi - lo > 1e-13; ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - golden * (hi - lo);
                f1 = density_at(gamma, x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + golden * (hi - lo);
                f2 = density_at(gamma, x2);
            }
        }
        best = std::min({best, f1, f2});
    }
    return best;
}

}  // namespace

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::polynomial: return "polynomial";
        case ModelKind::exponential: return "exponential";
        case ModelKind::cutoff: return "cutoff";
        case ModelKind::arma: return "arma";
    }
    return "unknown";
}

AcfModel AcfModel::polynomial(std::vector<PolynomialTerm> terms, std::size_t k0, std::vector<double> head) {
    AcfModel m;
    m.kind = ModelKind::polynomial;
    m.polynomial_terms = std::move(terms);
    m.k0 = k0;
    m.head = std::move(head);
    m.validate();
    return m;
}

AcfModel AcfModel::exponential(std::vector<ExponentialTerm> terms, std::size_t k0, std::vector<double> head) {
    AcfModel m;
    m.kind = ModelKind::exponential;
    m.exponential_terms = std::move(terms);
    m.k0 = k0;
    m.head = std::move(head);
    m.validate();
    return m;
}

AcfModel AcfModel::cutoff(std::vector<double> ma, double sigma2) {
    AcfModel m;
    m.kind = ModelKind::cutoff;
    m.arma.ma = std::move(ma);
    m.arma.sigma2 = sigma2;
    m.validate();
    return m;
}

AcfModel AcfModel::white_noise(double sigma2) { return cutoff({}, sigma2); }

AcfModel AcfModel::from_arma(ArmaSpec spec) {
    AcfModel m;
    m.kind = ModelKind::arma;
    m.arma = std::move(spec);
    m.validate();
    return m;
}

void AcfModel::validate() const {
    switch (kind) {
        case ModelKind::polynomial:
            if (polynomial_terms.empty()) throw InvalidArgument("polynomial model needs at least one term");
            for (std::size_t i = 0; i < polynomial_terms.size(); ++i) {
                const auto& t = polynomial_terms[i];
                if (!(t.C > 0.0) || !std::isfinite(t.C)) throw InvalidArgument("polynomial term needs C > 0");
                if (t.d < 1) throw InvalidArgument("polynomial term needs an integer degree d >= 1");
                check_finite(t.a, "frequency a");
                check_theta(t.theta);
                for (std::size_t j = 0; j < i; ++j) {
                    if (polynomial_terms[j].a == t.a) throw InvalidArgument("polynomial term frequencies must be distinct");
                }
            }
            break;
        case ModelKind::exponential:
            if (exponential_terms.empty()) throw InvalidArgument("exponential model needs at least one term");
            for (const auto& t : exponential_terms) {
                if (!(t.C > 0.0) || !std::isfinite(t.C)) throw InvalidArgument("exponential term needs C > 0");
                if (!(std::abs(t.xi) < 1.0)) throw InvalidArgument("exponential term needs |xi| < 1");
                check_finite(t.a, "frequency a");
                check_theta(t.theta);
            }
            break;
        case ModelKind::cutoff:
        case ModelKind::arma:
            if (!(arma.sigma2 > 0.0) || !std::isfinite(arma.sigma2)) throw InvalidArgument("sigma2 must be positive");
            for (double v : arma.ma) check_finite(v, "MA coefficient");
            for (double v : arma.ar) check_finite(v, "AR coefficient");
            if (kind == ModelKind::cutoff && !arma.ar.empty()) {
                throw InvalidArgument("cutoff model takes MA coefficients only");
            }
            if (ar_spectral_radius(arma.ar) >= 1.0) throw NonStationary("AR polynomial has a root on or inside the unit circle");
            break;
    }
    if (kind == ModelKind::polynomial || kind == ModelKind::exponential) {
        if (!head.empty() && head.size() != k0 + 1) {
            throw InvalidArgument("head must list gamma(0..k0), i.e. k0 + 1 values");
        }
        for (double v : head) check_finite(v, "head value");
    }
}

std::optional<int> AcfModel::min_degree() const {
    if (kind != ModelKind::polynomial || polynomial_terms.empty()) return std::nullopt;
    int d = polynomial_terms.front().d;
    for (const auto& t : polynomial_terms) d = std::min(d, t.d);
    return d;
}

std::optional<double> AcfModel::max_rate() const {
    if (kind == ModelKind::exponential && !exponential_terms.empty()) {
        double r = 0.0;
        for (const auto& t : exponential_terms) r = std::max(r, std::abs(t.xi));
        return r;
    }
    if (kind == ModelKind::arma && !arma.ar.empty()) return ar_spectral_radius(arma.ar);
    return std::nullopt;
}

std::size_t AcfModel::head_zero_count() const {
    if (k0 == 0) return 0;
    const auto gamma = eval_model_acf(*this, k0);
    double scale = 0.0;
    for (double g : gamma) scale = std::max(scale, std::abs(g));
    std::size_t zeros = 0;
    for (std::size_t k = 1; k <= k0; ++k) {
        if (std::abs(gamma[k]) <= 1e-12 * scale) ++zeros;
    }
    return zeros;
}

bool AcfModel::satisfies_zero_condition(std::size_t k_n) const { return head_zero_count() + 1 <= k_n; }

std::vector<std::string> AcfModel::diagnostics(std::size_t k_n) const {
    std::vector<std::string> notes;
    if (!satisfies_zero_condition(k_n)) {
        notes.push_back("gamma has " + std::to_string(head_zero_count()) + " zeros among lags 1..k0, more than k_n - 1 = " +
                        std::to_string(k_n - 1));
    }
    const double min_freq = kPi / static_cast<double>(k_n);
    auto check_freq = [&](double a) {
        if (a < min_freq) {
            notes.push_back("frequency a = " + std::to_string(a) + " is below pi / k_n = " + std::to_string(min_freq) +
                            "; the rate result's frequency condition does not cover it");
        }
    };
    for (const auto& t : polynomial_terms) check_freq(t.a);
    for (const auto& t : exponential_terms) check_freq(t.a);
    return notes;
}

std::vector<double> eval_model_acf(const AcfModel& model, std::size_t max_lag) {
    switch (model.kind) {
        case ModelKind::cutoff: return ma_acf(model.arma.ma, model.arma.sigma2, max_lag);
        case ModelKind::arma: return arma_acf(model.arma, max_lag);
        case ModelKind::polynomial:
        case ModelKind::exponential: break;
    }
    const bool poly = model.kind == ModelKind::polynomial;
    std::vector<double> gamma(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        if (k <= model.k0 && !model.head.empty()) {
            gamma[k] = model.head[k];
        } else if (k == 0 && poly) {
            double s = 0.0;
            for (const auto& t : model.polynomial_terms) s += t.C;
            gamma[k] = s;
        } else {
            gamma[k] = poly ? polynomial_value(model.polynomial_terms, k) : exponential_value(model.exponential_terms, k);
        }
    }
    return gamma;
}

ValidAcf make_psd(const AcfModel& model, std::size_t l_max) {
    model.validate();
    if (l_max < 1) throw InvalidArgument("l_max must be at least 1");
    ValidAcf out;
    out.source = model;
    out.gamma = eval_model_acf(model, l_max);
    const double gamma0 = out.gamma[0];
    if (!(gamma0 > 0.0)) throw DegenerateModel("model variance gamma(0) is not positive");

    // Rounding around a true zero of the density is not a violation.
    const double tol = 1e-12 * gamma0 / kTwoPi;
    double floor = density_minimum(out.gamma);
    if (floor < -tol) {
        out.inflation = -kTwoPi * floor + kInflationMargin * gamma0;
        out.gamma[0] += out.inflation;
        floor = density_minimum(out.gamma);
        if (floor < -tol) throw DegenerateModel("positive semidefinite correction failed");
    }
    out.spectral_floor = std::max(floor, 0.0);
    return out;
}

TimeSeries simulate_gaussian(const ValidAcf& acf, std::size_t n, std::uint64_t seed) {
    if (n < 2) throw InvalidArgument("simulation length must be at least 2");
    const std::size_t points = detail::next_pow2(2 * (n + acf.max_lag()));
    std::vector<double> c(points, 0.0);
    c[0] = acf.gamma[0];
    for (std::size_t k = 1; k < acf.gamma.size(); ++k) {
        c[k] = acf.gamma[k];
        c[points - k] = acf.gamma[k];
    }
    const auto bins = detail::rfft(c, points);
    std::vector<double> eig(points);
    for (std::size_t j = 0; j < bins.size(); ++j) eig[j] = bins[j].real();
    for (std::size_t j = bins.size(); j < points; ++j) eig[j] = eig[points - j];

    const double largest = *std::max_element(eig.begin(), eig.end());
    const double smallest = *std::min_element(eig.begin(), eig.end());
    if (smallest < -kEmbeddingTolerance * largest) {
        throw EmbeddingFailure("circulant embedding has eigenvalue " + std::to_string(smallest) +
                               " against largest " + std::to_string(largest));
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<std::complex<double>> w(points);
    const double inv = 1.0 / static_cast<double>(points);
    for (std::size_t j = 0; j < points; ++j) {
        const double re = normal(rng);
        const double im = normal(rng);
        w[j] = std::sqrt(std::max(eig[j], 0.0) * inv) * std::complex<double>(re, im);
    }
    const auto y = detail::fft(w);
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) x[t] = y[t].real();
    return TimeSeries(std::move(x));
}

double ar_spectral_radius(const std::vector<double>& ar) {
    const auto p = static_cast<Eigen::Index>(ar.size());
    if (p == 0) return 0.0;
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index j = 0; j < p; ++j) companion(0, j) = ar[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    return solver.eigenvalues().cwiseAbs().maxCoeff();
}

TimeSeries simulate_arma(const ArmaSpec& spec, std::size_t n, std::uint64_t seed, std::optional<std::size_t> burn_in) {
    if (n < 2) throw InvalidArgument("simulation length must be at least 2");
    if (!(spec.sigma2 > 0.0)) throw InvalidArgument("sigma2 must be positive");
    if (ar_spectral_radius(spec.ar) >= 1.0) throw NonStationary("AR polynomial has a root on or inside the unit circle");

    const std::size_t p = spec.ar.size();
    const std::size_t q = spec.ma.size();
    const std::size_t burn = burn_in.value_or(10 * (p + q) + 1000);
    const std::size_t total = n + burn;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(spec.sigma2));
    std::vector<double> e(total);
    for (double& v : e) v = normal(rng);

    std::vector<double> x(total, 0.0);
    for (std::size_t t = 0; t < total; ++t) {
        double v = e[t];
        for (std::size_t i = 1; i <= p && i <= t; ++i) v += spec.ar[i - 1] * x[t - i];
        for (std::size_t j = 1; j <= q && j <= t; ++j) v += spec.ma[j - 1] * e[t - j];
        x[t] = v;
    }
    return TimeSeries(std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(burn), x.end()));
}

std::vector<double> arma_acf(const ArmaSpec& spec, std::size_t max_lag) {
    if (ar_spectral_radius(spec.ar) >= 1.0) throw NonStationary("AR polynomial has a root on or inside the unit circle");
    const std::size_t p = spec.ar.size();
    const std::size_t q = spec.ma.size();

    std::vector<double> theta{1.0};
    theta.insert(theta.end(), spec.ma.begin(), spec.ma.end());
    // psi weights of the causal representation, needed up to lag q
    std::vector<double> psi(q + 1, 0.0);
    for (std::size_t j = 0; j <= q; ++j) {
        double v = theta[j];
        for (std::size_t i = 1; i <= std::min(j, p); ++i) v += spec.ar[i - 1] * psi[j - i];
        psi[j] = v;
    }
    auto rhs = [&](std::size_t k) {
        double s = 0.0;
        for (std::size_t j = k; j <= q; ++j) s += theta[j] * psi[j - k];
        return spec.sigma2 * s;
    };

    // gamma(k) - sum_j phi_j gamma(|k - j|) = rhs(k) for k = 0..p
    Eigen::MatrixXd a = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p + 1), static_cast<Eigen::Index>(p + 1));
    Eigen::VectorXd b(static_cast<Eigen::Index>(p + 1));
    for (std::size_t k = 0; k <= p; ++k) {
        for (std::size_t j = 1; j <= p; ++j) {
            const std::size_t lag = k > j ? k - j : j - k;
            a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(lag)) -= spec.ar[j - 1];
        }
        b(static_cast<Eigen::Index>(k)) = rhs(k);
    }
    const Eigen::VectorXd head = a.colPivHouseholderQr().solve(b);

    std::vector<double> gamma(max_lag + 1, 0.0);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        if (k <= p) {
            gamma[k] = head(static_cast<Eigen::Index>(k));
            continue;
        }
        double v = rhs(k);
        for (std::size_t j = 1; j <= p; ++j) v += spec.ar[j - 1] * gamma[k - j];
        gamma[k] = v;
    }
    return gamma;
}

Ar2Coefficients ar2_from_pole(double r, double a) {
    if (!(r > 0.0 && r < 1.0)) throw InvalidArgument("pole modulus must lie in (0, 1)");
    if (!(a > 0.0 && a < kPi)) throw InvalidArgument("pole angle must lie in (0, pi)");
    return {2.0 * r * std::cos(a), -r * r};
}

AcfModel exponential_model_from_pole(double r, double a, double sigma2) {
    const auto [phi1, phi2] = ar2_from_pole(r, a);
    const double gamma0 = sigma2 * (1.0 - phi2) / ((1.0 + phi2) * ((1.0 - phi2) * (1.0 - phi2) - phi1 * phi1));
    const double rho1 = phi1 / (1.0 - phi2);
    // rho(k) = r^k cos(a k + theta) / cos(theta); fit theta from rho(1).
    double theta = std::atan((r * std::cos(a) - rho1) / (r * std::sin(a)));
    const double amplitude = gamma0 / std::cos(theta);
    if (theta < 0.0) theta += kTwoPi;
    return AcfModel::exponential({{amplitude, r, a, theta}}, 0, {gamma0});
}

SpectrumEstimate true_spectral_density(const ValidAcf& acf, const FrequencyGrid& grid) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = cosine_series(acf.gamma, grid[i]);
    return {grid, std::move(values), {acf.max_lag(), 0.0, EstimatorKind::true_density}};
}

SpectrumEstimate true_spectral_density(const ArmaSpec& spec, const FrequencyGrid& grid) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double w = grid[i];
        std::complex<double> ar_poly = 1.0;
        for (std::size_t j = 0; j < spec.ar.size(); ++j) {
            ar_poly -= spec.ar[j] * std::polar(1.0, -static_cast<double>(j + 1) * w);
        }
        std::complex<double> ma_poly = 1.0;
        for (std::size_t j = 0; j < spec.ma.size(); ++j) {
            ma_poly += spec.ma[j] * std::polar(1.0, -static_cast<double>(j + 1) * w);
        }
        values[i] = spec.sigma2 / kTwoPi * std::norm(ma_poly) / std::norm(ar_poly);
    }
    return {grid, std::move(values), {0, 0.0, EstimatorKind::true_density}};
}

}  // namespace flattop
