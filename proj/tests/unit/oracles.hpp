#pragma once

// Independent reference computations used only by tests.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace flattop::testing {

// Definition of the divisor-N autocovariance, accumulated in long double.
inline std::vector<double> brute_force_acov(const std::vector<double>& x, std::size_t max_lag) {
    const std::size_t n = x.size();
    long double mean = 0.0L;
    for (double v : x) mean += v;
    mean /= static_cast<long double>(n);
    std::vector<double> g(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) {
        long double s = 0.0L;
        for (std::size_t i = 0; i + k < n; ++i) s += (x[i] - mean) * (x[i + k] - mean);
        g[k] = static_cast<double>(s / static_cast<long double>(n));
    }
    return g;
}

// |sum_t (X_t - mean) e^{-i w t}|^2 / (2 pi N)
inline double dft_periodogram(const std::vector<double>& x, double omega) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    std::complex<double> s = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        s += (x[t] - mean) * std::polar(1.0, -omega * static_cast<double>(t + 1));
    }
    return std::norm(s) / (2.0 * std::numbers::pi * static_cast<double>(x.size()));
}

// Periodic trapezoidal rule on `points` equispaced nodes over [-pi, pi).
template <class F>
double periodic_integral(F&& f, std::size_t points) {
    const double h = 2.0 * std::numbers::pi / static_cast<double>(points);
    double s = 0.0;
    for (std::size_t j = 0; j < points; ++j) s += f(-std::numbers::pi + h * static_cast<double>(j));
    return s * h;
}

inline std::vector<double> random_series(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> level(-5.0, 5.0);
    const double offset = level(rng);
    const double ar = std::uniform_real_distribution<double>(-0.8, 0.8)(rng);
    std::vector<double> x(n);
    double prev = 0.0;
    for (auto& v : x) {
        prev = ar * prev + normal(rng);
        v = offset + prev;
    }
    return x;
}

}  // namespace flattop::testing
