#include "flattop/kernel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "flattop/errors.hpp"

namespace flattop {

namespace {

void check_breakpoint(double c_break) {
    if (!(c_break > 0.0 && c_break < 1.0)) {
        throw InvalidBreakpoint("breakpoint must lie in (0, 1), got " + std::to_string(c_break));
    }
}

}  // namespace

void FlatTopConfig::validate() const {
    check_breakpoint(c_break);
    if (M < 1) throw InvalidArgument("lag window needs M >= 1");
}

double lambda_trap(double t, double c_break) {
    check_breakpoint(c_break);
    const double a = std::abs(t);
    if (a <= c_break) return 1.0;
    if (a <= 1.0) return (1.0 - a) / (1.0 - c_break);
    return 0.0;
}

std::vector<double> lag_weights(const FlatTopConfig& config) {
    config.validate();
    std::vector<double> w(config.M + 1);
    const double m = static_cast<double>(config.M);
    for (std::size_t k = 0; k <= config.M; ++k) w[k] = lambda_trap(static_cast<double>(k) / m, config.c_break);
    return w;
}

double kernel_function(double omega, const FlatTopConfig& config) {
    const auto w = lag_weights(config);
    double s = w[0];
    for (std::size_t k = 1; k < w.size(); ++k) s += 2.0 * w[k] * std::cos(static_cast<double>(k) * omega);
    return s / (2.0 * std::numbers::pi);
}

}  // namespace flattop
