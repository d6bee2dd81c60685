#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace flattop::detail {

/// Smallest power of two >= n.
[[nodiscard]] std::size_t next_pow2(std::size_t n);

/// Forward real-to-complex DFT of `input` zero-padded to `length`.
/// Returns length/2 + 1 bins, X_j = sum_t x_t e^{-2 pi i j t / length}.
[[nodiscard]] std::vector<std::complex<double>> rfft(std::span<const double> input, std::size_t length);

/// Inverse of rfft without normalisation: x_t = sum_j X_j e^{+2 pi i j t / length}
/// over the full Hermitian spectrum.
[[nodiscard]] std::vector<double> irfft(std::span<const std::complex<double>> bins, std::size_t length);

/// Unnormalised forward complex DFT.
[[nodiscard]] std::vector<std::complex<double>> fft(std::span<const std::complex<double>> input);

}  // namespace flattop::detail
