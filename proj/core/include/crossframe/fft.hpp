#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace crossframe {

// In-place iterative radix-2 Cooley-Tukey. data.size() must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& data);

// |X_k|^2 for k = 0..n/2 of a real signal (n power of two).
std::vector<double> power_spectrum(std::span<const double> x);

bool is_power_of_two(std::size_t n);

}  // namespace crossframe
