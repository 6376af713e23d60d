#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace nmrq {

// In-place radix-2 FFT, size must be a power of two. Unnormalized:
//   X_k = sum_n v_n exp(sign * i * 2*pi * n * k / N),  sign = -1 or +1.
void fft_radix2(std::vector<std::complex<double>>& v, int sign);

std::size_t next_pow2(std::size_t n);

}  // namespace nmrq
