#pragma once

#include <complex>
#include <vector>

namespace orbitlab::fft {

using cplx = std::complex<double>;

/// Unnormalized DFT, X_k = sum_j x_j e^{-2 pi i jk/n}.
std::vector<cplx> forward(std::vector<cplx> x);
/// Unnormalized inverse DFT, x_j = sum_k X_k e^{+2 pi i jk/n}.
std::vector<cplx> backward(std::vector<cplx> x);

/// Linear convolution of a and b (length a+b-1).
std::vector<cplx> convolve(const std::vector<cplx>& a, const std::vector<cplx>& b);

bool is_pow2(std::size_t n);
std::size_t next_pow2(std::size_t n);

}  // namespace orbitlab::fft
