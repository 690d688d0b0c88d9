#pragma once

#include <complex>
#include <vector>

namespace lspde::fft {

// Unnormalized in-place multidimensional DFT over a row-major array.
// sign = -1: sum_x e^{-2 pi i k.x/n} a_x;  sign = +1: the conjugate kernel.
// Thread-safe; plans are cached per (shape, sign).
void transform(std::vector<std::complex<double>>& data, const std::vector<int>& shape, int sign);

}  // namespace lspde::fft
