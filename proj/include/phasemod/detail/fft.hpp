#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace phasemod::detail {

// In-place unnormalized DFT over the listed axes of a row-major array.
// sign = -1 computes sum_j a_j e^{-2 pi i jk/N}; sign = +1 the conjugate kernel.
void dft_axes(std::span<std::complex<double>> data, std::span<const std::size_t> shape,
              std::span<const std::size_t> axes, int sign);

}  // namespace phasemod::detail
