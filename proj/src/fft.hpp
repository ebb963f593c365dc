#pragma once

#include <complex>
#include <span>

namespace amod::detail {

/// Unnormalized in-place DFT over an n-dimensional cube of side `samples`,
/// natural (0..N-1) ordering on both sides. sign = -1 forward, +1 backward.
/// Plans are cached per shape; execution is safe from several threads.
void dft_inplace(std::span<std::complex<double>> data, int dim, int samples, int sign);

}  // namespace amod::detail
