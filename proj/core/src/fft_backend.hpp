#pragma once

#include <complex>
#include <span>

namespace cqs::detail {

// In-place unnormalized transforms (FFTW sign conventions: forward is
// exp(-2*pi*i*j*k/n)). Plan creation is cached per size and mutex-guarded;
// execution is safe from multiple threads on distinct buffers.
void fft_forward(std::span<std::complex<double>> data);
void fft_inverse(std::span<std::complex<double>> data);

}  // namespace cqs::detail
