#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace cavitymod::signal {

using cplx = std::complex<double>;

bool is_power_of_two(std::size_t n);

/// In-place iterative radix-2 FFT, e^{-j 2 pi k n / N} kernel, no scaling.
/// Size must be a power of two (throws std::invalid_argument otherwise).
void fft(std::vector<cplx>& data);

/// Inverse FFT with 1/N scaling; fft(ifft(x)) == x up to roundoff.
void ifft(std::vector<cplx>& data);

/// Swap halves so bin 0 moves to the center: output bin i corresponds to
/// baseband frequency (i - N/2) * fs / N.
std::vector<cplx> fftshift(const std::vector<cplx>& data);
std::vector<cplx> ifftshift(const std::vector<cplx>& data);

}  // namespace cavitymod::signal
