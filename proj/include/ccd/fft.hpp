#pragma once

#include <complex>
#include <vector>

namespace ccd::fft {

// Complex 2-D FFT, row-major (n1 rows, n2 columns), any sizes (FFTW backend).
// Forward is unnormalized; inverse divides by n1*n2.
void fft2(std::vector<std::complex<double>>& a, int n1, int n2, bool inverse);

// 1-D transforms along the chosen axis of a row-major n1 x n2 array.
void fft_axis(std::vector<std::complex<double>>& a, int n1, int n2, int axis, bool inverse);

}  // namespace ccd::fft
