#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace mfshe::fft {

// Real-to-complex / complex-to-real transforms over FFTW, with plan creation
// serialized behind a mutex (FFTW planning is not thread safe) and plans
// cached per shape. Buffers are plain std::vector<double>/<complex>; plans are
// created with FFTW_UNALIGNED so any buffer works. Transforms follow FFTW's
// unnormalized convention.
//
// d-dimensional shapes are row-major; the complex array has the last axis
// truncated to n_last/2 + 1.

std::size_t complex_size(const std::vector<int>& shape);
std::size_t real_size(const std::vector<int>& shape);

void forward_r2c(const std::vector<int>& shape, const double* in,
                 std::complex<double>* out);
void inverse_c2r(const std::vector<int>& shape, const std::complex<double>* in,
                 double* out);

} // namespace mfshe::fft
