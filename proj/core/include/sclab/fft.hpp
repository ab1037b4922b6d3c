#pragma once
// Thin FFTW wrapper. Plan creation/destruction is serialized behind a mutex
// (FFTW planning is not thread-safe); execution runs outside the lock.

#include <complex>
#include <vector>

#include "sclab/grid.hpp"

namespace sclab {
namespace fft {

// In-place d-dimensional transform, row-major dims. sign=-1 forward, +1 inverse.
// The inverse is normalized (divides by the total size).
void transform(cd* data, const std::vector<int>& dims, int sign);

void forward(Vec& v);
void inverse(Vec& v);

// Batched transform along the rows of a column-major matrix: each column of
// length rows() is transformed independently.
void transform_columns(Mat& a, int sign);

// Integer FFT frequencies m = 0,1,...,n/2-1, -n/2, ..., -1 (fftfreq * n).
std::vector<double> frequencies(int n);

} // namespace fft
} // namespace sclab
