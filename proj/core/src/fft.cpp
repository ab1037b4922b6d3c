#include "sclab/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace sclab {
namespace fft {

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
} // namespace

void transform(cd* data, const std::vector<int>& dims, int sign) {
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft(int(dims.size()), dims.data(),
                         reinterpret_cast<fftw_complex*>(data),
                         reinterpret_cast<fftw_complex*>(data),
                         sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                         FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  if (sign > 0) {
    long total = 1;
    for (int d : dims) total *= d;
    for (long i = 0; i < total; ++i) data[i] /= double(total);
  }
}

void forward(Vec& v) { transform(v.data(), {int(v.size())}, -1); }
void inverse(Vec& v) { transform(v.data(), {int(v.size())}, +1); }

void transform_columns(Mat& a, int sign) {
  const int n = int(a.rows());
  const int batch = int(a.cols());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    int dims[1] = {n};
    plan = fftw_plan_many_dft(1, dims, batch,
                              reinterpret_cast<fftw_complex*>(a.data()), nullptr, 1, n,
                              reinterpret_cast<fftw_complex*>(a.data()), nullptr, 1, n,
                              sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  if (sign > 0) a /= double(n);
}

std::vector<double> frequencies(int n) {
  std::vector<double> m(n);
  for (int i = 0; i < n; ++i) m[i] = (i <= (n - 1) / 2) ? i : i - n;
  return m;
}

} // namespace fft
} // namespace sclab
