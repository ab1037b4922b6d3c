#pragma once
// Periodic uniform grids on [-L, L)^d, quadrature, Gaussian kernels, convolution.

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace sclab {

using cd = std::complex<double>;
using Vec = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;
using Mat = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;

struct Grid {
  int dim = 1;            // d in {1,2,3}
  int n = 0;              // points per axis, even
  double half_length = 0; // L; box is [-L, L)^d
  double spacing = 0;     // dx = 2L/n

  long size() const {
    long s = 1;
    for (int a = 0; a < dim; ++a) s *= n;
    return s;
  }
  double cell() const { // dx^d
    double c = 1;
    for (int a = 0; a < dim; ++a) c *= spacing;
    return c;
  }
  // x_j = -L + j*dx along one axis
  double axis_coord(int j) const { return -half_length + j * spacing; }
  // decompose row-major linear index into per-axis indices
  void indices(long idx, int* out) const {
    for (int a = dim - 1; a >= 0; --a) {
      out[a] = int(idx % n);
      idx /= n;
    }
  }
  double coord(long idx, int axis) const {
    int ix[3] = {0, 0, 0};
    indices(idx, ix);
    return axis_coord(ix[axis]);
  }
  double radius2(long idx) const { // |x|^2 at grid point
    int ix[3] = {0, 0, 0};
    indices(idx, ix);
    double r2 = 0;
    for (int a = 0; a < dim; ++a) {
      double c = axis_coord(ix[a]);
      r2 += c * c;
    }
    return r2;
  }
  bool operator==(const Grid& o) const {
    return dim == o.dim && n == o.n && half_length == o.half_length;
  }
};

// Samples on the grid, row-major over axes. Real data lives in the real part.
struct GridFunction {
  Grid grid;
  Vec values;

  VecR real() const { return values.real(); }
};

Grid make_grid(int dim, int n, double half_length);

cd integrate(const GridFunction& f);

// g_eps = eps^{-d/2} exp(-pi|x|^2/eps), periodized over neighbor boxes.
GridFunction gaussian_kernel(const Grid& grid, double eps);

enum class ConvMode { periodic, zero_padded };

GridFunction convolve(const GridFunction& f, const GridFunction& g,
                      ConvMode mode = ConvMode::periodic);

// Zero-padded convolution of a density against a radial kernel sampled on the
// doubled difference grid; kernel(r2) is evaluated at squared distances.
// Returns (K * rho)(x_i) = sum_j K(x_i - x_j) rho_j dx^d without wrap error.
VecR convolve_kernel(const Grid& grid, const VecR& rho,
                     const std::function<double(double)>& kernel_r2);

// Spectral derivative along an axis (periodic, exact for band-limited input).
GridFunction spectral_derivative(const GridFunction& f, int axis);

} // namespace sclab
