#include "sclab/grid.hpp"

#include <cmath>
#include <iostream>

#include "sclab/fft.hpp"

namespace sclab {

Grid make_grid(int dim, int n, double half_length) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("make_grid: dim must be 1, 2 or 3");
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("make_grid: n must be even and >= 4");
  if (!(half_length > 0)) throw std::invalid_argument("make_grid: half_length must be positive");
  Grid g;
  g.dim = dim;
  g.n = n;
  g.half_length = half_length;
  g.spacing = 2.0 * half_length / n;
  return g;
}

cd integrate(const GridFunction& f) { return f.values.sum() * f.grid.cell(); }

GridFunction gaussian_kernel(const Grid& grid, double eps) {
  if (!(eps > 0)) throw std::invalid_argument("gaussian_kernel: eps must be positive");
  const double w = std::sqrt(eps);
  if (w < 2 * grid.spacing || w > grid.half_length / 4)
    std::cerr << "[sclab] warning: gaussian_kernel scale sqrt(eps)=" << w
              << " poorly matched to grid (dx=" << grid.spacing
              << ", L=" << grid.half_length << ")\n";
  GridFunction out;
  out.grid = grid;
  out.values = Vec::Zero(grid.size());
  const double L = grid.half_length;
  const double norm = std::pow(eps, -grid.dim / 2.0);
  int ix[3];
  for (long idx = 0; idx < grid.size(); ++idx) {
    grid.indices(idx, ix);
    double v = 1.0;
    for (int a = 0; a < grid.dim; ++a) {
      const double x = grid.axis_coord(ix[a]);
      double s = 0;
      for (int wrap = -2; wrap <= 2; ++wrap) {
        const double y = x + wrap * 2 * L;
        s += std::exp(-M_PI * y * y / eps);
      }
      v *= s;
    }
    out.values[idx] = norm * v;
  }
  return out;
}

namespace {
std::vector<int> dims_of(const Grid& g, int scale) {
  return std::vector<int>(g.dim, g.n * scale);
}
} // namespace

GridFunction convolve(const GridFunction& f, const GridFunction& g, ConvMode mode) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("convolve: grid mismatch");
  const Grid& gr = f.grid;
  GridFunction out;
  out.grid = gr;
  if (mode == ConvMode::periodic) {
    Vec F = f.values, G = g.values;
    fft::transform(F.data(), dims_of(gr, 1), -1);
    fft::transform(G.data(), dims_of(gr, 1), -1);
    F = F.cwiseProduct(G);
    fft::transform(F.data(), dims_of(gr, 1), +1);
    // both inputs are indexed from x = -L, so index sums carry a +n/2 offset
    // per axis relative to the -L origin; undo it on readback
    out.values = Vec::Zero(gr.size());
    int ix[3];
    for (long idx = 0; idx < gr.size(); ++idx) {
      gr.indices(idx, ix);
      long sidx = 0;
      for (int a = 0; a < gr.dim; ++a) sidx = sidx * gr.n + ((ix[a] + gr.n / 2) % gr.n);
      out.values[idx] = F[sidx] * gr.cell();
    }
    return out;
  }
  // zero-padded: embed both factors in a (2n)^d box, convolve periodically
  // there, read back the [0, n)^d corner shifted so that the kernel origin
  // (x = 0, i.e. index 0 after ifftshift convention below) maps correctly.
  const int n = gr.n, d = gr.dim;
  auto embed = [&](const Vec& v) {
    std::vector<int> bd = dims_of(gr, 2);
    long total = 1;
    for (int s : bd) total *= s;
    Vec big_v = Vec::Zero(total);
    int ix[3];
    for (long idx = 0; idx < gr.size(); ++idx) {
      gr.indices(idx, ix);
      long bidx = 0;
      for (int a = 0; a < d; ++a) bidx = bidx * (2 * n) + ix[a];
      big_v[bidx] = v[idx];
    }
    return big_v;
  };
  Vec F = embed(f.values), G = embed(g.values);
  std::vector<int> bd = dims_of(gr, 2);
  fft::transform(F.data(), bd, -1);
  fft::transform(G.data(), bd, -1);
  F = F.cwiseProduct(G);
  fft::transform(F.data(), bd, +1);
  long total = 1;
  for (int s : bd) total *= s;
  // both inputs indexed from x=-L: (f*g)(x) lands at index sum shifted by +n/2
  // per axis relative to the -L origin; undo that shift on readback.
  out.values = Vec::Zero(gr.size());
  int ix[3];
  for (long idx = 0; idx < gr.size(); ++idx) {
    gr.indices(idx, ix);
    long bidx = 0;
    for (int a = 0; a < d; ++a) bidx = bidx * (2 * n) + ((ix[a] + n / 2) % (2 * n));
    out.values[idx] = F[bidx] * gr.cell();
  }
  return out;
}

VecR convolve_kernel(const Grid& grid, const VecR& rho,
                     const std::function<double(double)>& kernel_r2) {
  const int n = grid.n, d = grid.dim;
  const double dx = grid.spacing;
  std::vector<int> bd(d, 2 * n);
  long total = 1;
  for (int s : bd) total *= s;
  // kernel sampled on the difference lattice, origin at index 0 per axis
  Vec K = Vec::Zero(total);
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    double r2 = 0;
    for (int a = d - 1; a >= 0; --a) {
      int j = int(rem % (2 * n));
      rem /= 2 * n;
      int js = j < n ? j : j - 2 * n; // symmetric representative
      double dxa = js * dx;
      r2 += dxa * dxa;
    }
    K[idx] = kernel_r2(r2);
  }
  Vec R = Vec::Zero(total);
  int gx[3];
  for (long idx = 0; idx < grid.size(); ++idx) {
    grid.indices(idx, gx);
    long bidx = 0;
    for (int a = 0; a < d; ++a) bidx = bidx * (2 * n) + gx[a];
    R[bidx] = rho[idx];
  }
  fft::transform(K.data(), bd, -1);
  fft::transform(R.data(), bd, -1);
  K = K.cwiseProduct(R);
  fft::transform(K.data(), bd, +1);
  VecR out(grid.size());
  for (long idx = 0; idx < grid.size(); ++idx) {
    grid.indices(idx, gx);
    long bidx = 0;
    for (int a = 0; a < d; ++a) bidx = bidx * (2 * n) + gx[a];
    out[idx] = K[bidx].real() * grid.cell();
  }
  return out;
}

GridFunction spectral_derivative(const GridFunction& f, int axis) {
  const Grid& g = f.grid;
  if (axis < 0 || axis >= g.dim) throw std::invalid_argument("spectral_derivative: bad axis");
  Vec F = f.values;
  fft::transform(F.data(), dims_of(g, 1), -1);
  const auto m = fft::frequencies(g.n);
  const double scale = M_PI / g.half_length;
  int ix[3];
  for (long idx = 0; idx < g.size(); ++idx) {
    g.indices(idx, ix);
    double k = scale * m[ix[axis]];
    if (ix[axis] == g.n / 2) k = 0; // drop the unmatched Nyquist mode
    F[idx] *= cd(0, k);
  }
  fft::transform(F.data(), dims_of(g, 1), +1);
  GridFunction out;
  out.grid = g;
  out.values = std::move(F);
  return out;
}

} // namespace sclab
