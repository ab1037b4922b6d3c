#include "sclab/operators.hpp"

#include <cmath>
#include <iostream>

#include "sclab/fft.hpp"

namespace sclab {

double Potential::eval_r2(double r2) const {
  auto p = [&](size_t i, double dflt) { return i < parameters.size() ? parameters[i] : dflt; };
  double v = 0;
  switch (kind) {
    case Kind::harmonic: v = r2; break;
    case Kind::shifted_harmonic: v = r2 - p(0, 1.0); break;
    case Kind::double_well: {
      double t = r2 - p(0, 2.0);
      v = 0.5 * t * t - p(1, 1.0);
      break;
    }
    case Kind::gaussian_well: {
      double w = p(1, 1.0);
      v = -p(0, 2.0) * std::exp(-r2 / (w * w));
      break;
    }
    case Kind::tabulated:
      throw std::logic_error("Potential: tabulated kind has no radial form");
  }
  return v + chemical_shift;
}

VecR Potential::sample(const Grid& grid) const {
  if (kind == Kind::tabulated) {
    if (!(table.grid == grid))
      throw std::invalid_argument("Potential: tabulated values on mismatched grid");
    return table.values.real() + VecR::Constant(grid.size(), chemical_shift);
  }
  VecR v(grid.size());
  for (long i = 0; i < grid.size(); ++i) v[i] = eval_r2(grid.radius2(i));
  return v;
}

namespace {

// Dense matrix of a real Fourier-multiplier symbol given on the full d-dim
// frequency lattice: T_{ij} = t_{(i-j) mod n per axis}, t = ifft(symbol).
Mat circulant_from_symbol(const Grid& g, const VecR& symbol) {
  Vec t(g.size());
  for (long i = 0; i < g.size(); ++i) t[i] = symbol[i];
  std::vector<int> dims(g.dim, g.n);
  fft::transform(t.data(), dims, +1);
  Mat T(g.size(), g.size());
  int ia[3], ja[3];
  for (long j = 0; j < g.size(); ++j) {
    g.indices(j, ja);
    for (long i = 0; i < g.size(); ++i) {
      g.indices(i, ia);
      long idx = 0;
      for (int a = 0; a < g.dim; ++a) idx = idx * g.n + ((ia[a] - ja[a]) % g.n + g.n) % g.n;
      T(i, j) = t[idx];
    }
  }
  return T;
}

VecR kinetic_symbol(const Grid& g, double hbar, Scheme scheme) {
  const auto m = fft::frequencies(g.n);
  const double kscale = M_PI / g.half_length;
  VecR s(g.size());
  int ix[3];
  for (long i = 0; i < g.size(); ++i) {
    g.indices(i, ix);
    double acc = 0;
    for (int a = 0; a < g.dim; ++a) {
      const double k = kscale * m[ix[a]];
      if (scheme == Scheme::spectral) {
        acc += k * k;
      } else {
        // 3-point stencil eigenvalue (2 - 2cos(k dx))/dx^2
        const double dx = g.spacing;
        acc += (2 - 2 * std::cos(k * dx)) / (dx * dx);
      }
    }
    s[i] = hbar * hbar * acc;
  }
  return s;
}

} // namespace

HermitianOperator build_hamiltonian(const Grid& grid, const Potential& V, double hbar,
                                    Scheme scheme) {
  if (!(hbar > 0)) throw std::invalid_argument("build_hamiltonian: hbar must be positive");
  VecR v = V.sample(grid);
  if (scheme == Scheme::spectral) {
    const double vminus = std::max(0.0, -v.minCoeff());
    const double nyquist = M_PI * grid.n / (2 * grid.half_length);
    const double k_phys = 3 * std::sqrt(vminus + 1) / hbar;
    if (nyquist < k_phys)
      std::cerr << "[sclab] warning: Nyquist momentum " << nyquist
                << " below resolvability threshold " << k_phys << " (raise n)\n";
  }
  HermitianOperator H;
  H.grid = grid;
  H.hbar = hbar;
  H.matrix = circulant_from_symbol(grid, kinetic_symbol(grid, hbar, scheme));
  H.matrix.diagonal() += v.cast<cd>();
  return H;
}

HermitianOperator position_operator(const Grid& grid, int axis) {
  if (axis < 0 || axis >= grid.dim) throw std::invalid_argument("position_operator: bad axis");
  HermitianOperator X;
  X.grid = grid;
  X.matrix = Mat::Zero(grid.size(), grid.size());
  for (long i = 0; i < grid.size(); ++i) X.matrix(i, i) = grid.coord(i, axis);
  return X;
}

namespace {
VecR momentum_symbol(const Grid& g, double hbar, int axis) {
  const auto m = fft::frequencies(g.n);
  const double kscale = M_PI / g.half_length;
  VecR s(g.size());
  int ix[3];
  for (long i = 0; i < g.size(); ++i) {
    g.indices(i, ix);
    s[i] = (ix[axis] == g.n / 2) ? 0.0 : hbar * kscale * m[ix[axis]];
  }
  return s;
}
} // namespace

HermitianOperator momentum_operator(const Grid& grid, double hbar, int axis) {
  if (!(hbar > 0)) throw std::invalid_argument("momentum_operator: hbar must be positive");
  if (axis < 0 || axis >= grid.dim) throw std::invalid_argument("momentum_operator: bad axis");
  HermitianOperator P;
  P.grid = grid;
  P.hbar = hbar;
  P.matrix = circulant_from_symbol(grid, momentum_symbol(grid, hbar, axis));
  return P;
}

HermitianOperator multiplication_operator(const Grid& grid, const VecR& diag) {
  if (diag.size() != grid.size())
    throw std::invalid_argument("multiplication_operator: size mismatch");
  HermitianOperator A;
  A.grid = grid;
  A.matrix = Mat::Zero(grid.size(), grid.size());
  A.matrix.diagonal() = diag.cast<cd>();
  return A;
}

Mat commutator(const Mat& A, const Mat& B) {
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw std::invalid_argument("commutator: shape mismatch");
  return A * B - B * A;
}

namespace {
Mat apply_symbol(const Grid& grid, const VecR& symbol, const Mat& cols) {
  Mat out = cols;
  std::vector<int> dims(grid.dim, grid.n);
  for (long c = 0; c < out.cols(); ++c) {
    Vec v = out.col(c);
    fft::transform(v.data(), dims, -1);
    for (long i = 0; i < grid.size(); ++i) v[i] *= symbol[i];
    fft::transform(v.data(), dims, +1);
    out.col(c) = v;
  }
  return out;
}
} // namespace

Mat apply_momentum(const Grid& grid, double hbar, int axis, const Mat& cols) {
  return apply_symbol(grid, momentum_symbol(grid, hbar, axis), cols);
}

Mat apply_one_plus_p2(const Grid& grid, double hbar, const Mat& cols) {
  VecR s = VecR::Ones(grid.size());
  for (int a = 0; a < grid.dim; ++a) {
    VecR p = momentum_symbol(grid, hbar, a);
    s += p.cwiseProduct(p);
  }
  return apply_symbol(grid, s, cols);
}

} // namespace sclab
