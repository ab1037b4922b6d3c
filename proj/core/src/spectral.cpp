#include "sclab/spectral.hpp"

#include <algorithm>
#include <cmath>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "sclab/fft.hpp"

namespace sclab {

double SpectralDecomposition::eps_eig() const {
  const double scale = eigenvalues.size()
                           ? std::max(std::abs(eigenvalues[0]),
                                      std::abs(eigenvalues[eigenvalues.size() - 1]))
                           : 0.0;
  return 1e-10 * std::max(1.0, scale);
}

std::vector<int> SpectralDecomposition::below(double threshold) const {
  std::vector<int> idx;
  const double tol = eps_eig();
  for (int j = 0; j < eigenvalues.size(); ++j)
    if (eigenvalues[j] <= threshold + tol) idx.push_back(j);
  return idx;
}

void eigh_real(const MatR& A, VecR& w, MatR& V) {
  const int n = int(A.rows());
  V = A;
  w.resize(n);
  int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, V.data(), n, w.data());
  if (info != 0) throw std::runtime_error("dsyevd failed, info=" + std::to_string(info));
}

void eigh_complex(const Mat& A, VecR& w, Mat& V) {
  const int n = int(A.rows());
  V = A;
  w.resize(n);
  int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, V.data(), n, w.data());
  if (info != 0) throw std::runtime_error("zheevd failed, info=" + std::to_string(info));
}

SpectralDecomposition diagonalize(const HermitianOperator& H) {
  const Mat& A = H.matrix;
  const double scale = A.cwiseAbs().maxCoeff();
  if ((A - A.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale))
    throw std::invalid_argument("diagonalize: input is not Hermitian");
  SpectralDecomposition dec;
  dec.op = H;
  const double im = A.imag().cwiseAbs().maxCoeff();
  if (im <= 1e-13 * std::max(1.0, scale)) {
    MatR V;
    eigh_real(A.real(), dec.eigenvalues, V);
    dec.eigenvectors = V.cast<cd>();
    dec.real_vectors = true;
  } else {
    eigh_complex(A, dec.eigenvalues, dec.eigenvectors);
    dec.real_vectors = false;
  }
  return dec;
}

DensityOperator spectral_projector(const SpectralDecomposition& dec, double a, double b,
                                   double hbar) {
  if (a > b) throw std::invalid_argument("spectral_projector: need a <= b");
  const double tol = dec.eps_eig();
  std::vector<int> sel;
  for (int j = 0; j < dec.eigenvalues.size(); ++j)
    if (dec.eigenvalues[j] >= a - tol && dec.eigenvalues[j] <= b + tol) sel.push_back(j);
  DensityOperator P;
  P.grid = dec.op.grid;
  P.hbar = hbar;
  P.tag = DensityOperator::Tag::projector;
  const long n = dec.eigenvectors.rows();
  if (sel.empty()) {
    P.matrix = Mat::Zero(n, n);
    return P;
  }
  Mat cols(n, sel.size());
  for (size_t c = 0; c < sel.size(); ++c) cols.col(c) = dec.eigenvectors.col(sel[c]);
  P.matrix = cols * cols.adjoint();
  return P;
}

VecR density_of(const DensityOperator& gamma) {
  const double hd = std::pow(2 * M_PI * gamma.hbar, gamma.grid.dim);
  return gamma.matrix.diagonal().real() * (hd / gamma.grid.cell());
}

double unit_ball_volume(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return M_PI;
    case 3: return 4.0 * M_PI / 3.0;
    default: throw std::invalid_argument("unit_ball_volume: d must be 1..3");
  }
}

WeylAuditRecord weyl_audit(const Grid& grid, const Potential& V, double hbar, double E,
                           const SpectralDecomposition* precomputed) {
  WeylAuditRecord rec;
  SpectralDecomposition local;
  const SpectralDecomposition* dec = precomputed;
  if (!dec) {
    local = diagonalize(build_hamiltonian(grid, V, hbar));
    dec = &local;
  }
  rec.quantum = std::pow(2 * M_PI * hbar, grid.dim) * double(dec->below(E).size());
  // classical side: exact in xi, refined lattice quadrature in x
  const double wd = unit_ball_volume(grid.dim);
  const int refine = V.kind == Potential::Kind::tabulated
                         ? 1
                         : (grid.dim == 1 ? 64 : (grid.dim == 2 ? 8 : 2));
  const int N = grid.n * refine;
  const double dx = 2 * grid.half_length / N;
  double cl = 0;
  if (V.kind == Potential::Kind::tabulated) {
    VecR v = V.sample(grid);
    for (long i = 0; i < grid.size(); ++i)
      cl += std::pow(std::max(0.0, E - v[i]), grid.dim / 2.0);
    cl *= grid.cell();
  } else {
    long total = 1;
    for (int a = 0; a < grid.dim; ++a) total *= N;
    for (long idx = 0; idx < total; ++idx) {
      long rem = idx;
      double r2 = 0;
      for (int a = 0; a < grid.dim; ++a) {
        int j = int(rem % N);
        rem /= N;
        double x = -grid.half_length + j * dx;
        r2 += x * x;
      }
      cl += std::pow(std::max(0.0, E - V.eval_r2(r2)), grid.dim / 2.0);
    }
    cl *= std::pow(dx, grid.dim);
  }
  rec.classical = wd * cl;
  rec.error = std::abs(rec.quantum - rec.classical);
  return rec;
}

LocalCountRecord local_count_audit(const SpectralDecomposition& dec, double a, double b,
                                   double hbar) {
  if (a > b) throw std::invalid_argument("local_count_audit: need a <= b");
  const double tol = dec.eps_eig();
  int count = 0;
  for (int j = 0; j < dec.eigenvalues.size(); ++j)
    if (dec.eigenvalues[j] >= a - tol && dec.eigenvalues[j] <= b + tol) ++count;
  LocalCountRecord rec;
  rec.count_scaled = std::pow(2 * M_PI * hbar, dec.op.grid.dim) * count;
  rec.budget = std::abs(b - a) + hbar;
  rec.ratio = rec.count_scaled / rec.budget;
  return rec;
}

ResolventRecord resolvent_audit(const SpectralDecomposition& dec, double lambda, double hbar,
                                int order) {
  if (lambda < hbar)
    throw std::invalid_argument("resolvent_audit: lambda below hbar is outside the regime");
  if (order != 1 && order != 2) throw std::invalid_argument("resolvent_audit: order must be 1 or 2");
  ResolventRecord rec;
  double s = 0;
  for (int j : dec.below(0.0)) s += std::pow(lambda - dec.eigenvalues[j], -double(order));
  rec.value = std::pow(2 * M_PI * hbar, dec.op.grid.dim) * s;
  rec.normalized = order == 2 ? lambda * rec.value
                              : rec.value / (1 + std::log(1 + 1 / lambda));
  return rec;
}

VecR sublevel_distance(const Grid& grid, const VecR& V, double a) {
  std::vector<long> inside;
  for (long i = 0; i < grid.size(); ++i)
    if (V[i] <= a) inside.push_back(i);
  if (inside.empty()) throw std::runtime_error("sublevel_distance: empty sublevel set");
  VecR d(grid.size());
  int ix[3], jx[3];
  for (long i = 0; i < grid.size(); ++i) {
    grid.indices(i, ix);
    double best = std::numeric_limits<double>::infinity();
    for (long j : inside) {
      grid.indices(j, jx);
      double r2 = 0;
      for (int a2 = 0; a2 < grid.dim; ++a2) {
        double t = (ix[a2] - jx[a2]) * grid.spacing;
        r2 += t * t;
      }
      best = std::min(best, r2);
    }
    d[i] = std::sqrt(best);
  }
  return d;
}

AgmonRecord agmon_audit(const SpectralDecomposition& dec, const DensityOperator& gamma,
                        const Potential& V) {
  const Grid& g = dec.op.grid;
  const double hbar = gamma.hbar;
  const VecR v = V.sample(g);
  const VecR d1 = sublevel_distance(g, v, 1.0);
  const VecR rho = density_of(gamma);
  AgmonRecord rec;
  double vminus_int = 0;
  for (long i = 0; i < g.size(); ++i) vminus_int += rho[i] * std::max(0.0, -v[i]);
  vminus_int *= g.cell();
  // Cells where the density sits below the eigensolver noise floor carry no
  // information: the true tail e^{-2S(x)/hbar} underflows double precision
  // long before the weight e^{d1/2hbar} saturates, so counting them would
  // audit rounding noise instead of the estimate.
  const double floor_rho = 1e-20 * rho.maxCoeff();
  for (long i = 0; i < g.size(); ++i) {
    if (d1[i] >= 1.0 && rho[i] > floor_rho)
      rec.weighted_mass += std::exp(d1[i] / (2 * hbar)) * rho[i];
  }
  rec.weighted_mass *= g.cell();
  rec.budget = (4.0 / 3.0) * std::exp(-1.0 / (2 * hbar)) * vminus_int;
  // gradient density h^d sum_j |hbar grad psi_j|^2 over occupied states
  const auto occ = dec.below(0.0);
  VecR rho_grad = VecR::Zero(g.size());
  for (int j : occ) {
    for (int axis = 0; axis < g.dim; ++axis) {
      GridFunction psi{g, dec.eigenvectors.col(j)};
      GridFunction dpsi = spectral_derivative(psi, axis);
      rho_grad += hbar * hbar * dpsi.values.cwiseAbs2();
    }
  }
  rho_grad *= std::pow(2 * M_PI * hbar, g.dim) / g.cell();
  const double floor_grad = 1e-20 * rho_grad.maxCoeff();
  for (long i = 0; i < g.size(); ++i) {
    if (d1[i] >= 1.0 && rho_grad[i] > floor_grad)
      rec.gradient_weighted_mass += std::exp(d1[i] / (2 * hbar)) * rho_grad[i];
  }
  rec.gradient_weighted_mass *= g.cell();
  rec.gradient_budget = std::exp(1.0 - 1.0 / (2 * hbar)) * vminus_int;
  return rec;
}

SpectralIneqRecord spectral_inequality_audit(const SpectralDecomposition& dec,
                                             const DensityOperator& gamma, const Potential& V,
                                             double hbar) {
  const Grid& g = dec.op.grid;
  const VecR v = V.sample(g);
  const VecR rho = density_of(gamma);
  SpectralIneqRecord rec;
  const auto occ = dec.below(0.0);
  const double hd = std::pow(2 * M_PI * hbar, g.dim);
  if (!occ.empty()) {
    Mat cols(g.size(), occ.size());
    for (size_t c = 0; c < occ.size(); ++c) cols.col(c) = dec.eigenvectors.col(occ[c]);
    for (int axis = 0; axis < g.dim; ++axis) {
      Mat pc = apply_momentum(g, hbar, axis, cols);
      rec.lt_lhs += hd * pc.squaredNorm();
    }
    // ||V gamma||_op = largest singular value of diag(V) * occupied columns
    Mat vg = v.cast<cd>().asDiagonal() * cols;
    Eigen::JacobiSVD<Mat> svd(vg);
    rec.linf_ratio = svd.singularValues()[0];
  }
  double vm_rho = 0, vm_pow = 0, vminf = 0;
  for (long i = 0; i < g.size(); ++i) {
    const double vm = std::max(0.0, -v[i]);
    vm_rho += rho[i] * vm;
    vm_pow += std::pow(vm, g.dim / 2.0);
    vminf = std::max(vminf, vm);
  }
  rec.lt_rhs = vm_rho * g.cell();
  rec.clr_lhs = rho.sum() * g.cell();
  rec.clr_rhs = vm_pow * g.cell();
  rec.linf_ratio = rho.maxCoeff() / (1 + vminf + rec.linf_ratio);
  return rec;
}

VariationalRecord variational_identity_audit(const HermitianOperator& H,
                                             const DensityOperator& P) {
  SpectralDecomposition dp;
  {
    HermitianOperator tmp{H.grid, P.matrix, P.hbar};
    dp = diagonalize(tmp);
  }
  if (dp.eigenvalues.minCoeff() < -1e-10 || dp.eigenvalues.maxCoeff() > 1 + 1e-10)
    throw std::invalid_argument("variational_identity_audit: P outside [0,1]");
  SpectralDecomposition dec = diagonalize(H);
  const long n = H.matrix.rows();
  Mat gamma = Mat::Zero(n, n);
  {
    const auto occ = dec.below(0.0);
    if (!occ.empty()) {
      Mat cols(n, occ.size());
      for (size_t c = 0; c < occ.size(); ++c) cols.col(c) = dec.eigenvectors.col(occ[c]);
      gamma = cols * cols.adjoint();
    }
  }
  Mat diff = P.matrix - gamma;
  VariationalRecord rec;
  rec.lhs = (H.matrix * diff).trace().real();
  Mat absH = dec.eigenvectors * dec.eigenvalues.cwiseAbs().asDiagonal().toDenseMatrix().cast<cd>() *
             dec.eigenvectors.adjoint();
  Mat P1P = P.matrix - P.matrix * P.matrix;
  rec.rhs = (absH * diff * diff).trace().real() + (absH * P1P).trace().real();
  rec.residual = std::abs(rec.lhs - rec.rhs);
  return rec;
}

} // namespace sclab
