#include "sclab/schatten.hpp"

#include <cmath>

#include "sclab/fft.hpp"

namespace sclab {

VecR singular_values(const Mat& A) {
  // eigenvalues of A^*A; adequate at the tolerances used here
  const bool tall = A.rows() >= A.cols();
  Mat G = tall ? Mat(A.adjoint() * A) : Mat(A * A.adjoint());
  VecR w;
  Mat V;
  eigh_complex(G, w, V);
  VecR s(w.size());
  for (long i = 0; i < w.size(); ++i) s[i] = std::sqrt(std::max(0.0, w[w.size() - 1 - i]));
  return s;
}

double schatten_norm(const Mat& A, double p, double hbar, int dim) {
  if (p < 1) throw std::invalid_argument("schatten_norm: p must be >= 1");
  const VecR s = singular_values(A);
  if (std::isinf(p)) return s.size() ? s[0] : 0.0;
  if (p == 2.0) { // Frobenius shortcut, exact
    return std::pow(std::pow(2 * M_PI * hbar, dim) * A.squaredNorm(), 0.5);
  }
  double acc = 0;
  for (long i = 0; i < s.size(); ++i) acc += std::pow(s[i], p);
  return std::pow(std::pow(2 * M_PI * hbar, dim) * acc, 1.0 / p);
}

ShiftVector snap_shift(const Grid& grid, double hbar, const ShiftVector& z) {
  ShiftVector out = z;
  const double dxi = M_PI * hbar / grid.half_length;
  for (int a = 0; a < out.x_part.size(); ++a) {
    if (out.x_part[a] != 0.0) {
      long c = std::lround(std::abs(out.x_part[a]) / grid.spacing);
      if (c == 0) c = 1;
      out.x_part[a] = (out.x_part[a] > 0 ? 1 : -1) * double(c) * grid.spacing;
    }
  }
  for (int a = 0; a < out.xi_part.size(); ++a) {
    if (out.xi_part[a] != 0.0) {
      long c = std::lround(std::abs(out.xi_part[a]) / dxi);
      if (c == 0) c = 1;
      out.xi_part[a] = (out.xi_part[a] > 0 ? 1 : -1) * double(c) * dxi;
    }
  }
  return out;
}

namespace {

// per-axis integer cell shifts of a grid-aligned x0
std::vector<int> cell_shifts(const Grid& g, const VecR& x0) {
  std::vector<int> s(g.dim, 0);
  for (int a = 0; a < g.dim && a < x0.size(); ++a) {
    double c = x0[a] / g.spacing;
    int ci = int(std::lround(c));
    if (std::abs(c - ci) > 1e-9)
      throw std::invalid_argument("phase_space_shift: x0 not grid aligned");
    s[a] = ci;
  }
  return s;
}

long shifted_index(const Grid& g, long idx, const std::vector<int>& s) {
  int ix[3];
  g.indices(idx, ix);
  long out = 0;
  for (int a = 0; a < g.dim; ++a) out = out * g.n + (((ix[a] - s[a]) % g.n) + g.n) % g.n;
  return out;
}

Vec phase_vector(const Grid& g, const VecR& xi0, double hbar) {
  Vec ph(g.size());
  for (long i = 0; i < g.size(); ++i) {
    double arg = 0;
    for (int a = 0; a < g.dim && a < xi0.size(); ++a) arg += xi0[a] * g.coord(i, a);
    ph[i] = std::polar(1.0, arg / hbar);
  }
  return ph;
}

} // namespace

Mat shift_unitary(const Grid& grid, const ShiftVector& z, double hbar) {
  const auto s = cell_shifts(grid, z.x_part);
  const Vec ph = phase_vector(grid, z.xi_part, hbar);
  Mat U = Mat::Zero(grid.size(), grid.size());
  for (long i = 0; i < grid.size(); ++i) U(i, shifted_index(grid, i, s)) = ph[i];
  return U;
}

Mat phase_space_shift(const Mat& A, const Grid& grid, const ShiftVector& z, double hbar) {
  const auto s = cell_shifts(grid, z.x_part);
  const Vec ph = phase_vector(grid, z.xi_part, hbar);
  Mat out(A.rows(), A.cols());
  for (long j = 0; j < A.cols(); ++j) {
    const long js = shifted_index(grid, j, s);
    for (long i = 0; i < A.rows(); ++i)
      out(i, j) = ph[i] * A(shifted_index(grid, i, s), js) * std::conj(ph[j]);
  }
  return out;
}

QuantumGradients quantum_gradients(const DensityOperator& gamma) {
  const Grid& g = gamma.grid;
  const double hbar = gamma.hbar;
  QuantumGradients out;
  const cd inv_ih = cd(0, -1.0 / hbar); // 1/(i hbar)
  for (int a = 0; a < g.dim; ++a) {
    Mat dxi(g.size(), g.size());
    for (long j = 0; j < g.size(); ++j)
      for (long i = 0; i < g.size(); ++i)
        dxi(i, j) = inv_ih * (g.coord(i, a) - g.coord(j, a)) * gamma.matrix(i, j);
    out.d_xi.push_back(std::move(dxi));
    Mat pg = apply_momentum(g, hbar, a, gamma.matrix);
    out.d_x.push_back(inv_ih * (pg - pg.adjoint()));
  }
  return out;
}

namespace {

// singular values of a thin block via its small Gram matrix
VecR thin_singular_values(const Mat& C) {
  if (C.size() == 0) return VecR();
  Mat G = C.adjoint() * C;
  VecR w;
  Mat V;
  eigh_complex(G, w, V);
  VecR s(w.size());
  for (long i = 0; i < w.size(); ++i) s[i] = std::sqrt(std::max(0.0, w[w.size() - 1 - i]));
  return s;
}
double thin_opnorm(const Mat& C) {
  VecR s = thin_singular_values(C);
  return s.size() ? s[0] : 0.0;
}
double thin_nuclear(const Mat& C) {
  return thin_singular_values(C).sum();
}

} // namespace

double shift_difference_norm(const Mat& occupied_cols, const Grid& grid, const ShiftVector& z,
                             double hbar, double p) {
  const long n = occupied_cols.rows(), r = occupied_cols.cols();
  const double hd = std::pow(2 * M_PI * hbar, grid.dim);
  if (r == 0) return 0.0;
  // columns of T_z gamma: U applied to each occupied column
  const auto s = cell_shifts(grid, z.x_part);
  const Vec ph = phase_vector(grid, z.xi_part, hbar);
  Mat shifted(n, r);
  for (long i = 0; i < n; ++i) {
    const long is = shifted_index(grid, i, s);
    for (long c = 0; c < r; ++c) shifted(i, c) = ph[i] * occupied_cols(is, c);
  }
  if (p == 2.0) {
    // |T_z gamma - gamma|_F^2 = 2r - 2||W^* C||_F^2 with orthonormal factors
    Mat ov = shifted.adjoint() * occupied_cols;
    double fro2 = 2.0 * r - 2.0 * ov.squaredNorm();
    return std::sqrt(hd * std::max(0.0, fro2));
  }
  // T_z gamma - gamma = W D W^* with W = [shifted, cols], D = diag(I, -I)
  Mat W(n, 2 * r);
  W.leftCols(r) = shifted;
  W.rightCols(r) = occupied_cols;
  Eigen::HouseholderQR<Mat> qr(W);
  Mat R = qr.matrixQR().topRows(2 * r).triangularView<Eigen::Upper>();
  VecR D(2 * r);
  D.head(r).setConstant(1);
  D.tail(r).setConstant(-1);
  Mat small = R * D.asDiagonal() * R.adjoint();
  VecR w;
  Mat V;
  eigh_complex(small, w, V);
  VecR sv = w.cwiseAbs();
  if (std::isinf(p)) return sv.maxCoeff();
  double acc = 0;
  for (long i = 0; i < sv.size(); ++i) acc += std::pow(sv[i], p);
  return std::pow(hd * acc, 1.0 / p);
}

double besov_seminorm(const DensityOperator& gamma, double p, double s,
                      const std::vector<ShiftVector>& samples) {
  if (samples.empty()) throw std::invalid_argument("besov_seminorm: empty sample set");
  // factor gamma once; low rank is the common case (projectors)
  VecR w;
  Mat V;
  eigh_complex(gamma.matrix, w, V);
  std::vector<int> keep;
  for (int j = 0; j < w.size(); ++j)
    if (std::abs(w[j]) > 1e-12) keep.push_back(j);
  Mat cols(gamma.matrix.rows(), keep.size());
  for (size_t c = 0; c < keep.size(); ++c)
    cols.col(c) = V.col(keep[c]) * std::sqrt(std::abs(w[keep[c]]));
  // exact for projectors and PSD gamma; adequate for the audited operators
  double best = 0;
  for (const auto& z : samples) {
    if (z.norm() == 0) throw std::invalid_argument("besov_seminorm: zero shift");
    double nrm = shift_difference_norm(cols, gamma.grid, z, gamma.hbar, p);
    best = std::max(best, nrm / std::pow(z.norm(), s));
  }
  return best;
}

const char* bound_kind_name(BoundKind k) {
  switch (k) {
    case BoundKind::hs: return "hs";
    case BoundKind::trace_first: return "trace_first";
    case BoundKind::trace_second: return "trace_second";
    case BoundKind::weighted_hs: return "weighted_hs";
    case BoundKind::appendix_hs: return "appendix_hs";
  }
  return "?";
}

BoundAudit commutator_bound_audit(const SpectralDecomposition& dec, const DensityOperator& gamma,
                                  const Mat& A, double lambda, double mu, BoundKind which) {
  if (!(lambda > 0)) throw std::invalid_argument("commutator_bound_audit: lambda must be > 0");
  const Grid& g = dec.op.grid;
  const double hbar = gamma.hbar;
  const VecR& w = dec.eigenvalues;
  const Mat& V = dec.eigenvectors;
  const long n = V.rows();
  const double tol = dec.eps_eig();

  std::vector<int> O, Wl, hi, notO;
  for (int j = 0; j < w.size(); ++j) {
    if (w[j] <= tol) {
      O.push_back(j);
    } else {
      notO.push_back(j);
      if (w[j] < lambda) Wl.push_back(j);
      else hi.push_back(j);
    }
  }
  BoundAudit audit;
  audit.name = bound_kind_name(which);
  audit.lambda = lambda;
  audit.mu = mu;
  if (O.empty()) return audit;
  const long r = long(O.size());

  Mat Vo(n, r);
  VecR wO(r);
  for (long c = 0; c < r; ++c) {
    Vo.col(c) = V.col(O[c]);
    wO[c] = w[O[c]];
  }
  double rs = 0; // sum over occupied of (lambda - w_j)^{-2}
  for (long c = 0; c < r; ++c) rs += std::pow(lambda - wO[c], -2.0);

  // columns O of an operator in the eigenbasis
  auto to_eigenbasis = [&](const Mat& applied_cols) { return Mat(V.adjoint() * applied_cols); };
  auto rows_of = [&](const Mat& full, const std::vector<int>& sel) {
    Mat out(sel.size(), full.cols());
    for (size_t k = 0; k < sel.size(); ++k) out.row(k) = full.row(sel[k]);
    return out;
  };

  const Mat AVo = A * Vo;
  const Mat AhVo = A.adjoint() * Vo;
  const Mat At_cols = to_eigenbasis(AVo);   // (V^* A V)_{:,O}
  const Mat Aht_cols = to_eigenbasis(AhVo); // (V^* A^* V)_{:,O}

  auto gap_scaled = [&](const Mat& cols, const std::vector<int>& sel,
                        const std::function<double(double, double)>& fac) {
    Mat out(sel.size(), cols.cols());
    for (size_t k = 0; k < sel.size(); ++k)
      for (long c = 0; c < cols.cols(); ++c)
        out(k, c) = cols(sel[k], c) * fac(w[sel[k]], wO[c]);
    return out;
  };

  if (which == BoundKind::hs) {
    for (const Mat* Bc : {&At_cols, &Aht_cols}) {
      audit.lhs += rows_of(*Bc, notO).squaredNorm();
      audit.rhs += rows_of(*Bc, Wl).squaredNorm();
      Mat C = gap_scaled(*Bc, hi, [](double wk, double wj) { return wj - wk; });
      audit.rhs += thin_opnorm(C) * thin_opnorm(C) * rs;
    }
  } else if (which == BoundKind::trace_first || which == BoundKind::trace_second) {
    if (which == BoundKind::trace_second && !(w.minCoeff() + mu > 0))
      throw std::invalid_argument("commutator_bound_audit: mu too small for trace_second");
    for (const Mat* Bc : {&At_cols, &Aht_cols}) {
      audit.lhs += thin_nuclear(rows_of(*Bc, notO));
      audit.rhs += thin_nuclear(rows_of(*Bc, Wl));
      if (which == BoundKind::trace_first) {
        Mat C = gap_scaled(*Bc, hi,
                           [](double wk, double wj) { return (wj - wk) * (wj - wk); });
        audit.rhs += thin_opnorm(C) * rs;
      } else {
        Mat C = gap_scaled(*Bc, hi, [&](double wk, double wj) {
          return (wj - wk) * (std::sqrt(wj + mu) - std::sqrt(wk + mu));
        });
        audit.rhs += 2 * std::sqrt(lambda + mu) * thin_opnorm(C) * rs;
      }
    }
  } else if (which == BoundKind::appendix_hs) {
    double B = 0, D2 = 0;
    for (const Mat* Bc : {&At_cols, &Aht_cols}) {
      audit.lhs += rows_of(*Bc, notO).squaredNorm();
      Mat C = gap_scaled(*Bc, hi,
                         [&](double wk, double wj) { return (wk - wj) / (wk - lambda); });
      B += C.norm();
      D2 += rows_of(*Bc, Wl).squaredNorm();
    }
    const double D = std::sqrt(D2);
    audit.rhs = std::pow((B + std::sqrt(B * B + 4 * D * D)) / 2.0, 2.0);
  } else { // weighted_hs, m = 1 + |p|^2, requires normal A
    auto apply_m = [&](const Mat& cols) { return apply_one_plus_p2(g, hbar, cols); };
    VecR dinv(r);
    for (long c = 0; c < r; ++c) dinv[c] = 1.0 / (lambda - wO[c]);

    const Mat mVo = apply_m(Vo);
    const Mat mAhVo = apply_m(AhVo);
    // lhs = Re Tr(|[A,gamma]|^2 m) via the rank-2r factorization of [A,gamma]
    {
      Mat QmQ = Vo.adjoint() * mVo;
      Mat QmS = Vo.adjoint() * mAhVo;
      Mat SmQ = AhVo.adjoint() * mVo;
      Mat SmS = AhVo.adjoint() * mAhVo;
      Mat PtP = AVo.adjoint() * AVo;
      Mat RtP = Vo.adjoint() * AVo;
      Mat PtR = AVo.adjoint() * Vo;
      audit.lhs = ((QmQ * PtP).trace() - (QmS * RtP).trace() - (SmQ * PtR).trace() +
                   SmS.trace())
                      .real();
    }
    // resolvent-weighted Hilbert-Schmidt pair terms; the second factor of each
    // Cauchy-Schwarz product carries the adjoint of the right-hand operator
    struct Pair { Mat b, c; };
    const Mat AAVo = A.adjoint() * AVo; // |A|^2 applied to V_O
    std::vector<Pair> pairs;
    pairs.push_back({to_eigenbasis(AhVo), to_eigenbasis(mAhVo)});
    pairs.push_back({to_eigenbasis(mAhVo), to_eigenbasis(AhVo)});
    pairs.push_back({Mat(-to_eigenbasis(mVo)), to_eigenbasis(AAVo)});
    for (const auto& pr : pairs) {
      auto scaled = [&](const Mat& cols) {
        Mat out(hi.size(), cols.cols());
        for (size_t k = 0; k < hi.size(); ++k)
          for (long c = 0; c < cols.cols(); ++c)
            out(k, c) = cols(hi[k], c) * (wO[c] - w[hi[k]]) * dinv[c];
        return out;
      };
      audit.rhs += scaled(pr.b).norm() * scaled(pr.c).norm();
    }
    // window trace and commutator-with-weight trace
    Mat Vw(n, Wl.size());
    for (size_t c = 0; c < Wl.size(); ++c) Vw.col(c) = V.col(Wl[c]);
    if (Vw.cols() > 0) {
      const Mat mVw = apply_m(Vw);
      const Mat AVw = A * Vw;
      const Mat AhVw = A.adjoint() * Vw;
      // Tr(1_W A* gamma A m)
      double t1 = ((Vw.adjoint() * AhVo) * (AhVo.adjoint() * mVw)).trace().real();
      // Tr(1_W m A* gamma A)
      double t2 = ((mVw.adjoint() * AhVo) * (AhVo.adjoint() * Vw)).trace().real();
      // Tr(1_W m gamma |A|^2)
      double t3 = ((mVw.adjoint() * Vo) * (AVo.adjoint() * AVw)).trace().real();
      audit.rhs += t1 + t2 - t3;
    }
    // Re Tr([A*, m] gamma A)
    const Mat AhmVo = A.adjoint() * mVo;
    double t4 = ((AhVo.adjoint() * AhmVo).trace() - (AhVo.adjoint() * mAhVo).trace()).real();
    audit.rhs += t4;
  }
  audit.margin = audit.rhs - audit.lhs;
  return audit;
}

FracCommRecord fractional_commutator(const SpectralDecomposition& dec, const GridFunction& phi,
                                     double mu, double hbar) {
  const Grid& g = dec.op.grid;
  const VecR& w = dec.eigenvalues;
  if (!(w.minCoeff() + mu > 0))
    throw std::invalid_argument("fractional_commutator: mu must exceed ||V_-||_inf");
  const Mat& V = dec.eigenvectors;
  const long n = V.rows();
  const auto O = dec.below(0.0);
  FracCommRecord rec;
  if (O.empty()) return rec;
  Mat Vo(n, O.size());
  for (size_t c = 0; c < O.size(); ++c) Vo.col(c) = V.col(O[c]);
  // phi in the eigenbasis, columns O only
  Mat phiVo = phi.values.asDiagonal() * Vo;
  Mat pt = V.adjoint() * phiVo;
  // block (1-gamma)[sqrt(H+mu), phi] gamma: entries (s_k - s_j) phi_kj, k not in O
  std::vector<char> inO(w.size(), 0);
  for (int j : O) inO[j] = 1;
  std::vector<int> notO;
  for (int j = 0; j < w.size(); ++j)
    if (!inO[j]) notO.push_back(j);
  Mat block(notO.size(), O.size());
  for (size_t k = 0; k < notO.size(); ++k)
    for (size_t c = 0; c < O.size(); ++c)
      block(k, c) = (std::sqrt(w[notO[k]] + mu) - std::sqrt(w[O[c]] + mu)) * pt(notO[k], c);
  rec.lhs = thin_opnorm(block);
  // rhs = 2 hbar (||grad(phi) gamma|| + mu^{-1/2} || grad(phi).p gamma ||);
  // the vector operator grad(phi) gamma is stacked across axes
  Mat gphi_g(g.dim * n, O.size());
  Mat gphi_pg = Mat::Zero(n, O.size());
  for (int a = 0; a < g.dim; ++a) {
    GridFunction dphi = spectral_derivative(phi, a);
    gphi_g.middleRows(a * n, n) = dphi.values.asDiagonal() * Vo;
    Mat pVo = apply_momentum(g, hbar, a, Vo);
    gphi_pg += dphi.values.asDiagonal() * pVo;
  }
  double n1 = thin_opnorm(gphi_g);
  double n2 = thin_opnorm(gphi_pg);
  rec.rhs = 2 * hbar * (n1 + n2 / std::sqrt(mu));
  return rec;
}

} // namespace sclab
