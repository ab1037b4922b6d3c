#include "sclab/meanfield.hpp"

#include <cmath>
#include <iostream>

#include "sclab/fft.hpp"
#include "sclab/phasespace.hpp"
#include "sclab/schatten.hpp"

namespace sclab {

double InteractionKernel::min_fourier_coefficient(const Grid& grid) const {
  const int n = grid.n, d = grid.dim;
  std::vector<int> bd(d, 2 * n);
  long total = 1;
  for (int s : bd) total *= s;
  Vec K(total);
  for (long idx = 0; idx < total; ++idx) {
    long rem = idx;
    double r2 = 0;
    for (int a = d - 1; a >= 0; --a) {
      int j = int(rem % (2 * n));
      rem /= 2 * n;
      int js = j < n ? j : j - 2 * n;
      r2 += js * js * grid.spacing * grid.spacing;
    }
    K[idx] = eval_r2(r2);
  }
  fft::transform(K.data(), bd, -1);
  double mn = 1e300;
  for (long i = 0; i < total; ++i) mn = std::min(mn, K[i].real());
  return mn * grid.cell();
}

namespace {
VecR tf_map(const Grid& grid, const VecR& W, double wd) {
  VecR out(W.size());
  for (long i = 0; i < W.size(); ++i)
    out[i] = wd * std::pow(std::max(0.0, -W[i]), grid.dim / 2.0);
  return out;
}
} // namespace

TFSolution thomas_fermi_solve(const Grid& grid, const Potential& U, const InteractionKernel& K,
                              double damping, double tol, int max_iter) {
  if (!(damping > 0) || damping > 1)
    throw std::invalid_argument("thomas_fermi_solve: damping must lie in (0, 1]");
  const double wd = unit_ball_volume(grid.dim);
  const VecR u = U.sample(grid);
  auto kern = [&](double r2) { return K.eval_r2(r2); };
  VecR rho = tf_map(grid, u, wd);
  TFSolution sol;
  sol.rho.grid = grid;
  double alpha = damping, best = 1e300;
  for (int it = 0; it < max_iter; ++it) {
    VecR W = u;
    if (K.strength != 0) W += convolve_kernel(grid, rho, kern);
    VecR next = tf_map(grid, W, wd);
    sol.residual = (next - rho).cwiseAbs().maxCoeff();
    sol.iterations = it + 1;
    if (sol.residual < tol) {
      rho = next;
      sol.converged = true;
      break;
    }
    // back off the damping when the defect stops improving
    if (sol.residual > best) alpha = std::max(alpha / 2, 0.005);
    best = std::min(best, sol.residual);
    rho = (1 - alpha) * rho + alpha * next;
  }
  sol.rho.values = rho.cast<cd>();
  return sol;
}

double hartree_energy(const DensityOperator& gamma, const Potential& U,
                      const InteractionKernel& K) {
  const Grid& g = gamma.grid;
  const double hd = std::pow(2 * M_PI * gamma.hbar, g.dim);
  // kinetic + external trace term
  Mat kin = gamma.matrix;
  // apply -hbar^2 Laplacian columnwise via the spectral symbol
  {
    HermitianOperator H0 = build_hamiltonian(g, U, gamma.hbar);
    kin = H0.matrix * gamma.matrix;
  }
  double e = hd * kin.trace().real();
  if (K.strength != 0) {
    VecR rho = density_of(gamma);
    auto kern = [&](double r2) { return K.eval_r2(r2); };
    VecR conv = convolve_kernel(g, rho, kern);
    e += 0.5 * rho.dot(conv) * g.cell();
  }
  return e;
}

HartreeSolution hartree_scf(const Grid& grid, const Potential& U, const InteractionKernel& K,
                            double hbar, double mixing, double tol, int max_iter,
                            const VecR* rho0) {
  if (!(mixing > 0) || mixing > 1)
    throw std::invalid_argument("hartree_scf: mixing must lie in (0, 1]");
  const double wd = unit_ball_volume(grid.dim);
  const double hd = std::pow(2 * M_PI * hbar, grid.dim);
  const VecR u = U.sample(grid);
  auto kern = [&](double r2) { return K.eval_r2(r2); };

  // kinetic matrix built once
  const MatR T = build_hamiltonian(grid, U, hbar).matrix.real() -
                 MatR(u.asDiagonal());

  VecR rho;
  if (rho0) {
    rho = *rho0;
  } else {
    rho = tf_map(grid, u, wd); // TF seed of the bare potential
  }

  HartreeSolution sol;
  sol.gamma.grid = grid;
  sol.gamma.hbar = hbar;
  sol.gamma.tag = DensityOperator::Tag::hartree;
  double alpha = mixing, best_energy = 1e300;
  VecR w;
  MatR V;
  VecR prev_change(2);
  prev_change.setConstant(-1);
  int it = 0;
  bool converged = false;
  VecR rho_new;
  for (it = 0; it < max_iter; ++it) {
    VecR W = u;
    if (K.strength != 0) W += convolve_kernel(grid, rho, kern);
    MatR Hm = T;
    Hm.diagonal() += W;
    eigh_real(Hm, w, V);
    const double scale = std::max(std::abs(w[0]), std::abs(w[w.size() - 1]));
    const double eps = 1e-10 * std::max(1.0, scale);
    int nocc = 0;
    for (long j = 0; j < w.size(); ++j) {
      if (w[j] < -eps) ++nocc;
      else if (std::abs(w[j]) <= eps) sol.degenerate_level = true;
    }
    rho_new = VecR::Zero(grid.size());
    for (int j = 0; j < nocc; ++j) rho_new += V.col(j).cwiseAbs2();
    rho_new *= hd / grid.cell();
    // energy of the candidate projector
    double esum = 0;
    for (int j = 0; j < nocc; ++j) esum += w[j];
    double energy = hd * esum - rho_new.dot(W) * grid.cell() + rho_new.dot(u) * grid.cell();
    if (K.strength != 0) {
      VecR conv = convolve_kernel(grid, rho_new, kern);
      energy += 0.5 * rho_new.dot(conv) * grid.cell();
    }
    const double change = (rho_new - rho).cwiseAbs().sum() * grid.cell();
    sol.scf_history.push_back({it, energy, change});
    if (change < tol * std::max(1e-300, rho.cwiseAbs().sum() * grid.cell())) {
      rho = rho_new;
      sol.energy = energy;
      converged = true;
      break;
    }
    if (energy > best_energy) alpha = std::max(alpha / 2, 0.01);
    best_energy = std::min(best_energy, energy);
    // period-2 oscillation detector on the density change
    if (prev_change[0] > 0 &&
        std::abs(change - prev_change[0]) < 1e-6 * change &&
        std::abs(prev_change[1] - prev_change[0]) > 0.1 * change) {
      alpha /= 2;
      if (alpha < 1e-3)
        throw std::runtime_error("hartree_scf: period-2 density oscillation persists");
    }
    prev_change[0] = prev_change[1];
    prev_change[1] = change;
    rho = (1 - alpha) * rho + alpha * rho_new;
    sol.energy = energy;
  }
  sol.iterations = it + (converged ? 1 : 0);
  sol.converged = converged;
  sol.rho.grid = grid;
  sol.rho.values = rho.cast<cd>();

  // final projector from the converged density, then the post-hoc defect
  VecR Wfin = u;
  if (K.strength != 0) Wfin += convolve_kernel(grid, rho, kern);
  MatR Hm = T;
  Hm.diagonal() += Wfin;
  eigh_real(Hm, w, V);
  int nocc = 0;
  const double eps = 1e-10 * std::max(1.0, std::max(std::abs(w[0]), std::abs(w[w.size() - 1])));
  for (long j = 0; j < w.size(); ++j)
    if (w[j] < -eps) ++nocc;
  MatR gam = V.leftCols(nocc) * V.leftCols(nocc).transpose();
  sol.gamma.matrix = gam.cast<cd>();
  sol.rho.values = (VecR(gam.diagonal()) * hd / grid.cell()).cast<cd>();
  // rebuild H from gamma's own density and re-project
  {
    VecR rho_g = density_of(sol.gamma);
    VecR W2 = u;
    if (K.strength != 0) W2 += convolve_kernel(grid, rho_g, kern);
    MatR H2 = T;
    H2.diagonal() += W2;
    VecR w2;
    MatR V2;
    eigh_real(H2, w2, V2);
    int nocc2 = 0;
    const double eps2 =
        1e-10 * std::max(1.0, std::max(std::abs(w2[0]), std::abs(w2[w2.size() - 1])));
    for (long j = 0; j < w2.size(); ++j)
      if (w2[j] < -eps2) ++nocc2;
    MatR gam2 = V2.leftCols(nocc2) * V2.leftCols(nocc2).transpose();
    Eigen::JacobiSVD<MatR> svd(gam - gam2);
    sol.fixed_point_residual = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  }
  sol.energy = hartree_energy(sol.gamma, U, K);
  if (!converged)
    std::cerr << "[sclab] warning: hartree_scf did not converge (change history tail "
              << (sol.scf_history.empty() ? 0.0 : sol.scf_history.back().density_change)
              << ")\n";
  return sol;
}

PhaseSpaceField tf_symbol(const GridFunction& rho, double hbar) {
  const Grid& g = rho.grid;
  PhaseSpaceField f = make_field(g, hbar);
  const double wd = unit_ball_volume(g.dim);
  for (int j = 0; j < g.n; ++j) {
    const double r = std::pow(std::max(0.0, rho.values[j].real()) / wd, 1.0 / g.dim);
    for (int k = 0; k < g.n; ++k)
      f.values(k, j) = std::abs(f.momentum_points[k]) <= r ? 1.0 : 0.0;
  }
  return f;
}

MeanFieldDistances hartree_vs_tf_report(const HartreeSolution& sol, const TFSolution& tf,
                                        const Potential& U, const InteractionKernel& K) {
  (void)U;
  (void)K;
  if (!(sol.rho.grid == tf.rho.grid))
    throw std::invalid_argument("hartree_vs_tf_report: configuration mismatch");
  const Grid& g = sol.rho.grid;
  MeanFieldDistances d;
  VecR diff = (sol.rho.values - tf.rho.values).real();
  d.rho_l1 = diff.cwiseAbs().sum() * g.cell();
  d.rho_l2 = std::sqrt(diff.cwiseAbs2().sum() * g.cell());
  PhaseSpaceField f_hf = wigner(sol.gamma);
  PhaseSpaceField f_tf = tf_symbol(tf.rho, sol.gamma.hbar);
  d.wigner_l2 = std::sqrt((f_hf.values - f_tf.values).cwiseAbs2().sum() * g.cell() * f_hf.dxi());
  DensityOperator op_tf = weyl_quantize(f_tf);
  d.trace_distance =
      schatten_norm(sol.gamma.matrix - op_tf.matrix, 1.0, sol.gamma.hbar, g.dim);
  return d;
}

} // namespace sclab
