#pragma once
// Thomas-Fermi fixed point and grand-canonical Hartree SCF with soft-core
// repulsive kernels.

#include "sclab/phasespace.hpp"
#include "sclab/spectral.hpp"

namespace sclab {

struct InteractionKernel {
  double strength = 0;  // kappa >= 0
  double exponent = 1;  // a in [0, 1]
  double softening = 0; // s; kernel is kappa (|x|^2 + s^2)^{-a/2}

  double eval_r2(double r2) const {
    return strength * std::pow(r2 + softening * softening, -exponent / 2);
  }
  // smallest value of the zero-padded kernel transform (logged; >= 0 expected)
  double min_fourier_coefficient(const Grid& grid) const;
};

struct TFSolution {
  GridFunction rho;
  double residual = 0; // sup-norm fixed-point defect
  int iterations = 0;
  bool converged = false;
};

TFSolution thomas_fermi_solve(const Grid& grid, const Potential& U, const InteractionKernel& K,
                              double damping = 0.5, double tol = 1e-9, int max_iter = 5000);

struct ScfStep {
  int iteration = 0;
  double energy = 0;
  double density_change = 0; // L1 change of the density
};

struct HartreeSolution {
  DensityOperator gamma;
  GridFunction rho;
  double energy = 0;
  double fixed_point_residual = 0; // ||gamma - 1_{H_gamma<0}||_op, post hoc
  std::vector<ScfStep> scf_history;
  int iterations = 0;
  bool converged = false;
  bool degenerate_level = false; // an eigenvalue sat within eps_eig of 0
};

HartreeSolution hartree_scf(const Grid& grid, const Potential& U, const InteractionKernel& K,
                            double hbar, double mixing = 0.5, double tol = 1e-8,
                            int max_iter = 2000, const VecR* rho0 = nullptr);

double hartree_energy(const DensityOperator& gamma, const Potential& U,
                      const InteractionKernel& K);

struct MeanFieldDistances {
  double rho_l1 = 0, rho_l2 = 0;
  double wigner_l2 = 0;
  double trace_distance = 0; // scaled trace norm of gamma_HF - op_{f_TF}
};
MeanFieldDistances hartree_vs_tf_report(const HartreeSolution& sol, const TFSolution& tf,
                                        const Potential& U, const InteractionKernel& K);

// Classical phase-space distribution of a TF density:
// 1(|xi| <= omega_d^{-1/d} rho^{1/d}).
PhaseSpaceField tf_symbol(const GridFunction& rho, double hbar);

} // namespace sclab
