#pragma once
// Scaled Schatten norms, quantum gradients, phase-space translations, Besov
// seminorms, and both-sides audits of the abstract commutator bounds.

#include "sclab/spectral.hpp"

namespace sclab {

// (h^d Tr|A|^p)^{1/p}; p = inf returns the plain operator norm.
double schatten_norm(const Mat& A, double p, double hbar, int dim);

// Singular values, descending (via the Hermitian eigenproblem of A^*A).
VecR singular_values(const Mat& A);

struct ShiftVector {
  VecR x_part;  // x0
  VecR xi_part; // xi0
  double norm() const { return std::sqrt(x_part.squaredNorm() + xi_part.squaredNorm()); }
};

// Snap a requested shift to the grid lattice (x to dx multiples, xi to
// dxi = pi*hbar/L multiples); components round to the nearest cell.
ShiftVector snap_shift(const Grid& grid, double hbar, const ShiftVector& z);

struct QuantumGradients {
  std::vector<Mat> d_x;  // (i hbar)^{-1}[p_j, gamma]
  std::vector<Mat> d_xi; // (i hbar)^{-1}[x_j, gamma]
};
QuantumGradients quantum_gradients(const DensityOperator& gamma);

// Conjugation by the phase-space translation unitary: diagonal phase
// e^{i xi0.x/hbar} composed with the cyclic shift by x0/dx cells.
Mat phase_space_shift(const Mat& A, const Grid& grid, const ShiftVector& z, double hbar);

// The translation unitary itself (useful as a test operator).
Mat shift_unitary(const Grid& grid, const ShiftVector& z, double hbar);

double besov_seminorm(const DensityOperator& gamma, double p, double s,
                      const std::vector<ShiftVector>& samples);

// ||T_z gamma - gamma||_{L^p} for a projector given by its occupied columns;
// exploits rank(T_z gamma - gamma) <= 2r.
double shift_difference_norm(const Mat& occupied_cols, const Grid& grid,
                             const ShiftVector& z, double hbar, double p);

enum class BoundKind { hs, trace_first, trace_second, weighted_hs, appendix_hs };

struct BoundAudit {
  std::string name;
  double lhs = 0, rhs = 0, margin = 0;
  double lambda = 0, mu = 0;
};

// Ingredient-level two-sided evaluation of the commutator bounds. The traces
// are reported unscaled (a common h^d factor does not move the margin sign).
BoundAudit commutator_bound_audit(const SpectralDecomposition& dec, const DensityOperator& gamma,
                                  const Mat& A, double lambda, double mu, BoundKind which);

struct FracCommRecord {
  double lhs = 0, rhs = 0;
};
FracCommRecord fractional_commutator(const SpectralDecomposition& dec, const GridFunction& phi,
                                     double mu, double hbar);

const char* bound_kind_name(BoundKind k);

} // namespace sclab
