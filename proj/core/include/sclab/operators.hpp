#pragma once
// Discrete Hamiltonian H = -hbar^2 Laplacian + V and the position/momentum
// operators entering the commutator estimates.

#include "sclab/grid.hpp"

namespace sclab {

struct HermitianOperator {
  Grid grid;
  Mat matrix;
  double hbar = 0; // 0 when the operator is hbar-independent
};

struct Potential {
  enum class Kind { harmonic, shifted_harmonic, double_well, gaussian_well, tabulated };
  Kind kind = Kind::shifted_harmonic;
  std::vector<double> parameters; // kind-specific, see eval()
  double chemical_shift = 0;      // added to every evaluation
  GridFunction table;             // for Kind::tabulated

  // harmonic:          |x|^2
  // shifted_harmonic:  |x|^2 - p0            (default p0 = 1)
  // double_well:       0.5(|x|^2 - p0)^2 - p1 (defaults p0 = 2, p1 = 1)
  // gaussian_well:     -p0 exp(-|x|^2/p1^2)   (defaults p0 = 2, p1 = 1)
  double eval_r2(double r2) const;
  VecR sample(const Grid& grid) const;
};

enum class Scheme { spectral, fd2 };

HermitianOperator build_hamiltonian(const Grid& grid, const Potential& V, double hbar,
                                    Scheme scheme = Scheme::spectral);

HermitianOperator position_operator(const Grid& grid, int axis);

// Fourier multiplier hbar*k_axis with the unmatched Nyquist mode zeroed,
// so the matrix is exactly i times a real antisymmetric matrix.
HermitianOperator momentum_operator(const Grid& grid, double hbar, int axis);

HermitianOperator multiplication_operator(const Grid& grid, const VecR& diag);

Mat commutator(const Mat& A, const Mat& B);

// Apply the momentum symbol to a block of column vectors (cheap FFT path).
Mat apply_momentum(const Grid& grid, double hbar, int axis, const Mat& cols);

// Apply 1 + |p|^2 (the weight used by the weighted commutator audit).
Mat apply_one_plus_p2(const Grid& grid, double hbar, const Mat& cols);

} // namespace sclab
