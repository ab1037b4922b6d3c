#pragma once
// Dense diagonalization, spectral projectors, eigenvalue-count and
// resolvent-sum audits, and the exponential-localization audits.

#include <optional>

#include "sclab/operators.hpp"

namespace sclab {

struct SpectralDecomposition {
  HermitianOperator op;
  VecR eigenvalues;  // ascending
  Mat eigenvectors;  // orthonormal columns
  bool real_vectors = false; // true when the imaginary parts are identically 0

  // inclusive-endpoint tolerance used everywhere an eigenvalue meets a cut
  double eps_eig() const;
  // indices with eigenvalue <= threshold + eps_eig
  std::vector<int> below(double threshold) const;
};

SpectralDecomposition diagonalize(const HermitianOperator& H);

// Low-level dense symmetric/Hermitian eigensolvers (LAPACK divide & conquer).
void eigh_real(const MatR& A, VecR& w, MatR& V);
void eigh_complex(const Mat& A, VecR& w, Mat& V);

struct DensityOperator {
  enum class Tag { projector, hartree, smoothed, general };
  Grid grid;
  double hbar = 0;
  Mat matrix;
  Tag tag = Tag::general;
};

DensityOperator spectral_projector(const SpectralDecomposition& dec, double a, double b,
                                   double hbar);

// Position density rho(x) = h^d gamma(x,x)/dx^d of a density operator.
VecR density_of(const DensityOperator& gamma);

// omega_d = volume of the unit ball
double unit_ball_volume(int d);

struct WeylAuditRecord {
  double quantum = 0, classical = 0, error = 0;
};
WeylAuditRecord weyl_audit(const Grid& grid, const Potential& V, double hbar, double E,
                           const SpectralDecomposition* precomputed = nullptr);

struct LocalCountRecord {
  double count_scaled = 0, budget = 0, ratio = 0;
};
LocalCountRecord local_count_audit(const SpectralDecomposition& dec, double a, double b,
                                   double hbar);

struct ResolventRecord {
  double value = 0, normalized = 0;
};
ResolventRecord resolvent_audit(const SpectralDecomposition& dec, double lambda, double hbar,
                                int order);

struct AgmonRecord {
  double weighted_mass = 0, budget = 0;
  double gradient_weighted_mass = 0, gradient_budget = 0;
};
AgmonRecord agmon_audit(const SpectralDecomposition& dec, const DensityOperator& gamma,
                        const Potential& V);

struct SpectralIneqRecord {
  double lt_lhs = 0, lt_rhs = 0, clr_lhs = 0, clr_rhs = 0, linf_ratio = 0;
};
SpectralIneqRecord spectral_inequality_audit(const SpectralDecomposition& dec,
                                             const DensityOperator& gamma, const Potential& V,
                                             double hbar);

struct VariationalRecord {
  double lhs = 0, rhs = 0, residual = 0;
};
VariationalRecord variational_identity_audit(const HermitianOperator& H,
                                             const DensityOperator& P);

// Euclidean distance to the discrete sublevel set {V <= a} (brute force).
VecR sublevel_distance(const Grid& grid, const VecR& V, double a);

} // namespace sclab
