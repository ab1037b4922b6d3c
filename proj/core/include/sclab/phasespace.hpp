#pragma once
// Wigner transform, Weyl quantization, coherent-state smoothing, classical
// symbols and the phase-space identity audits. Transforms are implemented for
// d = 1, where the doubled lattice stays inside the dense budget.

#include "sclab/spectral.hpp"

namespace sclab {

// values(k, j): row k = momentum index in FFT order (xi_k = pi*hbar*m_k/L),
// column j = position index (x_j = -L + j dx).
struct PhaseSpaceField {
  Grid grid;
  VecR momentum_points; // FFT order, length n
  Mat values;           // n x n
  double hbar = 0;

  double dxi() const { return M_PI * hbar / grid.half_length; }
  double mass() const { return values.sum().real() * grid.cell() * dxi(); }
};

PhaseSpaceField make_field(const Grid& grid, double hbar);

PhaseSpaceField wigner(const DensityOperator& op);
DensityOperator weyl_quantize(const PhaseSpaceField& f);

// G_eps star op with G_eps = g_eps(x) g_{h^2/4eps}(xi); trace preserving.
DensityOperator coherent_state_smooth(const DensityOperator& op, double eps);

// Gaussian smoothing of the Wigner field at scale h/2 in both variables.
PhaseSpaceField husimi(const DensityOperator& gamma);

struct ClassicalSymbol {
  PhaseSpaceField f;  // indicator of {|xi|^2 + V <= E} on the lattice
  GridFunction rho;   // omega_d (E - V)_+^{d/2}, closed form
};
ClassicalSymbol classical_symbol(const Grid& grid, const Potential& V, double E, double hbar);

struct IdentityRecord {
  double lhs = 0, rhs = 0, residual = 0;
};
// Classical bathtub identity: integral of Hfield*(g - f) vs |Hfield||f - g|,
// f computed internally as the indicator of {Hfield <= 0}.
IdentityRecord bathtub_identity_audit(const PhaseSpaceField& Hfield, const PhaseSpaceField& g);

struct ConvexityRecord {
  double identity_residual = 0, pointwise_min_slack = 0;
};
// Energy convexity audit for trial states g = c(x) 1_{|xi| <= r(x)} (closed
// form in xi); f is the exact minimizer symbol for the given potential.
ConvexityRecord energy_convexity_audit(const Grid& grid, const Potential& V,
                                       const VecR& c, const VecR& r);

struct WeylBudget {
  double M_f = 0, M_op = 0, M = 0;
  double L1 = 0, L2 = 0, D = 0, C1 = 0, C2 = 0;
};
WeylBudget weyl_budget(const PhaseSpaceField& f, const DensityOperator& gamma, double beta,
                       const Potential& V);

} // namespace sclab
