#include <doctest.h>

#include "sclab/meanfield.hpp"

using namespace sclab;

TEST_CASE("Thomas-Fermi with no interaction is closed form") {
  Grid g = make_grid(1, 256, 6.0);
  Potential U;
  U.kind = Potential::Kind::shifted_harmonic;
  InteractionKernel K; // strength 0
  TFSolution tf = thomas_fermi_solve(g, U, K);
  CHECK(tf.converged);
  CHECK(tf.iterations <= 2);
  for (long i = 0; i < g.size(); ++i) {
    const double x = g.axis_coord(int(i));
    const double exact = 2 * std::sqrt(std::max(0.0, 1 - x * x));
    CHECK(std::abs(tf.rho.values[i].real() - exact) < 1e-12);
  }
}

TEST_CASE("Thomas-Fermi converges on a stiff soft-core Coulomb case") {
  // A fixed damping of 0.5 oscillates without converging here; the solver
  // shrinks the damping adaptively and must still reach the fixed point.
  Grid g = make_grid(1, 256, 6.0);
  Potential U;
  U.kind = Potential::Kind::shifted_harmonic;
  InteractionKernel K{0.5, 1.0, 0.1};
  TFSolution tf = thomas_fermi_solve(g, U, K);
  CHECK(tf.converged);
  CHECK(tf.residual < 1e-8);
  CHECK(integrate(tf.rho).real() > 0);
}

TEST_CASE("soft kernels have nonnegative Fourier transform") {
  Grid g = make_grid(1, 128, 6.0);
  InteractionKernel K{0.04, 0.5, 2 * g.spacing};
  CHECK(K.min_fourier_coefficient(g) > -1e-10);
}

TEST_CASE("Hartree at zero coupling is the linear projector") {
  Grid g = make_grid(1, 128, 6.0);
  Potential U;
  U.kind = Potential::Kind::shifted_harmonic;
  InteractionKernel K; // strength 0
  const double hbar = 0.25; // away from the E = 0 level crossing at hbar = 0.2
  HartreeSolution sol = hartree_scf(g, U, K, hbar);
  CHECK(sol.converged);
  auto dec = diagonalize(build_hamiltonian(g, U, hbar));
  auto P = spectral_projector(dec, -10.0, 0.0, hbar);
  CHECK((sol.gamma.matrix - P.matrix).norm() < 1e-10);
  CHECK(sol.fixed_point_residual < 1e-10);
}

TEST_CASE("Hartree with weak repulsion converges and loses energy vs TF seed") {
  Grid g = make_grid(1, 128, 6.0);
  Potential U;
  U.kind = Potential::Kind::shifted_harmonic;
  InteractionKernel K{0.04, 0.5, 2 * g.spacing};
  const double hbar = 0.25;
  HartreeSolution sol = hartree_scf(g, U, K, hbar);
  CHECK(sol.converged);
  CHECK(sol.fixed_point_residual < 1e-6);
  TFSolution tf = thomas_fermi_solve(g, U, K);
  CHECK(tf.converged);
  MeanFieldDistances d = hartree_vs_tf_report(sol, tf, U, K);
  CHECK(d.rho_l1 > 0);
  CHECK(std::isfinite(d.rho_l2));
  CHECK(std::isfinite(d.wigner_l2));
  CHECK(std::isfinite(d.trace_distance));
}

TEST_CASE("Thomas-Fermi runs in three dimensions") {
  Grid g = make_grid(3, 16, 3.0);
  Potential U;
  U.kind = Potential::Kind::shifted_harmonic;
  InteractionKernel K{0.1, 0.5, 0.5};
  TFSolution tf = thomas_fermi_solve(g, U, K);
  CHECK(tf.converged);
  CHECK(integrate(tf.rho).real() > 0);
  // omega_3 (1-|x|^2)^{3/2} integrates to pi^2/4 * omega_3 at zero coupling;
  // repulsion can only spread mass, not create it
  CHECK(std::isfinite(tf.residual));
}
