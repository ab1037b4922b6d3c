#include <doctest.h>

#include "sclab/spectral.hpp"

using namespace sclab;

TEST_CASE("harmonic oscillator spectrum") {
  Grid g = make_grid(1, 512, 6.0);
  Potential V;
  V.kind = Potential::Kind::harmonic;
  const double hbar = 0.05;
  auto dec = diagonalize(build_hamiltonian(g, V, hbar));
  for (int k = 0; k < 5; ++k)
    CHECK(std::abs(dec.eigenvalues[k] - (2 * k + 1) * hbar) < 1e-8);
}

TEST_CASE("fd2 converges to the spectral Laplacian") {
  Grid g = make_grid(1, 256, 6.0);
  Potential V;
  V.kind = Potential::Kind::harmonic;
  const double hbar = 0.1;
  auto sp = diagonalize(build_hamiltonian(g, V, hbar, Scheme::spectral));
  auto fd = diagonalize(build_hamiltonian(g, V, hbar, Scheme::fd2));
  const double rel = std::abs(sp.eigenvalues[0] - fd.eigenvalues[0]) / sp.eigenvalues[0];
  CHECK(rel < 4 * g.spacing * g.spacing / hbar);
}

TEST_CASE("canonical commutator on a localized smooth state") {
  Grid g = make_grid(1, 256, 6.0);
  const double hbar = 0.5;
  Mat X = position_operator(g, 0).matrix;
  Mat P = momentum_operator(g, hbar, 0).matrix;
  Vec psi(g.size());
  for (long i = 0; i < g.size(); ++i) {
    const double x = g.axis_coord(int(i));
    psi[i] = std::exp(-x * x / 2);
  }
  psi /= psi.norm();
  Vec lhs = X * (P * psi) - P * (X * psi);
  CHECK((lhs - cd(0, hbar) * psi).norm() < 1e-5); // boundary tail ~ e^{-L^2/2}
}

TEST_CASE("momentum operator is the Fourier multiplier") {
  Grid g = make_grid(1, 64, 6.0);
  const double hbar = 0.3;
  Mat P = momentum_operator(g, hbar, 0).matrix;
  CHECK((P - P.adjoint()).norm() < 1e-12);
  const double k = 2 * M_PI / g.half_length; // mode m = 2
  Vec wave(g.size());
  for (long i = 0; i < g.size(); ++i)
    wave[i] = std::exp(cd(0, k * g.axis_coord(int(i))));
  CHECK((P * wave - hbar * k * wave).norm() < 1e-10 * wave.norm());
  // block application agrees with the dense matrix
  Mat block = wave;
  CHECK((apply_momentum(g, hbar, 0, block) - P * block).norm() < 1e-10);
}

TEST_CASE("potential evaluations") {
  Potential dw;
  dw.kind = Potential::Kind::double_well;
  CHECK(dw.eval_r2(0.0) == doctest::Approx(0.5 * 4 - 1));
  CHECK(dw.eval_r2(2.0) == doctest::Approx(-1.0));
  Potential sh;
  sh.kind = Potential::Kind::shifted_harmonic;
  CHECK(sh.eval_r2(1.0) == doctest::Approx(0.0));
  sh.chemical_shift = 0.25;
  CHECK(sh.eval_r2(1.0) == doctest::Approx(0.25));
}

TEST_CASE("hamiltonian is Hermitian with real spectrum bounded below") {
  Grid g = make_grid(2, 16, 3.0);
  Potential V;
  V.kind = Potential::Kind::shifted_harmonic;
  auto H = build_hamiltonian(g, V, 0.4);
  CHECK((H.matrix - H.matrix.adjoint()).norm() < 1e-10);
  auto dec = diagonalize(H);
  CHECK(dec.eigenvalues[0] > -1.0); // V >= -1 and the kinetic term is nonnegative
}
