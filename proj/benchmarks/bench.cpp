#include <benchmark/benchmark.h>

#include "sclab/experiments.hpp"

using namespace sclab;

namespace {

void BM_diagonalize(benchmark::State& state) {
  Grid g = make_grid(1, int(state.range(0)), 6.0);
  Potential V;
  V.kind = Potential::Kind::shifted_harmonic;
  HermitianOperator H = build_hamiltonian(g, V, 0.1);
  for (auto _ : state) {
    auto dec = diagonalize(H);
    benchmark::DoNotOptimize(dec.eigenvalues.data());
  }
}
BENCHMARK(BM_diagonalize)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_wigner(benchmark::State& state) {
  Grid g = make_grid(1, int(state.range(0)), 6.0);
  Potential V;
  V.kind = Potential::Kind::shifted_harmonic;
  const double hbar = 0.1;
  auto dec = diagonalize(build_hamiltonian(g, V, hbar));
  auto gamma = spectral_projector(dec, -10.0, 0.0, hbar);
  for (auto _ : state) {
    PhaseSpaceField f = wigner(gamma);
    benchmark::DoNotOptimize(f.values.data());
  }
}
BENCHMARK(BM_wigner)->Arg(128)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_convolve(benchmark::State& state) {
  Grid g = make_grid(1, int(state.range(0)), 6.0);
  GridFunction f{g, Vec::Random(g.size())};
  GridFunction k = gaussian_kernel(g, 0.5);
  for (auto _ : state) {
    GridFunction c = convolve(f, k, ConvMode::zero_padded);
    benchmark::DoNotOptimize(c.values.data());
  }
}
BENCHMARK(BM_convolve)->Arg(256)->Arg(1024)->Arg(4096)->Unit(benchmark::kMicrosecond);

void BM_hartree_step_solver(benchmark::State& state) {
  Grid g = make_grid(1, int(state.range(0)), 6.0);
  Potential U;
  U.kind = Potential::Kind::shifted_harmonic;
  InteractionKernel K{0.04, 0.5, 2 * g.spacing};
  for (auto _ : state) {
    TFSolution tf = thomas_fermi_solve(g, U, K);
    benchmark::DoNotOptimize(tf.residual);
  }
}
BENCHMARK(BM_hartree_step_solver)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
