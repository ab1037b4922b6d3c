// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria are property- and rate-based at desk scale (d = 1).

#include <cstdio>
#include <numeric>
#include <random>

#include "sclab/experiments.hpp"

using namespace sclab;

namespace {

int g_failures = 0;

void criterion(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %02d %-28s %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

std::string fmt(double v) { return io::format_double(v); }

Mat random_hermitian(long n, std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  Mat R(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) R(i, j) = cd(gauss(rng), gauss(rng));
  return (R + R.adjoint()) / 2;
}

// ---------------------------------------------------------------- criterion 1
void check_identities() {
  std::mt19937 rng(1234);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Grid g = make_grid(1, 32, 6.0);
  const double hbar = 0.25;
  double worst = 0;
  for (int t = 0; t < 200; ++t) {
    HermitianOperator H{g, random_hermitian(g.size(), rng), hbar};
    auto dec = diagonalize(H);
    std::uniform_int_distribution<int> pick(1, int(g.size()) - 1);
    const int r = pick(rng);
    std::vector<int> idx(g.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng); // random eigenvector subset
    Mat cols(g.size(), r);
    for (int c = 0; c < r; ++c) cols.col(c) = dec.eigenvectors.col(idx[c]);
    DensityOperator P{g, hbar, cols * cols.adjoint(), DensityOperator::Tag::projector};
    auto vr = variational_identity_audit(H, P);
    worst = std::max(worst, vr.residual / std::max({1.0, std::abs(vr.lhs), std::abs(vr.rhs)}));
  }
  double worst_bath = 0;
  for (int t = 0; t < 200; ++t) {
    PhaseSpaceField Hf = make_field(g, hbar), gf = make_field(g, hbar);
    for (long k = 0; k < Hf.values.rows(); ++k)
      for (long j = 0; j < Hf.values.cols(); ++j) {
        Hf.values(k, j) = gauss(rng);
        gf.values(k, j) = unif(rng);
      }
    auto br = bathtub_identity_audit(Hf, gf);
    worst_bath =
        std::max(worst_bath, br.residual / std::max({1.0, std::abs(br.lhs), std::abs(br.rhs)}));
  }
  double worst_conv = 0;
  Potential V;
  V.kind = Potential::Kind::shifted_harmonic;
  for (int t = 0; t < 200; ++t) {
    VecR c(g.size()), r(g.size());
    for (long i = 0; i < g.size(); ++i) {
      c[i] = unif(rng);
      r[i] = 0.1 + 2 * unif(rng);
    }
    auto cr = energy_convexity_audit(g, V, c, r);
    worst_conv = std::max({worst_conv, cr.identity_residual, -cr.pointwise_min_slack});
  }
  const bool ok = worst <= 1e-9 && worst_bath <= 1e-9 && worst_conv <= 1e-9;
  criterion(1, "exact identities", ok,
            "variational " + fmt(worst) + ", bathtub " + fmt(worst_bath) + ", convexity " +
                fmt(worst_conv) + " (200 instances each, tol 1e-9)");
}

// ---------------------------------------------------------------- criterion 2
void check_transforms() {
  std::mt19937 rng(4321);
  Grid g = make_grid(1, 32, 6.0);
  const double hbar = 0.25;
  double worst_pl = 0, worst_rt = 0;
  for (int t = 0; t < 100; ++t) {
    DensityOperator op{g, hbar, random_hermitian(g.size(), rng), DensityOperator::Tag::general};
    PhaseSpaceField f = wigner(op);
    const double l2 = std::sqrt(f.values.cwiseAbs2().sum() * g.cell() * f.dxi());
    const double hs = schatten_norm(op.matrix, 2.0, hbar, 1);
    worst_pl = std::max(worst_pl, std::abs(l2 - hs) / hs);
    DensityOperator back = weyl_quantize(f);
    worst_rt = std::max(worst_rt, (back.matrix - op.matrix).norm() / op.matrix.norm());
  }
  // Gaussian ground state: wigner = 2 exp(-(x^2 + xi^2)/hbar)
  Grid gg = make_grid(1, 256, 6.0);
  const double hg = 0.1;
  Vec psi(gg.size());
  for (long i = 0; i < gg.size(); ++i) {
    const double x = gg.axis_coord(int(i));
    psi[i] = std::exp(-x * x / (2 * hg));
  }
  psi /= psi.norm() * std::sqrt(gg.spacing);
  DensityOperator op{gg, hg, Mat(gg.spacing * psi * psi.adjoint()),
                     DensityOperator::Tag::projector};
  PhaseSpaceField f = wigner(op);
  double gerr = 0;
  for (long k = 0; k < f.values.rows(); ++k)
    for (long j = 0; j < f.values.cols(); ++j) {
      const double x = gg.axis_coord(int(j));
      const double xi = f.momentum_points[k];
      gerr = std::max(gerr,
                      std::abs(f.values(k, j).real() - 2 * std::exp(-(x * x + xi * xi) / hg)));
    }
  const bool ok = worst_pl <= 1e-9 && worst_rt <= 1e-9 && gerr <= 1e-6;
  criterion(2, "transform unitarity", ok,
            "plancherel " + fmt(worst_pl) + ", round trip " + fmt(worst_rt) + ", gaussian " +
                fmt(gerr));
}

// ------------------------------------------------------- shared default sweep
struct SweptPoint {
  SweepPoint pt;
  WeylAuditRecord weyl;
  double comm_x_l1 = 0, comm_p_l1 = 0, comm_x_l2sq = 0, comm_p_l2sq = 0;
  double besov2 = 0;
  AgmonRecord agmon;
  VecR rho;
};

std::vector<ShiftVector> dyadic_lattice(const Grid& g, double hbar) {
  std::vector<ShiftVector> samples;
  for (int k = 4; k >= 1; --k) {
    const double t = std::pow(2.0, -k);
    samples.push_back(snap_shift(g, hbar, {VecR::Constant(1, t), VecR::Zero(1)}));
    samples.push_back(snap_shift(g, hbar, {VecR::Zero(1), VecR::Constant(1, t)}));
  }
  return samples;
}

std::vector<SweptPoint> run_default_sweep(const SweepConfig& cfg, bool full = true) {
  std::vector<SweptPoint> out;
  for (double hbar : cfg.hbar_values) {
    SweptPoint s;
    s.pt = solve_point(cfg, hbar);
    const Grid& g = s.pt.grid;
    s.agmon = agmon_audit(s.pt.dec, s.pt.gamma, cfg.potential);
    if (!full) {
      out.push_back(std::move(s));
      continue;
    }
    s.weyl = weyl_audit(g, cfg.potential, hbar, 0.0, &s.pt.dec);
    Mat xcols = s.pt.occupied;
    for (long i = 0; i < g.size(); ++i) xcols.row(i) *= g.coord(i, 0);
    Mat pcols = apply_momentum(g, hbar, 0, s.pt.occupied);
    s.comm_x_l1 = commutator_block_norm(s.pt, xcols, 1);
    s.comm_p_l1 = commutator_block_norm(s.pt, pcols, 1);
    s.comm_x_l2sq = commutator_block_norm(s.pt, xcols, 2);
    s.comm_p_l2sq = commutator_block_norm(s.pt, pcols, 2);
    s.besov2 = besov_seminorm(s.pt.gamma, 2.0, 0.5, dyadic_lattice(g, hbar));
    s.rho = density_of(s.pt.gamma);
    out.push_back(std::move(s));
  }
  return out;
}

// envelope fit: bin consecutive pairs, keep the max error per bin
RateFit envelope_fit(const std::vector<std::pair<double, double>>& pts, double target) {
  std::vector<std::pair<double, double>> binned;
  for (size_t i = 0; i + 1 < pts.size(); i += 2) {
    const double h = std::sqrt(pts[i].first * pts[i + 1].first);
    binned.push_back({h, std::max(pts[i].second, pts[i + 1].second)});
  }
  return fit_rate(binned, target);
}

void check_weyl_rate(const std::vector<SweptPoint>& sweep) {
  bool pointwise = true;
  double worst_ratio = 0;
  std::vector<std::pair<double, double>> pts;
  for (const auto& s : sweep) {
    worst_ratio = std::max(worst_ratio, s.weyl.error / (M_PI * s.pt.hbar));
    pointwise &= s.weyl.error <= M_PI * s.pt.hbar;
    pts.push_back({s.pt.hbar, s.weyl.error});
  }
  RateFit fit = envelope_fit(pts, 1.0);
  const bool ok = pointwise && fit.slope >= 0.9;
  criterion(3, "weyl law rate", ok,
            "max error/(pi*hbar) " + fmt(worst_ratio) + ", envelope slope " + fmt(fit.slope));
}

void check_commutator_rates(const std::vector<SweptPoint>& sweep) {
  auto slope_of = [&](double SweptPoint::* member) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& s : sweep) pts.push_back({s.pt.hbar, s.*member});
    return fit_rate(pts, 1.0).slope;
  };
  const double sx1 = slope_of(&SweptPoint::comm_x_l1);
  const double sp1 = slope_of(&SweptPoint::comm_p_l1);
  const double sx2 = slope_of(&SweptPoint::comm_x_l2sq);
  const double sp2 = slope_of(&SweptPoint::comm_p_l2sq);
  auto near1 = [](double s) { return std::abs(s - 1.0) <= 0.15; };
  const bool ok = near1(sx1) && near1(sp1) && near1(sx2) && near1(sp2);
  criterion(4, "commutator rates", ok,
            "slopes x:L1 " + fmt(sx1) + ", p:L1 " + fmt(sp1) + ", x:L2sq " + fmt(sx2) +
                ", p:L2sq " + fmt(sp2) + " (target 1.0 +/- 0.15)");
}

// ---------------------------------------------------------------- criterion 5
void check_bound_audits(const SweepConfig& base) {
  SweepConfig cfg = base;
  cfg.hbar_values = geometric_sweep(0.25, 0.02, 8);
  double worst_margin = std::numeric_limits<double>::infinity();
  double res_min1 = 1e300, res_max1 = 0, res_min2 = 1e300, res_max2 = 0;
  for (double hbar : cfg.hbar_values) {
    SweepPoint pt = solve_point(cfg, hbar);
    const Grid& g = pt.grid;
    std::vector<Mat> ops;
    ops.push_back(position_operator(g, 0).matrix);
    ops.push_back(momentum_operator(g, hbar, 0).matrix);
    ShiftVector z = snap_shift(g, hbar, {VecR::Constant(1, 0.25), VecR::Constant(1, 0.25)});
    ops.push_back(shift_unitary(g, z, hbar));
    for (const Mat& A : ops)
      for (double lambda : {hbar, std::sqrt(hbar), 0.25})
        for (BoundKind k : {BoundKind::hs, BoundKind::trace_first, BoundKind::trace_second,
                            BoundKind::weighted_hs, BoundKind::appendix_hs}) {
          auto audit = commutator_bound_audit(pt.dec, pt.gamma, A, lambda, 1.0, k);
          worst_margin = std::min(worst_margin, audit.margin / std::max(1.0, audit.rhs));
        }
    for (double lambda = hbar; lambda <= 1.0; lambda *= 2) {
      auto r1 = resolvent_audit(pt.dec, lambda, hbar, 1);
      auto r2 = resolvent_audit(pt.dec, lambda, hbar, 2);
      res_min1 = std::min(res_min1, r1.normalized);
      res_max1 = std::max(res_max1, r1.normalized);
      res_min2 = std::min(res_min2, r2.normalized);
      res_max2 = std::max(res_max2, r2.normalized);
    }
  }
  const double spread1 = res_max1 / res_min1, spread2 = res_max2 / res_min2;
  // -1e-7: the trace bounds degenerate to lhs == rhs at some sweep points and
  // the two nuclear norms are computed through different factorizations
  const bool ok = worst_margin >= -1e-7 && spread1 <= 4.0 && spread2 <= 4.0;
  criterion(5, "bound audits", ok,
            "min margin " + fmt(worst_margin) + ", resolvent spreads " + fmt(spread1) + " / " +
                fmt(spread2) + " (<= 4)");
}

// ---------------------------------------------------------------- criterion 6
void check_besov(const std::vector<SweptPoint>& sweep) {
  double bmin = 1e300, bmax = 0;
  for (const auto& s : sweep) {
    bmin = std::min(bmin, s.besov2);
    bmax = std::max(bmax, s.besov2);
  }
  // three-regime bound min(|z|/hbar^{1/p'}, |z|^{1/p}, 1) up to one constant
  double spread_worst = 0;
  std::string detail;
  for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
    double rmin = 1e300, rmax = 0;
    for (const auto& s : sweep) {
      const Grid& g = s.pt.grid;
      const double hbar = s.pt.hbar;
      for (const ShiftVector& z : dyadic_lattice(g, hbar)) {
        const double zn = z.norm();
        double denom;
        if (std::isinf(p))
          denom = std::min({zn / hbar, 1.0});
        else
          denom = std::min({zn / std::pow(hbar, 1.0 - 1.0 / p), std::pow(zn, 1.0 / p), 1.0});
        const double val = shift_difference_norm(s.pt.occupied, g, z, hbar, p);
        const double r = val / denom;
        rmin = std::min(rmin, r);
        rmax = std::max(rmax, r);
      }
    }
    spread_worst = std::max(spread_worst, rmax / rmin);
    detail += " p=" + fmt(p) + ":" + fmt(rmax / rmin);
  }
  const bool ok = bmax / bmin < 2.0 && spread_worst < 4.0;
  criterion(6, "besov uniformity", ok,
            "seminorm spread " + fmt(bmax / bmin) + " (< 2), regime-constant spreads" + detail);
}

// ---------------------------------------------------------------- criterion 7
void check_agmon(const std::vector<SweptPoint>& harmonic, const std::vector<SweptPoint>& dwell) {
  bool ok = true;
  double tightest = 1e300;
  for (const auto* sweep : {&harmonic, &dwell})
    for (const auto& s : *sweep) {
      ok &= s.agmon.weighted_mass <= s.agmon.budget;
      ok &= s.agmon.gradient_weighted_mass <= s.agmon.gradient_budget;
      if (s.agmon.weighted_mass > 0)
        tightest = std::min(tightest, s.agmon.budget / std::max(s.agmon.weighted_mass, 1e-300));
    }
  criterion(7, "agmon localization", ok,
            "mass <= budget at all " + std::to_string(harmonic.size() + dwell.size()) +
                " points (both potentials), min budget/mass " + fmt(tightest));
}

// ---------------------------------------------------------------- criterion 8
void check_convergence_rates(const SweepConfig& base) {
  SweepConfig cfg = base;
  cfg.hbar_values = geometric_sweep(0.4, 0.01, 16);
  cfg.quantities = {"rho_L1", "rho_L2", "wigner_L2"};
  Report report;
  auto rows = run_sweep(cfg, &report);
  auto fit_for = [&](const std::string& q, double target) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : rows)
      if (r.quantity == q) pts.push_back({r.hbar, r.value});
    RateFit f = fit_rate(pts, target);
    return f;
  };
  RateFit f1 = fit_for("rho_L1", 0.5), f2 = fit_for("rho_L2", 0.5), f3 = fit_for("wigner_L2", 0.25);
  const bool ok = report.failures.empty() && f1.slope >= 0.45 && f2.slope >= 0.30 &&
                  f3.slope >= 0.22 && f1.r_squared >= 0.95 && f2.r_squared >= 0.95 &&
                  f3.r_squared >= 0.95;
  criterion(8, "convergence rates (d=1 analogue)", ok,
            "rho_L1 " + fmt(f1.slope) + " (r2 " + fmt(f1.r_squared) + "), rho_L2 " +
                fmt(f2.slope) + " (r2 " + fmt(f2.r_squared) + "), wigner_L2 " + fmt(f3.slope) +
                " (r2 " + fmt(f3.r_squared) + ")");
}

// ---------------------------------------------------------------- criterion 9
void check_mean_field() {
  Potential U;
  U.kind = Potential::Kind::shifted_harmonic;
  bool ok = true;
  std::string detail;

  // kappa = 0 reduces to the linear projector
  {
    Grid g = make_grid(1, 128, 6.0);
    InteractionKernel K;
    const double hbar = 0.25; // away from the E = 0 level crossing at hbar = 0.2
    HartreeSolution sol = hartree_scf(g, U, K, hbar);
    auto dec = diagonalize(build_hamiltonian(g, U, hbar));
    auto P = spectral_projector(dec, -10.0, 0.0, hbar);
    const double dev = (sol.gamma.matrix - P.matrix).cwiseAbs().maxCoeff();
    ok &= sol.converged && dev <= 1e-10;
    detail += "kappa=0 dev " + fmt(dev);
  }

  for (double a : {0.5, 1.0}) {
    std::vector<double> hbars = geometric_sweep(0.30, 0.04, 6);
    std::vector<std::pair<double, double>> pts;
    double worst_tf = 0, worst_scf = 0;
    VecR rho_seed;
    bool have_seed = false;
    SweepConfig probe;
    probe.potential = U;
    for (size_t i = hbars.size(); i-- > 0;) { // large n last; warm start upward
      const double hbar = hbars[i];
      Grid g = make_grid(1, grid_points_for(hbar, probe, 1.0), 6.0);
      InteractionKernel K{0.04, a, 2 * g.spacing};
      TFSolution tf = thomas_fermi_solve(g, U, K);
      worst_tf = std::max(worst_tf, tf.residual);
      ok &= tf.converged;
      HartreeSolution sol = hartree_scf(g, U, K, hbar, 0.5, 1e-8, 2000,
                                        have_seed && rho_seed.size() == g.size() ? &rho_seed
                                                                                 : nullptr);
      ok &= sol.converged;
      worst_scf = std::max(worst_scf, sol.fixed_point_residual);
      MeanFieldDistances d = hartree_vs_tf_report(sol, tf, U, K);
      pts.push_back({hbar, d.rho_l1});
      rho_seed = sol.rho.values.real();
      have_seed = true;
    }
    // pts were collected from small hbar upward; restore decreasing order
    std::reverse(pts.begin(), pts.end());
    bool monotone = true;
    for (size_t i = 1; i < pts.size(); ++i) monotone &= pts[i].second < pts[i - 1].second;
    RateFit fit = fit_rate(pts, 0.5);
    ok &= worst_tf < 1e-8 && worst_scf < 1e-6 && monotone && fit.slope >= 0.4;
    detail += "; a=" + fmt(a) + " slope " + fmt(fit.slope) + (monotone ? " monotone" : " NOT monotone") +
              ", tf res " + fmt(worst_tf) + ", scf res " + fmt(worst_scf);
  }
  criterion(9, "mean-field (d=1 analogue)", ok, detail);
}

// --------------------------------------------------------------- criterion 10
void check_density_regularity(const std::vector<SweptPoint>& sweep) {
  bool grad_ok = true;
  double rmin = 1e300, rmax = 0;
  for (const auto& s : sweep) {
    const Grid& g = s.pt.grid;
    const double hbar = s.pt.hbar;
    GridFunction rho{g, s.rho.cast<cd>()};
    GridFunction drho = spectral_derivative(rho, 0);
    const double grad_l1 = drho.values.cwiseAbs().sum() * g.spacing;
    Mat pcols = apply_momentum(g, hbar, 0, s.pt.occupied);
    const double dx_gamma_l1 = commutator_block_norm(s.pt, pcols, 1) / hbar;
    grad_ok &= grad_l1 <= dx_gamma_l1 * (1 + 1e-9);
    for (double x0 : {1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2}) {
      const long cells = std::max(1L, std::lround(x0 / g.spacing));
      const double xs = cells * g.spacing;
      double diff2 = 0;
      for (long i = 0; i < g.size(); ++i) {
        const double d = s.rho[(i + cells) % g.size()] - s.rho[i];
        diff2 += d * d;
      }
      const double val = std::sqrt(diff2 * g.spacing);
      const double denom = std::min({xs / hbar, std::sqrt(xs), 1.0});
      rmin = std::min(rmin, val / denom);
      rmax = std::max(rmax, val / denom);
    }
  }
  const double spread = rmax / rmin;
  const bool ok = grad_ok && spread <= 4.0;
  criterion(10, "density regularity", ok,
            std::string(grad_ok ? "gradient bound holds" : "gradient bound VIOLATED") +
                ", shift-ratio spread " + fmt(spread) + " (<= 4)");
}

} // namespace

int main() {
  std::printf("acceptance suite: d = 1, box [-6, 6), dense solver cap n = 2048\n");
  check_identities();
  check_transforms();

  SweepConfig harmonic_cfg; // shifted harmonic |x|^2 - 1, 12 points 0.4 -> 0.02
  harmonic_cfg.hbar_values = geometric_sweep(0.4, 0.02, 12);
  auto harmonic = run_default_sweep(harmonic_cfg);

  SweepConfig dwell_cfg = harmonic_cfg;
  dwell_cfg.potential.kind = Potential::Kind::double_well;
  auto dwell = run_default_sweep(dwell_cfg, /*full=*/false);

  check_weyl_rate(harmonic);
  check_commutator_rates(harmonic);
  check_bound_audits(harmonic_cfg);
  check_besov(harmonic);
  check_agmon(harmonic, dwell);
  check_convergence_rates(harmonic_cfg);
  check_mean_field();
  check_density_regularity(harmonic);

  if (g_failures > 0) {
    std::printf("[FAIL] %d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
