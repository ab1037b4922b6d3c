// sclab: hbar-sweep experiments for semiclassical spectral projectors.
//
// Subcommands: weyl, comm, besov, agmon, identities, tf, hartree, rates.
// Each takes --config <path> (JSON or INI) and --out <dir>; exit codes are
// 0 = success, 2 = config error, 3 = numerical failure.

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <fstream>
#include <iostream>
#include <map>
#include <random>

#include "sclab/experiments.hpp"

namespace fs = std::filesystem;
using namespace sclab;

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

io::json load_config_or_default(const std::string& path) {
  if (path.empty()) return io::json::object();
  if (!fs::exists(path)) throw ConfigError("config file not found: " + path);
  return io::load_config(path);
}

SweepConfig make_sweep_config(const io::json& j) {
  try {
    return sweep_config_from_json(j);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
}

void finish_report(const std::string& out_dir, const io::json& cfg, Report& report) {
  report.config_echo = cfg;
  write_report_json((fs::path(out_dir) / "report.json").string(), report);
}

void add_fits(Report& report, const std::vector<SweepRow>& rows,
              const std::map<std::string, double>& targets, double log_power = 0) {
  std::map<std::string, std::vector<std::pair<double, double>>> by_quantity;
  for (const auto& r : rows) by_quantity[r.quantity].push_back({r.hbar, r.value});
  for (const auto& [q, pts] : by_quantity) {
    auto it = targets.find(q);
    RateFit fit = fit_rate(pts, it == targets.end() ? 0.0 : it->second, log_power);
    fit.quantity = q;
    report.fits.push_back(fit);
  }
}

int run_weyl(const io::json& cfg, const std::string& out_dir) {
  SweepConfig sc = make_sweep_config(cfg);
  if (sc.quantities.empty()) sc.quantities = {"weyl_error"};
  Report report;
  auto rows = run_sweep(sc, &report);
  write_rows_csv((fs::path(out_dir) / "weyl_sweep.csv").string(), rows);
  add_fits(report, rows, {{"weyl_error", 1.0}});
  finish_report(out_dir, cfg, report);
  return report.failures.empty() ? 0 : 3;
}

int run_comm(const io::json& cfg, const std::string& out_dir) {
  SweepConfig sc = make_sweep_config(cfg);
  if (sc.quantities.empty())
    sc.quantities = {"comm_x_L1", "comm_p_L1", "comm_x_L2sq", "comm_p_L2sq"};
  Report report;
  auto rows = run_sweep(sc, &report);
  write_rows_csv((fs::path(out_dir) / "comm_sweep.csv").string(), rows);
  add_fits(report, rows,
           {{"comm_x_L1", 1.0}, {"comm_p_L1", 1.0}, {"comm_x_L2sq", 1.0}, {"comm_p_L2sq", 1.0}},
           1.0);
  finish_report(out_dir, cfg, report);
  return report.failures.empty() ? 0 : 3;
}

int run_besov(const io::json& cfg, const std::string& out_dir) {
  SweepConfig sc = make_sweep_config(cfg);
  if (sc.quantities.empty()) sc.quantities = {"besov_2"};
  Report report;
  auto rows = run_sweep(sc, &report);
  write_rows_csv((fs::path(out_dir) / "besov_sweep.csv").string(), rows);
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (const auto& r : rows)
    if (r.quantity == "besov_2") {
      lo = std::min(lo, r.value);
      hi = std::max(hi, r.value);
    }
  report.extra["besov_2_spread"] = hi / lo;
  finish_report(out_dir, cfg, report);
  return report.failures.empty() ? 0 : 3;
}

int run_agmon(const io::json& cfg, const std::string& out_dir) {
  SweepConfig sc = make_sweep_config(cfg);
  Report report;
  std::vector<SweepRow> rows;
  bool violated = false;
  for (double hbar : sc.hbar_values) {
    try {
      SweepPoint pt = solve_point(sc, hbar);
      AgmonRecord rec = agmon_audit(pt.dec, pt.gamma, sc.potential);
      rows.push_back({hbar, pt.grid.n, "agmon_mass", rec.weighted_mass, "{}"});
      rows.push_back({hbar, pt.grid.n, "agmon_budget", rec.budget, "{}"});
      rows.push_back({hbar, pt.grid.n, "agmon_grad_mass", rec.gradient_weighted_mass, "{}"});
      rows.push_back({hbar, pt.grid.n, "agmon_grad_budget", rec.gradient_budget, "{}"});
      violated |= rec.weighted_mass > rec.budget || rec.gradient_weighted_mass > rec.gradient_budget;
    } catch (const std::exception& e) {
      report.failures.push_back("hbar=" + io::format_double(hbar) + ": " + e.what());
    }
  }
  write_rows_csv((fs::path(out_dir) / "agmon_sweep.csv").string(), rows);
  report.extra["inequalities_hold"] = !violated;
  finish_report(out_dir, cfg, report);
  return (report.failures.empty() && !violated) ? 0 : 3;
}

int run_identities(const io::json& cfg, const std::string& out_dir, unsigned seed) {
  const int count = cfg.value("count", 200);
  const double tol = cfg.value("tolerance", 1e-9);
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Grid g = make_grid(1, 32, 6.0);
  const double hbar = 0.25;
  Report report;
  double worst_var = 0, worst_bath = 0, worst_conv = 0;
  for (int t = 0; t < count; ++t) {
    // quantum variational identity on a random Hermitian H and random projector
    const long n = g.size();
    Mat R(n, n);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) R(i, j) = cd(gauss(rng), gauss(rng));
    HermitianOperator H{g, (R + R.adjoint()) / 2, hbar};
    auto dec = diagonalize(H);
    std::uniform_int_distribution<int> pick(1, int(n) - 1);
    const int r = pick(rng);
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng); // random eigenvector subset
    Mat cols(n, r);
    for (int c = 0; c < r; ++c) cols.col(c) = dec.eigenvectors.col(idx[c]);
    DensityOperator P{g, hbar, cols * cols.adjoint(), DensityOperator::Tag::projector};
    auto vr = variational_identity_audit(H, P);
    worst_var = std::max(worst_var, vr.residual);

    // classical bathtub identity on random phase-space data
    PhaseSpaceField Hf = wigner(P); // reuse the lattice shape
    PhaseSpaceField gf = Hf;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (long k = 0; k < Hf.values.rows(); ++k)
      for (long j = 0; j < Hf.values.cols(); ++j) {
        Hf.values(k, j) = gauss(rng);
        gf.values(k, j) = unif(rng);
      }
    auto br = bathtub_identity_audit(Hf, gf);
    worst_bath = std::max(worst_bath, br.residual);

    // energy convexity on a random bounded trial state
    VecR c(n), rr(n);
    for (long i = 0; i < n; ++i) {
      c[i] = unif(rng);
      rr[i] = 0.1 + 2 * unif(rng);
    }
    Potential V;
    V.kind = Potential::Kind::shifted_harmonic;
    auto cr = energy_convexity_audit(g, V, c, rr);
    worst_conv = std::max({worst_conv, cr.identity_residual, -cr.pointwise_min_slack});
  }
  report.extra["count"] = count;
  report.extra["max_variational_residual"] = worst_var;
  report.extra["max_bathtub_residual"] = worst_bath;
  report.extra["max_convexity_residual"] = worst_conv;
  report.extra["tolerance"] = tol;
  finish_report(out_dir, cfg, report);
  const bool ok = worst_var <= tol && worst_bath <= tol && worst_conv <= tol;
  if (!ok)
    std::cerr << "identity residuals exceed tolerance: " << worst_var << " " << worst_bath << " "
              << worst_conv << "\n";
  return ok ? 0 : 3;
}

InteractionKernel kernel_from_config(const io::json& cfg, const Grid& g) {
  InteractionKernel K;
  if (cfg.contains("kernel")) {
    const auto& k = cfg.at("kernel");
    K.strength = k.value("strength", 0.04);
    K.exponent = k.value("exponent", 0.5);
    K.softening = k.value("softening", 2 * g.spacing);
  } else {
    K.strength = 0.04;
    K.exponent = 0.5;
    K.softening = 2 * g.spacing;
  }
  return K;
}

int run_tf(const io::json& cfg, const std::string& out_dir) {
  SweepConfig sc = make_sweep_config(cfg);
  Grid g = make_grid(sc.dim, cfg.value("n", 512), sc.half_length);
  InteractionKernel K = kernel_from_config(cfg, g);
  TFSolution tf = thomas_fermi_solve(g, sc.potential, K);
  io::CsvWriter csv((fs::path(out_dir) / "tf_density.csv").string(), {"x", "rho"});
  for (long i = 0; i < g.size(); ++i)
    csv.row({io::format_double(g.coord(i, 0)), io::format_double(tf.rho.values[i].real())});
  Report report;
  report.extra["residual"] = tf.residual;
  report.extra["iterations"] = tf.iterations;
  report.extra["converged"] = tf.converged;
  report.extra["mass"] = integrate(tf.rho).real();
  finish_report(out_dir, cfg, report);
  return tf.converged ? 0 : 3;
}

int run_hartree(const io::json& cfg, const std::string& out_dir) {
  SweepConfig sc = make_sweep_config(cfg);
  if (sc.hbar_values.size() > 8 && !cfg.contains("hbar_values") && !cfg.contains("hbar_count"))
    sc.hbar_values = geometric_sweep(0.30, 0.04, 6); // SCF sweeps are expensive
  Report report;
  std::vector<SweepRow> rows;
  std::vector<double> increasing(sc.hbar_values.rbegin(), sc.hbar_values.rend());
  VecR rho0;
  bool have_seed = false;
  for (double hbar : increasing) {
    Grid g = make_grid(sc.dim, grid_points_for(hbar, sc, 1.0), sc.half_length);
    InteractionKernel K = kernel_from_config(cfg, g);
    try {
      HartreeSolution sol = hartree_scf(g, sc.potential, K, hbar, 0.5, 1e-8, 2000,
                                        have_seed && rho0.size() == g.size() ? &rho0 : nullptr);
      if (!sol.converged) throw NumericalError("SCF did not converge");
      TFSolution tf = thomas_fermi_solve(g, sc.potential, K);
      MeanFieldDistances d = hartree_vs_tf_report(sol, tf, sc.potential, K);
      const std::string aux = "{\"scf_residual\":" + io::format_double(sol.fixed_point_residual) +
                              ",\"iterations\":" + std::to_string(sol.iterations) + "}";
      rows.push_back({hbar, g.n, "rho_L1", d.rho_l1, aux});
      rows.push_back({hbar, g.n, "rho_L2", d.rho_l2, "{}"});
      rows.push_back({hbar, g.n, "wigner_L2", d.wigner_l2, "{}"});
      rows.push_back({hbar, g.n, "state_L1", d.trace_distance, "{}"});
      rho0 = sol.rho.values.real();
      have_seed = true;
    } catch (const std::exception& e) {
      report.failures.push_back("hbar=" + io::format_double(hbar) + ": " + e.what());
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const SweepRow& a, const SweepRow& b) { return a.hbar > b.hbar; });
  write_rows_csv((fs::path(out_dir) / "hartree_sweep.csv").string(), rows);
  add_fits(report, rows, {{"rho_L1", 0.5}, {"rho_L2", 0.5}, {"wigner_L2", 0.25}});
  finish_report(out_dir, cfg, report);
  return report.failures.empty() ? 0 : 3;
}

// Minimal CSV reader for files written by write_rows_csv (quoted aux field).
std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

int run_rates(const io::json& cfg, const std::string& out_dir) {
  if (!cfg.contains("inputs")) throw ConfigError("rates: config needs an `inputs` list of CSVs");
  std::map<std::string, std::vector<std::pair<double, double>>> by_quantity;
  for (const auto& in : cfg.at("inputs")) {
    const std::string path = in.get<std::string>();
    std::ifstream f(path);
    if (!f) throw ConfigError("rates: cannot open " + path);
    std::string line;
    std::getline(f, line); // header
    while (std::getline(f, line)) {
      if (line.empty()) continue;
      auto cells = split_csv_line(line);
      if (cells.size() < 4) continue;
      by_quantity[cells[2]].push_back({std::stod(cells[0]), std::stod(cells[3])});
    }
  }
  const double log_power = cfg.value("log_power", 0.0);
  Report report;
  for (const auto& [q, pts] : by_quantity) {
    double target = 0;
    if (cfg.contains("targets") && cfg.at("targets").contains(q))
      target = cfg.at("targets").at(q).get<double>();
    try {
      RateFit fit = fit_rate(pts, target, log_power);
      fit.quantity = q;
      report.fits.push_back(fit);
    } catch (const std::exception& e) {
      report.failures.push_back(q + ": " + e.what());
    }
  }
  finish_report(out_dir, cfg, report);
  return report.failures.empty() ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"semiclassical spectral-projector experiments"};
  app.require_subcommand(1);
  std::string config_path, out_dir = "out";
  unsigned seed = 0;
  app.add_option("--config", config_path, "JSON or INI config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "RNG seed (identity audits only)");
  for (const char* name : {"weyl", "comm", "besov", "agmon", "identities", "tf", "hartree", "rates"})
    app.add_subcommand(name)->fallthrough(); // shared options live on the parent
  CLI11_PARSE(app, argc, argv);
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    const io::json cfg = load_config_or_default(config_path);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory: " + out_dir);
    if (cmd == "weyl") return run_weyl(cfg, out_dir);
    if (cmd == "comm") return run_comm(cfg, out_dir);
    if (cmd == "besov") return run_besov(cfg, out_dir);
    if (cmd == "agmon") return run_agmon(cfg, out_dir);
    if (cmd == "identities") return run_identities(cfg, out_dir, seed);
    if (cmd == "tf") return run_tf(cfg, out_dir);
    if (cmd == "hartree") return run_hartree(cfg, out_dir);
    if (cmd == "rates") return run_rates(cfg, out_dir);
    std::cerr << "unknown subcommand: " << cmd << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
