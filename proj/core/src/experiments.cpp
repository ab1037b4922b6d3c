#include "sclab/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <thread>
#include <tuple>

namespace sclab {

std::vector<double> geometric_sweep(double hi, double lo, int count) {
  if (!(hi > lo) || !(lo > 0) || count < 2)
    throw std::invalid_argument("geometric_sweep: need hi > lo > 0 and count >= 2");
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = hi * std::pow(lo / hi, double(i) / (count - 1));
  return out;
}

SweepConfig sweep_config_from_json(const io::json& j) {
  SweepConfig cfg;
  cfg.potential.kind = Potential::Kind::shifted_harmonic;
  if (j.contains("potential")) {
    const auto& p = j.at("potential");
    const std::string kind = p.value("kind", "shifted_harmonic");
    if (kind == "harmonic") cfg.potential.kind = Potential::Kind::harmonic;
    else if (kind == "shifted_harmonic") cfg.potential.kind = Potential::Kind::shifted_harmonic;
    else if (kind == "double_well") cfg.potential.kind = Potential::Kind::double_well;
    else if (kind == "gaussian_well") cfg.potential.kind = Potential::Kind::gaussian_well;
    else throw std::invalid_argument("unknown potential kind: " + kind);
    if (p.contains("parameters"))
      for (const auto& v : p.at("parameters")) cfg.potential.parameters.push_back(v.get<double>());
    cfg.potential.chemical_shift = p.value("chemical_shift", 0.0);
  }
  if (j.contains("kernel")) {
    InteractionKernel k;
    k.strength = j.at("kernel").value("strength", 0.0);
    k.exponent = j.at("kernel").value("exponent", 1.0);
    k.softening = j.at("kernel").value("softening", 0.0);
    cfg.kernel = k;
  }
  if (j.contains("hbar_values")) {
    for (const auto& v : j.at("hbar_values")) cfg.hbar_values.push_back(v.get<double>());
  } else {
    double hi = j.value("hbar_max", 0.4), lo = j.value("hbar_min", 0.02);
    int count = j.value("hbar_count", 12);
    cfg.hbar_values = geometric_sweep(hi, lo, count);
  }
  for (size_t i = 1; i < cfg.hbar_values.size(); ++i)
    if (!(cfg.hbar_values[i] < cfg.hbar_values[i - 1]) || !(cfg.hbar_values[i] > 0))
      throw std::invalid_argument("hbar_values must be strictly decreasing and positive");
  if (j.contains("quantities"))
    for (const auto& q : j.at("quantities")) cfg.quantities.push_back(q.get<std::string>());
  cfg.half_length = j.value("half_length", 6.0);
  cfg.dim = j.value("dim", 1);
  cfg.n_min = j.value("n_min", 128);
  cfg.n_max = j.value("n_max", 2048);
  cfg.lambda_cut = j.value("lambda_cut", 0.25);
  cfg.seed = j.value("seed", 0u);
  return cfg;
}

int grid_points_for(double hbar, const SweepConfig& cfg, double vminus_max) {
  const double L = cfg.half_length;
  const double n1 = 8 * L / std::sqrt(hbar);                              // dx <= sqrt(h)/4
  const double n2 = 3 * std::sqrt(vminus_max + 1) / hbar * (2 * L / M_PI); // Nyquist margin
  double need = std::max({n1, n2, double(cfg.n_min)});
  int n = cfg.n_min;
  while (n < need) n *= 2;
  return std::min(n, cfg.n_max);
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& points, double target,
                 double log_power) {
  RateFit fit;
  fit.target_exponent = target;
  for (const auto& p : points) {
    if (p.second > 0) fit.points.push_back(p);
    else ++fit.excluded;
  }
  if (fit.points.size() < 4) throw std::invalid_argument("fit_rate: need >= 4 usable points");
  auto least_squares = [&](bool corrected) {
    const size_t m = fit.points.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> xs(m), ys(m);
    for (size_t i = 0; i < m; ++i) {
      xs[i] = std::log(fit.points[i].first);
      double y = fit.points[i].second;
      if (corrected) y /= std::pow(std::abs(std::log(fit.points[i].first)), log_power);
      ys[i] = std::log(y);
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double icept = (sy - slope * sx) / m;
    double ssr = 0, sst = 0, mean = sy / m;
    for (size_t i = 0; i < m; ++i) {
      const double e = ys[i] - (slope * xs[i] + icept);
      ssr += e * e;
      sst += (ys[i] - mean) * (ys[i] - mean);
    }
    return std::tuple<double, double, double>(slope, icept, sst > 0 ? 1 - ssr / sst : 1.0);
  };
  std::tie(fit.slope, fit.intercept, fit.r_squared) = least_squares(false);
  if (log_power > 0) {
    auto [s, i, r] = least_squares(true);
    (void)i;
    (void)r;
    fit.log_corrected_slope = s;
  }
  return fit;
}

void parallel_for(int count, const std::function<void(int)>& fn) {
  int workers = int(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SEMICLASSICAL_LAB_THREADS")) {
    workers = std::max(1, std::atoi(env));
  }
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

SweepPoint solve_point(const SweepConfig& cfg, double hbar) {
  SweepPoint pt;
  pt.hbar = hbar;
  // probe V_- on a coarse grid for the resolution rule
  Grid probe = make_grid(cfg.dim, cfg.n_min, cfg.half_length);
  const double vminus = std::max(0.0, -cfg.potential.sample(probe).minCoeff());
  const int n = grid_points_for(hbar, cfg, vminus);
  pt.grid = make_grid(cfg.dim, n, cfg.half_length);
  pt.dec = diagonalize(build_hamiltonian(pt.grid, cfg.potential, hbar));
  pt.gamma = spectral_projector(pt.dec, -std::numeric_limits<double>::infinity(), 0.0, hbar);
  const auto occ = pt.dec.below(0.0);
  pt.occupied.resize(pt.grid.size(), occ.size());
  for (size_t c = 0; c < occ.size(); ++c) pt.occupied.col(c) = pt.dec.eigenvectors.col(occ[c]);
  return pt;
}

double commutator_block_norm(const SweepPoint& pt, const Mat& A_on_occupied, double p) {
  // Hermitian A: sigma([A, gamma]) is two copies of the off-block spectrum
  const Mat cols = pt.dec.eigenvectors.adjoint() * A_on_occupied;
  const auto occ = pt.dec.below(0.0);
  std::vector<char> in_occ(pt.dec.eigenvalues.size(), 0);
  for (int j : occ) in_occ[j] = 1;
  Mat block(pt.dec.eigenvalues.size() - occ.size(), cols.cols());
  long k = 0;
  for (long j = 0; j < pt.dec.eigenvalues.size(); ++j)
    if (!in_occ[j]) block.row(k++) = cols.row(j);
  const VecR s = singular_values(block);
  const double hd = std::pow(2 * M_PI * pt.hbar, pt.grid.dim);
  double acc = 0;
  for (long i = 0; i < s.size(); ++i) acc += std::pow(s[i], p);
  return hd * 2 * acc;
}

namespace {

std::vector<SweepRow> measure_point(const SweepConfig& cfg, const SweepPoint& pt) {
  std::vector<SweepRow> rows;
  const Grid& g = pt.grid;
  const double hbar = pt.hbar;
  auto push = [&](const std::string& q, double v, const std::string& aux = "{}") {
    rows.push_back({hbar, g.n, q, v, aux});
  };
  ClassicalSymbol sym;
  bool have_sym = false;
  auto need_sym = [&]() {
    if (!have_sym) {
      sym = classical_symbol(g, cfg.potential, 0.0, hbar);
      have_sym = true;
    }
  };
  for (const std::string& q : cfg.quantities) {
    if (q == "weyl_error") {
      auto rec = weyl_audit(g, cfg.potential, hbar, 0.0, &pt.dec);
      push(q, rec.error,
           "{\"quantum\":" + io::format_double(rec.quantum) +
               ",\"classical\":" + io::format_double(rec.classical) + "}");
    } else if (q == "comm_x_L1" || q == "comm_x_L2sq") {
      Mat xcols = pt.occupied;
      for (long i = 0; i < g.size(); ++i) xcols.row(i) *= g.coord(i, 0);
      push(q, commutator_block_norm(pt, xcols, q == "comm_x_L1" ? 1 : 2));
    } else if (q == "comm_p_L1" || q == "comm_p_L2sq") {
      Mat pcols = apply_momentum(g, hbar, 0, pt.occupied);
      push(q, commutator_block_norm(pt, pcols, q == "comm_p_L1" ? 1 : 2));
    } else if (q == "besov_2") {
      std::vector<ShiftVector> samples;
      for (int k = 1; k <= 4; ++k) {
        const double t = std::pow(2.0, -k);
        ShiftVector zx{VecR::Constant(1, t), VecR::Zero(1)};
        ShiftVector zxi{VecR::Zero(1), VecR::Constant(1, t)};
        samples.push_back(snap_shift(g, hbar, zx));
        samples.push_back(snap_shift(g, hbar, zxi));
      }
      push(q, besov_seminorm(pt.gamma, 2.0, 0.5, samples));
    } else if (q == "rho_L1" || q == "rho_L2") {
      need_sym();
      const VecR rho = density_of(pt.gamma);
      const VecR diff = rho - sym.rho.values.real();
      push(q, q == "rho_L1" ? diff.cwiseAbs().sum() * g.cell()
                            : std::sqrt(diff.cwiseAbs2().sum() * g.cell()));
    } else if (q == "wigner_L2") {
      need_sym();
      PhaseSpaceField f = wigner(pt.gamma);
      push(q, std::sqrt((f.values - sym.f.values).cwiseAbs2().sum() * g.cell() * f.dxi()));
    } else if (q == "state_L1") {
      need_sym();
      DensityOperator opf = weyl_quantize(sym.f);
      push(q, schatten_norm(pt.gamma.matrix - opf.matrix, 1.0, hbar, g.dim));
    } else {
      throw std::invalid_argument("unknown sweep quantity: " + q);
    }
  }
  return rows;
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, Report* report) {
  const int count = int(cfg.hbar_values.size());
  std::vector<std::vector<SweepRow>> per_point(count);
  std::vector<std::string> failures(count);
  parallel_for(count, [&](int i) {
    try {
      SweepPoint pt = solve_point(cfg, cfg.hbar_values[i]);
      per_point[i] = measure_point(cfg, pt);
    } catch (const std::exception& e) {
      failures[i] = "hbar=" + io::format_double(cfg.hbar_values[i]) + ": " + e.what();
    }
  });
  std::vector<SweepRow> rows;
  for (int i = 0; i < count; ++i)
    for (auto& r : per_point[i]) rows.push_back(std::move(r));
  if (report) {
    for (const auto& f : failures)
      if (!f.empty()) report->failures.push_back(f);
  }
  return rows;
}

void write_rows_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  io::CsvWriter csv(path, {"hbar", "n", "quantity", "value", "aux"});
  for (const auto& r : rows)
    csv.row({io::format_double(r.hbar), std::to_string(r.n), r.quantity,
             io::format_double(r.value), r.aux});
}

void write_report_json(const std::string& path, const Report& report) {
  io::json j;
  j["config_echo"] = report.config_echo;
  j["fits"] = io::json::array();
  for (const auto& f : report.fits) {
    io::json jf;
    jf["quantity"] = f.quantity;
    jf["slope"] = f.slope;
    jf["intercept"] = f.intercept;
    jf["r_squared"] = f.r_squared;
    jf["target_exponent"] = f.target_exponent;
    jf["log_corrected_slope"] = f.log_corrected_slope;
    jf["excluded"] = f.excluded;
    io::json pts = io::json::array();
    for (const auto& p : f.points) pts.push_back({p.first, p.second});
    jf["points"] = pts;
    j["fits"].push_back(jf);
  }
  j["audits"] = io::json::array();
  for (const auto& a : report.audits) {
    io::json ja;
    ja["name"] = a.name;
    ja["lhs"] = a.lhs;
    ja["rhs"] = a.rhs;
    ja["margin"] = a.margin;
    ja["lambda"] = a.lambda;
    ja["mu"] = a.mu;
    j["audits"].push_back(ja);
  }
  j["failures"] = report.failures;
  if (!report.extra.empty()) j["extra"] = report.extra;
  io::write_text(path, j.dump(2) + "\n");
}

} // namespace sclab
