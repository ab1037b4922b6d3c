#pragma once
// hbar-sweep orchestration, log-log rate fits, and report generation.

#include <functional>
#include <optional>

#include "sclab/io.hpp"
#include "sclab/meanfield.hpp"
#include "sclab/phasespace.hpp"
#include "sclab/schatten.hpp"

namespace sclab {

struct SweepConfig {
  Potential potential;                      // defaults to |x|^2 - 1
  std::optional<InteractionKernel> kernel;  // mean-field runs only
  std::vector<double> hbar_values;          // strictly decreasing, positive
  std::vector<std::string> quantities;
  double half_length = 6.0;
  int dim = 1;
  int n_min = 128;
  int n_max = 2048;
  double lambda_cut = 0.25; // audit window epsilon_0
  unsigned seed = 0;
};

// 12 geometric points from 0.4 down to 0.02 unless overridden.
std::vector<double> geometric_sweep(double hi, double lo, int count);

SweepConfig sweep_config_from_json(const io::json& j);

// Grid-growth policy: dx <= sqrt(hbar)/4 and Nyquist at 3x the physical
// momentum, rounded up to a power of two within [n_min, n_max].
int grid_points_for(double hbar, const SweepConfig& cfg, double vminus_max);

struct SweepRow {
  double hbar = 0;
  int n = 0;
  std::string quantity;
  double value = 0;
  std::string aux; // JSON fragment
};

struct RateFit {
  std::string quantity;
  std::vector<std::pair<double, double>> points; // (hbar, value), positives only
  double slope = 0, intercept = 0, r_squared = 0;
  double target_exponent = 0;
  double log_corrected_slope = 0; // only meaningful when log_power > 0
  int excluded = 0;               // non-positive values dropped before the fit
};

RateFit fit_rate(const std::vector<std::pair<double, double>>& points, double target,
                 double log_power = 0);

struct Report {
  io::json config_echo;
  std::vector<RateFit> fits;
  std::vector<BoundAudit> audits;
  std::vector<std::string> failures;
  io::json extra = io::json::object();
};

// One solved sweep point, shared by all per-point measurements.
struct SweepPoint {
  double hbar = 0;
  Grid grid;
  SpectralDecomposition dec;
  DensityOperator gamma;
  Mat occupied; // eigenvector columns with lambda <= 0
};

SweepPoint solve_point(const SweepConfig& cfg, double hbar);

// Evaluates the named quantities at each sweep point (worker pool honours
// SEMICLASSICAL_LAB_THREADS); per-point failures are recorded, not fatal.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, Report* report = nullptr);

void write_rows_csv(const std::string& path, const std::vector<SweepRow>& rows);
void write_report_json(const std::string& path, const Report& report);

// Bounded worker pool over [0, count).
void parallel_for(int count, const std::function<void(int)>& fn);

// Commutator Schatten norms h^d Tr |[A, gamma]|^p via the occupied/virtual
// block structure; A is given by its action on column blocks.
double commutator_block_norm(const SweepPoint& pt, const Mat& A_on_occupied, double p);

} // namespace sclab
