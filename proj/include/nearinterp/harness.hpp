#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nearinterp/eigenlearning.hpp"
#include "nearinterp/rmt.hpp"

namespace nearinterp {

enum class SweepKind { kTauGrid, kNGrid };

struct SweepConfig {
  AsymptoticRegime regime;
  SweepKind kind = SweepKind::kTauGrid;
  std::vector<double> grid;  // tau values, or sample sizes for kNGrid
  int trials_per_point = 10;
  std::uint64_t base_seed = 0;
  long n_fixed = 2000;     // sample size of a tau sweep
  double tau_fixed = 0.2;  // target train error of an n sweep
  long n_test = 0;         // > 0 replaces the analytic test MSE by a held-out estimate

  void validate() const;
};

struct SweepRow {
  double sweep_value;
  int trial;
  std::uint64_t seed;
  double k;
  double r;
  double rho_n;
  double train_mse;
  double test_mse;
  double sq_norm;

  bool operator==(const SweepRow&) const = default;
};

struct AggregateRow {
  double sweep_value;
  std::string metric;  // train_mse, test_mse or sq_norm
  double mean;
  double q20;
  double q50;
  double q80;
  double theory;  // NaN where no asymptotic prediction exists

  bool operator==(const AggregateRow& other) const;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<AggregateRow> aggregates;

  bool operator==(const SweepResult&) const = default;
};

struct ExponentFit {
  double slope;
  double intercept;
  double r_squared;
};

struct NormGrowthResult {
  SweepResult sweep;
  ExponentFit fit;
};

/// base_seed + point_index * 10^6 + trial_index.
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t point_index, std::size_t trial_index);

/// Linear interpolation between order statistics; `sorted` must be ascending.
double quantile(const std::vector<double>& sorted, double q);

/// Ordinary least squares of log(y) on log(x); needs >= 3 points.
ExponentFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys);

/// For each tau: select the regulariser, then fit ridge on trials_per_point
/// HDA draws at n = n_fixed, p = round(n / gamma).
SweepResult run_tradeoff_sweep(const SweepConfig& config);

/// For each n in the grid: rho_n = r n^(-alpha) with r fixed by tau_fixed,
/// then fit the log-log slope of the mean squared norm against n.
NormGrowthResult run_norm_growth_sweep(const SweepConfig& config);

struct DiagnosticReport {
  double alpha;
  double gamma;
  std::vector<PositivityRow> positivity;
  bool positivity_pass;
  CdfDeviation cdf;
  bool cdf_pass;
  double r;
  double k;
  long n_small;
  long n_large;
  double residual_small;
  double residual_large;
  bool residual_pass;

  bool all_pass() const { return positivity_pass && cdf_pass && residual_pass; }
};

/// Positivity table at n, esd-vs-limit CDF deviation at (n, n / gamma), and
/// the self-consistent residual at n / 4 and n for r = 1.
DiagnosticReport run_diagnostics(const AsymptoticRegime& regime, long n, std::uint64_t seed,
                                 int trials = 10);

enum class ExportFormat { kCsv, kJson };

/// CSV: rows at `path`, aggregates at the sibling `.agg.csv` file.
/// JSON: one document holding both tables. Throws IoError.
void export_result(const SweepResult& result, ExportFormat format, const std::string& path);

/// Path of the aggregate table written next to a CSV export.
std::string aggregate_path(const std::string& path);

/// Parses a JSON export back into a result. Throws IoError.
SweepResult read_json_result(const std::string& path);

}  // namespace nearinterp
