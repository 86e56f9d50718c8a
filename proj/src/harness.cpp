#include "nearinterp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include "json.hpp"
#include <numeric>
#include <sstream>

#include "nearinterp/errors.hpp"
#include "nearinterp/parallel.hpp"
#include "nearinterp/regression.hpp"

namespace nearinterp {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool same_double(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

long features_for(long n, double gamma) {
  return std::max(1L, std::lround(static_cast<double>(n) / gamma));
}

struct PointPlan {
  double sweep_value;
  long n;
  RegularizerChoice choice;
  EigenlearningPoint theory;
};

std::string describe_point(SweepKind kind, double value, int trial) {
  std::ostringstream out;
  out << (kind == SweepKind::kTauGrid ? "tau=" : "n=") << value << ", trial=" << trial;
  return out.str();
}

SweepResult run_points(const SweepConfig& config, const std::vector<PointPlan>& plans) {
  const auto trials = static_cast<std::size_t>(config.trials_per_point);
  SweepResult result;
  result.rows.resize(plans.size() * trials);

  for (std::size_t point = 0; point < plans.size(); ++point) {
    const PointPlan& plan = plans[point];
    parallel_for(trials, [&](std::size_t trial) {
      const std::uint64_t seed = trial_seed(config.base_seed, point, trial);
      try {
        const Dataset data = generate({.n = plan.n,
                                       .p = features_for(plan.n, config.regime.gamma_star),
                                       .alpha = config.regime.alpha,
                                       .sigma_sq = config.regime.sigma_sq,
                                       .beta_star_scale = std::nullopt,
                                       .seed = seed});
        const RidgeFit fit = fit_ridge(data, plan.choice.rho_n);
        double test = fit.test_mse_analytic;
        if (config.n_test > 0) test = test_mse_empirical(fit.beta_hat, data, config.n_test, seed).mean;
        if (!std::isfinite(fit.train_mse) || !std::isfinite(test) || !std::isfinite(fit.sq_norm))
          throw NumericalError("non-finite metric");
        result.rows[point * trials + trial] = {plan.sweep_value, static_cast<int>(trial), seed,
                                               plan.choice.k,    plan.choice.r,
                                               plan.choice.rho_n, fit.train_mse,
                                               test,             fit.sq_norm};
      } catch (const std::exception& e) {
        throw NumericalError(describe_point(config.kind, plan.sweep_value, static_cast<int>(trial)) +
                             ": " + e.what());
      }
    });
  }

  for (std::size_t point = 0; point < plans.size(); ++point) {
    const PointPlan& plan = plans[point];
    const auto begin = result.rows.begin() + static_cast<long>(point * trials);
    const std::pair<const char*, double SweepRow::*> metrics[] = {
        {"train_mse", &SweepRow::train_mse},
        {"test_mse", &SweepRow::test_mse},
        {"sq_norm", &SweepRow::sq_norm}};
    const double theory[] = {plan.theory.e_train, plan.theory.e_test, kNaN};
    for (std::size_t m = 0; m < std::size(metrics); ++m) {
      std::vector<double> values;
      values.reserve(trials);
      for (auto it = begin; it != begin + static_cast<long>(trials); ++it)
        values.push_back((*it).*(metrics[m].second));
      const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                          static_cast<double>(values.size());
      std::sort(values.begin(), values.end());
      result.aggregates.push_back({plan.sweep_value, metrics[m].first, mean,
                                   quantile(values, 0.2), quantile(values, 0.5),
                                   quantile(values, 0.8), theory[m]});
    }
  }
  return result;
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path, "cannot open for writing");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

nlohmann::json number_or_null(double value) {
  return std::isnan(value) ? nlohmann::json(nullptr) : nlohmann::json(value);
}

}  // namespace

bool AggregateRow::operator==(const AggregateRow& other) const {
  return same_double(sweep_value, other.sweep_value) && metric == other.metric &&
         same_double(mean, other.mean) && same_double(q20, other.q20) &&
         same_double(q50, other.q50) && same_double(q80, other.q80) &&
         same_double(theory, other.theory);
}

void SweepConfig::validate() const {
  try {
    regime.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (!(regime.gamma_star > 0.0)) throw ConfigError("sweeps need gamma > 0");
  if (grid.empty()) throw ConfigError("sweep grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ConfigError("sweep grid must be strictly increasing");
  if (trials_per_point < 1) throw ConfigError("trials per point must be >= 1");
  if (n_test < 0) throw ConfigError("n_test must be >= 0");
  const double floor = train_error_floor(regime);
  auto check_tau = [&](double tau) {
    if (!(tau > floor && tau < regime.sigma_sq))
      throw ConfigError("tau = " + format_double(tau) + " must lie in (" + format_double(floor) +
                        ", " + format_double(regime.sigma_sq) + ")");
  };
  if (kind == SweepKind::kTauGrid) {
    if (n_fixed < 1) throw ConfigError("n must be >= 1");
    for (double tau : grid) check_tau(tau);
  } else {
    check_tau(tau_fixed);
    for (double n : grid)
      if (!(n >= 1.0) || n != std::floor(n)) throw ConfigError("n grid must hold positive integers");
  }
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t point_index, std::size_t trial_index) {
  return base_seed + static_cast<std::uint64_t>(point_index) * 1000000ULL +
         static_cast<std::uint64_t>(trial_index);
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw DomainError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

ExponentFit fit_power_law(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw DomainError("fit_power_law: length mismatch");
  if (xs.size() < 3) throw DomainError("fit_power_law: need at least 3 points");
  const double m = static_cast<double>(xs.size());
  std::vector<double> lx(xs.size());
  std::vector<double> ly(ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw DomainError("fit_power_law: values must be > 0");
    lx[i] = std::log(xs[i]);
    ly[i] = std::log(ys[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / m;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw DomainError("fit_power_law: x values are all equal");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double e = ly[i] - (intercept + slope * lx[i]);
    ss_res += e * e;
  }
  const double r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return {slope, intercept, std::clamp(r2, 0.0, 1.0)};
}

SweepResult run_tradeoff_sweep(const SweepConfig& config) {
  if (config.kind != SweepKind::kTauGrid) throw ConfigError("tradeoff sweep needs a tau grid");
  config.validate();
  verify_train_error_monotone(config.regime);
  std::vector<PointPlan> plans;
  for (double tau : config.grid) {
    const auto choice = select_regularizer(config.regime, tau, config.n_fixed);
    plans.push_back({tau, config.n_fixed, choice, asymptotic_errors(config.regime, choice.k)});
  }
  return run_points(config, plans);
}

NormGrowthResult run_norm_growth_sweep(const SweepConfig& config) {
  if (config.kind != SweepKind::kNGrid) throw ConfigError("norm-growth sweep needs an n grid");
  config.validate();
  verify_train_error_monotone(config.regime);
  // k and r do not depend on n; only rho_n = r n^(-alpha) does.
  const auto base = select_regularizer(config.regime, config.tau_fixed, 1);
  const auto theory = asymptotic_errors(config.regime, base.k);
  std::vector<PointPlan> plans;
  for (double n_value : config.grid) {
    const long n = std::lround(n_value);
    const RegularizerChoice choice{base.k, base.r,
                                   base.r * std::pow(static_cast<double>(n), -config.regime.alpha)};
    plans.push_back({n_value, n, choice, theory});
  }
  NormGrowthResult out{run_points(config, plans), {}};
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& agg : out.sweep.aggregates) {
    if (agg.metric != "sq_norm") continue;
    xs.push_back(agg.sweep_value);
    ys.push_back(agg.mean);
  }
  out.fit = fit_power_law(xs, ys);
  return out;
}

DiagnosticReport run_diagnostics(const AsymptoticRegime& regime, long n, std::uint64_t seed,
                                 int trials) {
  regime.validate();
  if (!(regime.gamma_star > 0.0)) throw ConfigError("diagnostics need gamma > 0");
  if (n < 8) throw ConfigError("diagnostics need n >= 8");
  DiagnosticReport report{};
  report.alpha = regime.alpha;
  report.gamma = regime.gamma_star;

  PositivityConfig positivity;
  positivity.alpha = regime.alpha;
  positivity.gamma = regime.gamma_star;
  positivity.n = n;
  positivity.trials = trials;
  positivity.seed = seed;
  report.positivity = positivity_check(positivity);
  report.positivity_pass = std::all_of(report.positivity.begin(), report.positivity.end(),
                                       [](const PositivityRow& row) { return row.positive; });

  report.cdf = lsd_sup_deviation(regime.alpha, n, features_for(n, regime.gamma_star));
  report.cdf_pass = report.cdf.sup_deviation <= report.cdf.bound;

  report.r = 1.0;
  report.k = k_of_r(regime, report.r);
  report.n_small = n / 4;
  report.n_large = n;
  auto residual_at = [&](long size) {
    const long p = features_for(size, regime.gamma_star);
    std::vector<double> eigenvalues(p);
    for (long i = 0; i < p; ++i) eigenvalues[i] = std::pow(static_cast<double>(i + 1), -regime.alpha);
    return self_consistent_residual(eigenvalues, size, report.r, report.k, regime.alpha);
  };
  report.residual_small = residual_at(report.n_small);
  report.residual_large = residual_at(report.n_large);
  report.residual_pass = report.residual_large < report.residual_small;
  return report;
}

std::string aggregate_path(const std::string& path) {
  const std::string ext = ".csv";
  if (path.size() >= ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
    return path.substr(0, path.size() - ext.size()) + ".agg.csv";
  return path + ".agg.csv";
}

void export_result(const SweepResult& result, ExportFormat format, const std::string& path) {
  if (format == ExportFormat::kCsv) {
    auto out = open_for_write(path);
    out << "sweep_value,trial,seed,k,r,rho_n,train_mse,test_mse,sq_norm\n";
    for (const auto& row : result.rows) {
      out << format_double(row.sweep_value) << ',' << row.trial << ',' << row.seed << ','
          << format_double(row.k) << ',' << format_double(row.r) << ','
          << format_double(row.rho_n) << ',' << format_double(row.train_mse) << ','
          << format_double(row.test_mse) << ',' << format_double(row.sq_norm) << '\n';
    }
    finish(out, path);

    const std::string agg = aggregate_path(path);
    auto agg_out = open_for_write(agg);
    agg_out << "sweep_value,metric,mean,q20,q50,q80,theory\n";
    for (const auto& row : result.aggregates) {
      agg_out << format_double(row.sweep_value) << ',' << row.metric << ','
              << format_double(row.mean) << ',' << format_double(row.q20) << ','
              << format_double(row.q50) << ',' << format_double(row.q80) << ','
              << format_double(row.theory) << '\n';
    }
    finish(agg_out, agg);
    return;
  }

  nlohmann::json doc;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : result.rows) {
    doc["rows"].push_back({{"sweep_value", row.sweep_value},
                           {"trial", row.trial},
                           {"seed", row.seed},
                           {"k", row.k},
                           {"r", row.r},
                           {"rho_n", row.rho_n},
                           {"train_mse", row.train_mse},
                           {"test_mse", row.test_mse},
                           {"sq_norm", row.sq_norm}});
  }
  doc["aggregates"] = nlohmann::json::array();
  for (const auto& row : result.aggregates) {
    doc["aggregates"].push_back({{"sweep_value", row.sweep_value},
                                 {"metric", row.metric},
                                 {"mean", number_or_null(row.mean)},
                                 {"q20", number_or_null(row.q20)},
                                 {"q50", number_or_null(row.q50)},
                                 {"q80", number_or_null(row.q80)},
                                 {"theory", number_or_null(row.theory)}});
  }
  auto out = open_for_write(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

SweepResult read_json_result(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open for reading");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path, std::string("malformed JSON: ") + e.what());
  }
  auto number = [](const nlohmann::json& v) { return v.is_null() ? kNaN : v.get<double>(); };
  SweepResult result;
  try {
    for (const auto& row : doc.at("rows")) {
      result.rows.push_back({row.at("sweep_value").get<double>(), row.at("trial").get<int>(),
                             row.at("seed").get<std::uint64_t>(), row.at("k").get<double>(),
                             row.at("r").get<double>(), row.at("rho_n").get<double>(),
                             row.at("train_mse").get<double>(), row.at("test_mse").get<double>(),
                             row.at("sq_norm").get<double>()});
    }
    for (const auto& row : doc.at("aggregates")) {
      result.aggregates.push_back({row.at("sweep_value").get<double>(),
                                   row.at("metric").get<std::string>(), number(row.at("mean")),
                                   number(row.at("q20")), number(row.at("q50")),
                                   number(row.at("q80")), number(row.at("theory"))});
    }
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path, std::string("unexpected JSON schema: ") + e.what());
  }
  return result;
}

}  // namespace nearinterp
