// Command-line front end: tradeoff, normgrowth, diagnose and solve.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nearinterp/eigenlearning.hpp"
#include "nearinterp/errors.hpp"
#include "nearinterp/harness.hpp"

namespace {

using nearinterp::ConfigError;

enum ExitCode { kOk = 0, kConfigError = 1, kNumericalFailure = 2, kIoError = 3 };

struct Options {
  std::optional<double> alpha;
  std::optional<double> gamma;
  double sigma_sq = 1.0;
  std::optional<long> n;
  std::optional<int> trials;
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "csv";
  std::optional<double> tau;
  std::optional<std::string> tau_grid;
  std::optional<std::string> n_grid;
  long n_test = 0;
  std::string config;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string part;
  while (std::getline(stream, part, sep)) parts.push_back(part);
  return parts;
}

double parse_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return value;
  } catch (const std::exception&) {
    throw ConfigError("cannot parse " + what + " component '" + text + "'");
  }
}

// lo:hi:count, linearly spaced.
std::vector<double> parse_tau_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw ConfigError("--tau-grid expects lo:hi:count");
  const double lo = parse_number(parts[0], "--tau-grid");
  const double hi = parse_number(parts[1], "--tau-grid");
  const double count = parse_number(parts[2], "--tau-grid");
  if (count < 1 || count != std::floor(count)) throw ConfigError("--tau-grid count must be a positive integer");
  if (count == 1) return {lo};
  std::vector<double> grid;
  for (int i = 0; i < static_cast<int>(count); ++i) grid.push_back(lo + (hi - lo) * i / (count - 1));
  return grid;
}

// lo:hi:count[:log|:lin], rounded to integers.
std::vector<double> parse_n_grid(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3 && parts.size() != 4) throw ConfigError("--n-grid expects lo:hi:count:log");
  const double lo = parse_number(parts[0], "--n-grid");
  const double hi = parse_number(parts[1], "--n-grid");
  const double count = parse_number(parts[2], "--n-grid");
  const bool log_spaced = parts.size() == 3 || parts[3] == "log";
  if (parts.size() == 4 && parts[3] != "log" && parts[3] != "lin")
    throw ConfigError("--n-grid spacing must be 'log' or 'lin'");
  if (!(lo >= 1) || !(hi >= lo)) throw ConfigError("--n-grid needs 1 <= lo <= hi");
  if (count < 1 || count != std::floor(count)) throw ConfigError("--n-grid count must be a positive integer");
  std::vector<double> grid;
  for (int i = 0; i < static_cast<int>(count); ++i) {
    const double t = count == 1 ? 0.0 : i / (count - 1);
    const double value = log_spaced ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                                    : lo + t * (hi - lo);
    grid.push_back(std::round(value));
  }
  return grid;
}

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--alpha", opt.alpha, "power-law exponent (> 1)");
  sub->add_option("--gamma", opt.gamma, "sample-to-feature ratio n/p");
  sub->add_option("--sigma-sq", opt.sigma_sq, "noise variance")->capture_default_str();
  sub->add_option("--n", opt.n, "number of samples");
  sub->add_option("--trials", opt.trials, "trials per sweep point");
  sub->add_option("--seed", opt.seed, "base seed")->capture_default_str();
  sub->add_option("--out", opt.out, "output path");
  sub->add_option("--format", opt.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--tau", opt.tau, "target train MSE");
  sub->add_option("--tau-grid", opt.tau_grid, "lo:hi:count");
  sub->add_option("--n-grid", opt.n_grid, "lo:hi:count:log");
  sub->add_option("--n-test", opt.n_test, "held-out samples for the test MSE (0 = analytic)");
  sub->add_option("--config", opt.config, "JSON file whose keys mirror the flags");
}

// Values from --config fill every flag that was not given on the command line.
void apply_config_file(const CLI::App& sub, Options& opt) {
  if (opt.config.empty()) return;
  std::ifstream in(opt.config);
  if (!in) throw nearinterp::IoError(opt.config, "cannot open config file");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(opt.config + ": " + e.what());
  }
  if (!doc.is_object()) throw ConfigError(opt.config + ": expected a JSON object");

  using Setter = std::function<void(const nlohmann::json&)>;
  const std::map<std::string, Setter> setters{
      {"alpha", [&](const auto& v) { opt.alpha = v.template get<double>(); }},
      {"gamma", [&](const auto& v) { opt.gamma = v.template get<double>(); }},
      {"sigma-sq", [&](const auto& v) { opt.sigma_sq = v.template get<double>(); }},
      {"n", [&](const auto& v) { opt.n = v.template get<long>(); }},
      {"trials", [&](const auto& v) { opt.trials = v.template get<int>(); }},
      {"seed", [&](const auto& v) { opt.seed = v.template get<std::uint64_t>(); }},
      {"out", [&](const auto& v) { opt.out = v.template get<std::string>(); }},
      {"format", [&](const auto& v) { opt.format = v.template get<std::string>(); }},
      {"tau", [&](const auto& v) { opt.tau = v.template get<double>(); }},
      {"tau-grid", [&](const auto& v) { opt.tau_grid = v.template get<std::string>(); }},
      {"n-grid", [&](const auto& v) { opt.n_grid = v.template get<std::string>(); }},
      {"n-test", [&](const auto& v) { opt.n_test = v.template get<long>(); }},
  };
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(opt.config + ": unknown key '" + key + "'");
    if (sub.count("--" + key) > 0) continue;
    try {
      it->second(value);
    } catch (const nlohmann::json::exception&) {
      throw ConfigError(opt.config + ": wrong type for key '" + key + "'");
    }
  }
  if (opt.format != "csv" && opt.format != "json") throw ConfigError("format must be csv or json");
}

nearinterp::AsymptoticRegime regime_of(const Options& opt, double alpha, double gamma) {
  nearinterp::AsymptoticRegime regime{opt.alpha.value_or(alpha), opt.gamma.value_or(gamma),
                                      opt.sigma_sq};
  try {
    regime.validate();
  } catch (const nearinterp::DomainError& e) {
    throw ConfigError(e.what());
  }
  return regime;
}

nearinterp::ExportFormat format_of(const Options& opt) {
  return opt.format == "json" ? nearinterp::ExportFormat::kJson : nearinterp::ExportFormat::kCsv;
}

std::string g17(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

void print_aggregates(const nearinterp::SweepResult& result, const char* label) {
  std::printf("%12s %10s %14s %14s %14s %14s\n", label, "metric", "mean", "q20", "q80", "theory");
  for (const auto& row : result.aggregates) {
    std::printf("%12.6g %10s %14.6g %14.6g %14.6g %14.6g\n", row.sweep_value, row.metric.c_str(),
                row.mean, row.q20, row.q80, row.theory);
  }
}

int run_tradeoff(const Options& opt) {
  nearinterp::SweepConfig config;
  config.regime = regime_of(opt, 1.75, 0.5);
  config.kind = nearinterp::SweepKind::kTauGrid;
  if (opt.tau_grid && opt.tau) throw ConfigError("give either --tau or --tau-grid");
  if (opt.tau)
    config.grid = {*opt.tau};
  else
    config.grid = parse_tau_grid(opt.tau_grid.value_or("0.05:0.8:16"));
  config.n_fixed = opt.n.value_or(2000);
  config.trials_per_point = opt.trials.value_or(10);
  config.base_seed = opt.seed;
  config.n_test = opt.n_test;
  const auto result = nearinterp::run_tradeoff_sweep(config);
  print_aggregates(result, "tau");
  if (!opt.out.empty()) nearinterp::export_result(result, format_of(opt), opt.out);
  return kOk;
}

int run_normgrowth(const Options& opt) {
  nearinterp::SweepConfig config;
  config.regime = regime_of(opt, 1.25, 2.0 / 3.0);
  config.kind = nearinterp::SweepKind::kNGrid;
  config.grid = parse_n_grid(opt.n_grid.value_or("200:3000:10:log"));
  config.tau_fixed = opt.tau.value_or(0.2);
  config.trials_per_point = opt.trials.value_or(10);
  config.base_seed = opt.seed;
  config.n_test = opt.n_test;
  const auto result = nearinterp::run_norm_growth_sweep(config);
  print_aggregates(result.sweep, "n");
  std::printf("slope=%s intercept=%s r_squared=%s\n", g17(result.fit.slope).c_str(),
              g17(result.fit.intercept).c_str(), g17(result.fit.r_squared).c_str());
  if (!opt.out.empty()) nearinterp::export_result(result.sweep, format_of(opt), opt.out);
  return kOk;
}

int run_diagnose(const Options& opt) {
  const auto regime = regime_of(opt, 1.75, 0.5);
  const long n = opt.n.value_or(500);
  const auto report = nearinterp::run_diagnostics(regime, n, opt.seed, opt.trials.value_or(10));

  auto verdict = [](bool pass) { return pass ? "PASS" : "FAIL"; };
  std::ostringstream text;
  text << "positivity (n=" << n << "): " << verdict(report.positivity_pass) << '\n';
  for (const auto& row : report.positivity)
    text << "  r=" << g17(row.r) << " mean_derivative=" << g17(row.mean_derivative) << '\n';
  text << "lsd cdf deviation (n=" << n << ", p=" << report.cdf.p
       << "): " << verdict(report.cdf_pass) << " sup=" << g17(report.cdf.sup_deviation)
       << " bound=" << g17(report.cdf.bound) << '\n';
  text << "self-consistent residual (r=1, k=" << g17(report.k) << "): "
       << verdict(report.residual_pass) << " n=" << report.n_small << ": "
       << g17(report.residual_small) << " n=" << report.n_large << ": "
       << g17(report.residual_large) << '\n';
  std::cout << text.str();

  if (!opt.out.empty()) {
    std::ofstream out(opt.out, std::ios::binary | std::ios::trunc);
    if (!out) throw nearinterp::IoError(opt.out, "cannot open for writing");
    if (opt.format == "json") {
      nlohmann::json doc;
      doc["alpha"] = report.alpha;
      doc["gamma"] = report.gamma;
      for (const auto& row : report.positivity)
        doc["positivity"].push_back({{"r", row.r}, {"mean_derivative", row.mean_derivative}});
      doc["positivity_pass"] = report.positivity_pass;
      doc["cdf"] = {{"sup_deviation", report.cdf.sup_deviation},
                    {"bound", report.cdf.bound},
                    {"p", report.cdf.p},
                    {"pass", report.cdf_pass}};
      doc["residual"] = {{"r", report.r},
                         {"k", report.k},
                         {"n_small", report.n_small},
                         {"n_large", report.n_large},
                         {"small", report.residual_small},
                         {"large", report.residual_large},
                         {"pass", report.residual_pass}};
      out << doc.dump(2) << '\n';
    } else {
      out << text.str();
    }
    if (!out.flush()) throw nearinterp::IoError(opt.out, "write failed");
  }
  return report.all_pass() ? kOk : kNumericalFailure;
}

int run_solve(const Options& opt) {
  const auto regime = regime_of(opt, 1.75, 0.5);
  if (!opt.tau) throw ConfigError("solve needs --tau");
  const long n = opt.n.value_or(2000);
  nearinterp::RegularizerChoice choice;
  try {
    choice = nearinterp::select_regularizer(regime, *opt.tau, n);
  } catch (const nearinterp::DomainError& e) {
    throw ConfigError(e.what());
  }
  std::printf("k=%s r=%s rho_n=%s\n", g17(choice.k).c_str(), g17(choice.r).c_str(),
              g17(choice.rho_n).c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Near-interpolating ridge regression under power-law spectra"};
  app.require_subcommand(1);
  Options opt;
  auto* tradeoff = app.add_subcommand("tradeoff", "train/test trade-off sweep over a tau grid");
  auto* normgrowth = app.add_subcommand("normgrowth", "squared-norm growth sweep over an n grid");
  auto* diagnose = app.add_subcommand("diagnose", "positivity, LSD and self-consistency checks");
  auto* solve = app.add_subcommand("solve", "print k, r and rho_n for a target train MSE");
  for (auto* sub : {tradeoff, normgrowth, diagnose, solve}) add_common(sub, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    const CLI::App* chosen = app.get_subcommands().front();
    apply_config_file(*chosen, opt);
    if (chosen == tradeoff) return run_tradeoff(opt);
    if (chosen == normgrowth) return run_normgrowth(opt);
    if (chosen == diagnose) return run_diagnose(opt);
    return run_solve(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const nearinterp::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kIoError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
}
