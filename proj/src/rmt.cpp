#include "nearinterp/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nearinterp/errors.hpp"
#include "nearinterp/parallel.hpp"
#include "nearinterp/regression.hpp"

namespace nearinterp {

SpectralMeasure::SpectralMeasure(std::vector<double> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw DomainError("spectral measure: no atoms");
  double largest = 0.0;
  for (double a : atoms_) {
    if (!std::isfinite(a)) throw NumericalError("spectral measure: non-finite atom");
    largest = std::max(largest, std::abs(a));
  }
  const double floor = 1e-12 * largest;
  for (double& a : atoms_)
    if (std::abs(a) < floor) a = 0.0;
  std::sort(atoms_.begin(), atoms_.end());
}

SpectralMeasure SpectralMeasure::of_symmetric(const Eigen::MatrixXd& matrix) {
  if (!matrix.allFinite()) throw NumericalError("spectral measure: non-finite matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(matrix, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw NumericalError("spectral measure: eigensolver failed");
  const Eigen::VectorXd& values = eig.eigenvalues();
  return SpectralMeasure(std::vector<double>(values.begin(), values.end()));
}

void LimitCdf::validate() const {
  if (!(alpha > 1.0)) throw DomainError("limit cdf: alpha must be > 1");
  if (!(gamma_star > 0.0)) throw DomainError("limit cdf: gamma_star must be > 0");
}

double esd_cdf(const SpectralMeasure& measure, double t) {
  const auto atoms = measure.atoms();
  const auto count = std::upper_bound(atoms.begin(), atoms.end(), t) - atoms.begin();
  return static_cast<double>(count) * measure.weight();
}

double limit_cdf(const LimitCdf& limit, double t) {
  limit.validate();
  if (t < std::pow(limit.gamma_star, limit.alpha)) return 0.0;
  return 1.0 - limit.gamma_star * std::pow(t, -1.0 / limit.alpha);
}

double stieltjes(const SpectralMeasure& measure, double z) {
  const auto atoms = measure.atoms();
  if (!(z < atoms.front()))
    throw DomainError("stieltjes: z = " + std::to_string(z) + " is not below the support");
  double sum = 0.0;
  for (double a : atoms) sum += 1.0 / (a - z);
  return sum * measure.weight();
}

double d_rS_dr(const SpectralMeasure& measure, double r) {
  if (!(r > 0.0)) throw DomainError("d_rS_dr: r must be > 0");
  const auto atoms = measure.atoms();
  if (!(-r < atoms.front())) throw DomainError("d_rS_dr: -r is not below the support");
  double sum = 0.0;
  for (double a : atoms) sum += a / ((a + r) * (a + r));
  return sum * measure.weight();
}

double self_consistent_residual(std::span<const double> eigenvalues, long n, double r, double k,
                                double alpha) {
  if (n < 1) throw DomainError("self_consistent_residual: n must be >= 1");
  if (!(k > 0.0)) throw DomainError("self_consistent_residual: k must be > 0");
  const double nn = static_cast<double>(n);
  const double scaled_k = k * std::pow(nn, -alpha);
  double sum = 0.0;
  for (double lambda : eigenvalues) sum += lambda / (lambda + scaled_k);
  return std::abs(1.0 - r / k - sum / nn);
}

SpectralMeasure gram_spectrum(const Eigen::MatrixXd& X, double scale) {
  const double n = static_cast<double>(X.cols());
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(X.cols(), X.cols());
  gram.selfadjointView<Eigen::Lower>().rankUpdate(X.transpose(), scale / n);
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  return SpectralMeasure::of_symmetric(gram);
}

double gram_to_covariance_check(const Eigen::MatrixXd& X, double c, double z) {
  const long p = X.rows();
  const long n = X.cols();
  if (!(p > n)) throw DomainError("gram_to_covariance_check: requires p > n");
  if (!(z < 0.0)) throw DomainError("gram_to_covariance_check: requires z < 0");
  if (!X.allFinite()) throw NumericalError("gram_to_covariance_check: non-finite input");
  const double inv_n = 1.0 / static_cast<double>(n);
  const Eigen::MatrixXd covariance = c * inv_n * X * X.transpose();
  const auto left = stieltjes(SpectralMeasure::of_symmetric(covariance), z);
  const auto gram = stieltjes(gram_spectrum(X, c), z);
  const double gamma = static_cast<double>(n) / static_cast<double>(p);
  const double right = gamma * gram - (1.0 - gamma) / z;
  return std::abs(left - right);
}

std::vector<PositivityRow> positivity_from_measures(std::span<const SpectralMeasure> measures,
                                                    std::span<const double> r_grid) {
  if (measures.empty()) throw DomainError("positivity: no spectra");
  std::vector<PositivityRow> rows;
  rows.reserve(r_grid.size());
  for (double r : r_grid) {
    double sum = 0.0;
    for (const auto& m : measures) sum += d_rS_dr(m, r);
    const double mean = sum / static_cast<double>(measures.size());
    rows.push_back({r, mean, mean > 0.0});
  }
  return rows;
}

std::vector<PositivityRow> positivity_check(const PositivityConfig& config) {
  if (config.trials < 1) throw DomainError("positivity: trials must be >= 1");
  if (!(config.gamma > 0.0)) throw DomainError("positivity: gamma must be > 0");
  for (double r : config.r_grid)
    if (!(r > 0.0)) throw DomainError("positivity: r grid must be positive");
  const long p = std::lround(static_cast<double>(config.n) / config.gamma);
  const double scale = std::pow(static_cast<double>(config.n), config.alpha);

  std::vector<std::vector<double>> spectra(config.trials);
  parallel_for(spectra.size(), [&](std::size_t t) {
    const Dataset data = generate({.n = config.n,
                                   .p = p,
                                   .alpha = config.alpha,
                                   .sigma_sq = 0.0,
                                   .beta_star_scale = 0.0,
                                   .seed = config.seed + t});
    const auto measure = gram_spectrum(data.X, scale);
    spectra[t].assign(measure.atoms().begin(), measure.atoms().end());
  });

  std::vector<SpectralMeasure> measures;
  measures.reserve(spectra.size());
  for (auto& s : spectra) measures.emplace_back(std::move(s));
  return positivity_from_measures(measures, config.r_grid);
}

CdfDeviation lsd_sup_deviation(double alpha, long n, long p, long grid_points) {
  if (n < 1 || p < 1) throw DomainError("lsd_sup_deviation: n and p must be >= 1");
  if (grid_points < 2) throw DomainError("lsd_sup_deviation: need >= 2 grid points");
  const double nn = static_cast<double>(n);
  const double gamma = nn / static_cast<double>(p);
  std::vector<double> atoms(p);
  for (long i = 0; i < p; ++i) atoms[i] = std::pow(nn / static_cast<double>(i + 1), alpha);
  const SpectralMeasure measure(std::move(atoms));
  const LimitCdf limit{alpha, gamma};

  const double edge = std::pow(gamma, alpha);
  const double lo = std::log(edge / 10.0);
  const double hi = std::log(10.0 * std::pow(nn, alpha));
  double sup = 0.0;
  for (long g = 0; g < grid_points; ++g) {
    const double t = std::exp(lo + (hi - lo) * static_cast<double>(g) / (grid_points - 1));
    if (t >= edge && t <= edge + 1.0 / nn) continue;
    sup = std::max(sup, std::abs(esd_cdf(measure, t) - limit_cdf(limit, t)));
  }
  return {sup, 2.0 / static_cast<double>(p) + gamma / nn, grid_points, p};
}

}  // namespace nearinterp
