#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

namespace nearinterp {

/// Uniform atomic measure (1/count) sum delta_{atom}. Atoms are sorted
/// ascending; atoms smaller in magnitude than 1e-12 times the largest are
/// clamped to zero.
class SpectralMeasure {
 public:
  explicit SpectralMeasure(std::vector<double> atoms);

  /// Eigenvalues of a symmetric matrix.
  static SpectralMeasure of_symmetric(const Eigen::MatrixXd& matrix);

  std::span<const double> atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }
  double weight() const { return 1.0 / static_cast<double>(atoms_.size()); }

 private:
  std::vector<double> atoms_;
};

/// Limit of cdf[esd(n^alpha Sigma)] for lambda_i = i^(-alpha), n/p -> gamma_star.
struct LimitCdf {
  double alpha;
  double gamma_star;

  void validate() const;
};

double esd_cdf(const SpectralMeasure& measure, double t);
double limit_cdf(const LimitCdf& limit, double t);

/// S(z) = (1/count) sum 1/(atom - z), for z below the smallest atom.
double stieltjes(const SpectralMeasure& measure, double z);

/// d/dr [r S(-r)] = (1/count) sum atom / (atom + r)^2.
double d_rS_dr(const SpectralMeasure& measure, double r);

/// |1 - r/k - (1/n) sum_i 1 / (1 + k n^(-alpha) / lambda_i)|.
double self_consistent_residual(std::span<const double> eigenvalues, long n, double r, double k,
                                double alpha);

/// Spectrum of scale * X^T X / n for a p x n matrix X.
SpectralMeasure gram_spectrum(const Eigen::MatrixXd& X, double scale);

/// |S_{esd(c Sigma_hat)}(z) - (gamma S_{esd(c G)}(z) - (1 - gamma)/z)| with
/// Sigma_hat = X X^T / n, G = X^T X / n, gamma = n / p. Requires p > n, z < 0.
double gram_to_covariance_check(const Eigen::MatrixXd& X, double c, double z);

struct PositivityConfig {
  double alpha = 1.75;
  double gamma = 0.5;
  long n = 400;
  std::vector<double> r_grid{0.01, 0.1, 1.0, 10.0, 100.0};
  int trials = 10;
  std::uint64_t seed = 0;
};

struct PositivityRow {
  double r;
  double mean_derivative;
  bool positive;
};

/// Averages d/dr [r S_{esd(n^alpha G)}(-r)] over HDA draws; trial t uses seed + t.
std::vector<PositivityRow> positivity_check(const PositivityConfig& config);

/// Same average over caller-supplied spectra.
std::vector<PositivityRow> positivity_from_measures(std::span<const SpectralMeasure> measures,
                                                    std::span<const double> r_grid);

struct CdfDeviation {
  double sup_deviation;
  double bound;  // 2/p + gamma/n
  long grid_points;
  long p;
};

/// sup_t |cdf[esd(n^alpha Sigma)](t) - limit(t)| over a log grid in
/// [gamma^alpha / 10, 10 n^alpha], skipping the window [gamma^alpha, gamma^alpha + 1/n].
CdfDeviation lsd_sup_deviation(double alpha, long n, long p, long grid_points = 10000);

}  // namespace nearinterp
