#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace nearinterp {

/// Gaussian design with diagonal power-law covariance lambda_i = i^(-alpha):
/// x = Sigma^(1/2) z, beta*_i ~ N(0, beta_star_scale), y = x^T beta* + eps,
/// eps ~ N(0, sigma_sq).
struct DataModel {
  long n = 0;
  long p = 0;
  double alpha = 1.75;
  double sigma_sq = 1.0;
  std::optional<double> beta_star_scale;  // per-coordinate variance; 10/p when unset
  std::uint64_t seed = 0;

  void validate() const;
  double effective_beta_star_scale() const;
};

struct Dataset {
  Eigen::MatrixXd X;  // p x n, columns are samples
  Eigen::VectorXd y;
  Eigen::VectorXd beta_star;
  Eigen::VectorXd eigenvalues;
  double sigma_sq = 0.0;
  std::uint64_t seed = 0;

  long n() const { return static_cast<long>(X.cols()); }
  long p() const { return static_cast<long>(X.rows()); }
};

struct RidgeFit {
  Eigen::VectorXd beta_hat;
  double rho = 0.0;
  double train_mse = 0.0;
  double test_mse_analytic = 0.0;
  double sq_norm = 0.0;
};

struct EmpiricalTestMse {
  double mean;
  double std_error;
};

/// Smallest regulariser passed to a solver; smaller positive values are clamped.
inline constexpr double kMinRho = 1e-300;

Dataset generate(const DataModel& model);

/// Ridge regressor argmin (1/n)|X^T b - y|^2 + rho |b|^2. Uses the n x n dual
/// system X (X^T X + n rho I)^(-1) y when p > n, the p x p primal system otherwise.
RidgeFit fit_ridge(const Dataset& data, double rho);
RidgeFit fit_ridge_primal(const Dataset& data, double rho);
RidgeFit fit_ridge_dual(const Dataset& data, double rho);

/// sigma^2 + sum_i lambda_i (beta_hat_i - beta*_i)^2: the test MSE of beta_hat
/// on a fresh Gaussian sample from the same model.
double test_mse_analytic(const Eigen::VectorXd& beta_hat, const Dataset& data, double sigma_sq);

/// Held-out estimate on n_test fresh samples drawn from a stream keyed by seed.
EmpiricalTestMse test_mse_empirical(const Eigen::VectorXd& beta_hat, const Dataset& data,
                                    long n_test, std::uint64_t seed);

/// Ridge path from one thin SVD of X; entry i solves for rho_list[i].
std::vector<RidgeFit> sweep_rho(const Dataset& data, std::span<const double> rho_list);

/// (sigma^2 / n) tr((Sigma_hat + rho I)^(-2) Sigma_hat): the expected squared
/// norm of the ridge fit to pure noise, conditional on X.
double expected_noise_norm(const Dataset& data, double rho);

}  // namespace nearinterp
