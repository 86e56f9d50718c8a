#pragma once

#include <span>

namespace nearinterp {

/// Limits of the power-law problem: spectrum lambda_i = i^(-alpha),
/// n / p -> gamma_star, noise variance sigma_sq. gamma_star = 0 means the
/// feature count grows infinitely faster than the sample count.
struct AsymptoticRegime {
  double alpha = 1.75;
  double gamma_star = 0.5;
  double sigma_sq = 1.0;

  void validate() const;
};

/// One point of the asymptotic train/test trade-off curve, parametrised by
/// the eff-reg-factor k (effective regulariser kappa = k n^(-alpha)).
struct EigenlearningPoint {
  double k;
  double r;        // regulariser-factor, rho_n = r n^(-alpha)
  double e_train;  // asymptotic expected train MSE
  double e_test;   // asymptotic test MSE
  double i_of_k;
  double j_of_k;
};

struct RegularizerChoice {
  double k;
  double r;
  double rho_n;
};

struct FiniteNPrediction {
  double kappa;
  double delta;
  double e_coef;
  double e_test_n;
  double e_train_n;
  double signal_term_c;
};

/// I(k) = int_0^{1/gamma} dx / (1 + k x^alpha). Infinite at k = 0 when gamma = 0.
double integral_i(const AsymptoticRegime& regime, double k);

/// J(k) = int_0^{1/gamma} dx / (1 + k x^alpha)^2.
double integral_j(const AsymptoticRegime& regime, double k);

/// R(k) = k (1 - I(k)). Negative below k_crit; defined for all k >= 0.
double r_of_k(const AsymptoticRegime& regime, double k);

/// Largest k >= 0 with R(k) = 0; zero when gamma >= 1.
double k_crit(const AsymptoticRegime& regime);

/// Unique k in (k_crit, inf) with R(k) = r.
double k_of_r(const AsymptoticRegime& regime, double r);

/// sigma^2 (1 - I)^2 / (1 - J) and sigma^2 / (1 - J). Requires k > k_crit.
double asymptotic_train_error(const AsymptoticRegime& regime, double k);
double asymptotic_test_error(const AsymptoticRegime& regime, double k);
EigenlearningPoint asymptotic_errors(const AsymptoticRegime& regime, double k);

/// Infimum of the asymptotic train error over (k_crit, inf). Zero in the
/// over-parameterised case; sigma^2 (1 - 1/gamma) when gamma > 1.
double train_error_floor(const AsymptoticRegime& regime);

/// Picks the regulariser whose asymptotic train error equals tau:
/// solves E_train(k) = tau, then r = R(k), rho_n = r n^(-alpha).
RegularizerChoice select_regularizer(const AsymptoticRegime& regime, double tau, long n);

/// Grid sign-check that E_train(k) is nondecreasing on (k_crit, inf).
/// Throws NumericalError naming the first offending pair of grid points.
void verify_train_error_monotone(const AsymptoticRegime& regime, int grid_points = 200);

/// Eigenlearning estimates at finite n for ridge with regulariser rho:
/// delta = n rho, kappa solves n = delta/kappa + sum lambda/(lambda + kappa).
FiniteNPrediction finite_n_prediction(std::span<const double> eigenvalues, double rho,
                                      double sigma_sq, std::span<const double> beta_star,
                                      long n);

}  // namespace nearinterp
