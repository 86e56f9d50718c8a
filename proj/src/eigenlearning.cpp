#include "nearinterp/eigenlearning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nearinterp/errors.hpp"
#include "nearinterp/roots.hpp"
#include "nearinterp/specfun.hpp"

namespace nearinterp {
namespace {

// int_0^inf dx / (1 + x^alpha) = pi / (alpha sin(pi / alpha)).
double unbounded_integral_constant(double alpha) {
  return std::numbers::pi / (alpha * std::sin(std::numbers::pi / alpha));
}

double integral_family(const AsymptoticRegime& regime, double k, double a) {
  regime.validate();
  if (!(k >= 0.0) || !std::isfinite(k)) throw DomainError("k must be a finite value >= 0");
  const double alpha = regime.alpha;
  const double gamma = regime.gamma_star;
  if (gamma == 0.0) {
    if (k == 0.0) return std::numeric_limits<double>::infinity();
    const double i_value = std::pow(k, -1.0 / alpha) * unbounded_integral_constant(alpha);
    return a == 1.0 ? i_value : (1.0 - 1.0 / alpha) * i_value;
  }
  const double b = 1.0 / alpha;
  const double z = -k * std::pow(gamma, -alpha);
  return hyp2f1({a, b, 1.0 + b, z}) / gamma;
}

}  // namespace

void AsymptoticRegime::validate() const {
  if (!(alpha > 1.0) || !std::isfinite(alpha)) throw DomainError("alpha must be > 1");
  if (!(gamma_star >= 0.0) || !std::isfinite(gamma_star))
    throw DomainError("gamma_star must be finite and >= 0");
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq))
    throw DomainError("sigma_sq must be finite and > 0");
}

double integral_i(const AsymptoticRegime& regime, double k) {
  return integral_family(regime, k, 1.0);
}

double integral_j(const AsymptoticRegime& regime, double k) {
  return integral_family(regime, k, 2.0);
}

double r_of_k(const AsymptoticRegime& regime, double k) {
  if (k == 0.0) {
    regime.validate();
    return 0.0;
  }
  return k * (1.0 - integral_i(regime, k));
}

double k_crit(const AsymptoticRegime& regime) {
  regime.validate();
  if (regime.gamma_star >= 1.0) return 0.0;
  double hi = 1.0;
  while (integral_i(regime, hi) >= 1.0) {
    hi *= 2.0;
    if (hi > 1e300) throw NumericalError("k_crit: could not bracket I(k) = 1");
  }
  // 1 - I(k) is increasing; d/dk (1 - I) = (I - J) / k.
  auto f = [&](double k) { return k == 0.0 ? -1.0 : 1.0 - integral_i(regime, k); };
  auto df = [&](double k) { return (integral_i(regime, k) - integral_j(regime, k)) / k; };
  return solve_increasing(f, 0.0, hi, df);
}

double k_of_r(const AsymptoticRegime& regime, double r) {
  regime.validate();
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("k_of_r: r must be finite and > 0");
  const double kc = k_crit(regime);
  double hi = std::max(10.0 * r, 1e6);
  while (r_of_k(regime, hi) < r) {
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericalError("k_of_r: could not bracket R(k) = r");
  }
  auto f = [&](double k) { return k <= kc ? -r : r_of_k(regime, k) - r; };
  // R'(k) = 1 - J(k).
  auto df = [&](double k) { return 1.0 - integral_j(regime, k); };
  return solve_increasing(f, kc, hi, df);
}

double asymptotic_train_error(const AsymptoticRegime& regime, double k) {
  return asymptotic_errors(regime, k).e_train;
}

double asymptotic_test_error(const AsymptoticRegime& regime, double k) {
  return asymptotic_errors(regime, k).e_test;
}

EigenlearningPoint asymptotic_errors(const AsymptoticRegime& regime, double k) {
  regime.validate();
  if (!(k > 0.0) || !std::isfinite(k))
    throw DomainError("asymptotic_errors: k must be finite and > k_crit");
  // I is strictly decreasing, so I(k) < 1 exactly when k lies above k_crit.
  const double i_value = integral_i(regime, k);
  if (!(i_value < 1.0))
    throw DomainError("asymptotic_errors: k = " + std::to_string(k) + " is not above k_crit");
  const double j_value = integral_j(regime, k);
  const double denom = 1.0 - j_value;
  const double slack = 1.0 - i_value;
  return {.k = k,
          .r = k * slack,
          .e_train = regime.sigma_sq * slack * slack / denom,
          .e_test = regime.sigma_sq / denom,
          .i_of_k = i_value,
          .j_of_k = j_value};
}

double train_error_floor(const AsymptoticRegime& regime) {
  regime.validate();
  if (regime.gamma_star <= 1.0) return 0.0;
  return regime.sigma_sq * (1.0 - 1.0 / regime.gamma_star);
}

RegularizerChoice select_regularizer(const AsymptoticRegime& regime, double tau, long n) {
  regime.validate();
  if (n < 1) throw DomainError("select_regularizer: n must be >= 1");
  if (!(tau > 0.0 && tau < regime.sigma_sq))
    throw DomainError("select_regularizer: tau must lie in (0, sigma_sq)");
  const double floor = train_error_floor(regime);
  if (!(tau > floor))
    throw DomainError("select_regularizer: tau = " + std::to_string(tau) +
                      " is below the attainable train error " + std::to_string(floor));

  const double kc = k_crit(regime);
  double hi = std::max(1.0, 2.0 * kc);
  while (asymptotic_train_error(regime, hi) <= tau) {
    hi *= 2.0;
    if (hi > 1e300) throw NumericalError("select_regularizer: could not bracket E_train = tau");
  }
  auto f = [&](double k) {
    return k <= kc ? floor - tau : asymptotic_train_error(regime, k) - tau;
  };
  const double k = solve_increasing(f, kc, hi);
  const double r = r_of_k(regime, k);
  return {k, r, r * std::pow(static_cast<double>(n), -regime.alpha)};
}

void verify_train_error_monotone(const AsymptoticRegime& regime, int grid_points) {
  regime.validate();
  if (grid_points < 2) throw DomainError("verify_train_error_monotone: need >= 2 grid points");
  const double kc = k_crit(regime);
  const double scale = std::max(kc, 1.0);
  const double lo = kc + 1e-6 * scale;
  const double hi = kc + 1e6 * scale;
  const double ratio = std::log(hi - kc) - std::log(lo - kc);
  const double tol = 1e-14 * regime.sigma_sq;
  double prev_k = lo;
  double prev = asymptotic_train_error(regime, lo);
  for (int i = 1; i < grid_points; ++i) {
    const double k = kc + (lo - kc) * std::exp(ratio * i / (grid_points - 1));
    const double value = asymptotic_train_error(regime, k);
    if (value < prev - tol)
      throw NumericalError("E_train(k) is not monotone: E_train(" + std::to_string(prev_k) +
                           ") = " + std::to_string(prev) + " > E_train(" + std::to_string(k) +
                           ") = " + std::to_string(value));
    prev_k = k;
    prev = value;
  }
}

FiniteNPrediction finite_n_prediction(std::span<const double> eigenvalues, double rho,
                                      double sigma_sq, std::span<const double> beta_star,
                                      long n) {
  if (eigenvalues.empty()) throw DomainError("finite_n_prediction: no eigenvalues");
  if (beta_star.size() != eigenvalues.size())
    throw DomainError("finite_n_prediction: beta_star and eigenvalues differ in length");
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("finite_n_prediction: rho must be > 0");
  if (!(sigma_sq >= 0.0)) throw DomainError("finite_n_prediction: sigma_sq must be >= 0");
  if (n < 1) throw DomainError("finite_n_prediction: n must be >= 1");

  double trace = 0.0;
  for (double lambda : eigenvalues) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda))
      throw DomainError("finite_n_prediction: eigenvalues must be finite and >= 0");
    trace += lambda;
  }
  const double nn = static_cast<double>(n);
  const double delta = nn * rho;

  // h(kappa) = n - delta/kappa - sum lambda/(lambda + kappa) is increasing,
  // and h(delta/n) <= 0 <= h((delta + trace)/n).
  auto h = [&](double kappa) {
    double sum = 0.0;
    for (double lambda : eigenvalues) sum += lambda / (lambda + kappa);
    return nn - delta / kappa - sum;
  };
  auto dh = [&](double kappa) {
    double sum = 0.0;
    for (double lambda : eigenvalues) sum += lambda / ((lambda + kappa) * (lambda + kappa));
    return delta / (kappa * kappa) + sum;
  };
  const double lo = delta / nn;
  const double hi = (delta + trace) / nn;
  const double kappa = lo == hi ? lo : solve_increasing_log(h, lo, hi, dh);

  double curvature = 0.0;
  double signal = 0.0;
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) {
    const double lambda = eigenvalues[i];
    curvature += lambda / ((lambda + kappa) * (lambda + kappa));
    signal += kappa / (lambda + kappa) * beta_star[i] * beta_star[i];
  }
  // Implicit differentiation of the kappa equation in delta.
  const double dkappa_ddelta = kappa / (delta + kappa * kappa * curvature);
  const double e_coef = nn * dkappa_ddelta;
  const double e_test = e_coef * (sigma_sq + signal);
  const double shrink = delta / (nn * kappa);
  return {.kappa = kappa,
          .delta = delta,
          .e_coef = e_coef,
          .e_test_n = e_test,
          .e_train_n = shrink * shrink * e_test,
          .signal_term_c = signal};
}

}  // namespace nearinterp
