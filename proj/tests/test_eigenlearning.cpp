#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "nearinterp/eigenlearning.hpp"
#include "nearinterp/errors.hpp"
#include "nearinterp/quadrature.hpp"

using namespace nearinterp;

namespace {

constexpr double kPi = std::numbers::pi;

double rel_err(double got, double want) { return std::abs(got - want) / std::abs(want); }

// Defining integrals, evaluated without the hypergeometric closed form.
// Panels [0, 1], [1, 10], [10, 100], ... so that long ranges are resolved near 0.
template <typename F>
double integrate_long(F f, double upper) {
  double sum = 0.0;
  double lo = 0.0;
  for (double hi = std::min(1.0, upper); lo < upper; lo = hi, hi = std::min(10.0 * hi, upper))
    sum += integrate(f, lo, hi);
  return sum;
}

double i_by_quadrature(const AsymptoticRegime& g, double k, double upper) {
  return integrate_long([&](double x) { return 1.0 / (1.0 + k * std::pow(x, g.alpha)); }, upper);
}

double j_by_quadrature(const AsymptoticRegime& g, double k, double upper) {
  return integrate_long(
      [&](double x) {
        const double d = 1.0 + k * std::pow(x, g.alpha);
        return 1.0 / (d * d);
      },
      upper);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> grid;
  for (int i = 0; i < count; ++i) grid.push_back(lo * std::pow(hi / lo, i / (count - 1.0)));
  return grid;
}

}  // namespace

TEST_CASE("integral_i examples") {
  CHECK(integral_i({2.0, 1.0, 1.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rel_err(integral_i({2.0, 1.0, 1.0}, 1.0), kPi / 4) < 1e-13);
  CHECK(rel_err(integral_i({2.0, 0.5, 1.0}, 1.0), std::atan(2.0)) < 1e-13);
  CHECK(integral_i({2.0, 0.5, 1.0}, 1.0) == doctest::Approx(1.1071487178).epsilon(1e-10));
  const AsymptoticRegime g{2.0, 0.5, 1.0};
  CHECK(rel_err(integral_i(g, 1.0), i_by_quadrature(g, 1.0, 2.0)) < 1e-12);
}

TEST_CASE("integral_j examples") {
  CHECK(integral_j({2.0, 1.0, 1.0}, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rel_err(integral_j({2.0, 1.0, 1.0}, 1.0), 0.25 + kPi / 8) < 1e-13);
  const AsymptoticRegime g{1.75, 0.5, 1.0};
  CHECK(rel_err(integral_j(g, 10.0), j_by_quadrature(g, 10.0, 2.0)) < 1e-10);
}

TEST_CASE("integrals reject negative k") {
  CHECK_THROWS_AS(integral_i({2.0, 1.0, 1.0}, -1e-3), DomainError);
  CHECK_THROWS_AS(integral_j({2.0, 1.0, 1.0}, -1.0), DomainError);
  CHECK_THROWS_AS(integral_i({1.0, 1.0, 1.0}, 1.0), DomainError);
  CHECK_THROWS_AS(integral_i({2.0, -1.0, 1.0}, 1.0), DomainError);
  CHECK_THROWS_AS(integral_i({2.0, 1.0, 0.0}, 1.0), DomainError);
}

TEST_CASE("gamma = 0 closed forms against truncated quadrature") {
  const double upper = 1e6;
  for (double k : {0.01, 1.0, 100.0}) {
    const AsymptoticRegime g{2.5, 0.0, 1.0};
    CAPTURE(k);
    CHECK(rel_err(integral_i(g, k), i_by_quadrature(g, k, upper)) < 1e-4);
    CHECK(rel_err(integral_j(g, k), j_by_quadrature(g, k, upper)) < 1e-4);
  }
  // alpha = 2: int_0^inf dx / (1 + k x^2) = pi / (2 sqrt(k)).
  CHECK(rel_err(integral_i({2.0, 0.0, 1.0}, 4.0), kPi / 4) < 1e-14);
  CHECK(std::isinf(integral_i({2.0, 0.0, 1.0}, 0.0)));
}

TEST_CASE("r_of_k examples") {
  CHECK(r_of_k({1.75, 0.5, 1.0}, 0.0) == 0.0);
  CHECK(r_of_k({2.0, 0.0, 1.0}, 0.0) == 0.0);
  CHECK(r_of_k({2.0, 1.0, 1.0}, 1.0) == doctest::Approx(1.0 - kPi / 4).epsilon(1e-13));
  CHECK(r_of_k({2.0, 0.5, 1.0}, 1.0) == doctest::Approx(1.0 - std::atan(2.0)).epsilon(1e-12));
  CHECK(r_of_k({2.0, 0.5, 1.0}, 1.0) < 0.0);
}

TEST_CASE("k_crit examples") {
  CHECK(k_crit({2.0, 1.0, 1.0}) == 0.0);
  CHECK(k_crit({2.0, 3.0, 1.0}) == 0.0);

  // alpha = 2, gamma = 1/2: I(k) = atan(2 sqrt k) / sqrt k; brute bisection on that.
  double lo = 1e-9;
  double hi = 1e6;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::atan(2.0 * std::sqrt(mid)) - std::sqrt(mid) > 0.0 ? lo : hi) = mid;
  }
  CHECK(rel_err(k_crit({2.0, 0.5, 1.0}), lo) < 1e-12);

  const AsymptoticRegime g{1.25, 2.0 / 3.0, 1.0};
  const double kc = k_crit(g);
  CHECK(kc > 0.0);
  CHECK(std::abs(r_of_k(g, kc)) < 1e-10);
  CHECK(r_of_k(g, kc + 0.1) > 0.0);

  // gamma = 0: I(k) = C k^(-1/alpha), so k_crit = C^alpha.
  const double alpha = 1.75;
  const double c = kPi / (alpha * std::sin(kPi / alpha));
  CHECK(rel_err(k_crit({alpha, 0.0, 1.0}), std::pow(c, alpha)) < 1e-12);
}

TEST_CASE("k_of_r examples") {
  const AsymptoticRegime unit{2.0, 1.0, 1.0};
  CHECK(k_of_r(unit, 1.0 - kPi / 4) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(k_of_r(unit, 0.2146018366) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(k_of_r(unit, 1e-14) < 1e-6);

  const AsymptoticRegime g{1.75, 0.5, 1.0};
  CHECK(std::abs(r_of_k(g, k_of_r(g, 5.0)) - 5.0) < 1e-10);
  CHECK(k_of_r(g, 1e-12) > k_crit(g));
  CHECK(k_of_r(g, 1e-12) - k_crit(g) < 1e-9);
  CHECK(std::abs(r_of_k(g, k_of_r(g, 1e7)) - 1e7) < 1e-10 * 1e7);

  CHECK_THROWS_AS(k_of_r(g, 0.0), DomainError);
  CHECK_THROWS_AS(k_of_r(g, -1.0), DomainError);
}

TEST_CASE("asymptotic_errors examples") {
  const auto point = asymptotic_errors({2.0, 1.0, 1.0}, 1.0);
  const double j = 0.25 + kPi / 8;
  const double i = kPi / 4;
  CHECK(rel_err(point.e_test, 1.0 / (1.0 - j)) < 1e-12);
  CHECK(point.e_test == doctest::Approx(2.7987613487).epsilon(1e-10));
  CHECK(rel_err(point.e_train, (1.0 - i) * (1.0 - i) / (1.0 - j)) < 1e-12);
  CHECK(point.e_train == doctest::Approx(0.1288940104).epsilon(1e-9));

  for (const AsymptoticRegime g : {AsymptoticRegime{1.75, 0.5, 1.0}, AsymptoticRegime{2.5, 0.25, 3.0},
                                   AsymptoticRegime{1.25, 2.0, 0.5}}) {
    const auto far = asymptotic_errors(g, 1e12);
    CHECK(far.e_test == doctest::Approx(g.sigma_sq).epsilon(1e-3));
    CHECK(far.e_train == doctest::Approx(g.sigma_sq).epsilon(1e-3));
  }

  const AsymptoticRegime g{1.75, 0.5, 1.0};
  CHECK_THROWS_AS(asymptotic_errors(g, k_crit(g)), DomainError);
  CHECK_THROWS_AS(asymptotic_errors(g, 0.5 * k_crit(g)), DomainError);
  CHECK_THROWS_AS(asymptotic_errors({1.75, 2.0, 1.0}, 0.0), DomainError);
}

TEST_CASE("select_regularizer examples") {
  const AsymptoticRegime unit{2.0, 1.0, 1.0};
  const double tau = asymptotic_train_error(unit, 1.0);
  const auto choice = select_regularizer(unit, tau, 1000);
  CHECK(choice.k == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(choice.r == doctest::Approx(1.0 - kPi / 4).epsilon(1e-10));
  CHECK(choice.rho_n == doctest::Approx((1.0 - kPi / 4) * 1e-6).epsilon(1e-10));
  CHECK(choice.rho_n == doctest::Approx(2.146e-7).epsilon(1e-3));

  const AsymptoticRegime g{1.75, 0.5, 2.0};
  for (double tau_frac : {1e-6, 0.05, 0.3, 0.8, 0.999999}) {
    const double target = tau_frac * g.sigma_sq;
    const auto c = select_regularizer(g, target, 500);
    CAPTURE(tau_frac);
    CHECK(std::abs(asymptotic_train_error(g, c.k) - target) < 1e-10 * g.sigma_sq);
    CHECK(c.k > k_crit(g));
  }
  // tau -> sigma^2 pushes k and rho_n up; tau -> 0 pushes k to k_crit and r to 0.
  CHECK(select_regularizer(g, 0.999999 * g.sigma_sq, 10).k > 1e5);
  const auto tiny = select_regularizer(g, 1e-9, 10);
  CHECK(tiny.k - k_crit(g) < 1e-3);
  CHECK(tiny.r < 1e-3);
  CHECK(tiny.r > 0.0);

  CHECK_THROWS_AS(select_regularizer(g, 0.0, 10), DomainError);
  CHECK_THROWS_AS(select_regularizer(g, g.sigma_sq, 10), DomainError);
  // Under-parameterised: the train error cannot go below sigma^2 (1 - 1/gamma).
  const AsymptoticRegime under{1.75, 2.0, 1.0};
  CHECK(train_error_floor(under) == doctest::Approx(0.5));
  CHECK_THROWS_AS(select_regularizer(under, 0.4, 10), DomainError);
  CHECK(select_regularizer(under, 0.6, 10).k > 0.0);
}

TEST_CASE("train error is monotone in k on the sweep regimes") {
  for (const AsymptoticRegime g : {AsymptoticRegime{1.75, 0.5, 1.0}, AsymptoticRegime{1.25, 2.0 / 3.0, 1.0},
                                   AsymptoticRegime{2.5, 2.0 / 3.0, 1.0}, AsymptoticRegime{1.5, 1.0, 1.0},
                                   AsymptoticRegime{3.0, 2.0, 1.0}, AsymptoticRegime{2.0, 0.0, 1.0}}) {
    CHECK_NOTHROW(verify_train_error_monotone(g));
  }
}

TEST_CASE("round trip and monotonicity of R on a log grid") {
  for (const AsymptoticRegime g : {AsymptoticRegime{1.25, 0.25, 1.0}, AsymptoticRegime{1.75, 0.5, 1.0},
                                   AsymptoticRegime{2.5, 1.0, 1.0}, AsymptoticRegime{2.0, 0.0, 1.0}}) {
    const double kc = k_crit(g);
    double previous_r = 0.0;
    for (double offset : log_grid(1e-6, 1e6, 40)) {
      const double k = kc + offset;
      const double r = r_of_k(g, k);
      CAPTURE(g.alpha);
      CAPTURE(k);
      CHECK(r > previous_r);
      previous_r = r;
      CHECK(rel_err(k_of_r(g, r), k) < 1e-9);
      // Self-consistency: 1 - r/k = I(k).
      CHECK(std::abs(1.0 - r / k - integral_i(g, k)) < 1e-10);
    }
  }
}

TEST_CASE("J <= I <= 1/gamma") {
  for (double alpha : {1.25, 1.75, 2.5})
    for (double gamma : {0.25, 0.5, 1.0, 3.0}) {
      const AsymptoticRegime g{alpha, gamma, 1.0};
      for (double k : log_grid(1e-4, 1e5, 25)) {
        const double i = integral_i(g, k);
        const double j = integral_j(g, k);
        CHECK(j <= i);
        CHECK(i <= 1.0 / gamma);
      }
    }
}

TEST_CASE("EigenlearningPoint invariants") {
  const AsymptoticRegime g{1.75, 0.5, 1.3};
  const double kc = k_crit(g);
  for (double offset : log_grid(1e-3, 1e5, 20)) {
    const auto pt = asymptotic_errors(g, kc + offset);
    CHECK(std::abs(pt.r - pt.k * (1.0 - pt.i_of_k)) < 1e-10);
    CHECK(pt.e_test > g.sigma_sq);
    CHECK(pt.e_train > 0.0);
    CHECK(pt.e_train < g.sigma_sq);
    CHECK(std::abs(pt.e_train - pt.e_test * (pt.r / pt.k) * (pt.r / pt.k)) < 1e-10);
    CHECK(pt.j_of_k < 1.0);
    CHECK(pt.j_of_k <= pt.i_of_k);
  }
}

TEST_CASE("larger alpha gives larger test error at a fixed train error") {
  const double tau = 0.2;
  auto test_at = [&](double alpha) {
    const AsymptoticRegime g{alpha, 0.5, 1.0};
    return asymptotic_test_error(g, select_regularizer(g, tau, 1).k);
  };
  CHECK(test_at(2.5) > test_at(1.25));
}

TEST_CASE("finite_n_prediction: zero spectrum") {
  const long n = 50;
  const double rho = 0.3;
  std::vector<double> eigenvalues(80, 0.0);
  std::vector<double> beta(80, 0.0);
  beta[0] = 1.0;
  beta[5] = -2.0;
  const auto pred = finite_n_prediction(eigenvalues, rho, 0.7, beta, n);
  CHECK(pred.kappa == doctest::Approx(rho).epsilon(1e-14));
  CHECK(pred.delta == doctest::Approx(n * rho));
  CHECK(pred.e_coef == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pred.e_test_n == doctest::Approx(0.7 + 5.0).epsilon(1e-14));
  CHECK(pred.e_train_n == doctest::Approx(pred.e_test_n).epsilon(1e-14));
}

TEST_CASE("finite_n_prediction: constant spectrum solves the quadratic") {
  const long n = 100;
  const long p = 250;
  const double lambda = 0.37;
  const double rho = 0.02;
  const double delta = n * rho;
  std::vector<double> eigenvalues(p, lambda);
  std::vector<double> beta(p, 0.1);
  const auto pred = finite_n_prediction(eigenvalues, rho, 1.0, beta, n);
  const double b = n * lambda - delta - p * lambda;
  const double root = (-b + std::sqrt(b * b + 4.0 * n * delta * lambda)) / (2.0 * n);
  CHECK(rel_err(pred.kappa, root) < 1e-12);
  const double residual = n * root * root + b * root - delta * lambda;
  CHECK(std::abs(residual) < 1e-12);
}

TEST_CASE("finite_n_prediction: implicit derivative matches finite differences") {
  const long n = 300;
  std::vector<double> eigenvalues;
  for (int i = 1; i <= 700; ++i) eigenvalues.push_back(std::pow(i, -1.5));
  std::vector<double> beta(eigenvalues.size(), 0.05);
  const double rho = 1e-3;
  const double h = 1e-6 * rho;
  const auto mid = finite_n_prediction(eigenvalues, rho, 1.0, beta, n);
  const auto up = finite_n_prediction(eigenvalues, rho + h, 1.0, beta, n);
  const auto down = finite_n_prediction(eigenvalues, rho - h, 1.0, beta, n);
  // delta = n rho, so d kappa / d delta = (d kappa / d rho) / n.
  const double fd = (up.kappa - down.kappa) / (2.0 * h * n);
  CHECK(rel_err(mid.e_coef, n * fd) < 1e-6);
  CHECK(mid.signal_term_c >= 0.0);
  CHECK(std::abs(mid.e_train_n - mid.delta * mid.delta / (n * n * mid.kappa * mid.kappa) * mid.e_test_n) <
        1e-10);
}

TEST_CASE("finite_n_prediction: power-law kappa tracks k n^(-alpha)") {
  const double alpha = 1.75;
  const long n = 200;
  const long p = 400;
  const AsymptoticRegime g{alpha, 0.5, 1.0};
  std::vector<double> eigenvalues;
  for (long i = 1; i <= p; ++i) eigenvalues.push_back(std::pow(static_cast<double>(i), -alpha));
  std::vector<double> beta(p, 0.0);
  for (double k : {k_crit(g) + 0.5, 3.0, 10.0}) {
    const double rho = r_of_k(g, k) * std::pow(n, -alpha);
    const auto pred = finite_n_prediction(eigenvalues, rho, 1.0, beta, n);
    CAPTURE(k);
    CHECK(rel_err(pred.kappa * std::pow(n, alpha), k) < 0.02);
    CHECK(rel_err(k_of_r(g, r_of_k(g, k)), k) < 1e-10);
  }
}

TEST_CASE("finite_n_prediction converges to the asymptotic errors") {
  const AsymptoticRegime g{1.75, 0.5, 1.0};
  const double r = 1.0;
  const auto limit = asymptotic_errors(g, k_of_r(g, r));
  auto gap = [&](long n) {
    const long p = 2 * n;
    std::vector<double> eigenvalues;
    for (long i = 1; i <= p; ++i) eigenvalues.push_back(std::pow(static_cast<double>(i), -g.alpha));
    std::vector<double> beta(p, 0.0);
    const auto pred = finite_n_prediction(eigenvalues, r * std::pow(n, -g.alpha), 1.0, beta, n);
    return std::abs(pred.e_test_n - limit.e_test) / limit.e_test +
           std::abs(pred.e_train_n - limit.e_train) / limit.e_train;
  };
  CHECK(gap(2000) < gap(500));
}

TEST_CASE("finite_n_prediction rejects bad input") {
  std::vector<double> ev{1.0, 0.5};
  std::vector<double> beta{0.0, 0.0};
  CHECK_THROWS_AS(finite_n_prediction({}, 0.1, 1.0, {}, 10), DomainError);
  CHECK_THROWS_AS(finite_n_prediction(ev, 0.0, 1.0, beta, 10), DomainError);
  CHECK_THROWS_AS(finite_n_prediction(ev, 0.1, 1.0, std::vector<double>{1.0}, 10), DomainError);
  CHECK_THROWS_AS(finite_n_prediction(std::vector<double>{-1.0, 1.0}, 0.1, 1.0, beta, 10), DomainError);
}
