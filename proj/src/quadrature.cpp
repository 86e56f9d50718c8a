#include "nearinterp/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "nearinterp/errors.hpp"

namespace nearinterp {
namespace {

constexpr int kOrder = 10;

struct Rule {
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
Rule make_rule() {
  Rule rule;
  for (int i = 0; i < kOrder; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (kOrder + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= kOrder; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = kOrder * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

const Rule& rule() {
  static const Rule r = make_rule();
  return r;
}

double apply_rule(const std::function<double(double)>& f, double lo, double hi) {
  const Rule& g = rule();
  const double half = 0.5 * (hi - lo);
  const double mid = 0.5 * (hi + lo);
  double sum = 0.0;
  for (int i = 0; i < kOrder; ++i) sum += g.weights[i] * f(mid + half * g.nodes[i]);
  return half * sum;
}

struct Panel {
  double lo;
  double hi;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel make_panel(const std::function<double(double)>& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double coarse = apply_rule(f, lo, hi);
  const double fine = apply_rule(f, lo, mid) + apply_rule(f, mid, hi);
  return {lo, hi, fine, std::abs(fine - coarse)};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw DomainError("quadrature tolerances must be positive");
  if (max_subdivisions < 1) throw DomainError("max_subdivisions must be >= 1");
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec) {
  spec.validate();
  if (!std::isfinite(lo) || !std::isfinite(hi))
    throw DomainError("integration limits must be finite");
  if (lo == hi) return 0.0;
  if (hi < lo) return -integrate(f, hi, lo, spec);

  std::priority_queue<Panel> panels;
  panels.push(make_panel(f, lo, hi));
  double total = panels.top().value;
  double error = panels.top().error;

  for (int splits = 0;; ++splits) {
    if (!std::isfinite(total)) throw NumericalError("quadrature: non-finite integrand value");
    if (error <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) break;
    if (splits >= spec.max_subdivisions)
      throw NumericalError("quadrature: subdivision budget (" +
                           std::to_string(spec.max_subdivisions) +
                           ") exhausted, error estimate " + std::to_string(error));
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (mid <= worst.lo || mid >= worst.hi)
      throw NumericalError("quadrature: panel width below machine resolution");
    const Panel left = make_panel(f, worst.lo, mid);
    const Panel right = make_panel(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
  }

  // Re-sum to shed the drift of the running updates.
  double sum = 0.0;
  while (!panels.empty()) {
    sum += panels.top().value;
    panels.pop();
  }
  return sum;
}

}  // namespace nearinterp
