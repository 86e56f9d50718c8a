#include "nearinterp/specfun.hpp"

#include <cmath>
#include <numbers>

#include "nearinterp/errors.hpp"

namespace nearinterp {
namespace {

constexpr int kMaxTerms = 10000;
constexpr double kSeriesTol = 1e-16;
constexpr double kPfaffLimit = -0.5;
constexpr double kReflectLimit = -10.0;

// Plain Gauss series; callers keep |z| < 1.
double gauss_series(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
    sum += term;
    if (std::abs(term) < kSeriesTol * std::abs(sum)) return sum;
  }
  throw NumericalError("hyp2f1: series did not converge within " +
                       std::to_string(kMaxTerms) + " terms");
}

bool is_integer(double x) { return x == std::floor(x); }

// Gamma(1+b) Gamma(a-b) / Gamma(a), via the reflection formula when a is an integer.
double reflected_prefactor(double a, double b) {
  if (is_integer(a)) {
    double value = std::numbers::pi * b / std::sin(std::numbers::pi * b);
    for (int j = 1; j < static_cast<int>(a); ++j) value *= (j - b) / j;
    return value;
  }
  return std::tgamma(1.0 + b) * std::tgamma(a - b) / std::tgamma(a);
}

}  // namespace

void HypergeometricArgs::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(z))
    throw DomainError("hyp2f1: non-finite argument");
  if (z > 0.0) throw DomainError("hyp2f1: z must be <= 0");
  if (!(b > 0.0 && b < 1.0)) throw DomainError("hyp2f1: b must lie in (0, 1)");
  if (!(a > 0.0)) throw DomainError("hyp2f1: a must be positive");
  if (std::abs(c - (b + 1.0)) > 1e-14 * c) throw DomainError("hyp2f1: requires c = b + 1");
  if (is_integer(a - b)) throw DomainError("hyp2f1: a - b must not be an integer");
}

double hyp2f1(const HypergeometricArgs& args) {
  args.validate();
  const auto [a, b, c, z] = args;
  if (z == 0.0) return 1.0;
  if (z > kPfaffLimit) return gauss_series(a, b, c, z);
  if (z >= kReflectLimit) {
    const double w = z / (z - 1.0);
    return std::pow(1.0 - z, -a) * gauss_series(a, c - b, c, w);
  }
  // Connection formula around infinity with c = b + 1. The second
  // hypergeometric factor is F(b, 0; b - a + 1; 1/z) = 1.
  const double mz = -z;
  const double first = b / (b - a) * std::pow(mz, -a) * gauss_series(a, a - b, a - b + 1.0, 1.0 / z);
  const double second = reflected_prefactor(a, b) * std::pow(mz, -b);
  return first + second;
}

double hyp2f1_oracle(const HypergeometricArgs& args, const QuadratureSpec& spec) {
  args.validate();
  const double mz = -args.z;
  const double power = 1.0 / args.b;
  const double a = args.a;
  return integrate([=](double u) { return std::pow(1.0 + mz * std::pow(u, power), -a); }, 0.0,
                   1.0, spec);
}

}  // namespace nearinterp
