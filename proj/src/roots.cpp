#include "nearinterp/roots.hpp"

#include <string>

#include "nearinterp/errors.hpp"

namespace nearinterp {
namespace {

double polish(const std::function<double(double)>& f,
              const std::function<double(double)>& derivative, double lo, double hi,
              double x) {
  if (!derivative) return x;
  double fx = f(x);
  for (int i = 0; i < 3 && fx != 0.0; ++i) {
    const double d = derivative(x);
    if (!(d > 0.0) || !std::isfinite(d)) break;
    const double next = x - fx / d;
    if (!(next >= lo && next <= hi)) break;
    const double fnext = f(next);
    if (!(std::abs(fnext) < std::abs(fx))) break;
    x = next;
    fx = fnext;
  }
  return x;
}

template <typename Mid>
double bisect(const std::function<double(double)>& f, double lo, double hi,
              const std::function<double(double)>& derivative, const RootOptions& options,
              Mid midpoint) {
  if (!(lo <= hi)) throw NumericalError("root finding: empty bracket");
  double flo = f(lo);
  double fhi = f(hi);
  if (flo > 0.0 || fhi < 0.0)
    throw NumericalError("root finding: bracket [" + std::to_string(lo) + ", " +
                         std::to_string(hi) + "] does not straddle a root");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  for (int i = 0; i < options.max_iterations; ++i) {
    const double mid = midpoint(lo, hi);
    if (!(mid > lo && mid < hi)) break;
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if (fmid < 0.0) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  const double best = (-flo < fhi) ? lo : hi;
  return polish(f, derivative, lo, hi, best);
}

}  // namespace

double solve_increasing(const std::function<double(double)>& f, double lo, double hi,
                        const std::function<double(double)>& derivative,
                        const RootOptions& options) {
  return bisect(f, lo, hi, derivative, options,
                [](double a, double b) { return a + 0.5 * (b - a); });
}

double solve_increasing_log(const std::function<double(double)>& f, double lo, double hi,
                            const std::function<double(double)>& derivative,
                            const RootOptions& options) {
  if (!(lo > 0.0)) throw NumericalError("root finding: log bracket needs lo > 0");
  return bisect(f, lo, hi, derivative, options, [](double a, double b) {
    const double g = std::sqrt(a) * std::sqrt(b);
    // Fall back to arithmetic bisection once the geometric mean stalls.
    return (g > a && g < b) ? g : a + 0.5 * (b - a);
  });
}

}  // namespace nearinterp
