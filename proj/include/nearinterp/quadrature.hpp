#pragma once

#include <functional>

namespace nearinterp {

struct QuadratureSpec {
  double abs_tol = 1e-14;
  double rel_tol = 1e-13;
  int max_subdivisions = 10000;

  void validate() const;
};

/// Globally adaptive Gauss-Legendre quadrature of f over [lo, hi].
///
/// Every panel is integrated with a fixed-order rule and with the same rule on
/// its two halves; the difference is the panel's error estimate. The panel
/// with the largest estimate is split until the summed estimate is below
/// max(abs_tol, rel_tol * |integral|). Throws NumericalError when
/// max_subdivisions splits are not enough.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSpec& spec = {});

}  // namespace nearinterp
