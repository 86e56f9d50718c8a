#pragma once

#include "nearinterp/quadrature.hpp"

namespace nearinterp {

/// Parameters of 2F1(a, b; c; z) restricted to the family c = b + 1,
/// b in (0, 1), a > 0, z <= 0. The integrals behind the trade-off curve use
/// a in {1, 2}, b = 1/alpha, z = -k * gamma^(-alpha).
struct HypergeometricArgs {
  double a;
  double b;
  double c;
  double z;

  /// Throws DomainError when the arguments leave the supported family.
  void validate() const;
};

/// Gauss hypergeometric function on the supported family.
///
/// Power series for -0.5 < z <= 0, the Pfaff transformation
/// (1-z)^(-a) F(a, c-b; c; z/(z-1)) for -10 <= z <= -0.5, and the 1/z
/// connection formula for z < -10. Returns exactly 1 at z = 0.
/// Throws NumericalError if a series exceeds its term budget.
double hyp2f1(const HypergeometricArgs& args);

/// Independent evaluation of the same function from the Euler integral
///   F(a, b; 1+b; z) = b * int_0^1 t^(b-1) (1 - z t)^(-a) dt
///                   = int_0^1 (1 + |z| u^(1/b))^(-a) du   (t = u^(1/b)).
double hyp2f1_oracle(const HypergeometricArgs& args, const QuadratureSpec& spec = {});

}  // namespace nearinterp
