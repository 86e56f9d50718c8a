#pragma once

#include <cmath>
#include <functional>
#include <optional>

namespace nearinterp {

struct RootOptions {
  int max_iterations = 400;
};

/// Root of an increasing function on [lo, hi] with f(lo) <= 0 <= f(hi).
/// Bisects until the bracket stops shrinking, then takes Newton steps when a
/// derivative is supplied and the step stays inside the final bracket.
/// Throws NumericalError if the bracket signs are wrong.
double solve_increasing(const std::function<double(double)>& f, double lo, double hi,
                        const std::function<double(double)>& derivative = {},
                        const RootOptions& options = {});

/// Same, but bisects on log(x); for positive roots spanning many decades.
double solve_increasing_log(const std::function<double(double)>& f, double lo, double hi,
                            const std::function<double(double)>& derivative = {},
                            const RootOptions& options = {});

}  // namespace nearinterp
