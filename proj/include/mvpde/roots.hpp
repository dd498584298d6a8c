#pragma once

#include <functional>
#include <utility>

namespace mvpde {

/// Bisection on [lo, hi]. Requires g(lo) * g(hi) <= 0; returns an exact
/// endpoint root when one exists. Stops once the bracket is narrower than
/// `tol` or cannot shrink further in double precision.
double bisect_root(const std::function<double(double)>& g, double lo,
                   double hi, double tol);

struct MinimumEstimate {
  double x;
  double value;
};

/// Golden-section descent for a local minimum inside [lo, hi].
MinimumEstimate golden_section_minimize(const std::function<double(double)>& g,
                                        double lo, double hi, double tol);

}  // namespace mvpde
