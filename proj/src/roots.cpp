#include "mvpde/roots.hpp"

#include <cmath>

#include "mvpde/errors.hpp"

namespace mvpde {

double bisect_root(const std::function<double(double)>& g, double lo,
                   double hi, double tol) {
  if (!(tol > 0.0)) throw ParameterError("bisect_root: tol must be positive");
  if (lo > hi) std::swap(lo, hi);
  double g_lo = g(lo);
  const double g_hi = g(hi);
  if (g_lo == 0.0) return lo;
  if (g_hi == 0.0) return hi;
  if (std::signbit(g_lo) == std::signbit(g_hi)) {
    throw BracketError("bisect_root: g has the same sign at both ends");
  }
  for (int iter = 0; iter < 400 && hi - lo > tol; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = g(mid);
    if (g_mid == 0.0) return mid;
    if (std::signbit(g_mid) == std::signbit(g_lo)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

MinimumEstimate golden_section_minimize(const std::function<double(double)>& g,
                                        double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double gc = g(c);
  double gd = g(d);
  for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
    if (gc < gd) {
      hi = d;
      d = c;
      gd = gc;
      c = hi - inv_phi * (hi - lo);
      gc = g(c);
    } else {
      lo = c;
      c = d;
      gc = gd;
      d = lo + inv_phi * (hi - lo);
      gd = g(d);
    }
  }
  return gc < gd ? MinimumEstimate{c, gc} : MinimumEstimate{d, gd};
}

}  // namespace mvpde
