#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mvpde {

/// Square tridiagonal matrix. lower[0] and upper[n-1] are unused.
struct Tridiagonal {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;

  explicit Tridiagonal(std::size_t n = 0) : lower(n), diag(n), upper(n) {}

  std::size_t size() const { return diag.size(); }

  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  /// alpha * I + beta * (*this)
  Tridiagonal shifted(double alpha, double beta) const;

  /// Thomas recurrence; throws ParameterError on a zero pivot.
  std::vector<double> solve(std::span<const double> rhs) const;
};

}  // namespace mvpde
