#include "mvpde/tridiagonal.hpp"

#include "mvpde/errors.hpp"

namespace mvpde {

void Tridiagonal::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double acc = diag[i] * x[i];
    if (i > 0) acc += lower[i] * x[i - 1];
    if (i + 1 < n) acc += upper[i] * x[i + 1];
    y[i] = acc;
  }
}

std::vector<double> Tridiagonal::apply(std::span<const double> x) const {
  std::vector<double> y(size());
  apply(x, y);
  return y;
}

Tridiagonal Tridiagonal::shifted(double alpha, double beta) const {
  Tridiagonal out(size());
  for (std::size_t i = 0; i < size(); ++i) {
    out.lower[i] = beta * lower[i];
    out.diag[i] = alpha + beta * diag[i];
    out.upper[i] = beta * upper[i];
  }
  return out;
}

std::vector<double> Tridiagonal::solve(std::span<const double> rhs) const {
  const std::size_t n = size();
  if (rhs.size() != n) throw ParameterError("tridiagonal solve: size mismatch");
  std::vector<double> c(n), x(n);
  double pivot = diag[0];
  if (pivot == 0.0) throw ParameterError("tridiagonal solve: zero pivot");
  c[0] = n > 1 ? upper[0] / pivot : 0.0;
  x[0] = rhs[0] / pivot;
  for (std::size_t i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * c[i - 1];
    if (pivot == 0.0) throw ParameterError("tridiagonal solve: zero pivot");
    c[i] = i + 1 < n ? upper[i] / pivot : 0.0;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
  return x;
}

}  // namespace mvpde
