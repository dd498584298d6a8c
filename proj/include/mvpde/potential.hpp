#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mvpde/domain.hpp"

namespace mvpde {

/// f(s) = s^2 - mu.
struct ChafeeInfante {
  double mu;
};

/// f(s) = 1 - s on [0, 3), (1 - s)/(s - 2) on [3, inf).
struct PiecewiseF2 {};

/// f(s) = -(1 - s)^(-p) on [0, 1), 0 < p < 1.
struct SingularF3 {
  double p;
};

/// f(s) = sum_k coeffs[k] s^k.
struct Polynomial {
  std::vector<double> coeffs;
};

/// Piecewise-linear through (s, f(s)) points; flat outside the table.
struct Tabulated {
  std::vector<std::pair<double, double>> points;
};

using PotentialKind =
    std::variant<ChafeeInfante, PiecewiseF2, SingularF3, Polynomial, Tabulated>;

/// The reaction coefficient f in u_t - nu u_xx + f(u) u = 0.
///
/// Immutable after construction. Evaluation outside valid_domain() throws
/// DomainError; SingularF3 is guarded at s <= 1 - 1e-12 so it never
/// overflows.
class Potential {
 public:
  explicit Potential(PotentialKind kind);

  const PotentialKind& kind() const { return kind_; }
  Interval valid_domain() const;

  double operator()(double s) const;

  /// (1/s) * integral_0^s f. Closed forms for ChafeeInfante and SingularF3
  /// (the latter also at the improper endpoint s = 1); adaptive Simpson
  /// split at the kinks otherwise.
  double average(double s) const;

  /// Numerical lower estimate of inf f over `interval`: uniform sampling
  /// refined by golden-section descent around the sampled minimizer.
  double infimum(Interval interval, int samples = 1025) const;

  /// True when a Tabulated potential is being evaluated outside its table.
  bool extrapolates(double s) const;

  /// Points where f is only C^0 (used to split quadrature).
  std::vector<double> kinks() const;

  std::string describe() const;

 private:
  PotentialKind kind_;
};

inline constexpr double kSingularGuard = 1e-12;

}  // namespace mvpde
