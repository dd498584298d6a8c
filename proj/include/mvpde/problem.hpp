#pragma once

#include <optional>

#include "mvpde/domain.hpp"
#include "mvpde/initial_data.hpp"
#include "mvpde/potential.hpp"

namespace mvpde {

/// Exponents of u_t = (x^d u_x)_x + u^p on (0, 1).
struct DegenerateParams {
  double d;
  double p;
};

/// A solvable instance. With `degenerate` set the weighted equation is
/// solved and `potential` is ignored; otherwise
/// u_t - nu u_xx + f(u) u = 0 with Dirichlet conditions.
struct ProblemSpec {
  Domain1D domain;
  double nu;
  Potential potential;
  InitialData initial;
  BoundaryKind bc;
  std::optional<DegenerateParams> degenerate;

  /// Throws ParameterError naming the offending field.
  void validate() const;
};

}  // namespace mvpde
