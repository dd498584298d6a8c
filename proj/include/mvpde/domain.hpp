#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace mvpde {

inline constexpr double kPi = 3.14159265358979323846;

struct Interval {
  double lo;
  double hi;

  bool contains(double s) const { return s >= lo && s <= hi; }
  bool contains(const Interval& other) const {
    return other.lo >= lo && other.hi <= hi;
  }
  double width() const { return hi - lo; }
};

/// Open interval (a, b) with its Lebesgue measure.
class Domain1D {
 public:
  Domain1D(double a, double b);

  double a() const { return a_; }
  double b() const { return b_; }
  double measure() const { return b_ - a_; }

 private:
  double a_;
  double b_;
};

/// Uniform grid with n cells and n+1 nodes; the last node is exactly b.
class GridSpec {
 public:
  GridSpec(Domain1D domain, int cells);

  const Domain1D& domain() const { return domain_; }
  int cells() const { return cells_; }
  std::size_t size() const { return static_cast<std::size_t>(cells_) + 1; }
  double h() const { return h_; }
  double node(std::size_t i) const;
  std::vector<double> nodes() const;

  bool operator==(const GridSpec& other) const {
    return cells_ == other.cells_ && domain_.a() == other.domain_.a() &&
           domain_.b() == other.domain_.b();
  }

 private:
  Domain1D domain_;
  int cells_;
  double h_;
};

/// Nodal values on a grid; the discrete carrier of u(., t).
struct GridField {
  GridField(GridSpec grid, std::vector<double> values);
  explicit GridField(GridSpec grid);  // zero field

  GridSpec grid;
  std::vector<double> values;

  std::span<const double> view() const { return values; }
  /// Piecewise-linear interpolant evaluated at x (clamped to [a, b]).
  double interpolate(double x) const;
  bool all_finite() const;
};

enum class BoundaryKind {
  Dirichlet,                 // u = 0 at both ends
  MixedNeumannDirichlet,     // u_x(a) = 0, u(b) = 0
  WeightedNeumannDirichlet,  // x^d u_x(0) = 0, u(1) = 0
};

const char* to_string(BoundaryKind bc);

/// First eigenvalue of -d^2/dx^2 for the active boundary conditions.
struct SpectralInfo {
  BoundaryKind bc;
  std::optional<double> computed;
  std::optional<double> override_value;

  static SpectralInfo make(BoundaryKind bc, const Domain1D& domain,
                           std::optional<double> override_value = {});

  /// Throws ParameterError when neither a computed value nor an override
  /// exists (weighted boundary conditions carry no Poincare constant).
  double lambda1() const;
};

/// First eigenvalue of the second-difference operator on `grid` with the
/// same boundary treatment the solvers use.
double discrete_lambda1(const GridSpec& grid, BoundaryKind bc);

}  // namespace mvpde
