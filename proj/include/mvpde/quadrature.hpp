#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "mvpde/domain.hpp"

namespace mvpde {

/// Composite trapezoid rule on the grid nodes.
double trapezoid(const GridSpec& grid, std::span<const double> values);

/// Adaptive Simpson quadrature of g on [a, b] to absolute tolerance `tol`.
double adaptive_simpson(const std::function<double(double)>& g, double a,
                        double b, double tol);

/// u_x by second-order central differences, second-order one-sided
/// stencils at the two end nodes.
GridField derivative(const GridField& u);

double l2_norm_squared(const GridField& u);
double l2_norm(const GridField& u);
/// integral |u|^p.
double lp_integral(const GridField& u, double p);
double lp_norm(const GridField& u, double p);
double sup_norm(const GridField& u);
/// ||u_x|| from the central-difference derivative.
double h1_seminorm(const GridField& u);
/// <x^d, v^2>.
double weighted_square(const GridField& v, double d);

/// Edge form sum_i x_{i+1/2}^d (u_{i+1} - u_i)^2 / h. With d = 0 this is
/// exactly -<u_xx, u> for the three-point Laplacian in the trapezoid inner
/// product, which makes it the dissipation the solvers actually see.
double dirichlet_form(const GridField& u, double d = 0.0);

struct NormRequest {
  enum class Kind { L2, Lp, H1Semi, WeightedGradient };
  Kind kind;
  double param = 0.0;

  static NormRequest l2() { return {Kind::L2}; }
  static NormRequest lp(double p) { return {Kind::Lp, p}; }
  static NormRequest h1_semi() { return {Kind::H1Semi}; }
  static NormRequest weighted_gradient(double d) {
    return {Kind::WeightedGradient, d};
  }
};

struct NormReport {
  std::optional<double> l2;
  std::optional<double> h1_semi;
  std::map<double, double> lp;                 // p -> |u|_p
  std::map<double, double> weighted_gradient;  // d -> <x^d, u_x^2>
};

NormReport field_norms(const GridField& u, std::span<const NormRequest> orders);

}  // namespace mvpde
