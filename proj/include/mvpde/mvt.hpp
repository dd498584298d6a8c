#pragma once

#include <optional>
#include <ostream>
#include <variant>
#include <vector>

#include "mvpde/potential.hpp"
#include "mvpde/trajectory.hpp"

namespace mvpde {

// Mean-value points for integrals with a nonnegative weight. Every point
// is located on the piecewise-linear interpolant of the nodal field, where
// the intermediate value argument is exact. When several points qualify
// the one nearest the previous point wins, then the leftmost.

/// m = <f(u), u^2> / ||u||^2 (trapezoid). Clamped into the range of f over
/// the nodes so that rounding never leaves the bracket.
double mean_ratio(const Potential& f, const GridField& u);

/// A point xi in (a, b) with f(u~(xi)) = m.
double locate_xi(const Potential& f, const GridField& u, double m,
                 std::optional<double> prev_xi = {});

/// xi = (<x^d, v^2> / ||v||^2)^(1/d) for v = u_x on a grid inside [0, inf).
double xi_weighted(const GridField& u_x, double d);

/// A point chi with u~(chi)^(p-1) = |u|_{p+1}^{p+1} / ||u||^2.
double locate_chi(const GridField& u, double p,
                  std::optional<double> prev_chi = {});

struct MeanValuePath {
  std::vector<double> times;
  std::vector<double> m;
  std::vector<double> xi;
};

struct WeightedMeanPath {
  std::vector<double> times;
  std::vector<double> xi_d;
  double d;
};

struct ChiPath {
  std::vector<double> times;
  std::vector<double> chi;
  double p;
};

struct XiExtractor {
  Potential f;
};
struct WeightedXiExtractor {
  double d;
};
struct ChiExtractor {
  double p;
};
using PathExtractor =
    std::variant<XiExtractor, WeightedXiExtractor, ChiExtractor>;
using AnyPath = std::variant<MeanValuePath, WeightedMeanPath, ChiPath>;

MeanValuePath mean_value_path(const Trajectory& traj, const Potential& f);
WeightedMeanPath weighted_mean_path(const Trajectory& traj, double d);
ChiPath chi_path(const Trajectory& traj, double p);

/// Applies the extractor frame by frame, threading the previous point.
/// Per-frame failures are rethrown as PathError with the frame time.
AnyPath path_over_trajectory(const Trajectory& traj,
                             const PathExtractor& extractor);

/// max_k |f(u~(xi_k, t_k)) - m_k|.
double max_residual(const MeanValuePath& path, const Trajectory& traj,
                    const Potential& f);
/// max_k |xi_{k+1} - xi_k|; a continuity diagnostic.
double max_jump(std::span<const double> points);

void write_path_csv(std::ostream& out, const MeanValuePath& path);
void write_path_csv(std::ostream& out, const WeightedMeanPath& path);
void write_path_csv(std::ostream& out, const ChiPath& path);

}  // namespace mvpde
