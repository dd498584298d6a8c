#pragma once

#include <ostream>

#include "mvpde/tridiagonal.hpp"
#include "mvpde/trajectory.hpp"

namespace mvpde {

/// nu * (three-point Laplacian) on the interior nodes 1..n-1 (Dirichlet).
Tridiagonal assemble_dirichlet_laplacian(const GridSpec& grid, double nu);

/// Vertex-centred finite-volume discretization of (x^d u_x)_x on nodes
/// 0..n-1 of a grid on (0, 1); node n carries u = 0. Face x_{i+1/2} uses
/// the coefficient x_{i+1/2}^d and node 0 owns the half cell [0, h/2].
/// Both left conditions give the same stencil: the weighted one has zero
/// flux at x = 0, the Neumann one reflects the ghost u_{-1} = u_1 through
/// a face of coefficient (h/2)^d.
Tridiagonal assemble_weighted_operator(const GridSpec& grid, double d,
                                       BoundaryKind bc);

/// One Crank-Nicolson step of the diffusion with the reaction -f(u) u
/// treated explicitly by a predictor/corrector (Heun) pair. Dirichlet
/// nodes stay at zero. May return non-finite values on overflow.
GridField step_imex(const GridField& u, double dt, const ProblemSpec& spec);

/// Same scheme for u_t = (x^d u_x)_x + u^p; the reaction uses
/// max(u, 0)^p.
GridField step_degenerate(const GridField& u, double dt,
                          const ProblemSpec& spec);

/// Adaptive step-doubling loop. Accepts when the relative L2 gap between
/// one full step and two half steps is <= rel_step_tol (keeping the
/// two-half-step result), halves dt otherwise, grows dt by 1.5 after five
/// consecutive acceptances.
Trajectory solve_semilinear(const ProblemSpec& spec, const SolveConfig& config);
Trajectory solve_degenerate(const ProblemSpec& spec, const SolveConfig& config);
/// Dispatches on spec.degenerate.
Trajectory solve(const ProblemSpec& spec, const SolveConfig& config);

/// `t,l2,h1_semi,sup,m,dt`, one row per frame.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
/// First row node coordinates, then one row of values per frame.
void write_frames_csv(std::ostream& out, const Trajectory& traj);

}  // namespace mvpde
