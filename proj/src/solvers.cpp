#include "mvpde/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mvpde/csv.hpp"
#include "mvpde/errors.hpp"
#include "mvpde/mvt.hpp"
#include "mvpde/quadrature.hpp"

namespace mvpde {
namespace {

constexpr double kNegativeAbort = -1e-10;

double l2_sq(double h, const std::vector<double>& v) {
  double acc = 0.5 * (v.front() * v.front() + v.back() * v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) acc += v[i] * v[i];
  return h * acc;
}

double l2_gap_sq(double h, const std::vector<double>& a,
                 const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return l2_sq(h, d);
}

bool finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

// Crank-Nicolson on `op` plus an explicit Heun pair for the reaction.
// `lo`..`lo + op.size()` are the unknown nodes; the rest stay at zero.
template <class Reaction>
bool cn_heun_step(const Tridiagonal& op, std::size_t lo,
                  const std::vector<double>& u, double dt, Reaction&& reaction,
                  std::vector<double>& out) {
  const std::size_t m = op.size();
  std::vector<double> ui(u.begin() + lo, u.begin() + lo + m);
  const auto lu = op.apply(ui);
  std::vector<double> r0(m), rhs(m);
  for (std::size_t i = 0; i < m; ++i) r0[i] = reaction(ui[i]);
  for (std::size_t i = 0; i < m; ++i) rhs[i] = ui[i] + 0.5 * dt * lu[i] + dt * r0[i];
  const Tridiagonal implicit = op.shifted(1.0, -0.5 * dt);
  const auto predictor = implicit.solve(rhs);
  if (!finite(predictor)) return false;
  for (std::size_t i = 0; i < m; ++i) {
    rhs[i] = ui[i] + 0.5 * dt * lu[i] + 0.5 * dt * (r0[i] + reaction(predictor[i]));
  }
  const auto corrected = implicit.solve(rhs);
  out.assign(u.size(), 0.0);
  std::copy(corrected.begin(), corrected.end(), out.begin() + lo);
  return finite(out);
}

class SemilinearStepper {
 public:
  SemilinearStepper(const GridSpec& grid, const ProblemSpec& spec)
      : f_(spec.potential), op_(assemble_dirichlet_laplacian(grid, spec.nu)) {}

  bool step(const std::vector<double>& u, double dt, std::vector<double>& out) const {
    try {
      return cn_heun_step(op_, 1, u, dt,
                          [this](double s) { return -f_(s) * s; }, out);
    } catch (const DomainError&) {
      return false;
    }
  }

 private:
  const Potential& f_;
  Tridiagonal op_;
};

class DegenerateStepper {
 public:
  DegenerateStepper(const GridSpec& grid, const ProblemSpec& spec)
      : p_(spec.degenerate->p),
        op_(assemble_weighted_operator(grid, spec.degenerate->d, spec.bc)) {}

  bool step(const std::vector<double>& u, double dt, std::vector<double>& out) const {
    const double p = p_;
    return cn_heun_step(op_, 0, u, dt,
                        [p](double s) { return std::pow(std::max(s, 0.0), p); },
                        out);
  }

 private:
  double p_;
  Tridiagonal op_;
};

FrameDiagnostics diagnose(const ProblemSpec& spec, const SolveConfig& config,
                          const GridField& u, double dt_used) {
  FrameDiagnostics d;
  d.l2 = l2_norm(u);
  d.h1_semi = h1_seminorm(u);
  d.sup = sup_norm(u);
  d.dt_used = dt_used;
  if (d.l2 > 0.0) {
    if (spec.degenerate) {
      d.m = -lp_integral(u, spec.degenerate->p + 1.0) / (d.l2 * d.l2);
    } else {
      d.m = mean_ratio(spec.potential, u);
    }
  } else {
    d.m = std::numeric_limits<double>::quiet_NaN();
  }
  for (double p : config.lp_orders) d.lp.push_back(lp_norm(u, p));
  return d;
}

template <class Stepper>
Trajectory run_adaptive(const ProblemSpec& spec, const SolveConfig& config,
                        bool degenerate) {
  spec.validate();
  config.validate();
  const GridSpec grid(spec.domain, config.n);
  const Stepper stepper(grid, spec);
  const double h = grid.h();

  GridField current = sample_initial_data(spec.initial, grid, spec.bc);
  if (degenerate) {
    for (double v : current.values) {
      if (v < -1e-12) {
        throw PositivityError("degenerate problems need nonnegative initial data");
      }
    }
  }

  Trajectory traj{spec, config, {}, Completed{}};
  traj.frames.push_back({0.0, current, diagnose(spec, config, current, 0.0)});

  const double t_end = config.t_end;
  const double dt_max = config.effective_dt_max();
  const double sup0 = sup_norm(current);
  const std::size_t node_budget = current.values.size() / 100;
  double t = 0.0;
  double dt = std::min(config.dt_init, dt_max);
  double last_dt = 0.0;
  int streak = 0;
  bool growing = false;
  double frame_spacing = t_end / config.auto_frames;
  double next_frame_time = frame_spacing;
  bool last_stored = true;

  std::vector<double> full, half, twice;
  while (t < t_end) {
    if (dt < config.dt_min) {
      const double sup = sup_norm(current);
      if (growing && sup > sup0) {
        traj.outcome = BlownUp{{t, sup, l2_norm(current), dt}};
      } else {
        traj.outcome = StalledStep{t};
      }
      break;
    }
    const bool final_step = dt >= t_end - t;
    const double step = final_step ? t_end - t : dt;

    bool ok = stepper.step(current.values, step, full) &&
              stepper.step(current.values, 0.5 * step, half) &&
              stepper.step(half, 0.5 * step, twice);
    if (ok && degenerate) {
      ok = *std::min_element(twice.begin(), twice.end()) >= kNegativeAbort;
    }
    if (ok) {
      const double scale = std::max(l2_sq(h, twice), l2_sq(h, current.values));
      const double gap = l2_gap_sq(h, full, twice);
      const double rel = scale > 0.0 ? std::sqrt(gap / scale) : 0.0;
      ok = rel <= config.rel_step_tol;
    }
    if (!ok) {
      dt *= 0.5;
      streak = 0;
      ++traj.rejected_steps;
      continue;
    }

    if (degenerate) {
      std::size_t clamped = 0;
      for (double& v : twice) {
        if (v < 0.0) {
          v = 0.0;
          ++clamped;
        }
      }
      if (clamped > node_budget) {
        throw PositivityError("clamped " + std::to_string(clamped) +
                              " negative nodes in one step at t=" +
                              format_real(t + step));
      }
      traj.clamped_values += static_cast<int>(clamped);
    }

    const double sup_before = sup_norm(current);
    current.values.swap(twice);
    t = final_step ? t_end : t + step;
    last_dt = step;
    ++traj.accepted_steps;
    if (++streak >= 5) {
      dt = std::min(dt * 1.5, dt_max);
      streak = 0;
    }
    const double sup = sup_norm(current);
    growing = sup > sup_before;

    bool store = false;
    if (config.frame_stride > 0) {
      store = traj.accepted_steps % config.frame_stride == 0;
    } else if (t >= next_frame_time - 1e-12 * t_end) {
      store = true;
      while (next_frame_time <= t + 1e-12 * t_end) next_frame_time += frame_spacing;
    }
    const bool blown = sup >= config.blowup_threshold;
    if (store || blown || t >= t_end) {
      traj.frames.push_back({t, current, diagnose(spec, config, current, step)});
    }
    last_stored = store || blown || t >= t_end;
    if (blown) {
      traj.outcome = BlownUp{{t, sup, l2_norm(current), step}};
      break;
    }
  }
  if (!last_stored) {
    traj.frames.push_back({t, current, diagnose(spec, config, current, last_dt)});
  }
  return traj;
}

}  // namespace

Tridiagonal assemble_dirichlet_laplacian(const GridSpec& grid, double nu) {
  const std::size_t m = grid.size() - 2;
  const double c = nu / (grid.h() * grid.h());
  Tridiagonal op(m);
  for (std::size_t i = 0; i < m; ++i) {
    op.lower[i] = i > 0 ? c : 0.0;
    op.diag[i] = -2.0 * c;
    op.upper[i] = i + 1 < m ? c : 0.0;
  }
  return op;
}

Tridiagonal assemble_weighted_operator(const GridSpec& grid, double d,
                                       BoundaryKind bc) {
  if (!(d > 0.0)) throw ParameterError("weighted operator: d must be positive");
  if (grid.domain().a() != 0.0 || grid.domain().b() != 1.0) {
    throw ParameterError("weighted operator: grid must span (0, 1)");
  }
  if (bc == BoundaryKind::Dirichlet) {
    throw ParameterError("weighted operator: left boundary must be Neumann-type");
  }
  const std::size_t m = grid.size() - 1;  // nodes 0..n-1
  const double h = grid.h();
  auto face = [&](std::size_t i) {  // coefficient at x_{i+1/2}
    return std::pow((static_cast<double>(i) + 0.5) * h, d);
  };
  Tridiagonal op(m);
  // Node 0: half cell of width h/2, zero flux through x = 0.
  op.diag[0] = -2.0 * face(0) / (h * h);
  op.upper[0] = 2.0 * face(0) / (h * h);
  for (std::size_t i = 1; i < m; ++i) {
    const double left = face(i - 1) / (h * h);
    const double right = face(i) / (h * h);
    op.lower[i] = left;
    op.diag[i] = -(left + right);
    op.upper[i] = i + 1 < m ? right : 0.0;
  }
  return op;
}

GridField step_imex(const GridField& u, double dt, const ProblemSpec& spec) {
  if (!(dt > 0.0)) throw ParameterError("step_imex: dt must be positive");
  if (spec.degenerate) throw ParameterError("step_imex: spec is degenerate");
  const SemilinearStepper stepper(u.grid, spec);
  std::vector<double> out;
  if (!stepper.step(u.values, dt, out)) {
    out.assign(u.values.size(), std::numeric_limits<double>::quiet_NaN());
  }
  return GridField(u.grid, std::move(out));
}

GridField step_degenerate(const GridField& u, double dt, const ProblemSpec& spec) {
  if (!(dt > 0.0)) throw ParameterError("step_degenerate: dt must be positive");
  if (!spec.degenerate) throw ParameterError("step_degenerate: spec is not degenerate");
  const DegenerateStepper stepper(u.grid, spec);
  std::vector<double> out;
  if (!stepper.step(u.values, dt, out)) {
    out.assign(u.values.size(), std::numeric_limits<double>::quiet_NaN());
  }
  return GridField(u.grid, std::move(out));
}

Trajectory solve_semilinear(const ProblemSpec& spec, const SolveConfig& config) {
  if (spec.degenerate) throw ParameterError("solve_semilinear: spec is degenerate");
  if (spec.bc != BoundaryKind::Dirichlet) {
    throw ParameterError("solve_semilinear: only Dirichlet conditions are supported");
  }
  return run_adaptive<SemilinearStepper>(spec, config, false);
}

Trajectory solve_degenerate(const ProblemSpec& spec, const SolveConfig& config) {
  if (!spec.degenerate) {
    throw ParameterError("solve_degenerate: spec has no degenerate parameters");
  }
  return run_adaptive<DegenerateStepper>(spec, config, true);
}

Trajectory solve(const ProblemSpec& spec, const SolveConfig& config) {
  return spec.degenerate ? solve_degenerate(spec, config)
                         : solve_semilinear(spec, config);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,l2,h1_semi,sup,m,dt\n";
  for (const auto& f : traj.frames) {
    out << format_real(f.t) << ',' << format_real(f.diag.l2) << ','
        << format_real(f.diag.h1_semi) << ',' << format_real(f.diag.sup) << ','
        << format_real(f.diag.m) << ',' << format_real(f.diag.dt_used) << '\n';
  }
}

void write_frames_csv(std::ostream& out, const Trajectory& traj) {
  if (traj.frames.empty()) return;
  const auto& grid = traj.frames.front().u.grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << (i ? "," : "") << format_real(grid.node(i));
  }
  out << '\n';
  for (const auto& f : traj.frames) {
    for (std::size_t i = 0; i < f.u.values.size(); ++i) {
      out << (i ? "," : "") << format_real(f.u.values[i]);
    }
    out << '\n';
  }
}

}  // namespace mvpde
