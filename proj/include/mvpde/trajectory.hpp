#pragma once

#include <variant>
#include <vector>

#include "mvpde/problem.hpp"

namespace mvpde {

struct SolveConfig {
  double t_end = 1.0;
  int n = 200;
  double dt_init = 1e-4;
  double dt_min = 1e-12;
  double dt_max = 0.0;  // 0 means t_end
  double rel_step_tol = 1e-4;
  double blowup_threshold = 1e8;
  int frame_stride = 0;  // 0: about `auto_frames` frames evenly in time
  int auto_frames = 200;
  std::vector<double> lp_orders;  // extra |u|_p diagnostics per frame

  void validate() const;
  double effective_dt_max() const { return dt_max > 0.0 ? dt_max : t_end; }
};

struct BlowupEvent {
  double t_detect;
  double sup_norm;
  double l2_norm;
  double last_dt;
};

struct Completed {};
struct BlownUp {
  BlowupEvent event;
};
struct StalledStep {
  double t;
};
using Outcome = std::variant<Completed, BlownUp, StalledStep>;

const char* outcome_name(const Outcome& o);

struct FrameDiagnostics {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double sup = 0.0;
  double m = 0.0;  // <f(u), u^2> / ||u||^2, NaN when ||u|| = 0
  double dt_used = 0.0;
  std::vector<double> lp;  // aligned with SolveConfig::lp_orders
};

struct Frame {
  double t;
  GridField u;
  FrameDiagnostics diag;
};

struct Trajectory {
  ProblemSpec spec;
  SolveConfig config;
  std::vector<Frame> frames;
  Outcome outcome;
  int accepted_steps = 0;
  int rejected_steps = 0;
  int clamped_values = 0;  // degenerate runs: tiny negatives reset to 0

  bool blown_up() const { return std::holds_alternative<BlownUp>(outcome); }
};

}  // namespace mvpde
