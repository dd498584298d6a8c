#include "mvpde/problem.hpp"

#include <cmath>

#include "mvpde/errors.hpp"
#include "mvpde/trajectory.hpp"

namespace mvpde {

void ProblemSpec::validate() const {
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    throw ParameterError("nu must be positive");
  }
  if (!degenerate) return;
  if (!(degenerate->d > 0.0)) throw ParameterError("degenerate.d must be > 0");
  if (!(degenerate->p > 1.0)) throw ParameterError("degenerate.p must be > 1");
  if (domain.a() != 0.0 || domain.b() != 1.0) {
    throw ParameterError("degenerate problems are posed on (0, 1)");
  }
  if (bc == BoundaryKind::Dirichlet) {
    throw ParameterError(
        "degenerate problems use the mixed or weighted boundary condition");
  }
}

void SolveConfig::validate() const {
  if (!(t_end > 0.0)) throw ParameterError("t_end must be positive");
  if (n < 8) throw ParameterError("n must be at least 8");
  if (!(dt_init > 0.0) || dt_init > t_end) {
    throw ParameterError("dt_init must lie in (0, t_end]");
  }
  if (!(dt_min > 0.0) || !(dt_min < dt_init)) {
    throw ParameterError("dt_min must lie in (0, dt_init)");
  }
  if (dt_max < 0.0 || (dt_max > 0.0 && dt_max < dt_min)) {
    throw ParameterError("dt_max must be 0 (unbounded) or >= dt_min");
  }
  if (!(rel_step_tol > 0.0)) throw ParameterError("rel_step_tol must be positive");
  if (!(blowup_threshold > 1.0)) {
    throw ParameterError("blowup_threshold must exceed 1");
  }
  if (frame_stride < 0) throw ParameterError("frame_stride must be >= 0");
  if (auto_frames < 1) throw ParameterError("auto_frames must be >= 1");
  for (double p : lp_orders) {
    if (!(p > 0.0)) throw ParameterError("lp_orders entries must be positive");
  }
}

const char* outcome_name(const Outcome& o) {
  if (std::holds_alternative<Completed>(o)) return "completed";
  if (std::holds_alternative<BlownUp>(o)) return "blown_up";
  return "stalled_step";
}

}  // namespace mvpde
