#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mvpde/csv.hpp"
#include "mvpde/mvt.hpp"
#include "mvpde/problem.hpp"
#include "mvpde/quadrature.hpp"
#include "mvpde/trajectory.hpp"

namespace mvpde {

enum class Verdict { Holds, Fails, Boundary, Inconclusive };
const char* to_string(Verdict v);

/// Relative dead-band of the verdicts.
inline constexpr double kVerdictTolerance = 1e-9;
/// 4 / pi^2, the decay threshold of the degenerate application.
inline constexpr double kDecayLevel = 4.0 / (kPi * kPi);

using Inputs = std::vector<std::pair<std::string, double>>;

struct CriterionEntry {
  std::string id;
  Verdict verdict;
  double margin;  // signed; positive means the inequality holds
  double tolerance;
  Inputs inputs;  // every number that entered the comparison
};

/// Strict `lhs > rhs`: Holds when the margin exceeds the dead-band,
/// Boundary inside it, Fails below it, Inconclusive on NaN.
CriterionEntry strict_greater(std::string id, double lhs, double rhs,
                              Inputs inputs);
/// Non-strict `lhs >= rhs`: the dead-band counts as Holds.
CriterionEntry non_strict_greater(std::string id, double lhs, double rhs,
                                  Inputs inputs);

struct ConditionReport {
  std::vector<CriterionEntry> entries;

  /// Throws ParameterError when the id is absent.
  const CriterionEntry& at(const std::string& id) const;
  bool all_hold() const;
};

/// c1 - (c2 (r + 2) / 4) s^r <= f(s) <= c1 - c2 s^r.
struct SandwichBounds {
  double c1 = 0.0;
  double c2 = 1.0;
  double r = 4.0;

  void validate() const;
  double upper(double s) const;
  double lower(double s) const;
};

/// Ids: "positivity", "inf-bound", "avg-bound", "necessary". The necessary
/// condition is evaluated on the initial data sampled with `cells` cells.
ConditionReport evaluate_decay_criteria(const ProblemSpec& spec,
                                        Interval s_interval, double lambda1,
                                        int cells = 200);

/// The 256 averaging points used by "avg-bound", log-spaced over the
/// positive part of the interval. A left end at or below 0 is replaced by
/// 1e-6 times the right end.
std::vector<double> average_sample_points(Interval s_interval);

/// Ids: "sandwich-verify" (512 points), "criterion".
ConditionReport evaluate_blowup_criterion(const GridField& u0, double nu,
                                          const SandwichBounds& bounds,
                                          const Potential& f,
                                          Interval s_interval);

/// Ids: "wang-decay", "wang-blowup", "e-set", "blowup-possible".
ConditionReport evaluate_wang_criteria(const GridField& u0, double d,
                                       double p);

/// Quantities shared by the degenerate checks and the sweep.
struct WangNorms {
  double l2_sq;            // ||u0||^2
  double grad_sq;          // ||u0_x||^2
  double grad_l4_sq;       // |u0_x|_4^2 = (int u0_x^4)^(1/2)
  double weighted_grad;    // <x^d, u0_x^2>
  double power_integral;   // |u0|_{p+1}^{p+1}
};
WangNorms wang_norms(const GridField& u0, double d, double p);

struct DecayReport {
  std::vector<double> times;
  std::vector<double> norms;  // ||u(t_k)||
  std::vector<double> F;      // int_0^t m
  std::vector<double> envelope_general;
  std::vector<double> slack_general;  // ||u|| / envelope - 1
  std::vector<double> envelope_sharp;  // empty unless Dirichlet
  std::vector<double> slack_sharp;
  std::vector<double> envelope_deg;  // empty unless degenerate paths given
  std::vector<double> slack_deg;
  // |lhs - rhs| / (max(1, e^{-2F}) ||u0||^2); empty for degenerate runs.
  std::vector<double> energy_residual;
  double max_energy_residual = 0.0;
  double worst_violation = 0.0;  // max slack over all envelopes

  bool envelopes_hold(double tol) const { return worst_violation <= tol; }
};

/// Envelope checks along a trajectory. The path must come from the same
/// frames. For degenerate runs pass the weighted and chi paths; the
/// degenerate envelope uses lambda1 (pi^2 / 4 for the mixed condition).
DecayReport verify_trajectory(const Trajectory& traj, const MeanValuePath& path,
                              double lambda1,
                              const WeightedMeanPath* xi_d = nullptr,
                              const ChiPath* chi = nullptr);

struct EnergyReport {
  std::vector<double> times;
  std::vector<double> script_E;  // empty unless bounds were given
  std::vector<double> E_deg;     // empty unless degenerate parameters given
  int script_violations = 0;
  double script_max_jump = 0.0;
  bool script_asserted = false;  // potential equals the lower envelope
  int deg_violations = 0;
  double deg_max_jump = 0.0;
  bool deg_asserted = false;

  /// True when every asserted functional is nonincreasing.
  bool asserted_monotone() const;
};

EnergyReport energy_monitor(const Trajectory& traj,
                            const std::optional<SandwichBounds>& bounds,
                            const std::optional<DegenerateParams>& degenerate);

/// nu ||u_x||^2 + c1 ||u||^2 - (c2 / 2) |u|_{r+2}^{r+2}.
double script_energy(const GridField& u, double nu, const SandwichBounds& b);
/// <x^d, u_x^2> - |u|_{p+1}^{p+1} / (p + 1).
double degenerate_energy(const GridField& u, double d, double p);

/// (t_k, u~(xi_k, t_k)^2) along a mean-value path.
Samples xi_square_series(const Trajectory& traj, const MeanValuePath& path);

struct BlowupPrediction {
  enum class Method { GenericThreshold, DegenerateClosedForm, ComparisonODE };
  Method method;
  double t_prime;
  Inputs inputs;
};
const char* to_string(BlowupPrediction::Method m);

/// All predictions the supplied data allows. GenericThreshold needs bounds
/// and the series u^2(xi(t), t) from a trajectory; it accumulates the
/// series by the trapezoid rule and throws NotReachedError when the
/// threshold is not attained within the series.
std::vector<BlowupPrediction> predict_blowup(
    const NormReport& u0_norms, double measure,
    const std::optional<SandwichBounds>& bounds,
    const std::optional<DegenerateParams>& degenerate,
    const std::optional<Samples>& xi_square = {});

/// Least-squares slope of -log ||u(t)|| over the frames with ||u|| > 0.
double fit_decay_rate(const Trajectory& traj);

}  // namespace mvpde
