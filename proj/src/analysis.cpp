#include "mvpde/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mvpde/errors.hpp"
#include "mvpde/roots.hpp"

namespace mvpde {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kAverageSamples = 256;
constexpr int kSandwichSamples = 512;
constexpr double kEnergyBand = 1e-6;

double dead_band(double lhs, double rhs) {
  return kVerdictTolerance * std::max(std::abs(lhs), std::abs(rhs));
}

std::vector<double> log_spaced(double lo, double hi, int count) {
  std::vector<double> out(count);
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < count; ++i) {
    out[i] = i == count - 1 ? hi : std::exp(a + (b - a) * i / (count - 1));
  }
  out.front() = lo;
  return out;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& t,
                                         const std::vector<double>& v) {
  std::vector<double> acc(t.size(), 0.0);
  for (std::size_t k = 1; k < t.size(); ++k) {
    acc[k] = acc[k - 1] + 0.5 * (t[k] - t[k - 1]) * (v[k] + v[k - 1]);
  }
  return acc;
}

void require_nonnegative(const GridField& u, const char* who) {
  for (double v : u.values) {
    if (v < -1e-12) {
      throw PositivityError(std::string(who) + ": initial data must be nonnegative");
    }
  }
}

int upward_jumps(const std::vector<double>& values, double& max_jump) {
  int count = 0;
  max_jump = 0.0;
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double jump = values[k] - values[k - 1];
    max_jump = std::max(max_jump, jump);
    if (jump > kEnergyBand * (1.0 + std::abs(values[k - 1]))) ++count;
  }
  return count;
}

bool is_lower_envelope(const Potential& f, const SandwichBounds& b, double extent) {
  const double top = std::max(extent, 1.0);
  for (int i = 0; i <= 256; ++i) {
    const double s = top * i / 256.0;
    for (double x : {s, -s}) {
      if (!f.valid_domain().contains(x)) continue;
      const double want = b.lower(x);
      if (std::abs(f(x) - want) > 1e-12 * (1.0 + std::abs(want))) return false;
    }
  }
  return true;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Boundary: return "boundary";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

CriterionEntry strict_greater(std::string id, double lhs, double rhs,
                              Inputs inputs) {
  const double margin = lhs - rhs;
  const double tol = dead_band(lhs, rhs);
  Verdict v = Verdict::Inconclusive;
  if (!std::isnan(margin)) {
    v = margin > tol ? Verdict::Holds
        : std::abs(margin) <= tol ? Verdict::Boundary : Verdict::Fails;
  }
  return {std::move(id), v, margin, tol, std::move(inputs)};
}

CriterionEntry non_strict_greater(std::string id, double lhs, double rhs,
                                  Inputs inputs) {
  const double margin = lhs - rhs;
  const double tol = dead_band(lhs, rhs);
  Verdict v = Verdict::Inconclusive;
  if (!std::isnan(margin)) v = margin >= -tol ? Verdict::Holds : Verdict::Fails;
  return {std::move(id), v, margin, tol, std::move(inputs)};
}

const CriterionEntry& ConditionReport::at(const std::string& id) const {
  for (const auto& e : entries) {
    if (e.id == id) return e;
  }
  throw ParameterError("no criterion named '" + id + "'");
}

bool ConditionReport::all_hold() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const auto& e) { return e.verdict == Verdict::Holds; });
}

void SandwichBounds::validate() const {
  if (!(c1 >= 0.0)) throw ParameterError("sandwich: c1 must be >= 0");
  if (!(c2 > 0.0)) throw ParameterError("sandwich: c2 must be > 0");
  if (!(r > 2.0)) throw ParameterError("sandwich: r must be > 2");
}

double SandwichBounds::upper(double s) const {
  return c1 - c2 * std::pow(std::abs(s), r);
}

double SandwichBounds::lower(double s) const {
  return c1 - 0.25 * c2 * (r + 2.0) * std::pow(std::abs(s), r);
}

std::vector<double> average_sample_points(Interval s) {
  if (!(s.lo < s.hi)) throw ParameterError("empty s interval");
  if (!(s.hi > 0.0)) {
    throw ParameterError("avg-bound: the s interval has no positive part");
  }
  const double lo = s.lo > 0.0 ? s.lo : s.hi * 1e-6;
  return log_spaced(lo, s.hi, kAverageSamples);
}

ConditionReport evaluate_decay_criteria(const ProblemSpec& spec, Interval s,
                                        double lambda1, int cells) {
  if (!(s.lo < s.hi)) throw ParameterError("empty s interval");
  if (!(lambda1 > 0.0)) throw ParameterError("lambda1 must be positive");
  const Potential& f = spec.potential;
  const double bound = -spec.nu * lambda1;
  ConditionReport report;

  const double inf = f.infimum(s);
  report.entries.push_back(strict_greater(
      "positivity", inf, 0.0, {{"s_lo", s.lo}, {"s_hi", s.hi}, {"inf_f", inf}}));
  report.entries.push_back(strict_greater(
      "inf-bound", inf, bound,
      {{"inf_f", inf}, {"nu", spec.nu}, {"lambda1", lambda1}, {"bound", bound}}));

  double min_avg = std::numeric_limits<double>::infinity();
  double argmin = kNaN;
  for (double x : average_sample_points(s)) {
    const double a = f.average(x);
    if (a < min_avg) {
      min_avg = a;
      argmin = x;
    }
  }
  report.entries.push_back(strict_greater(
      "avg-bound", min_avg, bound,
      {{"min_avg", min_avg}, {"argmin_s", argmin}, {"samples", kAverageSamples},
       {"bound", bound}}));

  const GridSpec grid(spec.domain, cells);
  const GridField u0 = sample_initial_data(spec.initial, grid, spec.bc);
  const double norm_sq = l2_norm_squared(u0);
  if (!(norm_sq > 0.0)) throw DegenerateFieldError("necessary: ||u0|| = 0");
  std::vector<double> weighted(u0.values.size());
  for (std::size_t i = 0; i < weighted.size(); ++i) {
    const double v = u0.values[i];
    weighted[i] = f(v) * v * v;
  }
  const double ratio = trapezoid(grid, weighted) / norm_sq;
  report.entries.push_back(strict_greater(
      "necessary", ratio, bound,
      {{"mean_ratio", ratio}, {"l2_sq", norm_sq}, {"bound", bound}}));
  return report;
}

ConditionReport evaluate_blowup_criterion(const GridField& u0, double nu,
                                          const SandwichBounds& b,
                                          const Potential& f, Interval s) {
  b.validate();
  if (!(nu > 0.0)) throw ParameterError("nu must be positive");
  if (!(s.lo < s.hi)) throw ParameterError("empty s interval");
  require_nonnegative(u0, "blow-up criterion");
  ConditionReport report;

  // The tighter of the two sandwich gaps over all samples, reported as
  // lhs - rhs at the sample that realizes it.
  double worst = std::numeric_limits<double>::infinity();
  double lhs_at = kNaN, rhs_at = kNaN, s_at = kNaN;
  for (int i = 0; i < kSandwichSamples; ++i) {
    const double x = s.lo + s.width() * i / (kSandwichSamples - 1);
    const double fx = f(x);
    const double up = b.upper(x), lo = b.lower(x);
    if (up - fx < worst) {
      worst = up - fx;
      lhs_at = up;
      rhs_at = fx;
      s_at = x;
    }
    if (fx - lo < worst) {
      worst = fx - lo;
      lhs_at = fx;
      rhs_at = lo;
      s_at = x;
    }
  }
  report.entries.push_back(non_strict_greater(
      "sandwich-verify", lhs_at, rhs_at,
      {{"s_lo", s.lo}, {"s_hi", s.hi}, {"samples", kSandwichSamples},
       {"worst_s", s_at}, {"c1", b.c1}, {"c2", b.c2}, {"r", b.r}}));

  const double grad_sq = l2_norm_squared(derivative(u0));
  const double l2_sq = l2_norm_squared(u0);
  const double power = lp_integral(u0, b.r + 2.0);
  const double lhs = nu * grad_sq + b.c1 * l2_sq;
  const double rhs = 0.5 * b.c2 * power;
  report.entries.push_back(strict_greater(
      "criterion", rhs, lhs,
      {{"nu", nu}, {"grad_sq", grad_sq}, {"l2_sq", l2_sq},
       {"power_integral", power}, {"lhs", lhs}, {"rhs", rhs}}));
  return report;
}

WangNorms wang_norms(const GridField& u0, double d, double p) {
  require_nonnegative(u0, "degenerate criteria");
  const GridField ux = derivative(u0);
  WangNorms w;
  w.l2_sq = l2_norm_squared(u0);
  w.grad_sq = l2_norm_squared(ux);
  if (!(w.l2_sq > 0.0)) throw DegenerateFieldError("||u0|| = 0");
  if (!(w.grad_sq > 0.0)) throw DegenerateFieldError("||u0_x|| = 0");
  w.grad_l4_sq = std::sqrt(lp_integral(ux, 4.0));
  w.weighted_grad = weighted_square(ux, d);
  w.power_integral = lp_integral(u0, p + 1.0);
  return w;
}

ConditionReport evaluate_wang_criteria(const GridField& u0, double d, double p) {
  if (!(d >= 0.0)) throw ParameterError("d must be >= 0");
  if (!(p > 1.0)) throw ParameterError("p must be > 1");
  if (u0.grid.domain().a() < 0.0) {
    throw ParameterError("degenerate criteria need a grid inside [0, inf)");
  }
  const WangNorms w = wang_norms(u0, d, p);
  const Inputs common = {{"d", d},
                         {"p", p},
                         {"l2_sq", w.l2_sq},
                         {"grad_sq", w.grad_sq},
                         {"grad_l4_sq", w.grad_l4_sq},
                         {"weighted_grad", w.weighted_grad},
                         {"power_integral", w.power_integral}};
  auto with = [&](Inputs extra) {
    Inputs all = common;
    all.insert(all.end(), extra.begin(), extra.end());
    return all;
  };
  ConditionReport report;

  const double decay_lhs = w.power_integral / w.l2_sq;
  const double decay_rhs = 0.25 * kPi * kPi * w.weighted_grad / w.grad_sq;
  report.entries.push_back(strict_greater(
      "wang-decay", decay_rhs, decay_lhs,
      with({{"lhs", decay_lhs}, {"rhs", decay_rhs}})));

  const double blow_rhs = w.power_integral / (p + 1.0);
  report.entries.push_back(strict_greater(
      "wang-blowup", blow_rhs, w.weighted_grad,
      with({{"lhs", w.weighted_grad}, {"rhs", blow_rhs},
            {"E0", w.weighted_grad - blow_rhs}})));

  const double eset_lhs =
      w.l2_sq * w.grad_l4_sq / (w.power_integral * w.grad_sq);
  const double eset_rhs = kDecayLevel * std::sqrt(1.0 + 2.0 * d);
  report.entries.push_back(strict_greater(
      "e-set", eset_lhs, eset_rhs,
      with({{"lhs", eset_lhs}, {"rhs", eset_rhs}})));

  const double possible_lhs = w.grad_l4_sq / w.power_integral;
  const double possible_rhs = 0.25 * kPi * kPi;
  report.entries.push_back(non_strict_greater(
      "blowup-possible", possible_rhs, possible_lhs,
      with({{"lhs", possible_lhs}, {"rhs", possible_rhs}})));
  return report;
}

DecayReport verify_trajectory(const Trajectory& traj, const MeanValuePath& path,
                              double lambda1, const WeightedMeanPath* xi_d,
                              const ChiPath* chi) {
  const std::size_t n = traj.frames.size();
  if (n == 0) throw ParameterError("verify: empty trajectory");
  if (path.times.size() != n) {
    throw ParameterError("verify: path and trajectory are misaligned");
  }
  const GridSpec& grid = traj.frames.front().u.grid;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(traj.frames[k].u.grid == grid)) {
      throw ParameterError("verify: frames live on different grids");
    }
    if (path.times[k] != traj.frames[k].t) {
      throw ParameterError("verify: path time differs from frame time");
    }
  }
  const bool degenerate = traj.spec.degenerate.has_value();
  const double nu = traj.spec.nu;

  DecayReport r;
  for (const auto& f : traj.frames) {
    r.times.push_back(f.t);
    r.norms.push_back(l2_norm(f.u));
  }
  const double norm0 = r.norms.front();
  r.F = cumulative_trapezoid(r.times, path.m);

  auto slack = [&](double norm, double env) {
    if (env > 0.0) return norm / env - 1.0;
    return norm > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  auto track = [&](double s) { r.worst_violation = std::max(r.worst_violation, s); };
  r.worst_violation = -std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < n; ++k) {
    const double env = k == 0 ? norm0 : std::exp(-r.F[k]) * norm0;
    r.envelope_general.push_back(env);
    r.slack_general.push_back(slack(r.norms[k], env));
    track(r.slack_general.back());
  }

  if (!degenerate && traj.spec.bc == BoundaryKind::Dirichlet) {
    for (std::size_t k = 0; k < n; ++k) {
      const double env =
          k == 0 ? norm0 : std::exp(-(nu * lambda1 * r.times[k] + r.F[k])) * norm0;
      r.envelope_sharp.push_back(env);
      r.slack_sharp.push_back(slack(r.norms[k], env));
      track(r.slack_sharp.back());
    }
  }

  if (degenerate && xi_d && chi) {
    if (xi_d->times.size() != n || chi->times.size() != n) {
      throw ParameterError("verify: degenerate paths are misaligned");
    }
    std::vector<double> rate(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double uc = traj.frames[k].u.interpolate(chi->chi[k]);
      rate[k] = lambda1 * std::pow(xi_d->xi_d[k], xi_d->d) -
                std::pow(std::max(uc, 0.0), chi->p - 1.0);
    }
    const auto G = cumulative_trapezoid(r.times, rate);
    for (std::size_t k = 0; k < n; ++k) {
      const double env = k == 0 ? norm0 : std::exp(-G[k]) * norm0;
      r.envelope_deg.push_back(env);
      r.slack_deg.push_back(slack(r.norms[k], env));
      track(r.slack_deg.back());
    }
  }

  if (!degenerate && norm0 > 0.0) {
    // ||u(t)||^2 + 2 nu int_0^t e^{-2(F(t)-F(s))} ||u_x(s)||^2 ds
    //   = e^{-2F(t)} ||u0||^2
    double acc = 0.0;  // int_0^t e^{2F(s)} ||u_x(s)||^2 ds
    double prev = 0.0;
    const double scale = norm0 * norm0;
    for (std::size_t k = 0; k < n; ++k) {
      const double g = std::exp(2.0 * r.F[k]) * dirichlet_form(traj.frames[k].u);
      if (k > 0) acc += 0.5 * (r.times[k] - r.times[k - 1]) * (g + prev);
      prev = g;
      const double decay = std::exp(-2.0 * r.F[k]);
      const double lhs = r.norms[k] * r.norms[k] + 2.0 * nu * decay * acc;
      // Relative to the larger of ||u0||^2 and the right-hand side, so
      // that e^{-2F} >> 1 (negative m) does not swamp the comparison.
      const double res = std::abs(lhs - decay * scale) / (std::max(decay, 1.0) * scale);
      r.energy_residual.push_back(res);
      r.max_energy_residual = std::max(r.max_energy_residual, res);
    }
  }
  return r;
}

bool EnergyReport::asserted_monotone() const {
  return (!script_asserted || script_violations == 0) &&
         (!deg_asserted || deg_violations == 0);
}

double script_energy(const GridField& u, double nu, const SandwichBounds& b) {
  return nu * dirichlet_form(u) + b.c1 * l2_norm_squared(u) -
         0.5 * b.c2 * lp_integral(u, b.r + 2.0);
}

double degenerate_energy(const GridField& u, double d, double p) {
  return dirichlet_form(u, d) - lp_integral(u, p + 1.0) / (p + 1.0);
}

EnergyReport energy_monitor(const Trajectory& traj,
                            const std::optional<SandwichBounds>& bounds,
                            const std::optional<DegenerateParams>& degenerate) {
  if (!bounds && !degenerate) {
    throw ParameterError("energy monitor: no functional requested");
  }
  EnergyReport r;
  double extent = 0.0;
  for (const auto& f : traj.frames) {
    r.times.push_back(f.t);
    extent = std::max(extent, f.diag.sup);
  }
  if (bounds) {
    bounds->validate();
    for (const auto& f : traj.frames) {
      r.script_E.push_back(script_energy(f.u, traj.spec.nu, *bounds));
    }
    r.script_violations = upward_jumps(r.script_E, r.script_max_jump);
    r.script_asserted = !traj.spec.degenerate &&
                        is_lower_envelope(traj.spec.potential, *bounds, extent);
  }
  if (degenerate) {
    for (const auto& f : traj.frames) {
      r.E_deg.push_back(degenerate_energy(f.u, degenerate->d, degenerate->p));
    }
    r.deg_violations = upward_jumps(r.E_deg, r.deg_max_jump);
    r.deg_asserted = traj.spec.degenerate.has_value();
  }
  return r;
}

Samples xi_square_series(const Trajectory& traj, const MeanValuePath& path) {
  if (path.times.size() != traj.frames.size()) {
    throw ParameterError("xi series: path and trajectory are misaligned");
  }
  Samples out;
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    const double v = traj.frames[k].u.interpolate(path.xi[k]);
    out.emplace_back(path.times[k], v * v);
  }
  return out;
}

const char* to_string(BlowupPrediction::Method m) {
  switch (m) {
    case BlowupPrediction::Method::GenericThreshold: return "generic_threshold";
    case BlowupPrediction::Method::DegenerateClosedForm: return "closed_form";
    case BlowupPrediction::Method::ComparisonODE: return "comparison_ode";
  }
  return "?";
}

std::vector<BlowupPrediction> predict_blowup(
    const NormReport& norms, double measure,
    const std::optional<SandwichBounds>& bounds,
    const std::optional<DegenerateParams>& degenerate,
    const std::optional<Samples>& xi_square) {
  if (!norms.l2) throw ParameterError("predict: the norm report lacks ||u0||");
  const double norm0 = *norms.l2;
  if (!(norm0 > 0.0)) throw DegenerateFieldError("predict: ||u0|| = 0");
  std::vector<BlowupPrediction> out;

  if (bounds && xi_square) {
    bounds->validate();
    if (!(measure > 0.0)) throw ParameterError("predict: |Omega| must be positive");
    const auto& series = *xi_square;
    if (series.size() < 2) throw ParameterError("predict: series needs two points");
    const double r = bounds->r;
    const double threshold = 2.0 * std::pow(measure, 0.5 * (r - 2.0)) /
                             (bounds->c2 * (r - 2.0) * std::pow(norm0, r - 2.0));
    double acc = 0.0;
    double t_prime = kNaN;
    for (std::size_t k = 1; k < series.size(); ++k) {
      const auto [t0, v0] = series[k - 1];
      const auto [t1, v1] = series[k];
      const double step = 0.5 * (t1 - t0) * (v0 + v1);
      if (acc + step >= threshold) {
        // Cumulative integral of the linear interpolant is quadratic in t.
        const double need = threshold - acc;
        const double slope = (v1 - v0) / (t1 - t0);
        double tau;
        if (std::abs(slope) * (t1 - t0) <= 1e-14 * std::max(std::abs(v0), 1e-300)) {
          tau = need / v0;
        } else {
          tau = (-v0 + std::sqrt(std::max(v0 * v0 + 2.0 * slope * need, 0.0))) / slope;
        }
        t_prime = t0 + std::clamp(tau, 0.0, t1 - t0);
        break;
      }
      acc += step;
    }
    if (std::isnan(t_prime)) {
      throw NotReachedError("accumulated u^2(xi) integral " + format_real(acc) +
                            " stays below the threshold " + format_real(threshold) +
                            " up to t=" + format_real(series.back().first));
    }
    // Mean-value time: the first point where the series equals its average
    // over [0, t'].
    const double mean = threshold / (t_prime - series.front().first);
    double t_star = kNaN;
    for (std::size_t k = 1; k < series.size() && std::isnan(t_star); ++k) {
      const auto [t0, v0] = series[k - 1];
      const auto [t1, v1] = series[k];
      const double a = v0 - mean, b = v1 - mean;
      if (a == 0.0 && b == 0.0) {
        t_star = 0.5 * (t0 + std::min(t1, t_prime));
      } else if (a == 0.0) {
        t_star = t0;
      } else if (a * b <= 0.0) {
        t_star = t0 + (t1 - t0) * a / (a - b);
      }
      if (t1 >= t_prime && std::isnan(t_star)) break;
    }
    out.push_back({BlowupPrediction::Method::GenericThreshold, t_prime,
                   {{"threshold", threshold},
                    {"accumulated_integral", threshold},
                    {"t_star", t_star},
                    {"mean_integrand", mean},
                    {"norm0", norm0},
                    {"measure", measure},
                    {"c2", bounds->c2},
                    {"r", r}}});
  }

  if (degenerate) {
    const double p = degenerate->p;
    if (!(p > 1.0)) throw ParameterError("predict: p must be > 1");
    out.push_back({BlowupPrediction::Method::DegenerateClosedForm,
                   (p + 1.0) / (2.0 * p) * std::pow(norm0, -0.5 * (p - 1.0)),
                   {{"p", p}, {"norm0", norm0}}});
    out.push_back({BlowupPrediction::Method::ComparisonODE,
                   (p + 1.0) / (p * (p - 1.0)) * std::pow(norm0, -(p - 1.0)),
                   {{"p", p}, {"norm0", norm0}}});
  }
  if (out.empty()) {
    throw ParameterError("predict: supply sandwich bounds with a trajectory "
                         "series or degenerate parameters");
  }
  return out;
}

double fit_decay_rate(const Trajectory& traj) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  int count = 0;
  for (const auto& f : traj.frames) {
    if (!(f.diag.l2 > 0.0)) continue;
    const double y = std::log(f.diag.l2);
    st += f.t;
    sy += y;
    stt += f.t * f.t;
    sty += f.t * y;
    ++count;
  }
  if (count < 2) throw DegenerateFieldError("decay fit needs two nonzero frames");
  const double denom = count * stt - st * st;
  if (!(denom > 0.0)) throw DegenerateFieldError("decay fit needs distinct times");
  return -(count * sty - st * sy) / denom;
}

}  // namespace mvpde
