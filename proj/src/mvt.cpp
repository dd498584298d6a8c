#include "mvpde/mvt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <functional>

#include "mvpde/csv.hpp"
#include "mvpde/errors.hpp"
#include "mvpde/quadrature.hpp"

namespace mvpde {
namespace {

bool opposite(double a, double b) { return (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0); }

// Root of phi(u~(x)) - level inside cell [x_i, x_{i+1}] where the end
// values have opposite signs.
double bisect_cell(const GridField& u, std::size_t i,
                   const std::function<double(double)>& phi, double level,
                   double g_left) {
  const double x0 = u.grid.node(i);
  const double x1 = u.grid.node(i + 1);
  const double u0 = u.values[i];
  const double u1 = u.values[i + 1];
  auto g = [&](double x) {
    return phi(u0 + (u1 - u0) * (x - x0) / (x1 - x0)) - level;
  };
  double lo = x0, hi = x1, g_lo = g_left, g_hi = g(x1);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    const double g_mid = g(mid);
    if (g_mid == 0.0) return mid;
    if (std::signbit(g_mid) == std::signbit(g_lo)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
      g_hi = g_mid;
    }
  }
  double best = std::abs(g_lo) <= std::abs(g_hi) ? lo : hi;
  // Keep the point strictly inside the domain.
  if (best == u.grid.domain().a()) best = hi;
  if (best == u.grid.domain().b()) best = lo;
  return best;
}

double pick(const std::vector<double>& candidates, std::optional<double> prev) {
  if (!prev) return candidates.front();
  double best = candidates.front();
  double best_dist = std::abs(best - *prev);
  for (double c : candidates) {
    const double dist = std::abs(c - *prev);
    if (dist < best_dist) {
      best = c;
      best_dist = dist;
    }
  }
  return best;
}

double locate_level(const GridField& u, const std::function<double(double)>& phi,
                    double level, std::optional<double> prev,
                    const char* what) {
  const std::size_t count = u.values.size();
  std::vector<double> g(count);
  for (std::size_t i = 0; i < count; ++i) g[i] = phi(u.values[i]) - level;

  std::vector<double> candidates;
  for (std::size_t i = 1; i + 1 < count; ++i) {
    if (g[i] == 0.0) candidates.push_back(u.grid.node(i));
  }
  for (std::size_t i = 0; i + 1 < count; ++i) {
    if (opposite(g[i], g[i + 1])) {
      candidates.push_back(bisect_cell(u, i, phi, level, g[i]));
    }
  }
  if (candidates.empty()) {
    const double slack = 1e-12 * std::max(1.0, std::abs(level));
    for (std::size_t i = 1; i + 1 < count; ++i) {
      if (std::abs(g[i]) <= slack) candidates.push_back(u.grid.node(i));
    }
  }
  if (candidates.empty()) {
    throw BracketError(std::string(what) +
                       ": no sign change of the interpolant around level " +
                       format_real(level));
  }
  std::sort(candidates.begin(), candidates.end());
  return pick(candidates, prev);
}

template <class Fn>
auto per_frame(const Trajectory& traj, Fn&& fn) {
  if (traj.frames.size() < 2) {
    throw ParameterError("path extraction needs at least 2 frames");
  }
  for (const auto& frame : traj.frames) {
    try {
      fn(frame);
    } catch (const PathError&) {
      throw;
    } catch (const Error& e) {
      throw PathError(frame.t, e.what());
    }
  }
}

}  // namespace

double mean_ratio(const Potential& f, const GridField& u) {
  const double norm_sq = l2_norm_squared(u);
  if (!(norm_sq > 0.0)) {
    throw DegenerateFieldError("mean_ratio: ||u|| = 0");
  }
  std::vector<double> w(u.values.size());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double s = u.values[i];
    const double fs = f(s);
    lo = std::min(lo, fs);
    hi = std::max(hi, fs);
    w[i] = fs * s * s;
  }
  return std::clamp(trapezoid(u.grid, w) / norm_sq, lo, hi);
}

double locate_xi(const Potential& f, const GridField& u, double m,
                 std::optional<double> prev_xi) {
  return locate_level(
      u, [&f](double s) { return f(s); }, m, prev_xi, "locate_xi");
}

double xi_weighted(const GridField& u_x, double d) {
  if (!(d > 0.0)) throw ParameterError("xi_weighted: d must be positive");
  if (u_x.grid.domain().a() < 0.0) {
    throw ParameterError("xi_weighted: grid must lie in [0, inf)");
  }
  const double norm_sq = l2_norm_squared(u_x);
  if (!(norm_sq > 0.0)) {
    throw DegenerateFieldError("xi_weighted: ||u_x|| = 0");
  }
  return std::pow(weighted_square(u_x, d) / norm_sq, 1.0 / d);
}

double locate_chi(const GridField& u, double p, std::optional<double> prev_chi) {
  if (!(p > 1.0)) throw ParameterError("locate_chi: p must exceed 1");
  for (double v : u.values) {
    if (v < -1e-12) {
      throw PositivityError("locate_chi: field has negative value " +
                            format_real(v));
    }
  }
  const double norm_sq = l2_norm_squared(u);
  if (!(norm_sq > 0.0)) throw DegenerateFieldError("locate_chi: ||u|| = 0");
  auto phi = [p](double s) { return std::pow(std::max(s, 0.0), p - 1.0); };
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double v : u.values) {
    lo = std::min(lo, phi(v));
    hi = std::max(hi, phi(v));
  }
  const double r = std::clamp(lp_integral(u, p + 1.0) / norm_sq, lo, hi);
  return locate_level(u, phi, r, prev_chi, "locate_chi");
}

MeanValuePath mean_value_path(const Trajectory& traj, const Potential& f) {
  MeanValuePath path;
  std::optional<double> prev;
  per_frame(traj, [&](const Frame& frame) {
    const double m = mean_ratio(f, frame.u);
    const double xi = locate_xi(f, frame.u, m, prev);
    prev = xi;
    path.times.push_back(frame.t);
    path.m.push_back(m);
    path.xi.push_back(xi);
  });
  return path;
}

WeightedMeanPath weighted_mean_path(const Trajectory& traj, double d) {
  WeightedMeanPath path{{}, {}, d};
  per_frame(traj, [&](const Frame& frame) {
    path.times.push_back(frame.t);
    path.xi_d.push_back(xi_weighted(derivative(frame.u), d));
  });
  return path;
}

ChiPath chi_path(const Trajectory& traj, double p) {
  ChiPath path{{}, {}, p};
  std::optional<double> prev;
  per_frame(traj, [&](const Frame& frame) {
    const double chi = locate_chi(frame.u, p, prev);
    prev = chi;
    path.times.push_back(frame.t);
    path.chi.push_back(chi);
  });
  return path;
}

AnyPath path_over_trajectory(const Trajectory& traj,
                             const PathExtractor& extractor) {
  if (const auto* e = std::get_if<XiExtractor>(&extractor)) {
    return mean_value_path(traj, e->f);
  }
  if (const auto* e = std::get_if<WeightedXiExtractor>(&extractor)) {
    return weighted_mean_path(traj, e->d);
  }
  return chi_path(traj, std::get<ChiExtractor>(extractor).p);
}

double max_residual(const MeanValuePath& path, const Trajectory& traj,
                    const Potential& f) {
  if (path.times.size() != traj.frames.size()) {
    throw ParameterError("max_residual: path and trajectory differ in length");
  }
  double worst = 0.0;
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    const double value = f(traj.frames[k].u.interpolate(path.xi[k]));
    worst = std::max(worst, std::abs(value - path.m[k]));
  }
  return worst;
}

double max_jump(std::span<const double> points) {
  double worst = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k) {
    worst = std::max(worst, std::abs(points[k] - points[k - 1]));
  }
  return worst;
}

void write_path_csv(std::ostream& out, const MeanValuePath& path) {
  out << "t,m,xi\n";
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    out << format_real(path.times[k]) << ',' << format_real(path.m[k]) << ','
        << format_real(path.xi[k]) << '\n';
  }
}

void write_path_csv(std::ostream& out, const WeightedMeanPath& path) {
  out << "t,xi_d\n";
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    out << format_real(path.times[k]) << ',' << format_real(path.xi_d[k]) << '\n';
  }
}

void write_path_csv(std::ostream& out, const ChiPath& path) {
  out << "t,chi\n";
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    out << format_real(path.times[k]) << ',' << format_real(path.chi[k]) << '\n';
  }
}

}  // namespace mvpde
