#include "mvpde/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "mvpde/errors.hpp"

namespace mvpde {
namespace {

void require_finite(const GridField& u) {
  if (!u.all_finite()) throw ParameterError("field contains non-finite values");
}

double simpson_step(const std::function<double(double)>& g, double a, double fa,
                    double m, double fm, double b, double fb, double whole,
                    double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = g(lm);
  const double frm = g(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_step(g, a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(g, m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double trapezoid(const GridSpec& grid, std::span<const double> values) {
  if (values.size() != grid.size()) {
    throw ParameterError("trapezoid: value count does not match grid");
  }
  double interior = 0.0;
  for (std::size_t i = 1; i + 1 < values.size(); ++i) interior += values[i];
  return grid.h() * (interior + 0.5 * (values.front() + values.back()));
}

double adaptive_simpson(const std::function<double(double)>& g, double a,
                        double b, double tol) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = g(a);
  const double fm = g(m);
  const double fb = g(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(g, a, fa, m, fm, b, fb, whole, tol, 50);
}

GridField derivative(const GridField& u) {
  const auto& v = u.values;
  const std::size_t n = v.size();
  const double h = u.grid.h();
  std::vector<double> d(n);
  d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h);
  return GridField(u.grid, std::move(d));
}

double l2_norm_squared(const GridField& u) {
  require_finite(u);
  std::vector<double> sq(u.values.size());
  std::transform(u.values.begin(), u.values.end(), sq.begin(),
                 [](double v) { return v * v; });
  return trapezoid(u.grid, sq);
}

double l2_norm(const GridField& u) { return std::sqrt(l2_norm_squared(u)); }

double lp_integral(const GridField& u, double p) {
  require_finite(u);
  if (!(p > 0.0)) throw ParameterError("lp_integral: p must be positive");
  std::vector<double> w(u.values.size());
  std::transform(u.values.begin(), u.values.end(), w.begin(),
                 [p](double v) { return std::pow(std::abs(v), p); });
  return trapezoid(u.grid, w);
}

double lp_norm(const GridField& u, double p) {
  return std::pow(lp_integral(u, p), 1.0 / p);
}

double sup_norm(const GridField& u) {
  double m = 0.0;
  for (double v : u.values) m = std::max(m, std::abs(v));
  return m;
}

double h1_seminorm(const GridField& u) {
  require_finite(u);
  return l2_norm(derivative(u));
}

double weighted_square(const GridField& v, double d) {
  require_finite(v);
  std::vector<double> w(v.values.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = std::pow(v.grid.node(i), d) * v.values[i] * v.values[i];
  }
  return trapezoid(v.grid, w);
}

double dirichlet_form(const GridField& u, double d) {
  require_finite(u);
  const double h = u.grid.h();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < u.values.size(); ++i) {
    const double diff = u.values[i + 1] - u.values[i];
    const double weight =
        d == 0.0 ? 1.0 : std::pow(u.grid.node(i) + 0.5 * h, d);
    acc += weight * diff * diff;
  }
  return acc / h;
}

NormReport field_norms(const GridField& u, std::span<const NormRequest> orders) {
  require_finite(u);
  NormReport report;
  std::optional<GridField> ux;
  auto gradient = [&]() -> const GridField& {
    if (!ux) ux = derivative(u);
    return *ux;
  };
  for (const auto& req : orders) {
    switch (req.kind) {
      case NormRequest::Kind::L2:
        report.l2 = l2_norm(u);
        break;
      case NormRequest::Kind::Lp:
        report.lp[req.param] = lp_norm(u, req.param);
        break;
      case NormRequest::Kind::H1Semi:
        report.h1_semi = l2_norm(gradient());
        break;
      case NormRequest::Kind::WeightedGradient:
        report.weighted_gradient[req.param] =
            weighted_square(gradient(), req.param);
        break;
    }
  }
  return report;
}

}  // namespace mvpde
