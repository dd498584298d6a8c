#include "mvpde/initial_data.hpp"

#include <algorithm>
#include <cmath>

#include "mvpde/errors.hpp"

namespace mvpde {

InitialData::InitialData(std::variant<Preset, Sampled> kind)
    : kind_(std::move(kind)) {
  if (const auto* s = std::get_if<Sampled>(&kind_)) {
    if (s->points.size() < 2) {
      throw ParameterError("sampled initial data needs at least 2 points");
    }
    for (std::size_t i = 1; i < s->points.size(); ++i) {
      if (!(s->points[i].first > s->points[i - 1].first)) {
        throw ParameterError("sampled initial data: x must be strictly increasing");
      }
    }
  } else {
    const auto& p = std::get<Preset>(kind_);
    if (!std::isfinite(p.amplitude)) {
      throw ParameterError("preset amplitude must be finite");
    }
  }
}

double InitialData::operator()(double x) const {
  if (const auto* p = std::get_if<Preset>(&kind_)) {
    switch (p->name) {
      case PresetName::XSinPiX:
        return p->amplitude * (x * std::sin(kPi * x));
      case PresetName::ExpBump:
        return p->amplitude * (std::exp(1.0 - x * x) - 1.0);
      case PresetName::AmpSin:
        return p->amplitude * std::sin(kPi * x);
      case PresetName::AmpRamp:
        return p->amplitude * (1.0 - x);
    }
    return 0.0;
  }
  const auto& pts = std::get<Sampled>(kind_).points;
  if (x <= pts.front().first) return pts.front().second;
  if (x >= pts.back().first) return pts.back().second;
  auto it = std::upper_bound(
      pts.begin(), pts.end(), x,
      [](double v, const std::pair<double, double>& q) { return v < q.first; });
  const auto& [x1, u1] = *it;
  const auto& [x0, u0] = *(it - 1);
  return u0 + (u1 - u0) * (x - x0) / (x1 - x0);
}

std::string InitialData::describe() const {
  if (const auto* p = std::get_if<Preset>(&kind_)) {
    switch (p->name) {
      case PresetName::XSinPiX:
        return p->amplitude == 1.0 ? "x_sin_pi_x"
                                   : format_real(p->amplitude) + "*x_sin_pi_x";
      case PresetName::ExpBump:
        return p->amplitude == 1.0 ? "exp_bump"
                                   : format_real(p->amplitude) + "*exp_bump";
      case PresetName::AmpSin:
        return "amp_sin(A=" + format_real(p->amplitude) + ")";
      case PresetName::AmpRamp:
        return "amp_ramp(A=" + format_real(p->amplitude) + ")";
    }
  }
  return "sampled(" + std::to_string(std::get<Sampled>(kind_).points.size()) +
         " points)";
}

GridField sample_initial_data(const InitialData& u0, const GridSpec& grid,
                              BoundaryKind bc) {
  if (const auto* s = std::get_if<Sampled>(&u0.kind())) {
    const double slack = 1e-12 * grid.domain().measure();
    if (s->points.front().first > grid.domain().a() + slack ||
        s->points.back().first < grid.domain().b() - slack) {
      throw CoverageError("sampled initial data does not cover [" +
                          format_real(grid.domain().a()) + ", " +
                          format_real(grid.domain().b()) + "]");
    }
  }
  std::vector<double> v(grid.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = u0(grid.node(i));
  if (bc == BoundaryKind::Dirichlet) v.front() = 0.0;
  v.back() = 0.0;  // every supported condition is Dirichlet on the right
  return GridField(grid, std::move(v));
}

}  // namespace mvpde
