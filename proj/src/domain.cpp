#include "mvpde/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mvpde/errors.hpp"

namespace mvpde {

Domain1D::Domain1D(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b)) {
    throw ParameterError("domain requires finite a < b, got (" +
                         std::to_string(a) + ", " + std::to_string(b) + ")");
  }
}

GridSpec::GridSpec(Domain1D domain, int cells)
    : domain_(domain), cells_(cells), h_(domain.measure() / cells) {
  if (cells < 8) {
    throw ParameterError("grid requires at least 8 cells, got " +
                         std::to_string(cells));
  }
}

double GridSpec::node(std::size_t i) const {
  if (i == size() - 1) return domain_.b();
  return domain_.a() + static_cast<double>(i) * h_;
}

std::vector<double> GridSpec::nodes() const {
  std::vector<double> x(size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = node(i);
  return x;
}

GridField::GridField(GridSpec g, std::vector<double> v)
    : grid(g), values(std::move(v)) {
  if (values.size() != grid.size()) {
    throw ParameterError("field has " + std::to_string(values.size()) +
                         " values but grid has " + std::to_string(grid.size()) +
                         " nodes");
  }
}

GridField::GridField(GridSpec g) : grid(g), values(g.size(), 0.0) {}

double GridField::interpolate(double x) const {
  const double a = grid.domain().a();
  const double h = grid.h();
  const std::size_t last = grid.size() - 1;
  if (x <= a) return values.front();
  if (x >= grid.domain().b()) return values.back();
  auto cell = static_cast<std::size_t>((x - a) / h);
  cell = std::min(cell, last - 1);
  const double x0 = grid.node(cell);
  const double w = (x - x0) / (grid.node(cell + 1) - x0);
  return values[cell] + w * (values[cell + 1] - values[cell]);
}

bool GridField::all_finite() const {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

const char* to_string(BoundaryKind bc) {
  switch (bc) {
    case BoundaryKind::Dirichlet:
      return "dirichlet";
    case BoundaryKind::MixedNeumannDirichlet:
      return "mixed";
    case BoundaryKind::WeightedNeumannDirichlet:
      return "weighted";
  }
  return "unknown";
}

SpectralInfo SpectralInfo::make(BoundaryKind bc, const Domain1D& domain,
                                std::optional<double> override_value) {
  if (override_value && !(*override_value > 0.0)) {
    throw ParameterError("lambda1 override must be positive");
  }
  SpectralInfo info{bc, std::nullopt, override_value};
  const double len = domain.measure();
  switch (bc) {
    case BoundaryKind::Dirichlet:
      info.computed = kPi * kPi / (len * len);
      break;
    case BoundaryKind::MixedNeumannDirichlet:
      info.computed = kPi * kPi / (4.0 * len * len);
      break;
    case BoundaryKind::WeightedNeumannDirichlet:
      break;
  }
  return info;
}

double SpectralInfo::lambda1() const {
  if (override_value) return *override_value;
  if (computed) return *computed;
  throw ParameterError(
      "no Poincare constant for weighted boundary conditions; supply an "
      "override");
}

double discrete_lambda1(const GridSpec& grid, BoundaryKind bc) {
  const double h = grid.h();
  const double len = grid.domain().measure();
  switch (bc) {
    case BoundaryKind::Dirichlet: {
      const double s = std::sin(kPi * h / (2.0 * len));
      return 4.0 * s * s / (h * h);
    }
    case BoundaryKind::MixedNeumannDirichlet:
    case BoundaryKind::WeightedNeumannDirichlet: {
      const double s = std::sin(kPi * h / (4.0 * len));
      return 4.0 * s * s / (h * h);
    }
  }
  return 0.0;
}

}  // namespace mvpde
