#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <vector>

#include "mvpde/analysis.hpp"
#include "mvpde/initial_data.hpp"

namespace mvpde {

/// g(d, p) = sqrt(1 + 2d) |u0|_{p+1}^{p+1} ||u0_x||^2 / (||u0||^2 |u0_x|_4^2).
/// The data decays when g < 4 / pi^2.
double compute_g(const GridField& u0, double d, double p);

/// Row-major matrix of g: values[i * p.size() + j] is g(d[i], p[j]).
struct SweepGrid {
  std::vector<double> d;
  std::vector<double> p;
  std::vector<double> values;

  double at(std::size_t i, std::size_t j) const { return values[i * p.size() + j]; }
};

/// Samples u0 once (mixed conditions on `grid`) and fills g over
/// [0, d_max] x [1, p_max]; at least 11 samples per axis.
SweepGrid run_sweep(const InitialData& u0, const GridSpec& grid, int d_samples,
                    int p_samples, double d_max, double p_max);

struct ContourPoint {
  double d;
  double p;
};
using Polyline = std::vector<ContourPoint>;

struct ContourResult {
  double level;
  std::vector<Polyline> segments;
  int cells_decaying;  // matrix entries with g < level
};

/// Marching squares with linear edge interpolation. Saddle cells are
/// split according to the average of the four corners; segments whose
/// endpoints agree within 1e-9 are joined.
ContourResult extract_contour(const SweepGrid& sweep, double level = kDecayLevel);

/// `d,p,g,decays`, one row per matrix entry, 17 significant digits.
void write_sweep_csv(std::ostream& out, const SweepGrid& sweep,
                     double level = kDecayLevel);
SweepGrid read_sweep_csv(std::istream& in);

/// Filled colormap of g, contour polylines in red, labeled axes and a
/// legend with the level.
void write_sweep_svg(std::ostream& out, const SweepGrid& sweep,
                     const ContourResult& contour);

/// Writes whichever files are requested; IoError names the failing path.
void emit_outputs(const SweepGrid& sweep, const ContourResult& contour,
                  const std::optional<std::filesystem::path>& csv,
                  const std::optional<std::filesystem::path>& svg);

/// 256-step viridis ramp as "#rrggbb" for t in [0, 1].
std::string viridis_hex(double t);

}  // namespace mvpde
