#include "mvpde/sweep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mvpde/csv.hpp"
#include "mvpde/errors.hpp"

namespace mvpde {
namespace {

constexpr double kJoinTolerance = 1e-9;

struct DataNorms {
  double l2_sq;
  double grad_sq;
  double grad_l4_sq;
};

DataNorms data_norms(const GridField& u0) {
  for (double v : u0.values) {
    if (v < -1e-12) throw PositivityError("sweep: initial data must be nonnegative");
  }
  const GridField ux = derivative(u0);
  DataNorms n{l2_norm_squared(u0), l2_norm_squared(ux),
              std::sqrt(lp_integral(ux, 4.0))};
  if (!(n.l2_sq > 0.0)) throw DegenerateFieldError("sweep: ||u0|| = 0");
  if (!(n.grad_sq > 0.0)) throw DegenerateFieldError("sweep: ||u0_x|| = 0");
  return n;
}

double g_from(const DataNorms& n, double power_integral, double d) {
  return std::sqrt(1.0 + 2.0 * d) * power_integral * n.grad_sq /
         (n.l2_sq * n.grad_l4_sq);
}

void check_parameters(double d, double p) {
  if (!(d >= 0.0)) throw ParameterError("sweep: d must be >= 0");
  if (!(p >= 1.0)) throw ParameterError("sweep: p must be >= 1");
}

std::vector<double> axis(double lo, double hi, int samples) {
  std::vector<double> out(samples);
  for (int i = 0; i < samples; ++i) {
    out[i] = i == samples - 1 ? hi : lo + (hi - lo) * i / (samples - 1);
  }
  return out;
}

// Crossing on the edge from node a to node b. Callers always pass the
// lower-index node first so neighbouring cells produce identical points.
ContourPoint crossing(ContourPoint a, double va, ContourPoint b, double vb,
                      double level) {
  const double t = (level - va) / (vb - va);
  return {a.d + t * (b.d - a.d), a.p + t * (b.p - a.p)};
}

bool close(ContourPoint a, ContourPoint b) {
  return std::abs(a.d - b.d) <= kJoinTolerance && std::abs(a.p - b.p) <= kJoinTolerance;
}

std::vector<Polyline> join(std::vector<std::array<ContourPoint, 2>> segments) {
  std::vector<Polyline> lines;
  std::vector<bool> used(segments.size(), false);
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (used[s]) continue;
    used[s] = true;
    Polyline line{segments[s][0], segments[s][1]};
    for (bool at_tail : {true, false}) {
      bool grown = true;
      while (grown) {
        grown = false;
        const ContourPoint end = at_tail ? line.back() : line.front();
        for (std::size_t k = 0; k < segments.size(); ++k) {
          if (used[k]) continue;
          ContourPoint next;
          if (close(segments[k][0], end)) {
            next = segments[k][1];
          } else if (close(segments[k][1], end)) {
            next = segments[k][0];
          } else {
            continue;
          }
          used[k] = true;
          if (at_tail) {
            line.push_back(next);
          } else {
            line.insert(line.begin(), next);
          }
          grown = true;
          break;
        }
      }
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace

double compute_g(const GridField& u0, double d, double p) {
  check_parameters(d, p);
  return g_from(data_norms(u0), lp_integral(u0, p + 1.0), d);
}

SweepGrid run_sweep(const InitialData& u0, const GridSpec& grid, int d_samples,
                    int p_samples, double d_max, double p_max) {
  if (d_samples < 11 || p_samples < 11) {
    throw ParameterError("sweep: at least 11 samples per axis are required");
  }
  if (!(d_max > 0.0)) throw ParameterError("sweep: d_max must be positive");
  if (!(p_max > 1.0)) throw ParameterError("sweep: p_max must exceed 1");
  const GridField field =
      sample_initial_data(u0, grid, BoundaryKind::MixedNeumannDirichlet);
  const DataNorms norms = data_norms(field);

  SweepGrid out;
  out.d = axis(0.0, d_max, d_samples);
  out.p = axis(1.0, p_max, p_samples);
  std::vector<double> power(out.p.size());
  for (std::size_t j = 0; j < out.p.size(); ++j) {
    power[j] = lp_integral(field, out.p[j] + 1.0);
  }
  out.values.resize(out.d.size() * out.p.size());
  for (std::size_t i = 0; i < out.d.size(); ++i) {
    for (std::size_t j = 0; j < out.p.size(); ++j) {
      const double g = g_from(norms, power[j], out.d[i]);
      if (!std::isfinite(g)) {
        throw ParameterError("sweep: non-finite g at d=" + format_real(out.d[i]) +
                             ", p=" + format_real(out.p[j]));
      }
      out.values[i * out.p.size() + j] = g;
    }
  }
  return out;
}

ContourResult extract_contour(const SweepGrid& sweep, double level) {
  ContourResult result{level, {}, 0};
  for (double g : sweep.values) {
    if (g < level) ++result.cells_decaying;
  }
  const std::size_t nd = sweep.d.size(), np = sweep.p.size();
  std::vector<std::array<ContourPoint, 2>> segments;
  for (std::size_t i = 0; i + 1 < nd; ++i) {
    for (std::size_t j = 0; j + 1 < np; ++j) {
      // Corners counter-clockwise from (d_i, p_j).
      const ContourPoint c[4] = {{sweep.d[i], sweep.p[j]},
                                 {sweep.d[i + 1], sweep.p[j]},
                                 {sweep.d[i + 1], sweep.p[j + 1]},
                                 {sweep.d[i], sweep.p[j + 1]}};
      const double v[4] = {sweep.at(i, j), sweep.at(i + 1, j),
                           sweep.at(i + 1, j + 1), sweep.at(i, j + 1)};
      bool below[4];
      for (int k = 0; k < 4; ++k) below[k] = v[k] < level;
      // Edges: bottom 0-1, right 1-2, top 3-2, left 0-3 (lower index first).
      static constexpr int kEdge[4][2] = {{0, 1}, {1, 2}, {3, 2}, {0, 3}};
      ContourPoint hit[4];
      bool crossed[4];
      for (int e = 0; e < 4; ++e) {
        const int a = kEdge[e][0], b = kEdge[e][1];
        crossed[e] = below[a] != below[b];
        if (crossed[e]) hit[e] = crossing(c[a], v[a], c[b], v[b], level);
      }
      const int count = crossed[0] + crossed[1] + crossed[2] + crossed[3];
      if (count == 2) {
        int first = -1;
        for (int e = 0; e < 4; ++e) {
          if (!crossed[e]) continue;
          if (first < 0) {
            first = e;
          } else {
            segments.push_back({hit[first], hit[e]});
          }
        }
      } else if (count == 4) {
        const bool centre_below = 0.25 * (v[0] + v[1] + v[2] + v[3]) < level;
        if (centre_below == below[0]) {
          // Corners 0 and 2 connect through the centre; cut off 1 and 3.
          segments.push_back({hit[0], hit[1]});
          segments.push_back({hit[2], hit[3]});
        } else {
          segments.push_back({hit[3], hit[0]});
          segments.push_back({hit[1], hit[2]});
        }
      }
    }
  }
  result.segments = join(std::move(segments));
  return result;
}

void write_sweep_csv(std::ostream& out, const SweepGrid& sweep, double level) {
  out << "d,p,g,decays\n";
  for (std::size_t i = 0; i < sweep.d.size(); ++i) {
    for (std::size_t j = 0; j < sweep.p.size(); ++j) {
      const double g = sweep.at(i, j);
      out << format_real(sweep.d[i]) << ',' << format_real(sweep.p[j]) << ','
          << format_real(g) << ',' << (g < level ? 1 : 0) << '\n';
    }
  }
}

SweepGrid read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "d,p,g,decays") {
    throw IoError("sweep CSV: expected header 'd,p,g,decays'");
  }
  std::vector<std::array<double, 3>> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::array<double, 3> row{};
    std::istringstream fields(line);
    std::string cell;
    for (int k = 0; k < 4; ++k) {
      if (!std::getline(fields, cell, ',')) {
        throw IoError("sweep CSV line " + std::to_string(lineno) + ": expected 4 fields");
      }
      if (k < 3) {
        try {
          std::size_t used = 0;
          row[k] = std::stod(cell, &used);
          if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
          throw IoError("sweep CSV line " + std::to_string(lineno) +
                        ": bad number '" + cell + "'");
        }
      }
    }
    rows.push_back(row);
  }
  SweepGrid out;
  for (const auto& r : rows) {
    if (out.d.empty() || out.d.back() != r[0]) out.d.push_back(r[0]);
  }
  for (const auto& r : rows) {
    if (r[0] != rows.front()[0]) break;
    out.p.push_back(r[1]);
  }
  if (out.d.size() * out.p.size() != rows.size()) {
    throw IoError("sweep CSV: rows do not form a full d x p matrix");
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k][0] != out.d[k / out.p.size()] || rows[k][1] != out.p[k % out.p.size()]) {
      throw IoError("sweep CSV: rows are not in d-major order");
    }
    out.values.push_back(rows[k][2]);
  }
  return out;
}

std::string viridis_hex(double t) {
  // Polynomial fit of matplotlib's viridis, quantized to 256 steps.
  static constexpr double kCoeff[7][3] = {
      {0.2777273272234177, 0.005407344544966578, 0.3340998053353061},
      {0.1050930431085774, 1.404613529898575, 1.384590162594685},
      {-0.3308618287255563, 0.214847559468213, 0.09509516302823659},
      {-4.634230498983486, -5.799100973351585, -19.33244095627987},
      {6.228269936347081, 14.17993336680509, 56.69055260068105},
      {4.776384997670288, -13.74514537774601, -65.35303263337234},
      {-5.435455855934631, 4.645852612178535, 26.3124352495832}};
  if (!std::isfinite(t)) t = 0.0;
  const double q = std::round(std::clamp(t, 0.0, 1.0) * 255.0) / 255.0;
  int rgb[3];
  for (int ch = 0; ch < 3; ++ch) {
    double v = kCoeff[6][ch];
    for (int k = 5; k >= 0; --k) v = kCoeff[k][ch] + q * v;
    rgb[ch] = static_cast<int>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
  }
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", rgb[0], rgb[1], rgb[2]);
  return buf;
}

void write_sweep_svg(std::ostream& out, const SweepGrid& sweep,
                     const ContourResult& contour) {
  const double left = 70, top = 30, plot_w = 480, plot_h = 480;
  const double d0 = sweep.d.front(), d1 = sweep.d.back();
  const double p0 = sweep.p.front(), p1 = sweep.p.back();
  const double cell_w = plot_w / (sweep.d.size() - 1);
  const double cell_h = plot_h / (sweep.p.size() - 1);
  auto sx = [&](double d) { return left + (d - d0) / (d1 - d0) * plot_w; };
  auto sy = [&](double p) { return top + plot_h - (p - p0) / (p1 - p0) * plot_h; };
  const auto [gmin, gmax] = std::minmax_element(sweep.values.begin(), sweep.values.end());
  const double span = *gmax - *gmin;

  char buf[256];
  auto emit = [&](const char* fmt, auto... args) {
    std::snprintf(buf, sizeof buf, fmt, args...);
    out << buf;
  };
  emit("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
       "font-family=\"sans-serif\" font-size=\"12\">\n", 700, 580);
  emit("<clipPath id=\"plot\"><rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" "
       "height=\"%.3f\"/></clipPath>\n", left, top, plot_w, plot_h);
  out << "<g clip-path=\"url(#plot)\" shape-rendering=\"crispEdges\">\n";
  for (std::size_t i = 0; i < sweep.d.size(); ++i) {
    for (std::size_t j = 0; j < sweep.p.size(); ++j) {
      const double t = span > 0.0 ? (sweep.at(i, j) - *gmin) / span : 0.5;
      emit("<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"%s\"/>\n",
           sx(sweep.d[i]) - 0.5 * cell_w, sy(sweep.p[j]) - 0.5 * cell_h, cell_w,
           cell_h, viridis_hex(t).c_str());
    }
  }
  out << "</g>\n";
  for (const auto& line : contour.segments) {
    out << "<polyline fill=\"none\" stroke=\"red\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < line.size(); ++k) {
      emit("%s%.3f,%.3f", k ? " " : "", sx(line[k].d), sy(line[k].p));
    }
    out << "\"/>\n";
  }
  emit("<rect x=\"%.3f\" y=\"%.3f\" width=\"%.3f\" height=\"%.3f\" fill=\"none\" "
       "stroke=\"black\"/>\n", left, top, plot_w, plot_h);
  for (int k = 0; k <= 4; ++k) {
    const double d = d0 + (d1 - d0) * k / 4.0, p = p0 + (p1 - p0) * k / 4.0;
    emit("<text x=\"%.3f\" y=\"%.3f\" text-anchor=\"middle\">%g</text>\n", sx(d),
         top + plot_h + 18, d);
    emit("<text x=\"%.3f\" y=\"%.3f\" text-anchor=\"end\">%g</text>\n", left - 6,
         sy(p) + 4, p);
  }
  emit("<text x=\"%.3f\" y=\"%.3f\" text-anchor=\"middle\">d</text>\n",
       left + 0.5 * plot_w, top + plot_h + 40);
  emit("<text x=\"%.3f\" y=\"%.3f\" text-anchor=\"middle\">p</text>\n", left - 40,
       top + 0.5 * plot_h);
  const double lx = left + plot_w + 20;
  emit("<text x=\"%.3f\" y=\"%.3f\">g = %.4g</text>\n", lx, top + 10, *gmax);
  for (int k = 0; k < 64; ++k) {
    emit("<rect x=\"%.3f\" y=\"%.3f\" width=\"16\" height=\"5\" fill=\"%s\"/>\n", lx,
         top + 20 + 5.0 * k, viridis_hex(1.0 - k / 63.0).c_str());
  }
  emit("<text x=\"%.3f\" y=\"%.3f\">g = %.4g</text>\n", lx, top + 20 + 5.0 * 64 + 14,
       *gmin);
  emit("<line x1=\"%.3f\" y1=\"%.3f\" x2=\"%.3f\" y2=\"%.3f\" stroke=\"red\" "
       "stroke-width=\"2\"/>\n", lx, top + 390, lx + 20, top + 390);
  emit("<text x=\"%.3f\" y=\"%.3f\">level %.6f</text>\n", lx + 26, top + 394,
       contour.level);
  emit("<text x=\"%.3f\" y=\"%.3f\">decaying: %d</text>\n", lx, top + 414,
       contour.cells_decaying);
  out << "</svg>\n";
}

void emit_outputs(const SweepGrid& sweep, const ContourResult& contour,
                  const std::optional<std::filesystem::path>& csv,
                  const std::optional<std::filesystem::path>& svg) {
  auto write = [](const std::filesystem::path& path, auto&& body) {
    std::ofstream file(path);
    if (!file) throw IoError("cannot open " + path.string() + " for writing");
    body(file);
    file.flush();
    if (!file) throw IoError("write failed for " + path.string());
  };
  if (csv) {
    write(*csv, [&](std::ostream& o) { write_sweep_csv(o, sweep, contour.level); });
  }
  if (svg) {
    write(*svg, [&](std::ostream& o) { write_sweep_svg(o, sweep, contour); });
  }
}

}  // namespace mvpde
