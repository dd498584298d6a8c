#pragma once

#include <string>
#include <variant>

#include "mvpde/csv.hpp"
#include "mvpde/domain.hpp"

namespace mvpde {

enum class PresetName {
  XSinPiX,  // x sin(pi x)
  ExpBump,  // e^(1 - x^2) - 1
  AmpSin,   // A sin(pi x)
  AmpRamp,  // A (1 - x)
};

struct Preset {
  PresetName name;
  double amplitude = 1.0;  // A of AmpSin / AmpRamp; scales the others
};

/// Linearly interpolated (x, u0(x)) samples, x strictly increasing.
struct Sampled {
  Samples points;
};

class InitialData {
 public:
  explicit InitialData(std::variant<Preset, Sampled> kind);

  static InitialData preset(PresetName name, double amplitude = 1.0) {
    return InitialData(Preset{name, amplitude});
  }

  const std::variant<Preset, Sampled>& kind() const { return kind_; }
  double operator()(double x) const;
  std::string describe() const;

 private:
  std::variant<Preset, Sampled> kind_;
};

/// Presets evaluated at the nodes, samples interpolated; nodes carrying a
/// Dirichlet condition for `bc` are set to exactly zero.
GridField sample_initial_data(const InitialData& u0, const GridSpec& grid,
                              BoundaryKind bc);

}  // namespace mvpde
