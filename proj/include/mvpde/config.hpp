#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

#include "mvpde/analysis.hpp"
#include "mvpde/errors.hpp"
#include "mvpde/problem.hpp"
#include "mvpde/trajectory.hpp"

namespace mvpde {

// Invalid configuration; the message starts with the offending key path,
// e.g. "problem.potential.kind: unknown kind 'cubic'".
class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Expectation { None, Blowup, Decay };
const char* to_string(Expectation e);

struct CheckConfig {
  std::optional<Interval> s_interval;
  std::optional<double> lambda1_override;
  int n = 200;  // cells used to sample the initial data for checks
  std::optional<SandwichBounds> sandwich;
  std::optional<DegenerateParams> wang;  // defaults to problem.degenerate
  double envelope_tol = 1e-6;
  double energy_tol = 1e-3;
};

struct SweepConfig {
  int n = 400;
  int d_samples = 41;
  int p_samples = 41;
  double d_max = 2.0;
  double p_max = 3.0;
};

struct OutputConfig {
  std::optional<std::string> csv;
  std::optional<std::string> svg;
  std::optional<std::string> frames;
  std::optional<std::string> report;
};

struct RunConfig {
  ProblemSpec problem;
  SolveConfig solve;
  CheckConfig check;
  SweepConfig sweep;
  OutputConfig outputs;
  Expectation expect = Expectation::None;
};

/// Parses and validates a whole document. Relative CSV paths inside the
/// document resolve against `base_dir`. Throws ConfigError.
RunConfig parse_config(const nlohmann::json& doc,
                       const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

}  // namespace mvpde
