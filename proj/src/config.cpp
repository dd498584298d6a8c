#include "mvpde/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>

#include "mvpde/csv.hpp"

namespace mvpde {
namespace {

using nlohmann::json;

// A JSON object together with its dotted path, for error messages.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return value_; }

  [[noreturn]] void fail(const std::string& what) const {
    throw ConfigError((path_.empty() ? std::string("<root>") : path_) + ": " + what);
  }

  void expect_object(std::initializer_list<const char*> allowed) const {
    if (!value_.is_object()) fail("expected an object");
    std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [key, _] : value_.items()) {
      if (!keys.count(key)) child_path_fail(key, "unknown key");
    }
  }

  bool has(const char* key) const { return value_.contains(key); }

  Node at(const char* key) const {
    if (!value_.contains(key)) child_path_fail(key, "missing required key");
    return Node(value_.at(key), join(key));
  }

  Node index(std::size_t i) const {
    return Node(value_.at(i), path_ + "[" + std::to_string(i) + "]");
  }

  double number() const {
    if (!value_.is_number()) fail("expected a number");
    const double v = value_.get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  int integer() const {
    if (!value_.is_number_integer()) fail("expected an integer");
    return value_.get<int>();
  }

  std::string string() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  std::size_t array(std::size_t min_size) const {
    if (!value_.is_array()) fail("expected an array");
    if (value_.size() < min_size) {
      fail("expected at least " + std::to_string(min_size) + " entries");
    }
    return value_.size();
  }

  std::vector<double> numbers(std::size_t min_size) const {
    std::vector<double> out;
    for (std::size_t i = 0, n = array(min_size); i < n; ++i) {
      out.push_back(index(i).number());
    }
    return out;
  }

  Samples pairs() const {
    Samples out;
    for (std::size_t i = 0, n = array(2); i < n; ++i) {
      const auto v = index(i).numbers(2);
      if (v.size() != 2) index(i).fail("expected a [x, y] pair");
      out.emplace_back(v[0], v[1]);
    }
    return out;
  }

  double number_or(const char* key, double fallback) const {
    return has(key) ? at(key).number() : fallback;
  }
  int integer_or(const char* key, int fallback) const {
    return has(key) ? at(key).integer() : fallback;
  }

 private:
  std::string join(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  [[noreturn]] void child_path_fail(const std::string& key, const std::string& what) const {
    throw ConfigError(join(key) + ": " + what);
  }

  const json& value_;
  std::string path_;
};

// Runs `body` and rethrows library validation errors against `node`.
template <class F>
auto guarded(const Node& node, F&& body) {
  try {
    return body();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    node.fail(e.what());
  }
}

Samples read_samples(const Node& node, const std::filesystem::path& base,
                     const std::string& key) {
  if (node.has("points")) return node.at("points").pairs();
  const Node file = node.at("csv");
  std::filesystem::path path = file.string();
  if (path.is_relative()) path = base / path;
  return guarded(file, [&] { return read_two_column_csv(path, key); });
}

Potential parse_potential(const Node& node, const std::filesystem::path& base) {
  const std::string kind = node.at("kind").string();
  if (kind == "chafee_infante") {
    node.expect_object({"kind", "mu"});
    const double mu = node.at("mu").number();
    return guarded(node, [&] { return Potential(ChafeeInfante{mu}); });
  }
  if (kind == "piecewise_f2") {
    node.expect_object({"kind"});
    return Potential(PiecewiseF2{});
  }
  if (kind == "singular_f3") {
    node.expect_object({"kind", "p"});
    const double p = node.at("p").number();
    return guarded(node, [&] { return Potential(SingularF3{p}); });
  }
  if (kind == "polynomial") {
    node.expect_object({"kind", "coeffs"});
    auto coeffs = node.at("coeffs").numbers(1);
    return guarded(node, [&] { return Potential(Polynomial{std::move(coeffs)}); });
  }
  if (kind == "tabulated") {
    node.expect_object({"kind", "points", "csv"});
    auto points = read_samples(node, base, "s");
    return guarded(node, [&] { return Potential(Tabulated{std::move(points)}); });
  }
  node.at("kind").fail("unknown kind '" + kind + "'");
}

InitialData parse_initial(const Node& node, const std::filesystem::path& base) {
  if (node.has("preset")) {
    node.expect_object({"preset", "amplitude"});
    const std::string name = node.at("preset").string();
    PresetName preset;
    if (name == "x_sin_pi_x") {
      preset = PresetName::XSinPiX;
    } else if (name == "exp_bump") {
      preset = PresetName::ExpBump;
    } else if (name == "amp_sin") {
      preset = PresetName::AmpSin;
    } else if (name == "amp_ramp") {
      preset = PresetName::AmpRamp;
    } else {
      node.at("preset").fail("unknown preset '" + name + "'");
    }
    const double amplitude = node.number_or("amplitude", 1.0);
    return guarded(node, [&] { return InitialData::preset(preset, amplitude); });
  }
  node.expect_object({"points", "csv"});
  auto points = read_samples(node, base, "x");
  return guarded(node, [&] { return InitialData(Sampled{std::move(points)}); });
}

BoundaryKind parse_bc(const Node& node) {
  const std::string name = node.string();
  if (name == "dirichlet") return BoundaryKind::Dirichlet;
  if (name == "mixed") return BoundaryKind::MixedNeumannDirichlet;
  if (name == "weighted") return BoundaryKind::WeightedNeumannDirichlet;
  node.fail("expected one of dirichlet, mixed, weighted");
}

DegenerateParams parse_degenerate(const Node& node) {
  node.expect_object({"d", "p"});
  return {node.at("d").number(), node.at("p").number()};
}

Interval parse_interval(const Node& node) {
  const auto v = node.numbers(2);
  if (v.size() != 2) node.fail("expected [lo, hi]");
  if (!(v[0] < v[1])) node.fail("expected lo < hi");
  return {v[0], v[1]};
}

ProblemSpec parse_problem(const Node& node, const std::filesystem::path& base) {
  node.expect_object({"domain", "nu", "potential", "initial", "bc", "degenerate"});
  const Node dom = node.at("domain");
  const auto ab = dom.numbers(2);
  if (ab.size() != 2) dom.fail("expected [a, b]");
  const Domain1D domain = guarded(dom, [&] { return Domain1D(ab[0], ab[1]); });
  std::optional<DegenerateParams> degenerate;
  if (node.has("degenerate")) degenerate = parse_degenerate(node.at("degenerate"));
  // The potential is ignored for degenerate problems and may be omitted.
  Potential potential = node.has("potential")
                            ? parse_potential(node.at("potential"), base)
                            : degenerate ? Potential(Polynomial{{0.0}})
                                         : parse_potential(node.at("potential"), base);
  const double nu = node.number_or("nu", 1.0);
  if (!(nu > 0.0)) node.at("nu").fail("must be positive");
  ProblemSpec spec{domain,
                   nu,
                   std::move(potential),
                   parse_initial(node.at("initial"), base),
                   parse_bc(node.at("bc")),
                   degenerate};
  guarded(node, [&] {
    spec.validate();
    return 0;
  });
  return spec;
}

SolveConfig parse_solve(const Node& node) {
  node.expect_object({"t_end", "n", "dt_init", "dt_min", "dt_max", "rel_step_tol",
                      "blowup_threshold", "frame_stride", "frames", "lp_orders"});
  SolveConfig c;
  c.t_end = node.number_or("t_end", c.t_end);
  c.n = node.integer_or("n", c.n);
  c.dt_init = node.number_or("dt_init", std::min(c.dt_init, c.t_end));
  c.dt_min = node.number_or("dt_min", c.dt_min);
  c.dt_max = node.number_or("dt_max", c.dt_max);
  c.rel_step_tol = node.number_or("rel_step_tol", c.rel_step_tol);
  c.blowup_threshold = node.number_or("blowup_threshold", c.blowup_threshold);
  c.frame_stride = node.integer_or("frame_stride", c.frame_stride);
  c.auto_frames = node.integer_or("frames", c.auto_frames);
  if (node.has("lp_orders")) c.lp_orders = node.at("lp_orders").numbers(0);
  guarded(node, [&] {
    c.validate();
    return 0;
  });
  return c;
}

CheckConfig parse_check(const Node& node) {
  node.expect_object({"s_interval", "lambda1_override", "n", "sandwich", "wang",
                      "envelope_tol", "energy_tol"});
  CheckConfig c;
  if (node.has("s_interval")) c.s_interval = parse_interval(node.at("s_interval"));
  if (node.has("lambda1_override")) {
    const Node l = node.at("lambda1_override");
    c.lambda1_override = l.number();
    if (!(*c.lambda1_override > 0.0)) l.fail("must be positive");
  }
  c.n = node.integer_or("n", c.n);
  if (c.n < 8) node.at("n").fail("must be at least 8");
  if (node.has("sandwich")) {
    const Node s = node.at("sandwich");
    s.expect_object({"c1", "c2", "r"});
    SandwichBounds b{s.number_or("c1", 0.0), s.at("c2").number(), s.at("r").number()};
    guarded(s, [&] {
      b.validate();
      return 0;
    });
    c.sandwich = b;
  }
  if (node.has("wang")) {
    const Node w = node.at("wang");
    c.wang = parse_degenerate(w);
    if (!(c.wang->d >= 0.0)) w.at("d").fail("must be >= 0");
    if (!(c.wang->p > 1.0)) w.at("p").fail("must be > 1");
  }
  c.envelope_tol = node.number_or("envelope_tol", c.envelope_tol);
  c.energy_tol = node.number_or("energy_tol", c.energy_tol);
  if (!(c.envelope_tol >= 0.0)) node.at("envelope_tol").fail("must be >= 0");
  if (!(c.energy_tol >= 0.0)) node.at("energy_tol").fail("must be >= 0");
  return c;
}

SweepConfig parse_sweep(const Node& node) {
  node.expect_object({"n", "d_samples", "p_samples", "d_max", "p_max"});
  SweepConfig c;
  c.n = node.integer_or("n", c.n);
  c.d_samples = node.integer_or("d_samples", c.d_samples);
  c.p_samples = node.integer_or("p_samples", c.p_samples);
  c.d_max = node.number_or("d_max", c.d_max);
  c.p_max = node.number_or("p_max", c.p_max);
  if (c.n < 8) node.at("n").fail("must be at least 8");
  if (c.d_samples < 11) node.at("d_samples").fail("must be at least 11");
  if (c.p_samples < 11) node.at("p_samples").fail("must be at least 11");
  if (!(c.d_max > 0.0)) node.at("d_max").fail("must be positive");
  if (!(c.p_max > 1.0)) node.at("p_max").fail("must exceed 1");
  return c;
}

OutputConfig parse_outputs(const Node& node) {
  node.expect_object({"csv", "svg", "frames", "report"});
  OutputConfig c;
  auto name = [&](const char* key) -> std::optional<std::string> {
    if (!node.has(key)) return std::nullopt;
    const Node n = node.at(key);
    const std::string s = n.string();
    if (s.empty()) n.fail("file name must not be empty");
    return s;
  };
  c.csv = name("csv");
  c.svg = name("svg");
  c.frames = name("frames");
  c.report = name("report");
  return c;
}

}  // namespace

const char* to_string(Expectation e) {
  switch (e) {
    case Expectation::None: return "none";
    case Expectation::Blowup: return "blowup";
    case Expectation::Decay: return "decay";
  }
  return "?";
}

RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  const Node root(doc, "");
  root.expect_object({"problem", "solve", "check", "sweep", "outputs", "expect"});
  static const json empty = json::object();
  auto section = [&](const char* key) {
    return root.has(key) ? root.at(key) : Node(empty, key);
  };
  RunConfig c{parse_problem(root.at("problem"), base_dir),
              parse_solve(section("solve")),
              parse_check(section("check")),
              parse_sweep(section("sweep")),
              parse_outputs(section("outputs")),
              Expectation::None};
  if (root.has("expect")) {
    const Node e = root.at("expect");
    const std::string s = e.string();
    if (s == "blowup") {
      c.expect = Expectation::Blowup;
    } else if (s == "decay") {
      c.expect = Expectation::Decay;
    } else if (s != "none") {
      e.fail("expected one of blowup, decay, none");
    }
  }
  if (c.problem.degenerate && !c.check.wang) c.check.wang = c.problem.degenerate;
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open config file");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

}  // namespace mvpde
