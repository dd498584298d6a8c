#include <algorithm>
#include <cmath>
#include <sstream>

#include "doctest.h"

#include "mvpde/errors.hpp"
#include "mvpde/quadrature.hpp"
#include "mvpde/solvers.hpp"

using namespace mvpde;

namespace {

const Domain1D kUnit(0.0, 1.0);

ProblemSpec semilinear(Potential f, InitialData u0, double nu = 1.0) {
  return {kUnit, nu, std::move(f), std::move(u0), BoundaryKind::Dirichlet, {}};
}

ProblemSpec degenerate(double d, double p, InitialData u0, BoundaryKind bc) {
  return {kUnit, 1.0, Potential(Polynomial{{0.0}}), std::move(u0), bc,
          DegenerateParams{d, p}};
}

GridField sine_field(int n, double amp = 1.0) {
  const GridSpec g(kUnit, n);
  std::vector<double> v;
  for (double x : g.nodes()) v.push_back(amp * std::sin(kPi * x));
  v.front() = v.back() = 0.0;
  return GridField(g, v);
}

double l2_distance(const GridField& a, const GridField& b) {
  GridField diff = a;
  for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= b.values[i];
  return l2_norm(diff);
}

// Least-squares slope of -log ||u(t)|| against t.
double fitted_rate(const Trajectory& traj) {
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double n = static_cast<double>(traj.frames.size());
  for (const auto& fr : traj.frames) {
    const double y = std::log(l2_norm(fr.u));
    st += fr.t;
    sy += y;
    stt += fr.t * fr.t;
    sty += fr.t * y;
  }
  return -(n * sty - st * sy) / (n * stt - st * st);
}

}  // namespace

TEST_CASE("zero is a fixed point of both steppers") {
  const GridField zero(GridSpec(kUnit, 64));
  const auto spec = semilinear(Potential(ChafeeInfante{3.0}), InitialData::preset(PresetName::AmpSin));
  for (double v : step_imex(zero, 1e-3, spec).values) CHECK(v == 0.0);
  const auto dspec = degenerate(2.0, 2.0, InitialData::preset(PresetName::AmpRamp),
                                BoundaryKind::WeightedNeumannDirichlet);
  for (double v : step_degenerate(zero, 1e-3, dspec).values) CHECK(v == 0.0);
}

TEST_CASE("eigenfunction step ratio") {
  const auto spec = semilinear(Potential(Polynomial{{0.0}}), InitialData::preset(PresetName::AmpSin));
  const auto u = sine_field(1000);
  for (double dt : {1e-3, 5e-4}) {
    const double ratio = l2_norm(step_imex(u, dt, spec)) / l2_norm(u);
    CHECK(std::abs(ratio - std::exp(-kPi * kPi * dt)) <= 1e-6 * dt / 1e-3);
  }
}

TEST_CASE("constant potential splits off the diffusion step") {
  const double c = 3.0;
  const auto heat = semilinear(Potential(Polynomial{{0.0}}), InitialData::preset(PresetName::XSinPiX));
  const auto react = semilinear(Potential(Polynomial{{c}}), InitialData::preset(PresetName::XSinPiX));
  const GridSpec g(kUnit, 200);
  const auto u = sample_initial_data(react.initial, g, BoundaryKind::Dirichlet);
  auto gap = [&](double dt) {
    GridField split = step_imex(u, dt, heat);
    for (double& v : split.values) v *= std::exp(-c * dt);
    return l2_distance(step_imex(u, dt, react), split);
  };
  for (double dt : {1e-2, 5e-3, 2.5e-3}) CHECK(gap(dt) <= 10.0 * dt * dt * l2_norm(u));
  CHECK(gap(2.5e-3) < 0.3 * gap(5e-3));
}

TEST_CASE("weighted operator") {
  const GridSpec g(kUnit, 100);
  const double h2 = g.h() * g.h();

  const auto near_zero = assemble_weighted_operator(g, 1e-12, BoundaryKind::MixedNeumannDirichlet);
  REQUIRE(near_zero.size() == 100);
  CHECK(near_zero.diag[0] * h2 == doctest::Approx(-2.0).epsilon(1e-8));
  CHECK(near_zero.upper[0] * h2 == doctest::Approx(2.0).epsilon(1e-8));
  for (std::size_t i = 1; i < near_zero.size(); ++i) {
    CHECK(near_zero.lower[i] * h2 == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(near_zero.diag[i] * h2 == doctest::Approx(-2.0).epsilon(1e-8));
    if (i + 1 < near_zero.size()) CHECK(near_zero.upper[i] * h2 == doctest::Approx(1.0).epsilon(1e-8));
  }

  std::vector<double> ramp;
  for (std::size_t i = 0; i < 100; ++i) ramp.push_back(1.0 - g.node(i));
  for (auto bc : {BoundaryKind::WeightedNeumannDirichlet, BoundaryKind::MixedNeumannDirichlet}) {
    const auto d1 = assemble_weighted_operator(g, 1.0, bc).apply(ramp);
    const auto d2 = assemble_weighted_operator(g, 2.0, bc).apply(ramp);
    for (std::size_t i = 1; i < 100; ++i) {
      CHECK(d1[i] == doctest::Approx(-1.0).epsilon(1e-9));
      CHECK(d2[i] == doctest::Approx(-2.0 * g.node(i)).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("heat decay rate") {
  SolveConfig config;
  config.t_end = 0.1;
  config.n = 200;
  const auto traj = solve(semilinear(Potential(Polynomial{{0.0}}), InitialData::preset(PresetName::AmpSin)), config);
  CHECK(std::holds_alternative<Completed>(traj.outcome));
  CHECK(fitted_rate(traj) == doctest::Approx(kPi * kPi).epsilon(0.01));

  REQUIRE(traj.frames.size() >= 2);
  CHECK(traj.frames.front().t == 0.0);
  const auto u0 = sample_initial_data(traj.spec.initial, GridSpec(kUnit, 200), BoundaryKind::Dirichlet);
  CHECK(traj.frames.front().u.values == u0.values);
  for (std::size_t k = 1; k < traj.frames.size(); ++k) CHECK(traj.frames[k].t > traj.frames[k - 1].t);
  CHECK(traj.frames.back().t == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("spatial convergence order") {
  double err[3];
  int k = 0;
  for (int n : {100, 200, 400}) {
    SolveConfig config;
    config.t_end = 0.1;
    config.n = n;
    config.dt_init = config.dt_max = 1e-4;
    const auto traj = solve(semilinear(Potential(Polynomial{{0.0}}), InitialData::preset(PresetName::AmpSin)), config);
    const auto& last = traj.frames.back();
    GridField exact = sine_field(n, std::exp(-kPi * kPi * last.t));
    err[k++] = l2_distance(last.u, exact);
  }
  CHECK(std::log2(err[0] / err[1]) >= 1.8);
  CHECK(std::log2(err[1] / err[2]) >= 1.8);
}

TEST_CASE("semilinear blow-up and trivial data") {
  SolveConfig config;
  config.t_end = 0.01;
  config.n = 400;
  config.dt_init = 1e-6;
  const auto spec = semilinear(Potential(Polynomial{{0.0, 0.0, 0.0, 0.0, -2.0}}),
                               InitialData::preset(PresetName::AmpSin, 2.5));
  const auto traj = solve(spec, config);
  REQUIRE(traj.blown_up());
  const auto& ev = std::get<BlownUp>(traj.outcome).event;
  CHECK(ev.t_detect > 0.0);
  CHECK(ev.t_detect < 0.01);
  CHECK((ev.sup_norm >= config.blowup_threshold || ev.last_dt <= config.dt_min));

  const auto zero = solve(semilinear(Potential(ChafeeInfante{1.0}), InitialData::preset(PresetName::AmpSin, 0.0)),
                          SolveConfig{});
  CHECK(std::holds_alternative<Completed>(zero.outcome));
  for (const auto& fr : zero.frames)
    for (double v : fr.u.values) CHECK(v == 0.0);
}

TEST_CASE("blow-up detection time is monotone in the threshold") {
  SolveConfig config;
  config.t_end = 0.01;
  config.n = 200;
  config.dt_init = 1e-6;
  const auto spec = semilinear(Potential(Polynomial{{0.0, 0.0, 0.0, 0.0, -2.0}}),
                               InitialData::preset(PresetName::AmpSin, 2.5));
  double prev = 0.0;
  for (double threshold : {5.0, 20.0, 80.0, 1e8}) {
    config.blowup_threshold = threshold;
    const auto traj = solve(spec, config);
    REQUIRE(traj.blown_up());
    const double t = std::get<BlownUp>(traj.outcome).event.t_detect;
    CHECK(t >= prev);
    prev = t;
  }
}

TEST_CASE("stalled step when the tolerance cannot be met") {
  SolveConfig config;
  config.t_end = 0.1;
  config.n = 50;
  config.dt_init = 1e-3;
  config.dt_min = 5e-4;
  config.rel_step_tol = 1e-15;
  const auto traj = solve(semilinear(Potential(Polynomial{{0.0}}), InitialData::preset(PresetName::AmpSin)), config);
  CHECK(std::holds_alternative<StalledStep>(traj.outcome));
}

TEST_CASE("property: Poincare bound along Dirichlet runs") {
  const Samples pts = {{0.0, 0.0}, {0.2, 0.7}, {0.45, -0.3}, {0.7, 1.2}, {1.0, 0.0}};
  for (const auto& u0 : {InitialData::preset(PresetName::XSinPiX), InitialData::preset(PresetName::AmpSin, 0.8),
                         InitialData(Sampled{pts})}) {
    SolveConfig config;
    config.t_end = 0.2;
    config.n = 200;
    const auto traj = solve(semilinear(Potential(ChafeeInfante{4.0}), u0), config);
    const double h = 1.0 / config.n;
    for (const auto& fr : traj.frames) {
      const double l2 = fr.diag.l2, h1 = fr.diag.h1_semi;
      CHECK(l2 * l2 <= h1 * h1 / (kPi * kPi) * (1.0 + 5.0 * h));
    }
  }
}

TEST_CASE("property: discrete energy rate") {
  const double c = 2.0;
  SolveConfig config;
  config.t_end = 0.05;
  config.n = 200;
  config.dt_init = config.dt_max = 1e-4;
  config.frame_stride = 1;
  const auto traj = solve(semilinear(Potential(Polynomial{{c}}), InitialData::preset(PresetName::XSinPiX)), config);
  REQUIRE(traj.frames.size() > 100);
  for (std::size_t k = 0; k + 1 < traj.frames.size(); k += 50) {
    const auto& a = traj.frames[k];
    const auto& b = traj.frames[k + 1];
    const double dt = b.t - a.t;
    GridField mid = a.u;
    for (std::size_t i = 0; i < mid.values.size(); ++i) mid.values[i] = 0.5 * (a.u.values[i] + b.u.values[i]);
    const double lhs = (l2_norm_squared(b.u) - l2_norm_squared(a.u)) / dt;
    const double rhs = -2.0 * dirichlet_form(mid) - 2.0 * c * l2_norm_squared(mid);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-3));
  }
}

TEST_CASE("determinism") {
  SolveConfig config;
  config.t_end = 0.05;
  const auto spec = semilinear(Potential(ChafeeInfante{kPi * kPi}), InitialData::preset(PresetName::ExpBump));
  const auto a = solve(spec, config);
  const auto b = solve(spec, config);
  REQUIRE(a.frames.size() == b.frames.size());
  for (std::size_t k = 0; k < a.frames.size(); ++k) {
    CHECK(a.frames[k].t == b.frames[k].t);
    CHECK(a.frames[k].u.values == b.frames[k].u.values);
  }
}

TEST_CASE("degenerate runs") {
  SolveConfig config;
  config.t_end = 1.0;
  config.n = 200;

  const auto zero = solve(degenerate(2.0, 2.0, InitialData::preset(PresetName::AmpRamp, 0.0),
                                     BoundaryKind::WeightedNeumannDirichlet),
                          config);
  CHECK(std::holds_alternative<Completed>(zero.outcome));
  for (const auto& fr : zero.frames)
    for (double v : fr.u.values) CHECK(v == 0.0);

  const auto small = solve(degenerate(1.0, 2.0, InitialData::preset(PresetName::XSinPiX, 0.01),
                                      BoundaryKind::MixedNeumannDirichlet),
                           config);
  CHECK(std::holds_alternative<Completed>(small.outcome));
  for (std::size_t k = 1; k < small.frames.size(); ++k)
    CHECK(small.frames[k].diag.l2 < small.frames[k - 1].diag.l2);

  config.dt_init = 1e-5;
  const auto big = solve(degenerate(2.0, 2.0, InitialData::preset(PresetName::AmpRamp, 5.0),
                                    BoundaryKind::WeightedNeumannDirichlet),
                         config);
  REQUIRE(big.blown_up());
  CHECK(std::get<BlownUp>(big.outcome).event.t_detect <= 0.52 * 1.1);
  for (const auto& fr : big.frames)
    for (double v : fr.u.values) CHECK(v >= 0.0);
}

TEST_CASE("config validation and exports") {
  SolveConfig bad;
  bad.t_end = -1.0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  SolveConfig inverted;
  inverted.dt_min = 1.0;
  CHECK_THROWS_AS(inverted.validate(), ParameterError);

  SolveConfig config;
  config.t_end = 0.01;
  config.n = 10;
  const auto traj = solve(semilinear(Potential(Polynomial{{0.0}}), InitialData::preset(PresetName::AmpSin)), config);
  std::ostringstream summary, frames;
  write_trajectory_csv(summary, traj);
  write_frames_csv(frames, traj);
  CHECK(summary.str().rfind("t,l2,h1_semi,sup,m,dt\n", 0) == 0);
  std::istringstream in(frames.str());
  std::string first;
  std::getline(in, first);
  CHECK(std::count(first.begin(), first.end(), ',') == 10);
  CHECK(first.rfind("0,", 0) == 0);
}
