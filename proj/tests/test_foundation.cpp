#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"

#include "mvpde/csv.hpp"
#include "mvpde/errors.hpp"
#include "mvpde/initial_data.hpp"
#include "mvpde/potential.hpp"
#include "mvpde/quadrature.hpp"
#include "mvpde/roots.hpp"
#include "mvpde/solvers.hpp"

using namespace mvpde;

namespace {

GridSpec unit_grid(int n) { return GridSpec(Domain1D(0.0, 1.0), n); }

GridField sample(const GridSpec& g, double (*fn)(double)) {
  std::vector<double> v;
  for (double x : g.nodes()) v.push_back(fn(x));
  return GridField(g, v);
}

// Exact average of f2 from its antiderivative, written out independently.
double f2_average_exact(double s) {
  if (s <= 3.0) return 1.0 - s / 2.0;
  return 1.5 / s - 1.0 - std::log(s - 2.0) / s;
}

// Composite Simpson with many panels, used as an independent oracle.
template <class F>
double simpson(F f, double a, double b, int panels = 20000) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

}  // namespace

TEST_CASE("domain and grid invariants") {
  CHECK_THROWS_AS(Domain1D(1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(Domain1D(2.0, 1.0), ParameterError);
  const Domain1D dom(-0.5, 2.0);
  CHECK(dom.measure() == 2.5);

  CHECK_THROWS_AS(GridSpec(dom, 7), ParameterError);
  const GridSpec grid(dom, 37);
  const auto nodes = grid.nodes();
  REQUIRE(nodes.size() == 38);
  CHECK(nodes.front() == -0.5);
  CHECK(nodes.back() == 2.0);
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    CHECK(nodes[i] > nodes[i - 1]);
    CHECK(nodes[i] - nodes[i - 1] == doctest::Approx(grid.h()).epsilon(1e-13));
  }
  CHECK_THROWS_AS(GridField(grid, std::vector<double>(5, 0.0)), ParameterError);
}

TEST_CASE("potential evaluation") {
  const Potential f2(PiecewiseF2{});
  CHECK(f2(3.0) == doctest::Approx(-2.0));
  CHECK(f2(std::nextafter(3.0, 0.0)) == doctest::Approx(-2.0));
  CHECK(f2(0.0) == 1.0);
  CHECK(f2(10.0) == doctest::Approx(-9.0 / 8.0));
  CHECK_THROWS_AS(f2(-0.1), DomainError);

  CHECK(Potential(ChafeeInfante{1.0})(0.0) == -1.0);
  CHECK(Potential(SingularF3{0.5})(0.75) == doctest::Approx(-2.0));
  CHECK_THROWS_AS(Potential(SingularF3{0.5})(1.0), DomainError);
  CHECK_THROWS_AS(Potential(SingularF3{1.5}), ParameterError);

  const Potential poly(Polynomial{{1.0, -2.0, 0.5}});
  CHECK(poly(2.0) == doctest::Approx(1.0 - 4.0 + 2.0));

  const Potential tab(Tabulated{{{0.0, 1.0}, {1.0, 3.0}, {2.0, -1.0}}});
  CHECK(tab(0.5) == doctest::Approx(2.0));
  CHECK(tab(1.5) == doctest::Approx(1.0));
  CHECK(tab(5.0) == -1.0);
  CHECK(tab.extrapolates(5.0));
  CHECK_FALSE(tab.extrapolates(1.0));
  CHECK_THROWS_AS(Potential(Tabulated{{{0.0, 1.0}, {0.0, 2.0}}}), ParameterError);
}

TEST_CASE("potential averages") {
  const Potential f2(PiecewiseF2{});
  CHECK(f2.average(2.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(f2.average(10.0) == doctest::Approx(3.0 / 20.0 - 1.0 - std::log(8.0) / 10.0)
                                .epsilon(1e-10));
  CHECK(f2.average(10.0) == doctest::Approx(-1.0579).epsilon(1e-4));
  for (double s : {0.1, 1.0, 2.999, 3.0, 3.5, 7.0, 15.0, 40.0}) {
    CHECK(f2.average(s) == doctest::Approx(f2_average_exact(s)).epsilon(1e-10));
  }

  CHECK(Potential(ChafeeInfante{1.0}).average(3.0) == doctest::Approx(2.0));
  for (double mu : {0.0, 2.5}) {
    const Potential ci(ChafeeInfante{mu});
    for (double s : {0.3, 1.7, 6.0}) {
      const double quad = simpson([&](double x) { return ci(x); }, 0.0, s) / s;
      CHECK(ci.average(s) == doctest::Approx(quad).epsilon(1e-10));
    }
  }

  for (double p : {0.25, 0.5, 0.8}) {
    const Potential f3(SingularF3{p});
    for (double s : {0.2, 0.6, 0.9}) {
      const double quad = simpson([&](double x) { return f3(x); }, 0.0, s) / s;
      CHECK(f3.average(s) == doctest::Approx(quad).epsilon(1e-9));
    }
    // Improper endpoint: the limit 1/(p - 1).
    CHECK(f3.average(1.0) == doctest::Approx(1.0 / (p - 1.0)).epsilon(1e-12));
    const double limit = 1.0 / (p - 1.0);
    CHECK(std::abs(f3.average(1.0 - 1e-9) - limit) < std::abs(f3.average(0.99) - limit));
  }

  CHECK_THROWS_AS(f2.average(0.0), DomainError);
  CHECK_THROWS_AS(Potential(SingularF3{0.5}).average(1.5), DomainError);
}

TEST_CASE("potential infimum") {
  CHECK(Potential(ChafeeInfante{2.0}).infimum({-5.0, 5.0}) == doctest::Approx(-2.0));
  CHECK(Potential(Polynomial{{0.0, 1.0}}).infimum({2.0, 4.0}) == doctest::Approx(2.0));
  CHECK(Potential(Polynomial{{1.0, 0.0, 1.0}}).infimum({-10.0, 10.0}) ==
        doctest::Approx(1.0));
  // f2 < -1 beyond s = 3 and approaches -1 from below as s grows.
  const double inf = Potential(PiecewiseF2{}).infimum({0.0, 100.0});
  CHECK(inf < -1.0);
  CHECK(inf == doctest::Approx(-2.0));
  CHECK_THROWS_AS(Potential(PiecewiseF2{}).infimum({-1.0, 2.0}), DomainError);
  CHECK_THROWS_AS(Potential(PiecewiseF2{}).infimum({0.0, 2.0}, 10), ParameterError);
}

TEST_CASE("initial data sampling") {
  const GridSpec g4 = GridSpec(Domain1D(0.0, 1.0), 8);
  const auto xs = sample_initial_data(InitialData::preset(PresetName::XSinPiX), g4,
                                      BoundaryKind::Dirichlet);
  for (std::size_t i = 0; i < g4.size(); ++i) {
    const double x = g4.node(i);
    CHECK(xs.values[i] == doctest::Approx(x * std::sin(kPi * x)).epsilon(1e-15));
  }
  CHECK(xs.values[4] == doctest::Approx(0.5));
  CHECK(xs.values.back() == 0.0);

  const auto amp = sample_initial_data(InitialData::preset(PresetName::AmpSin, 2.5),
                                       g4, BoundaryKind::Dirichlet);
  CHECK(amp.values[4] == doctest::Approx(2.5));
  CHECK(amp.values.front() == 0.0);

  const auto ramp = sample_initial_data(InitialData::preset(PresetName::AmpRamp, 5.0),
                                        g4, BoundaryKind::MixedNeumannDirichlet);
  CHECK(ramp.values.front() == 5.0);
  CHECK(ramp.values.back() == 0.0);

  const auto bump = sample_initial_data(InitialData::preset(PresetName::ExpBump), g4,
                                        BoundaryKind::MixedNeumannDirichlet);
  CHECK(bump.values.front() == doctest::Approx(std::exp(1.0) - 1.0));

  const InitialData tri(Sampled{{{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.0}}});
  const auto t = sample_initial_data(tri, g4, BoundaryKind::Dirichlet);
  CHECK(t.values[2] == doctest::Approx(0.5));

  const InitialData short_data(Sampled{{{0.0, 0.0}, {0.5, 1.0}}});
  CHECK_THROWS_AS(sample_initial_data(short_data, g4, BoundaryKind::Dirichlet),
                  CoverageError);
}

TEST_CASE("spectral information") {
  const Domain1D unit(0.0, 1.0);
  CHECK(SpectralInfo::make(BoundaryKind::MixedNeumannDirichlet, unit).lambda1() ==
        doctest::Approx(kPi * kPi / 4.0));
  CHECK(SpectralInfo::make(BoundaryKind::Dirichlet, Domain1D(1.0, 3.0)).lambda1() ==
        doctest::Approx(kPi * kPi / 4.0));
  CHECK(SpectralInfo::make(BoundaryKind::Dirichlet, unit, 1.0).lambda1() == 1.0);
  CHECK_THROWS_AS(SpectralInfo::make(BoundaryKind::WeightedNeumannDirichlet, unit)
                      .lambda1(),
                  ParameterError);
  CHECK_THROWS_AS(SpectralInfo::make(BoundaryKind::Dirichlet, unit, -1.0),
                  ParameterError);
}

TEST_CASE("discrete first eigenvalue is the Rayleigh quotient of the sampled mode") {
  for (int n : {8, 50, 400}) {
    const GridSpec g = unit_grid(n);
    const auto u = sample(g, [](double x) { return std::sin(kPi * x); });
    GridField clean = u;
    clean.values.front() = clean.values.back() = 0.0;
    const double rq = dirichlet_form(clean) / l2_norm_squared(clean);
    CHECK(discrete_lambda1(g, BoundaryKind::Dirichlet) == doctest::Approx(rq).epsilon(1e-12));
    CHECK(discrete_lambda1(g, BoundaryKind::Dirichlet) < kPi * kPi);
  }
}

TEST_CASE("norms on the unit interval") {
  const GridSpec g = unit_grid(1000);
  const auto u = sample(g, [](double x) { return std::sin(kPi * x); });
  CHECK(l2_norm_squared(u) == doctest::Approx(0.5).epsilon(1e-5));
  const double h1 = h1_seminorm(u);
  CHECK(h1 * h1 == doctest::Approx(kPi * kPi / 2.0).epsilon(1e-3));
  CHECK(lp_integral(u, 4.0) == doctest::Approx(3.0 / 8.0).epsilon(1e-6));
  CHECK(lp_integral(u, 3.0) == doctest::Approx(4.0 / (3.0 * kPi)).epsilon(1e-6));
  CHECK(sup_norm(u) == doctest::Approx(1.0));

  const GridField zero(g);
  CHECK(l2_norm(zero) == 0.0);
  CHECK(h1_seminorm(zero) == 0.0);
  CHECK(lp_norm(zero, 3.0) == 0.0);
  CHECK(sup_norm(zero) == 0.0);

  const NormRequest req[] = {NormRequest::l2(), NormRequest::lp(2.0), NormRequest::lp(4.0),
                             NormRequest::h1_semi(), NormRequest::weighted_gradient(2.0)};
  const auto rep = field_norms(u, req);
  CHECK(*rep.l2 == doctest::Approx(rep.lp.at(2.0)).epsilon(1e-14));
  CHECK(*rep.h1_semi == doctest::Approx(h1));
  // <x^2, pi^2 cos^2(pi x)> = pi^2 (1/6 + 1/(4 pi^2)).
  CHECK(rep.weighted_gradient.at(2.0) ==
        doctest::Approx(kPi * kPi / 6.0 + 0.25).epsilon(1e-5));

  GridField bad = u;
  bad.values[3] = std::nan("");
  CHECK_THROWS_AS(l2_norm(bad), ParameterError);
}

TEST_CASE("derivative is exact on quadratics") {
  const GridSpec g(Domain1D(-1.0, 2.0), 30);
  const auto u = sample(g, [](double x) { return 3.0 * x * x - x + 2.0; });
  const auto ux = derivative(u);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(ux.values[i] == doctest::Approx(6.0 * g.node(i) - 1.0).epsilon(1e-10));
  }
}

TEST_CASE("trapezoid converges at second order") {
  auto err = [](int n) {
    const GridSpec g = unit_grid(n);
    const auto u = sample(g, [](double x) { return std::exp(x) * std::cos(3.0 * x); });
    const double exact = (std::exp(1.0) * (std::cos(3.0) + 3.0 * std::sin(3.0)) - 1.0) / 10.0;
    return std::abs(trapezoid(g, u.view()) - exact);
  };
  const double e1 = err(50), e2 = err(100), e3 = err(200);
  CHECK(std::log2(e1 / e2) >= 1.9);
  CHECK(std::log2(e2 / e3) >= 1.9);
}

TEST_CASE("property: |v|_2 equals ||v|| and Cauchy-Schwarz on random fields") {
  std::mt19937 rng(7);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    const GridSpec g = unit_grid(16 + trial);
    std::vector<double> v(g.size());
    for (double& x : v) x = normal(rng);
    const GridField f(g, v);
    CHECK(lp_norm(f, 2.0) == doctest::Approx(l2_norm(f)).epsilon(1e-13));
    CHECK(l2_norm_squared(f) <= std::sqrt(lp_integral(f, 4.0)) * (1.0 + 1e-13));
  }
}

TEST_CASE("property: sampled norms are grid-refinement stable") {
  for (auto name : {PresetName::XSinPiX, PresetName::ExpBump}) {
    const auto u0 = InitialData::preset(name);
    double prev_gap = 0.0;
    for (int n : {100, 200, 400}) {
      const auto a = sample_initial_data(u0, unit_grid(n), BoundaryKind::MixedNeumannDirichlet);
      const auto b =
          sample_initial_data(u0, unit_grid(2 * n), BoundaryKind::MixedNeumannDirichlet);
      const double gap = std::abs(l2_norm(a) - l2_norm(b));
      if (prev_gap > 0.0) CHECK(prev_gap / gap > 3.5);
      prev_gap = gap;
    }
  }
}

TEST_CASE("bisection and golden section") {
  CHECK(bisect_root([](double x) { return x - 0.3; }, 0.0, 1.0, 1e-12) ==
        doctest::Approx(0.3).epsilon(1e-12));
  CHECK(bisect_root([](double x) { return std::cos(kPi * x); }, 0.0, 1.0, 1e-12) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bisect_root([](double x) { return x * x - 2.0; }, 1.0, 2.0, 1e-10) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
  CHECK(bisect_root([](double x) { return x; }, 0.0, 1.0, 1e-12) == 0.0);
  CHECK_THROWS_AS(bisect_root([](double x) { return x * x + 1.0; }, -1.0, 1.0, 1e-12),
                  BracketError);
  const auto m = golden_section_minimize([](double x) { return (x - 1.25) * (x - 1.25); },
                                         0.0, 3.0, 1e-10);
  CHECK(m.x == doctest::Approx(1.25).epsilon(1e-6));
  CHECK(m.value == doctest::Approx(0.0));
}

TEST_CASE("two-column CSV") {
  std::istringstream good("x,value\n0,0\n0.5,1\n1,0\n");
  const auto s = read_two_column_csv(good, "x");
  REQUIRE(s.size() == 3);
  CHECK(s[1].first == 0.5);
  CHECK(s[1].second == 1.0);

  std::istringstream header("s,value\n0,1\n");
  CHECK_THROWS_AS(read_two_column_csv(header, "x"), IoError);
  std::istringstream columns("x,value\n0,1,2\n");
  CHECK_THROWS_AS(read_two_column_csv(columns, "x"), IoError);
  std::istringstream junk("x,value\n0,abc\n");
  CHECK_THROWS_AS(read_two_column_csv(junk, "x"), IoError);

  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
    CHECK(std::stod(format_real(v)) == v);
  }
}
