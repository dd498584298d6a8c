#include "mvpde/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mvpde/errors.hpp"
#include "mvpde/quadrature.hpp"
#include "mvpde/roots.hpp"

namespace mvpde {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double eval_tabulated(const Tabulated& t, double s) {
  const auto& pts = t.points;
  if (s <= pts.front().first) return pts.front().second;
  if (s >= pts.back().first) return pts.back().second;
  auto it = std::upper_bound(
      pts.begin(), pts.end(), s,
      [](double v, const std::pair<double, double>& p) { return v < p.first; });
  const auto& [s1, f1] = *it;
  const auto& [s0, f0] = *(it - 1);
  return f0 + (f1 - f0) * (s - s0) / (s1 - s0);
}

std::string number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Potential::Potential(PotentialKind kind) : kind_(std::move(kind)) {
  std::visit(Overloaded{
                 [](const ChafeeInfante& k) {
                   if (!std::isfinite(k.mu))
                     throw ParameterError("chafee_infante: mu must be finite");
                 },
                 [](const PiecewiseF2&) {},
                 [](const SingularF3& k) {
                   if (!(k.p > 0.0 && k.p < 1.0))
                     throw ParameterError("singular_f3: requires 0 < p < 1");
                 },
                 [](const Polynomial& k) {
                   if (k.coeffs.empty())
                     throw ParameterError("polynomial: needs coefficients");
                   for (double c : k.coeffs)
                     if (!std::isfinite(c))
                       throw ParameterError("polynomial: non-finite coefficient");
                 },
                 [](const Tabulated& k) {
                   if (k.points.size() < 2)
                     throw ParameterError("tabulated: needs at least 2 points");
                   for (std::size_t i = 1; i < k.points.size(); ++i)
                     if (!(k.points[i].first > k.points[i - 1].first))
                       throw ParameterError(
                           "tabulated: s values must be strictly increasing");
                 },
             },
             kind_);
}

Interval Potential::valid_domain() const {
  return std::visit(Overloaded{
                        [](const PiecewiseF2&) { return Interval{0.0, kInf}; },
                        [](const SingularF3&) {
                          return Interval{0.0, 1.0 - kSingularGuard};
                        },
                        [](const auto&) { return Interval{-kInf, kInf}; },
                    },
                    kind_);
}

double Potential::operator()(double s) const {
  if (!valid_domain().contains(s)) {
    throw DomainError(describe() + ": s = " + number(s) +
                      " is outside the valid domain");
  }
  return std::visit(
      Overloaded{
          [s](const ChafeeInfante& k) { return s * s - k.mu; },
          [s](const PiecewiseF2&) {
            return s < 3.0 ? 1.0 - s : (1.0 - s) / (s - 2.0);
          },
          [s](const SingularF3& k) { return -std::pow(1.0 - s, -k.p); },
          [s](const Polynomial& k) {
            double acc = 0.0;
            for (auto it = k.coeffs.rbegin(); it != k.coeffs.rend(); ++it)
              acc = acc * s + *it;
            return acc;
          },
          [s](const Tabulated& k) { return eval_tabulated(k, s); },
      },
      kind_);
}

double Potential::average(double s) const {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError(describe() + ": average requires finite s > 0");
  }
  if (const auto* ci = std::get_if<ChafeeInfante>(&kind_)) {
    return s * s / 3.0 - ci->mu;
  }
  if (const auto* f3 = std::get_if<SingularF3>(&kind_)) {
    if (s > 1.0) {
      throw DomainError(describe() + ": average requires s <= 1");
    }
    const double q = 1.0 - f3->p;
    return (std::pow(1.0 - s, q) - 1.0) / (q * s);
  }
  const Interval dom = valid_domain();
  if (!(dom.lo <= 0.0 && s <= dom.hi)) {
    throw DomainError(describe() + ": (0, s) leaves the valid domain");
  }
  std::vector<double> cuts{0.0};
  for (double k : kinks())
    if (k > 0.0 && k < s) cuts.push_back(k);
  cuts.push_back(s);
  const auto& self = *this;
  auto integrand = [&self](double x) { return self(x); };
  const double scale = 1.0 + std::abs(self(0.0)) + std::abs(self(s));
  double total = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    total += adaptive_simpson(integrand, cuts[i - 1], cuts[i],
                              1e-13 * scale * (cuts[i] - cuts[i - 1]));
  }
  return total / s;
}

double Potential::infimum(Interval interval, int samples) const {
  if (samples < 64) {
    throw ParameterError("infimum: needs at least 64 samples");
  }
  if (!(interval.lo < interval.hi) || !std::isfinite(interval.lo) ||
      !std::isfinite(interval.hi)) {
    throw ParameterError("infimum: interval must be finite and non-empty");
  }
  if (!valid_domain().contains(interval)) {
    throw DomainError(describe() + ": interval leaves the valid domain");
  }
  const double step = interval.width() / (samples - 1);
  auto at = [&](int i) {
    return i == samples - 1 ? interval.hi : interval.lo + i * step;
  };
  int best = 0;
  double best_value = (*this)(at(0));
  for (int i = 1; i < samples; ++i) {
    const double v = (*this)(at(i));
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = at(std::max(best - 1, 0));
  const double hi = at(std::min(best + 1, samples - 1));
  const auto& self = *this;
  const auto refined = golden_section_minimize(
      [&self](double x) { return self(x); }, lo, hi, 1e-14 * (1.0 + hi - lo));
  return std::min(best_value, refined.value);
}

bool Potential::extrapolates(double s) const {
  if (const auto* t = std::get_if<Tabulated>(&kind_)) {
    return s < t->points.front().first || s > t->points.back().first;
  }
  return false;
}

std::vector<double> Potential::kinks() const {
  if (std::holds_alternative<PiecewiseF2>(kind_)) return {3.0};
  if (const auto* t = std::get_if<Tabulated>(&kind_)) {
    std::vector<double> s;
    for (const auto& p : t->points) s.push_back(p.first);
    return s;
  }
  return {};
}

std::string Potential::describe() const {
  return std::visit(
      Overloaded{
          [](const ChafeeInfante& k) {
            return "chafee_infante(mu=" + number(k.mu) + ")";
          },
          [](const PiecewiseF2&) { return std::string("piecewise_f2"); },
          [](const SingularF3& k) {
            return "singular_f3(p=" + number(k.p) + ")";
          },
          [](const Polynomial& k) {
            std::string out = "polynomial[";
            for (std::size_t i = 0; i < k.coeffs.size(); ++i) {
              if (i) out += ",";
              out += number(k.coeffs[i]);
            }
            return out + "]";
          },
          [](const Tabulated& k) {
            return "tabulated(" + std::to_string(k.points.size()) + " points)";
          },
      },
      kind_);
}

}  // namespace mvpde
