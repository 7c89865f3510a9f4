#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "boundstate/errors.hpp"
#include "boundstate/expr.hpp"
#include "boundstate/quadrature.hpp"
#include "boundstate/special.hpp"

namespace boundstate {

/// hbar and the constant 2m/hbar^2 multiplying [E - V]. The default is the
/// natural convention 2m = hbar = 1.
struct Units {
  double hbar = 1.0;
  double mass_factor = 1.0;

  void validate() const {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw InvalidArgument("units: hbar must be positive");
    if (!(mass_factor > 0.0) || !std::isfinite(mass_factor)) {
      throw InvalidArgument("units: mass_factor must be positive");
    }
  }
};

using Sample = std::pair<double, double>;

/// A real state psi(x) = norm_constant * raw(x) with unit L2 norm on the line.
struct Wavefunction {
  Expression raw;
  double norm_constant = 1.0;
  double norm_error = 0.0;
  Units units;
  std::string label;

  double operator()(double x) const { return norm_constant * raw.eval(x); }

  Jet2 jet(double x) const {
    const Jet2 j = raw.eval_jet2(x);
    return {norm_constant * j.value, norm_constant * j.d1, norm_constant * j.d2};
  }
};

/// Normalizes e on the real line; fails when the norm integral is not finite.
inline Wavefunction from_expression(const Expression& e, Units units = {}, std::string label = {},
                                    const quad::Options& opt = {}) {
  units.validate();
  const auto norm2 = quad::integrate_real_line(
      [&](double x) {
        const double v = e.eval(x);
        return v * v;
      },
      opt);
  if (!norm2.is_finite()) {
    throw NotNormalizable("'" + e.source() + "' is not normalizable: integral of psi^2 is " +
                          quad::to_string(norm2.tag) + " (" + norm2.diagnostic + ")");
  }
  if (!(norm2.value > 0.0)) throw NotNormalizable("'" + e.source() + "' has zero norm");
  Wavefunction w{e, 1.0 / std::sqrt(norm2.value), 0.0, units, label.empty() ? e.source() : std::move(label)};
  // d(1/sqrt(I)) = -dI / (2 I^{3/2})
  w.norm_error = 0.5 * norm2.error_estimate / (norm2.value * std::sqrt(norm2.value));
  return w;
}

inline constexpr std::array<std::string_view, 4> kCatalogNames = {"gaussian", "quartic", "extended",
                                                                  "lorentzian2"};

/// Closed-form ground states with exact normalization constants.
inline Wavefunction catalog(std::string_view name, Units units = {}) {
  using std::numbers::pi;
  units.validate();
  if (name == "gaussian") {
    return {Expression::parse("exp(-x^2/2)"), std::pow(pi, -0.25), 0.0, units, "gaussian"};
  }
  if (name == "quartic") {
    const double n = 1.0 / std::sqrt(std::pow(2.0, 0.75) * special::gamma(1.25));
    return {Expression::parse("exp(-x^4)"), n, 0.0, units, "quartic"};
  }
  if (name == "extended") {
    return {Expression::parse("1/sqrt(1+x^2)"), 1.0 / std::sqrt(pi), 0.0, units, "extended"};
  }
  if (name == "lorentzian2") {
    return {Expression::parse("1/(1+x^2)"), std::sqrt(2.0 / pi), 0.0, units, "lorentzian2"};
  }
  throw UnknownName("unknown catalog state '" + std::string(name) +
                    "' (expected gaussian, quartic, extended or lorentzian2)");
}

/// sqrt(a) psi(a x): same norm, widths scaled by 1/a.
inline Wavefunction dilated(const Wavefunction& w, double a) {
  if (!(a > 0.0)) throw InvalidArgument("dilated: scale must be positive");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g*x", a);
  Wavefunction out = w;
  out.raw = w.raw.compose(Expression::parse(buf));
  out.norm_constant = w.norm_constant * std::sqrt(a);
  out.label = w.label + "@dilated";
  return out;
}

/// psi(x - c).
inline Wavefunction translated(const Wavefunction& w, double c) {
  char buf[48];
  std::snprintf(buf, sizeof buf, c >= 0.0 ? "x-%.17g" : "x+%.17g", std::abs(c));
  Wavefunction out = w;
  out.raw = w.raw.compose(Expression::parse(buf));
  out.label = w.label + "@translated";
  return out;
}

namespace detail {

inline double grid_point(double x_min, double x_max, int n, int i) {
  if (i == n - 1) return x_max;
  return x_min + (x_max - x_min) * static_cast<double>(i) / static_cast<double>(n - 1);
}

}  // namespace detail

inline std::vector<Sample> sample(const Wavefunction& w, double x_min, double x_max, int n) {
  if (n < 2) throw InvalidArgument("sample: need at least 2 points");
  if (!(x_min < x_max)) throw InvalidArgument("sample: need x_min < x_max");
  std::vector<Sample> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = detail::grid_point(x_min, x_max, n, i);
    out.emplace_back(x, w(x));
  }
  return out;
}

/// Strict sign changes on a uniform grid; |psi| < 1e-12 is treated as no sign.
inline int count_nodes(const Wavefunction& w, double x_min, double x_max, int n) {
  if (n < 100) throw InvalidArgument("count_nodes: need at least 100 sample points");
  if (!(x_min < x_max)) throw InvalidArgument("count_nodes: need x_min < x_max");
  int nodes = 0;
  int last_sign = 0;
  for (int i = 0; i < n; ++i) {
    const double v = w(detail::grid_point(x_min, x_max, n, i));
    if (std::abs(v) < 1e-12) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++nodes;
    last_sign = s;
  }
  return nodes;
}

}  // namespace boundstate
