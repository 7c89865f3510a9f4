#pragma once

#include <cmath>

namespace boundstate {

/// Second-order forward-mode jet: value with first and second derivative
/// with respect to the single independent variable.
struct Jet2 {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;

  static constexpr Jet2 constant(double c) { return {c, 0.0, 0.0}; }
  static constexpr Jet2 variable(double x) { return {x, 1.0, 0.0}; }

  bool finite() const { return std::isfinite(value) && std::isfinite(d1) && std::isfinite(d2); }
};

constexpr Jet2 operator-(const Jet2& a) { return {-a.value, -a.d1, -a.d2}; }

constexpr Jet2 operator+(const Jet2& a, const Jet2& b) {
  return {a.value + b.value, a.d1 + b.d1, a.d2 + b.d2};
}

constexpr Jet2 operator-(const Jet2& a, const Jet2& b) {
  return {a.value - b.value, a.d1 - b.d1, a.d2 - b.d2};
}

// Leibniz rule up to second order.
constexpr Jet2 operator*(const Jet2& a, const Jet2& b) {
  return {a.value * b.value, a.d1 * b.value + a.value * b.d1,
          a.d2 * b.value + 2.0 * a.d1 * b.d1 + a.value * b.d2};
}

// Written in terms of b'/b so that huge b (e.g. exp(x) far out) does not overflow.
constexpr Jet2 reciprocal(const Jet2& b) {
  const double r = 1.0 / b.value;
  const double q = b.d1 * r;
  return {r, -q * r, (2.0 * q * q - b.d2 * r) * r};
}

constexpr Jet2 operator/(const Jet2& a, const Jet2& b) { return a * reciprocal(b); }

/// Chain rule: given f(u0), f'(u0), f''(u0), propagate through u.
constexpr Jet2 chain(const Jet2& u, double f, double df, double d2f) {
  return {f, df * u.d1, d2f * u.d1 * u.d1 + df * u.d2};
}

}  // namespace boundstate
