#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include "boundstate/errors.hpp"

namespace boundstate::special {

namespace detail {

// Lanczos approximation, g = 7 with nine coefficients.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

// Gamma(z + 1) = sqrt(2 pi) t^(z + 1/2) e^(-t) A(z),  t = z + g + 1/2.
struct LanczosSeries {
  double a;    // A(z)
  double da;   // A'(z)
  double d2a;  // A''(z)
};

inline LanczosSeries lanczos_series(double z) {
  LanczosSeries s{kLanczosCoeffs[0], 0.0, 0.0};
  for (std::size_t k = 1; k < kLanczosCoeffs.size(); ++k) {
    const double inv = 1.0 / (z + static_cast<double>(k));
    const double c = kLanczosCoeffs[k];
    s.a += c * inv;
    s.da -= c * inv * inv;
    s.d2a += 2.0 * c * inv * inv * inv;
  }
  return s;
}

inline bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

}  // namespace detail

/// Gamma function; reflection formula below 1/2.
inline double gamma(double x) {
  using std::numbers::pi;
  if (!std::isfinite(x)) throw DomainError("gamma: non-finite argument");
  if (detail::is_nonpositive_integer(x)) {
    throw DomainError("gamma: pole at non-positive integer " + std::to_string(x));
  }
  if (x < 0.5) return pi / (std::sin(pi * x) * gamma(1.0 - x));
  const double z = x - 1.0;
  const double t = z + detail::kLanczosG + 0.5;
  const auto s = detail::lanczos_series(z);
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * s.a;
}

/// Digamma psi(x) = Gamma'(x) / Gamma(x), from the derivative of the Lanczos form.
inline double digamma(double x) {
  using std::numbers::pi;
  if (detail::is_nonpositive_integer(x)) throw DomainError("digamma: pole");
  if (x < 0.5) return digamma(1.0 - x) - pi / std::tan(pi * x);
  const double z = x - 1.0;
  const double t = z + detail::kLanczosG + 0.5;
  const auto s = detail::lanczos_series(z);
  return std::log(t) + (z + 0.5) / t - 1.0 + s.da / s.a;
}

/// Trigamma psi'(x).
inline double trigamma(double x) {
  using std::numbers::pi;
  if (detail::is_nonpositive_integer(x)) throw DomainError("trigamma: pole");
  if (x < 0.5) {
    const double sn = std::sin(pi * x);
    return pi * pi / (sn * sn) - trigamma(1.0 - x);
  }
  const double z = x - 1.0;
  const double t = z + detail::kLanczosG + 0.5;
  const auto s = detail::lanczos_series(z);
  return 1.0 / t + detail::kLanczosG / (t * t) + (s.d2a * s.a - s.da * s.da) / (s.a * s.a);
}

}  // namespace boundstate::special
