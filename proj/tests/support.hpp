#pragma once

// Shared oracles and generators for the test suites. Nothing here calls the
// library's own special functions or quadrature.

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace testing_support {

// Gamma via the Stirling series above 15, brought back down by recurrence.
inline double stirling_gamma(double x) {
  double shift = 1.0;
  while (x < 15.0) {
    shift *= x;
    x += 1.0;
  }
  const double inv = 1.0 / x, inv2 = inv * inv;
  const double series = inv / 12.0 - inv * inv2 / 360.0 + inv * inv2 * inv2 / 1260.0 -
                        inv * inv2 * inv2 * inv2 / 1680.0 + inv * inv2 * inv2 * inv2 * inv2 / 1188.0;
  const double lg = (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
  return std::exp(lg) / shift;
}

// Two independent evaluations must agree before either is trusted.
inline double gamma_oracle(double x) {
  const double a = std::tgamma(x);
  const double b = stirling_gamma(x);
  if (std::abs(a - b) > 1e-13 * std::abs(a)) return std::nan("");
  return a;
}

// Random smooth expressions of bounded size, finite with finite derivatives
// everywhere on the real line.
class ExprGen {
 public:
  explicit ExprGen(unsigned long seed) : rng_(seed) {}

  std::string smooth(int depth) {
    if (depth <= 0) return leaf();
    switch (pick(10)) {
      case 0: return "(" + smooth(depth - 1) + "+" + smooth(depth - 1) + ")";
      case 1: return "(" + smooth(depth - 1) + "-" + smooth(depth - 1) + ")";
      case 2: return "(" + smooth(depth - 1) + "*" + smooth(depth - 1) + ")";
      case 3: return "sin(" + smooth(depth - 1) + ")";
      case 4: return "cos(" + smooth(depth - 1) + ")";
      case 5: return "atan(" + smooth(depth - 1) + ")";
      case 6: return "exp(-(" + smooth(depth - 1) + ")^2/4)";
      case 7: return "sqrt(1+(" + smooth(depth - 1) + ")^2)";
      case 8: return "1/(2+sin(" + smooth(depth - 1) + "))";
      default: return "log(3+cos(" + smooth(depth - 1) + "))";
    }
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::string leaf() {
    switch (pick(4)) {
      case 0: return "x";
      case 1: return "(0.5*x)";
      case 2: return "pi";
      default: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3f", uniform(-2.0, 2.0));
        return std::string("(") + buf + ")";
      }
    }
  }

  std::mt19937_64 rng_;
};

}  // namespace testing_support
