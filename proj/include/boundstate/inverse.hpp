#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "boundstate/errors.hpp"
#include "boundstate/expr.hpp"
#include "boundstate/wavefunction.hpp"

namespace boundstate {

struct PotentialPoint {
  double x = 0.0;
  double v = 0.0;
};

/// Potential sampled on an increasing grid. gauge_energy is the ground-state
/// energy E0 implied by the chosen split of V - E0.
struct PotentialGrid {
  std::vector<PotentialPoint> points;
  double gauge_energy = 0.0;
  std::string source_label;
};

namespace detail {

inline constexpr double kNodeThreshold = 1e-10;

// psi''/psi from exact jets, divided by 2m/hbar^2.
inline double curvature_ratio(const Wavefunction& w, double x, double threshold = kNodeThreshold) {
  const Jet2 j = w.jet(x);
  if (std::abs(j.value) <= threshold) {
    throw NodeInDomain(x, "psi vanishes (|psi| <= " + quad::detail::fmt_g(threshold) + ") at x = " +
                              quad::detail::fmt_g(x) + "; the inversion needs a nodeless state");
  }
  return j.d2 / j.value / w.units.mass_factor;
}

}  // namespace detail

/// V(x) = (hbar^2/2m) psi''/psi + E0 with E0 = gauge. The default gauge puts
/// the ground state at zero energy. The jets make the ratio exact wherever psi
/// is a normal double, so callers plotting far tails may lower node_threshold.
inline PotentialGrid reconstruct_potential(const Wavefunction& w, double x_min, double x_max, int n,
                                           double gauge = 0.0, double node_threshold = detail::kNodeThreshold) {
  if (n < 2) throw InvalidArgument("reconstruct_potential: need at least 2 points");
  if (!(x_min < x_max)) throw InvalidArgument("reconstruct_potential: need x_min < x_max");
  PotentialGrid g;
  g.gauge_energy = gauge;
  g.source_label = w.label;
  g.points.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = detail::grid_point(x_min, x_max, n, i);
    g.points.push_back({x, detail::curvature_ratio(w, x, node_threshold) + gauge});
  }
  return g;
}

/// Largest deviation of psi''/psi from candidate_v - E0 over the grid, with E0
/// fitted as the median offset.
inline double reconstruct_symbolic_check(const Wavefunction& w, const Expression& candidate_v,
                                         double x_min, double x_max, int n_points) {
  if (n_points < 2) throw InvalidArgument("reconstruct_symbolic_check: need at least 2 points");
  std::vector<double> offset;
  offset.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double x = detail::grid_point(x_min, x_max, n_points, i);
    offset.push_back(detail::curvature_ratio(w, x) - candidate_v.eval(x));
  }
  std::vector<double> sorted = offset;
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  double median = *mid;
  if (sorted.size() % 2 == 0) {
    median = 0.5 * (median + *std::max_element(sorted.begin(), mid));
  }
  double worst = 0.0;
  for (double d : offset) worst = std::max(worst, std::abs(d - median));
  return worst;
}

/// Natural cubic spline through the grid; constant extrapolation outside.
class PotentialSpline {
 public:
  explicit PotentialSpline(const PotentialGrid& g) {
    const std::size_t n = g.points.size();
    if (n < 2) throw InvalidArgument("PotentialSpline: need at least 2 points");
    x_.resize(n);
    y_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      x_[i] = g.points[i].x;
      y_[i] = g.points[i].v;
      if (i > 0 && !(x_[i] > x_[i - 1])) throw InvalidArgument("PotentialSpline: x must increase");
    }
    m_.assign(n, 0.0);
    if (n < 3) return;
    // Tridiagonal system for the second derivatives, natural end conditions.
    std::vector<double> c(n, 0.0), d(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
      const double a = h0 / 6.0, b = (h0 + h1) / 3.0, cc = h1 / 6.0;
      const double r = (y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0;
      const double denom = b - a * c[i - 1];
      c[i] = cc / denom;
      d[i] = (r - a * d[i - 1]) / denom;
    }
    for (std::size_t i = n - 2; i >= 1; --i) {
      m_[i] = d[i] - c[i] * m_[i + 1];
      if (i == 1) break;
    }
  }

  double operator()(double x) const {
    if (x <= x_.front()) return y_.front();
    if (x >= x_.back()) return y_.back();
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h, b = (x - x_[i]) / h;
    return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
  }

 private:
  std::vector<double> x_, y_, m_;
};

}  // namespace boundstate
