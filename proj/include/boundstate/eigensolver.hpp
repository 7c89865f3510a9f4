#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "boundstate/errors.hpp"
#include "boundstate/wavefunction.hpp"

namespace boundstate {

using RealFunction = std::function<double(double)>;

/// Box, step and energy search settings for the shooting solver. An unset
/// bracket defaults to [min V, min(V(x_min), V(x_max))] on the grid.
struct SolverConfig {
  double x_min = -8.0;
  double x_max = 8.0;
  double step = 1.0 / 512.0;
  std::optional<double> e_lo;
  std::optional<double> e_hi;
  double energy_tol = 1e-12;
  int max_bisections = 200;
  double mass_factor = 1.0;
  int scan_panels = 64;
  double edge_fraction = 0.025;
  double edge_threshold = 1e-6;

  int intervals() const {
    if (!(step > 0.0)) throw InvalidArgument("solver: step must be positive");
    if (!(x_min < x_max)) throw InvalidArgument("solver: need x_min < x_max");
    const double n = (x_max - x_min) / step;
    const double rounded = std::round(n);
    if (std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) {
      throw InvalidArgument("solver: (x_max - x_min) / step must be an integer");
    }
    if (rounded < 100) throw InvalidArgument("solver: need at least 100 steps across the box");
    if (!(mass_factor > 0.0)) throw InvalidArgument("solver: mass_factor must be positive");
    if (max_bisections < 1 || scan_panels < 1) throw InvalidArgument("solver: iteration limits must be positive");
    return static_cast<int>(rounded);
  }
};

struct Eigenpair {
  int index = 0;
  double energy = 0.0;
  std::vector<Sample> grid;
  int node_count = 0;
  double residual_norm = 0.0;
  double matching_defect = 0.0;
};

namespace detail {

class NumerovShooter {
 public:
  NumerovShooter(const RealFunction& v, const SolverConfig& cfg) : cfg_(cfg) {
    n_ = cfg.intervals();
    h_ = (cfg.x_max - cfg.x_min) / n_;
    x_.resize(static_cast<std::size_t>(n_) + 1);
    v_.resize(x_.size());
    for (int i = 0; i <= n_; ++i) {
      x_[i] = i == n_ ? cfg.x_max : cfg.x_min + h_ * i;
      v_[i] = v(x_[i]);
      if (!std::isfinite(v_[i])) throw DomainError("potential is not finite at x = " + quad::detail::fmt_g(x_[i]));
    }
  }

  int intervals() const { return n_; }
  double step() const { return h_; }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& potential() const { return v_; }

  // f = h^2 (2m/hbar^2)(E - V) / 12; the Numerov weights are 1 + f and 2 - 10 f.
  double f(int i, double e) const { return h_ * h_ * cfg_.mass_factor * (e - v_[i]) / 12.0; }
  double k(int i, double e) const { return 1.0 + f(i, e); }
  double centre(int i, double e) const { return 2.0 - 10.0 * f(i, e); }

  // Numerov in summed form: with y = (1 + f) psi the scheme reads
  // y[i+1] - 2 y[i] + y[i-1] = -12 f[i] psi[i], and the first difference of y
  // is carried explicitly to keep round-off from growing like 1/h.
  struct March {
    std::vector<double> psi;
    std::vector<double> y;
    std::vector<double> diff;  // y[i+1] - y[i] (left) or y[i-1] - y[i] (right)
  };

  // From the left wall (psi = 0, then psi = step) through index `last`.
  March march_left(double e, int last) const {
    March m;
    const auto size = static_cast<std::size_t>(last) + 1;
    m.psi.assign(size, 0.0);
    m.y.assign(size, 0.0);
    m.diff.assign(size, 0.0);
    m.psi[1] = h_;
    m.y[1] = k(1, e) * h_;
    m.diff[0] = m.y[1];
    for (int i = 1; i < last; ++i) {
      m.diff[i] = m.diff[i - 1] - 12.0 * f(i, e) * m.psi[i];
      m.y[i + 1] = m.y[i] + m.diff[i];
      m.psi[i + 1] = m.y[i + 1] / k(i + 1, e);
      if (std::abs(m.psi[i + 1]) > 1e150) rescale(m, 0, i + 1);
    }
    return m;
  }

  // From the right wall down to index `first`; indices below stay zero.
  March march_right(double e, int first) const {
    March m;
    m.psi.assign(x_.size(), 0.0);
    m.y.assign(x_.size(), 0.0);
    m.diff.assign(x_.size(), 0.0);
    m.psi[n_ - 1] = h_;
    m.y[n_ - 1] = k(n_ - 1, e) * h_;
    m.diff[n_] = m.y[n_ - 1];
    for (int i = n_ - 1; i > first; --i) {
      m.diff[i] = m.diff[i + 1] - 12.0 * f(i, e) * m.psi[i];
      m.y[i - 1] = m.y[i] + m.diff[i];
      m.psi[i - 1] = m.y[i - 1] / k(i - 1, e);
      if (std::abs(m.psi[i - 1]) > 1e150) rescale(m, i - 1, n_);
    }
    return m;
  }

  // Sign changes of the left solution across the whole box: the number of
  // box eigenvalues below e.
  int sturm_count(double e) const {
    const auto psi = march_left(e, n_).psi;
    int count = 0;
    for (int i = 2; i <= n_; ++i) {
      if ((psi[i] < 0.0 && psi[i - 1] > 0.0) || (psi[i] > 0.0 && psi[i - 1] < 0.0)) ++count;
      else if (psi[i] == 0.0 && i < n_ && psi[i - 1] * psi[i + 1] < 0.0) ++count;
    }
    return count;
  }

  // Rightmost classical turning point, clamped away from the walls.
  int matching_index(double e) const {
    int m = -1;
    for (int i = n_; i >= 0; --i) {
      if (v_[i] <= e) {
        m = i;
        break;
      }
    }
    if (m < 0) m = static_cast<int>(std::min_element(v_.begin(), v_.end()) - v_.begin());
    return std::clamp(m, 2, n_ - 3);
  }

  // Casoratian of y = k psi for the left and right solutions at m; independent
  // of m and zero exactly at an eigenvalue of the discrete problem.
  struct Match {
    double wronskian = 0.0;
    double defect = 0.0;
  };

  Match match(double e, int m) const {
    const auto left = march_left(e, m + 1);
    const auto right = march_right(e, m);
    // yl[m] yr[m+1] - yl[m+1] yr[m] written with the carried differences.
    const double yl = left.y[m], dl = left.diff[m];
    const double yr = right.y[m], dr = -right.diff[m + 1];
    const double l_scale = std::max(std::abs(yl), std::abs(yl + dl));
    const double r_scale = std::max(std::abs(yr), std::abs(yr + dr));
    Match out;
    out.wronskian = (yl / l_scale) * (dr / r_scale) - (dl / l_scale) * (yr / r_scale);
    const double denom = std::abs(yl * (yr + dr)) + std::abs((yl + dl) * yr);
    out.defect = denom > 0.0 ? std::abs(yl * dr - dl * yr) / denom : 0.0;
    return out;
  }

 private:
  static void rescale(March& m, int from, int to) {
    for (int j = from; j <= to; ++j) {
      m.psi[j] *= 1e-150;
      m.y[j] *= 1e-150;
      m.diff[j] *= 1e-150;
    }
  }

  SolverConfig cfg_;
  int n_ = 0;
  double h_ = 0.0;
  std::vector<double> x_, v_;
};

}  // namespace detail

/// Bound state n of psi'' + (2m/hbar^2)(E - V) psi = 0 in a Dirichlet box by
/// two-sided Numerov shooting. Node counting isolates the state, then
/// bisection on the sign of the matching Wronskian converges the energy.
inline Eigenpair solve_state(const RealFunction& v, int n, const SolverConfig& cfg = {}) {
  if (n < 0) throw InvalidArgument("solve_state: state index must be non-negative");
  detail::NumerovShooter s(v, cfg);
  const int nint = s.intervals();
  const auto& vv = s.potential();

  const double e_lo = cfg.e_lo.value_or(*std::min_element(vv.begin(), vv.end()));
  const double e_hi = cfg.e_hi.value_or(std::min(vv.front(), vv.back()));
  if (!(e_lo < e_hi)) {
    throw BracketError(0, 0, "energy bracket is empty: E_lo = " + quad::detail::fmt_g(e_lo) +
                                 ", E_hi = " + quad::detail::fmt_g(e_hi));
  }

  // Scan for a panel whose node counts straddle n.
  const int panels = cfg.scan_panels;
  std::vector<double> energies(static_cast<std::size_t>(panels) + 1);
  std::vector<int> counts(energies.size());
  for (int j = 0; j <= panels; ++j) {
    energies[j] = j == panels ? e_hi : e_lo + (e_hi - e_lo) * j / panels;
    counts[j] = s.sturm_count(energies[j]);
  }
  if (counts.front() > n || counts.back() <= n) {
    throw BracketError(counts.front(), counts.back(),
                       "bracket [" + quad::detail::fmt_g(e_lo) + ", " + quad::detail::fmt_g(e_hi) +
                           "] does not contain state " + std::to_string(n) + " (node counts " +
                           std::to_string(counts.front()) + " .. " + std::to_string(counts.back()) + ")");
  }
  int j = 0;
  while (counts[j + 1] <= n) ++j;
  double a = energies[j], b = energies[j + 1];
  int ca = counts[j], cb = counts[j + 1];

  // Narrow until exactly one eigenvalue (state n) remains in [a, b].
  for (int it = 0; (ca != n || cb != n + 1); ++it) {
    if (it >= cfg.max_bisections) throw NoConvergence("could not isolate state " + std::to_string(n));
    const double mid = 0.5 * (a + b);
    const int cm = s.sturm_count(mid);
    if (cm <= n) {
      a = mid;
      ca = cm;
    } else {
      b = mid;
      cb = cm;
    }
  }

  const int m = s.matching_index(0.5 * (a + b));
  double wa = s.match(a, m).wronskian;
  bool converged = false;
  for (int it = 0; it < cfg.max_bisections; ++it) {
    if (b - a <= cfg.energy_tol * std::max(1.0, std::abs(a))) {
      converged = true;
      break;
    }
    const double mid = 0.5 * (a + b);
    if (!(mid > a && mid < b)) {
      converged = true;
      break;
    }
    const double wm = s.match(mid, m).wronskian;
    if (wm == 0.0) {
      a = b = mid;
      converged = true;
      break;
    }
    if ((wm > 0.0) == (wa > 0.0)) {
      a = mid;
      wa = wm;
    } else {
      b = mid;
    }
  }
  if (!converged) {
    throw NoConvergence("energy bisection did not reach tolerance for state " + std::to_string(n));
  }

  Eigenpair out;
  out.index = n;
  out.energy = 0.5 * (a + b);
  const double e = out.energy;
  const auto left = s.march_left(e, m + 1).psi;
  const auto right = s.march_right(e, m).psi;
  out.matching_defect = s.match(e, m).defect;

  int anchor = m;
  if (std::abs(right[m]) < 1e-300 || std::abs(left[m]) < 1e-12 * std::abs(left[m + 1])) anchor = m + 1;
  const double ratio = left[anchor] / right[anchor];
  std::vector<double> psi(static_cast<std::size_t>(nint) + 1);
  for (int i = 0; i <= nint; ++i) psi[i] = i <= m ? left[i] : ratio * right[i];

  // Trapezoid normalization.
  const double h = s.step();
  double norm = 0.0;
  for (int i = 0; i < nint; ++i) norm += 0.5 * h * (psi[i] * psi[i] + psi[i + 1] * psi[i + 1]);
  const double inv = 1.0 / std::sqrt(norm);
  double peak = 0.0;
  for (double& p : psi) {
    p *= inv;
    peak = std::max(peak, std::abs(p));
  }

  // Positive at the leftmost interior maximum of |psi|.
  for (int i = 1; i < nint; ++i) {
    const double c = std::abs(psi[i]);
    if (c >= std::abs(psi[i - 1]) && c >= std::abs(psi[i + 1]) && c > 1e-3 * peak) {
      if (psi[i] < 0.0) {
        for (double& p : psi) p = -p;
      }
      break;
    }
  }

  const int edge = std::max(1, static_cast<int>(cfg.edge_fraction * nint));
  double edge_max = 0.0;
  for (int i = 0; i <= edge; ++i) {
    edge_max = std::max({edge_max, std::abs(psi[i]), std::abs(psi[nint - i])});
  }
  if (edge_max > cfg.edge_threshold * peak) {
    throw BoxTooSmall("state " + std::to_string(n) + " at E = " + quad::detail::fmt_g(e) +
                      " is not confined: |psi| near the box edge is " + quad::detail::fmt_g(edge_max / peak) +
                      " of its maximum");
  }

  int nodes = 0, last_sign = 0;
  for (double p : psi) {
    if (std::abs(p) < 1e-10 * peak) continue;
    const int sg = p > 0.0 ? 1 : -1;
    if (last_sign != 0 && sg != last_sign) ++nodes;
    last_sign = sg;
  }
  out.node_count = nodes;

  double residual = 0.0;
  for (int i = 1; i < nint; ++i) {
    const double r = s.k(i + 1, e) * psi[i + 1] - s.centre(i, e) * psi[i] + s.k(i - 1, e) * psi[i - 1];
    residual = std::max(residual, std::abs(r) / (h * h));
  }
  out.residual_norm = residual;

  out.grid.reserve(psi.size());
  for (int i = 0; i <= nint; ++i) out.grid.emplace_back(s.x()[i], psi[i]);
  return out;
}

/// max |psi'' + (2m/hbar^2)(E - V) psi| over n grid points, with psi'' from jets.
inline double verify_eigenpair(const RealFunction& v, double energy, const Wavefunction& psi, double x_min,
                               double x_max, int n) {
  if (n < 2) throw InvalidArgument("verify_eigenpair: need at least 2 points");
  if (!(x_min < x_max)) throw InvalidArgument("verify_eigenpair: need x_min < x_max");
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = detail::grid_point(x_min, x_max, n, i);
    const Jet2 j = psi.jet(x);
    worst = std::max(worst, std::abs(j.d2 + psi.units.mass_factor * (energy - v(x)) * j.value));
  }
  return worst;
}

}  // namespace boundstate
