#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#include "boundstate/errors.hpp"

namespace boundstate::quad {

enum class Status { Finite, Divergent, Indeterminate };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::Finite: return "finite";
    case Status::Divergent: return "divergent";
    case Status::Indeterminate: return "indeterminate";
  }
  return "?";
}

/// Outcome of an improper integral. Divergence is a value, not an exception.
struct ExtendedReal {
  Status tag = Status::Indeterminate;
  double value = std::numeric_limits<double>::quiet_NaN();
  double error_estimate = std::numeric_limits<double>::quiet_NaN();
  std::string diagnostic;

  static ExtendedReal finite(double v, double err, std::string diag = {}) {
    return {Status::Finite, v, err, std::move(diag)};
  }
  static ExtendedReal divergent(std::string diag) {
    return {Status::Divergent, std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::quiet_NaN(), std::move(diag)};
  }
  static ExtendedReal indeterminate(std::string diag) {
    return {Status::Indeterminate, std::numeric_limits<double>::quiet_NaN(),
            std::numeric_limits<double>::quiet_NaN(), std::move(diag)};
  }

  bool is_finite() const { return tag == Status::Finite; }
  bool is_divergent() const { return tag == Status::Divergent; }
  bool is_indeterminate() const { return tag == Status::Indeterminate; }
};

/// Power-law fit |f(x)| ~ |x|^-exponent over a geometric window.
struct TailModel {
  bool super_polynomial = false;
  double exponent_estimate = std::numeric_limits<double>::quiet_NaN();
  double x_lo = 0.0;
  double x_hi = 0.0;
  double fit_residual = 0.0;
  int samples_used = 0;
  bool insufficient_samples = false;
  std::string diagnostic;
};

enum class Side { Left, Right };

/// Symmetric: full-line integrals are lim L->inf of the integral over [-L, L].
/// Absolute: both one-sided tails must converge on their own.
enum class LimitMode { Symmetric, Absolute };

struct Options {
  double tol = 1e-8;
  double tail_margin = 0.05;
  int tail_doublings = 10;
  LimitMode mode = LimitMode::Symmetric;
  double core_half_width = 8.0;
  int max_doublings = 27;  // outer shell ends at 8 * 2^27 = 2^30
  int min_shells = 6;
  int max_endpoint_shells = 400;
  int max_panels = 2000;
};

namespace detail {

inline std::string fmt(double v, int digits = 2) {
  if (std::abs(v) < 0.5 * std::pow(10.0, -digits)) v = 0.0;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

inline std::string fmt_g(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Kronrod 15-point abscissae and weights with the embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;  // integral of |f|
  bool finite = true;
};

/// One Gauss-Kronrod (7,15) panel with the QUADPACK error heuristic.
template <class F>
Panel gauss_kronrod_15(F& f, double a, double b) {
  using detail::kWg;
  using detail::kWgk;
  using detail::kXgk;
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 15> fv{};
  fv[7] = f(center);
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    fv[j] = f(center - dx);
    fv[14 - j] = f(center + dx);
  }
  Panel p{a, b};
  for (double v : fv) {
    if (!std::isfinite(v)) {
      p.finite = false;
      return p;
    }
  }
  double kronrod = kWgk[7] * fv[7];
  double gauss = kWg[3] * fv[7];
  double abs_sum = kWgk[7] * std::abs(fv[7]);
  for (int j = 0; j < 7; ++j) {
    const double pair = fv[j] + fv[14 - j];
    kronrod += kWgk[j] * pair;
    abs_sum += kWgk[j] * (std::abs(fv[j]) + std::abs(fv[14 - j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kWgk[7] * std::abs(fv[7] - mean);
  for (int j = 0; j < 7; ++j) {
    asc += kWgk[j] * (std::abs(fv[j] - mean) + std::abs(fv[14 - j] - mean));
  }
  const double ah = std::abs(half);
  asc *= ah;
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  const double resabs = abs_sum * ah;
  const double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  p.value = kronrod * half;
  p.error = err;
  p.abs_value = resabs;
  return p;
}

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;
  double abs_value = 0.0;
  bool converged = false;
  bool finite = true;
  int panels = 0;
};

/// Globally adaptive bisection on [a, b]; the panel with the largest error is
/// split first. Panels are summed in order of their left end.
template <class F>
AdaptiveResult integrate_adaptive(F& f, double a, double b, double abs_tol, double rel_tol,
                                  int max_panels = 2000, int initial_panels = 32) {
  // A uniform first partition, so a narrow feature cannot hide between the
  // nodes of a single wide panel.
  std::vector<Panel> panels;
  const int n0 = std::max(1, std::min(initial_panels, max_panels));
  for (int k = 0; k < n0; ++k) {
    const double lo = k == 0 ? a : a + (b - a) * k / n0;
    const double hi = k + 1 == n0 ? b : a + (b - a) * (k + 1) / n0;
    panels.push_back(gauss_kronrod_15(f, lo, hi));
  }
  AdaptiveResult out;
  auto totals = [&] {
    std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
    out.value = out.error = out.abs_value = 0.0;
    for (const auto& p : panels) {
      out.value += p.value;
      out.error += p.error;
      out.abs_value += p.abs_value;
    }
    out.panels = static_cast<int>(panels.size());
  };
  if (!std::all_of(panels.begin(), panels.end(), [](const Panel& p) { return p.finite; })) {
    out.finite = false;
    return out;
  }
  for (;;) {
    double value = 0.0, error = 0.0;
    for (const auto& p : panels) {
      value += p.value;
      error += p.error;
    }
    if (error <= std::max(abs_tol, rel_tol * std::abs(value))) {
      totals();
      out.converged = true;
      return out;
    }
    if (static_cast<int>(panels.size()) >= max_panels) break;
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const Panel& l, const Panel& r) { return l.error < r.error; });
    const Panel w = *worst;
    const double mid = 0.5 * (w.a + w.b);
    if (!(mid > w.a && mid < w.b)) break;  // no room left to bisect
    Panel left = gauss_kronrod_15(f, w.a, mid);
    Panel right = gauss_kronrod_15(f, mid, w.b);
    if (!left.finite || !right.finite) {
      out.finite = false;
      totals();
      return out;
    }
    *worst = left;
    panels.push_back(right);
  }
  totals();
  return out;
}

/// Samples |f| at x_start * 2^k (mirrored for the left tail) and fits the
/// decay exponent by least squares of -log|f| against log|x|.
template <class F>
TailModel tail_exponent(F&& f, Side side, double x_start, int doublings = 10) {
  if (!(x_start > 0.0)) throw InvalidArgument("tail_exponent: x_start must be positive");
  doublings = std::max(doublings, 6);
  const double sign = side == Side::Left ? -1.0 : 1.0;
  TailModel m;
  m.x_lo = x_start;
  m.x_hi = std::ldexp(x_start, doublings);

  std::vector<double> lx, ly;
  std::vector<int> index;
  int zeros = 0;
  for (int k = 0; k <= doublings; ++k) {
    const double x = std::ldexp(x_start, k);
    double v = 0.0;
    try {
      v = std::abs(f(sign * x));
    } catch (const Error&) {
      continue;
    }
    if (v == 0.0) {
      ++zeros;
      continue;
    }
    if (!std::isfinite(v)) continue;
    lx.push_back(std::log(x));
    ly.push_back(-std::log(v));
    index.push_back(k);
  }
  m.samples_used = static_cast<int>(lx.size());
  const int total = doublings + 1;

  if (lx.empty()) {
    m.super_polynomial = true;
    m.insufficient_samples = true;
    m.diagnostic = "insufficient samples: |f| underflows to zero beyond x = " + detail::fmt_g(x_start);
    return m;
  }
  if (2 * zeros > total) {
    m.super_polynomial = true;
    m.diagnostic = "super-polynomial: |f| underflows at " + std::to_string(zeros) + " of " +
                   std::to_string(total) + " samples";
    return m;
  }

  // Local slopes between consecutive doublings.
  std::vector<double> slopes;
  for (std::size_t i = 1; i < lx.size(); ++i) {
    if (index[i] != index[i - 1] + 1) continue;
    slopes.push_back((ly[i] - ly[i - 1]) / (lx[i] - lx[i - 1]));
  }
  if (slopes.size() >= 3) {
    bool accelerating = true;
    for (std::size_t i = 1; i < slopes.size(); ++i) {
      if (slopes[i] < slopes[i - 1] + 0.5) {
        accelerating = false;
        break;
      }
    }
    if (accelerating) {
      m.super_polynomial = true;
      m.diagnostic = "super-polynomial: local slopes grow from " + detail::fmt(slopes.front()) +
                     " to " + detail::fmt(slopes.back());
      return m;
    }
  }
  if (lx.size() < 2) {
    m.super_polynomial = true;
    m.insufficient_samples = true;
    m.diagnostic = "insufficient samples for a slope fit";
    return m;
  }

  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  double ss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (my + slope * (lx[i] - mx));
    ss += r * r;
  }
  m.exponent_estimate = slope;
  m.fit_residual = std::sqrt(ss / n);
  m.diagnostic = "exponent " + detail::fmt(slope) + " over [" + detail::fmt_g(m.x_lo) + ", " +
                 detail::fmt_g(m.x_hi) + "], residual " + detail::fmt_g(m.fit_residual);
  return m;
}

namespace detail {

// Contributions of successive geometric shells toward a limit point.
class ShellSeries {
 public:
  enum class State { Pending, Converged, NotShrinking };

  struct Verdict {
    State state = State::Pending;
    double value = 0.0;
    double error = 0.0;
    double ratio = 0.0;  // last |c_k / c_{k-1}|
  };

  void add(double contribution, double error, double abs_value) {
    terms_.push_back(contribution);
    abs_terms_.push_back(abs_value);
    partial_ += contribution;
    error_sum_ += error;
    scale_ += abs_value;
  }

  void add_scale(double abs_value) { scale_ += abs_value; }

  std::size_t size() const { return terms_.size(); }
  double partial() const { return partial_; }
  double error_sum() const { return error_sum_; }

  Verdict assess(double tol) const {
    Verdict v;
    const std::size_t n = terms_.size();
    if (n < 4) return v;
    const double noise = 1e-13 * scale_;
    auto significant = [&](double t) { return std::abs(t) > noise && std::abs(t) > 1e-300; };

    if (!significant(terms_[n - 1]) && !significant(terms_[n - 2]) && !significant(terms_[n - 3])) {
      v.state = State::Converged;
      v.value = partial_;
      v.error = error_sum_ + std::abs(terms_[n - 1]) + std::abs(terms_[n - 2]);
      return v;
    }

    std::array<double, 3> ratios{};
    for (int i = 0; i < 3; ++i) {
      const double cur = terms_[n - 1 - i];
      const double prev = terms_[n - 2 - i];
      if (!significant(cur)) {
        ratios[i] = 0.0;
      } else if (!significant(prev)) {
        ratios[i] = std::numeric_limits<double>::infinity();
      } else {
        ratios[i] = std::abs(cur / prev);
      }
    }
    v.ratio = ratios[0];
    const double flat = 1.0 - 1e-3;
    const double rmin = *std::min_element(ratios.begin(), ratios.end());
    const double rmax = *std::max_element(ratios.begin(), ratios.end());
    if (rmin >= flat) {
      v.state = State::NotShrinking;
      return v;
    }
    if (rmax >= flat) return v;

    const double target = tol * std::max(1.0, std::abs(partial_));
    const bool same_sign = (terms_[n - 1] > 0) == (terms_[n - 2] > 0) &&
                           (terms_[n - 2] > 0) == (terms_[n - 3] > 0);
    // Extrapolation presumes each shell is one-signed; cancellation inside a
    // shell (|c_k| well below the integral of |f|) means f oscillates.
    auto coherent = [&](std::size_t k) { return std::abs(terms_[k]) >= 0.99 * abs_terms_[k]; };
    if (same_sign && significant(terms_[n - 2]) && coherent(n - 1) && coherent(n - 2) && coherent(n - 3)) {
      // Geometric tail extrapolation, checked against the previous step.
      const double r1 = terms_[n - 1] / terms_[n - 2];
      const double r0 = terms_[n - 2] / terms_[n - 3];
      const double a1 = partial_ + terms_[n - 1] * r1 / (1.0 - r1);
      const double a0 = partial_ - terms_[n - 1] + terms_[n - 2] * r0 / (1.0 - r0);
      const double err = std::abs(a1 - a0) + error_sum_;
      if (err <= target) {
        v.state = State::Converged;
        v.value = a1;
        v.error = err;
      }
      return v;
    }
    // Mixed signs: the signed pieces may oscillate, so bound the rest by the
    // shells of |f| instead, which must themselves shrink geometrically.
    double abs_ratio = 0.0;
    for (std::size_t i = n - 3; i < n; ++i) {
      if (!(abs_terms_[i - 1] > 0.0)) return v;
      abs_ratio = std::max(abs_ratio, abs_terms_[i] / abs_terms_[i - 1]);
    }
    if (!(abs_ratio < flat)) return v;
    const double bound = abs_terms_[n - 1] * abs_ratio / (1.0 - abs_ratio);
    if (bound + error_sum_ <= target) {
      v.state = State::Converged;
      v.value = partial_;
      v.error = bound + error_sum_;
    }
    return v;
  }

 private:
  std::vector<double> terms_;
  std::vector<double> abs_terms_;
  double partial_ = 0.0;
  double error_sum_ = 0.0;
  double scale_ = 0.0;
};

inline std::string describe_tail(const char* name, const TailModel& t) {
  if (t.super_polynomial) return std::string(name) + " tail super-polynomial";
  return std::string(name) + " tail exponent ~ " + fmt(t.exponent_estimate);
}

inline double shell_tol(const Options& opt) { return 1e-3 * opt.tol; }

}  // namespace detail

/// Integral over [a, b] with geometric subdivision toward both endpoints, so
/// that integrable endpoint singularities are summed and non-integrable ones
/// are reported as divergent.
template <class F>
ExtendedReal integrate_finite(F&& f, double a, double b, const Options& opt = {}) {
  using detail::ShellSeries;
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    throw InvalidArgument("integrate_finite: requires finite a < b");
  }
  if (!(opt.tol > 0.0)) throw InvalidArgument("integrate_finite: tol must be positive");
  const double mid = 0.5 * (a + b);
  double value = 0.0, error = 0.0;
  std::string diag;

  for (int end = 0; end < 2; ++end) {
    const double anchor = end == 0 ? a : b;
    const double span = (end == 0 ? mid - a : mid - b);  // signed, points inward
    const char* name = end == 0 ? "left" : "right";
    ShellSeries series;
    ShellSeries::Verdict verdict;
    bool decided = false;
    for (int k = 0; k < opt.max_endpoint_shells; ++k) {
      const double outer = anchor + std::ldexp(span, -k);
      const double inner = anchor + std::ldexp(span, -k - 1);
      if (inner == anchor || inner == outer) break;
      const double lo = std::min(inner, outer), hi = std::max(inner, outer);
      auto r = integrate_adaptive(f, lo, hi, detail::shell_tol(opt), detail::shell_tol(opt), opt.max_panels);
      if (!r.finite) {
        return ExtendedReal::divergent(std::string(name) + " endpoint: integrand not finite near " +
                                       detail::fmt_g(anchor));
      }
      series.add(r.value, r.error, r.abs_value);
      verdict = series.assess(0.25 * opt.tol);
      if (verdict.state == ShellSeries::State::NotShrinking) {
        const double exponent = 1.0 + std::log2(verdict.ratio);
        return ExtendedReal::divergent(std::string(name) + " endpoint exponent ~ " +
                                       detail::fmt(exponent) + " (shell contributions do not shrink)");
      }
      if (verdict.state == ShellSeries::State::Converged && series.size() >= 4) {
        decided = true;
        break;
      }
    }
    if (!decided) {
      return ExtendedReal::indeterminate(std::string(name) +
                                         " endpoint: maximum subdivision depth exceeded");
    }
    value += verdict.value;
    error += verdict.error;
  }
  if (error > opt.tol * std::max(1.0, std::abs(value))) {
    return ExtendedReal::indeterminate("error estimate " + detail::fmt_g(error) + " exceeds tolerance");
  }
  diag = "proper or convergent improper integral";
  return ExtendedReal::finite(value, error, diag);
}

/// Integral over [a, inf) by domain doubling with tail extrapolation.
template <class F>
ExtendedReal integrate_half_line(F&& f, double a, const Options& opt = {}) {
  using detail::ShellSeries;
  if (!std::isfinite(a)) throw InvalidArgument("integrate_half_line: a must be finite");
  if (!(opt.tol > 0.0)) throw InvalidArgument("integrate_half_line: tol must be positive");
  const double start = a < opt.core_half_width ? opt.core_half_width : 2.0 * a;
  auto core = integrate_adaptive(f, a, start, detail::shell_tol(opt), detail::shell_tol(opt), opt.max_panels);
  if (!core.finite) return ExtendedReal::divergent("integrand not finite on [" + detail::fmt_g(a) + ", " + detail::fmt_g(start) + "]");

  ShellSeries series;
  series.add_scale(core.abs_value);
  for (int j = 0; j < opt.max_doublings; ++j) {
    const double lo = std::ldexp(start, j), hi = 2.0 * lo;
    auto r = integrate_adaptive(f, lo, hi, detail::shell_tol(opt), detail::shell_tol(opt), opt.max_panels);
    if (!r.finite) return ExtendedReal::divergent("integrand overflows on [" + detail::fmt_g(lo) + ", " + detail::fmt_g(hi) + "]");
    series.add(r.value, r.error, r.abs_value);
    if (static_cast<int>(series.size()) < opt.min_shells) continue;
    const auto v = series.assess(0.5 * opt.tol);
    if (v.state == ShellSeries::State::NotShrinking) {
      const auto tail = tail_exponent(f, Side::Right, start, opt.tail_doublings);
      return ExtendedReal::divergent(detail::describe_tail("right", tail) +
                                     "; shell contributions do not shrink (ratio " + detail::fmt(v.ratio) + ")");
    }
    if (v.state == ShellSeries::State::Converged) {
      const double total = core.value + v.value;
      const double err = core.error + v.error;
      if (err > opt.tol * std::max(1.0, std::abs(total))) break;
      const auto tail = tail_exponent(f, Side::Right, start, opt.tail_doublings);
      return ExtendedReal::finite(total, err, "convergent; " + detail::describe_tail("right", tail));
    }
  }
  const auto tail = tail_exponent(f, Side::Right, start, opt.tail_doublings);
  if (!tail.super_polynomial && tail.exponent_estimate <= 1.0 + opt.tail_margin && tail.fit_residual <= 0.1) {
    return ExtendedReal::divergent(detail::describe_tail("right", tail));
  }
  return ExtendedReal::indeterminate("no convergence by x = " + detail::fmt_g(std::ldexp(start, opt.max_doublings)) +
                                     "; " + detail::describe_tail("right", tail));
}

/// Integral over the real line as the limit of [-L, L] for L = 8, 16, ..., 2^30.
template <class F>
ExtendedReal integrate_real_line(F&& f, const Options& opt = {}) {
  using detail::ShellSeries;
  if (!(opt.tol > 0.0)) throw InvalidArgument("integrate_real_line: tol must be positive");
  const double w = opt.core_half_width;
  auto core = integrate_adaptive(f, -w, w, detail::shell_tol(opt), detail::shell_tol(opt), opt.max_panels);
  if (!core.finite) return ExtendedReal::divergent("integrand not finite on [" + detail::fmt_g(-w) + ", " + detail::fmt_g(w) + "]");

  ShellSeries sym, right, left;
  sym.add_scale(core.abs_value);
  right.add_scale(core.abs_value);
  left.add_scale(core.abs_value);

  auto tails = [&] {
    return std::pair{tail_exponent(f, Side::Left, w, opt.tail_doublings),
                     tail_exponent(f, Side::Right, w, opt.tail_doublings)};
  };

  ShellSeries::Verdict last;
  for (int j = 0; j < opt.max_doublings; ++j) {
    const double lo = std::ldexp(w, j), hi = 2.0 * lo;
    auto r = integrate_adaptive(f, lo, hi, detail::shell_tol(opt), detail::shell_tol(opt), opt.max_panels);
    auto l = integrate_adaptive(f, -hi, -lo, detail::shell_tol(opt), detail::shell_tol(opt), opt.max_panels);
    if (!r.finite || !l.finite) {
      return ExtendedReal::divergent("integrand overflows on the shell |x| in [" + detail::fmt_g(lo) + ", " +
                                     detail::fmt_g(hi) + "]");
    }
    right.add(r.value, r.error, r.abs_value);
    left.add(l.value, l.error, l.abs_value);
    sym.add(r.value + l.value, r.error + l.error, r.abs_value + l.abs_value);
    if (static_cast<int>(sym.size()) < opt.min_shells) continue;

    last = sym.assess(0.5 * opt.tol);
    if (last.state == ShellSeries::State::NotShrinking) {
      const auto [lt, rt] = tails();
      std::string diag;
      const bool right_bad = right.assess(opt.tol).state == ShellSeries::State::NotShrinking;
      const bool left_bad = left.assess(opt.tol).state == ShellSeries::State::NotShrinking;
      if (right_bad || !left_bad) diag += detail::describe_tail("right", rt);
      if (left_bad) diag += std::string(diag.empty() ? "" : "; ") + detail::describe_tail("left", lt);
      diag += "; symmetric shells do not shrink (ratio " + detail::fmt(last.ratio) + ")";
      return ExtendedReal::divergent(diag);
    }
    if (last.state == ShellSeries::State::Converged) {
      const double total = core.value + last.value;
      const double err = core.error + last.error;
      if (err > opt.tol * std::max(1.0, std::abs(total))) break;
      const auto [lt, rt] = tails();
      const bool right_bad = right.assess(opt.tol).state == ShellSeries::State::NotShrinking;
      const bool left_bad = left.assess(opt.tol).state == ShellSeries::State::NotShrinking;
      const std::string tail_text =
          detail::describe_tail("left", lt) + "; " + detail::describe_tail("right", rt);
      if (right_bad || left_bad) {
        if (opt.mode == LimitMode::Absolute) {
          return ExtendedReal::divergent("not absolutely convergent: " + tail_text);
        }
        return ExtendedReal::finite(total, err, "principal value, symmetric limits; " + tail_text);
      }
      return ExtendedReal::finite(total, err, "absolutely convergent; " + tail_text);
    }
  }

  const auto [lt, rt] = tails();
  const std::string tail_text = detail::describe_tail("left", lt) + "; " + detail::describe_tail("right", rt);
  auto slow = [&](const TailModel& t) {
    return !t.super_polynomial && t.exponent_estimate <= 1.0 + opt.tail_margin && t.fit_residual <= 0.1;
  };
  if (slow(lt) || slow(rt)) return ExtendedReal::divergent(tail_text);
  if (lt.fit_residual > 0.1 || rt.fit_residual > 0.1) {
    return ExtendedReal::indeterminate("tail fit ambiguous; " + tail_text);
  }
  return ExtendedReal::indeterminate("no convergence by |x| = 2^30; " + tail_text);
}

}  // namespace boundstate::quad
