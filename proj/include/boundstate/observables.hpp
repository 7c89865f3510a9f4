#pragma once

#include <cmath>
#include <future>
#include <string>

#include "boundstate/quadrature.hpp"
#include "boundstate/wavefunction.hpp"

namespace boundstate {

using quad::ExtendedReal;

/// Moments of a state. Momentum moments carry their powers of hbar;
/// product_U is expressed in units of hbar.
struct MomentReport {
  ExtendedReal mean_x;
  ExtendedReal mean_x2;
  ExtendedReal mean_p;
  ExtendedReal mean_p2;
  ExtendedReal delta_x;
  ExtendedReal delta_p;
  ExtendedReal product_U;
  std::string notes;
};

namespace detail {

// Far out in a tail the jet can overflow (exp(x) in a denominator) although
// psi itself has underflowed; such points contribute nothing.
inline Jet2 tail_jet(const Wavefunction& w, double x) {
  try {
    return w.jet(x);
  } catch (const DerivativeUndefined&) {
    if (std::abs(w(x)) < 1e-150) return Jet2::constant(0.0);
    throw;
  }
}

}  // namespace detail

inline ExtendedReal mean_x(const Wavefunction& w, const quad::Options& opt = {}) {
  return quad::integrate_real_line(
      [&](double x) {
        const double v = w(x);
        return x * v * v;
      },
      opt);
}

inline ExtendedReal mean_x2(const Wavefunction& w, const quad::Options& opt = {}) {
  return quad::integrate_real_line(
      [&](double x) {
        const double v = w(x);
        return x * x * v * v;
      },
      opt);
}

/// For a real state the integrand -hbar psi psi' is a total derivative, so a
/// convergent integral means <p> = 0; the raw integral is kept in the diagnostic.
inline ExtendedReal mean_p(const Wavefunction& w, const quad::Options& opt = {}) {
  const double hbar = w.units.hbar;
  auto r = quad::integrate_real_line(
      [&](double x) {
        const Jet2 j = detail::tail_jet(w, x);
        return -hbar * j.value * j.d1;
      },
      opt);
  if (!r.is_finite()) return r;
  return ExtendedReal::finite(0.0, r.error_estimate,
                              "real state, <p> = 0 (integral of -hbar psi psi' = " + quad::detail::fmt_g(r.value) +
                                  "); " + r.diagnostic);
}

/// hbar^2 times the integral of psi'^2, i.e. <p psi | p psi>.
inline ExtendedReal mean_p2(const Wavefunction& w, const quad::Options& opt = {}) {
  const double h2 = w.units.hbar * w.units.hbar;
  return quad::integrate_real_line(
      [&](double x) {
        const double d = detail::tail_jet(w, x).d1;
        return h2 * d * d;
      },
      opt);
}

/// -hbar^2 times the integral of psi psi''; agrees with mean_p2 when the
/// boundary term psi psi' vanishes at infinity.
inline ExtendedReal mean_p2_second_derivative(const Wavefunction& w, const quad::Options& opt = {}) {
  const double h2 = w.units.hbar * w.units.hbar;
  return quad::integrate_real_line(
      [&](double x) {
        const Jet2 j = detail::tail_jet(w, x);
        return -h2 * j.value * j.d2;
      },
      opt);
}

namespace detail {

// Indeterminate dominates, then Divergent.
inline const ExtendedReal* worst_of(const ExtendedReal& a, const ExtendedReal& b) {
  if (a.is_indeterminate()) return &a;
  if (b.is_indeterminate()) return &b;
  if (a.is_divergent()) return &a;
  if (b.is_divergent()) return &b;
  return nullptr;
}

inline ExtendedReal spread(const ExtendedReal& mean, const ExtendedReal& second, const char* name) {
  if (const auto* bad = worst_of(mean, second)) {
    if (bad->is_indeterminate()) return ExtendedReal::indeterminate(std::string(name) + " depends on an indeterminate moment");
    return ExtendedReal::divergent(std::string(name) + " infinite: " + bad->diagnostic);
  }
  double var = second.value - mean.value * mean.value;
  if (var < 0.0) {
    if (var < -1e-12) {
      return ExtendedReal::indeterminate(std::string(name) + ": negative variance " + quad::detail::fmt_g(var));
    }
    var = 0.0;
  }
  const double sd = std::sqrt(var);
  const double var_err = second.error_estimate + 2.0 * std::abs(mean.value) * mean.error_estimate;
  const double err = sd > 0.0 ? 0.5 * var_err / sd : std::sqrt(var_err);
  return ExtendedReal::finite(sd, err);
}

}  // namespace detail

inline MomentReport uncertainty_report(const Wavefunction& w, const quad::Options& opt = {}) {
  auto fx = std::async(std::launch::async, [&] { return mean_x(w, opt); });
  auto fx2 = std::async(std::launch::async, [&] { return mean_x2(w, opt); });
  auto fp = std::async(std::launch::async, [&] { return mean_p(w, opt); });
  auto fp2 = std::async(std::launch::async, [&] { return mean_p2(w, opt); });
  MomentReport r;
  r.mean_x = fx.get();
  r.mean_x2 = fx2.get();
  r.mean_p = fp.get();
  r.mean_p2 = fp2.get();
  r.delta_x = detail::spread(r.mean_x, r.mean_x2, "delta_x");
  r.delta_p = detail::spread(r.mean_p, r.mean_p2, "delta_p");

  const double hbar = w.units.hbar;
  if (const auto* bad = detail::worst_of(r.delta_x, r.delta_p)) {
    const ExtendedReal& other = bad == &r.delta_x ? r.delta_p : r.delta_x;
    if (bad->is_indeterminate() || (other.is_finite() && other.value == 0.0)) {
      r.product_U = ExtendedReal::indeterminate("uncertainty product undefined");
    } else {
      r.product_U = ExtendedReal::divergent("uncertainty product infinite: " + bad->diagnostic);
    }
  } else {
    const double u = r.delta_x.value * r.delta_p.value / hbar;
    const double err = (r.delta_x.error_estimate * r.delta_p.value + r.delta_x.value * r.delta_p.error_estimate) / hbar;
    r.product_U = ExtendedReal::finite(u, err);
  }

  std::string notes;
  auto note = [&](const char* name, const ExtendedReal& v) {
    if (v.diagnostic.empty()) return;
    if (!notes.empty()) notes += " | ";
    notes += std::string(name) + ": " + v.diagnostic;
  };
  note("mean_x", r.mean_x);
  note("mean_x2", r.mean_x2);
  note("mean_p", r.mean_p);
  note("mean_p2", r.mean_p2);
  r.notes = notes;
  return r;
}

}  // namespace boundstate
