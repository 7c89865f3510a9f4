#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "boundstate/observables.hpp"
#include "boundstate/quadrature.hpp"
#include "boundstate/wavefunction.hpp"

namespace boundstate {

enum class Verdict { TightlyBound, Extended, Borderline };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::TightlyBound: return "tightly_bound";
    case Verdict::Extended: return "extended";
    case Verdict::Borderline: return "borderline";
  }
  return "?";
}

/// Asymptotic decay of |psi| compared with |x|^-3/2, the slowest decay that
/// still leaves <x^2> finite. A radial report has no left tail.
struct DecayReport {
  std::optional<quad::TailModel> left_tail;
  quad::TailModel right_tail;
  Verdict verdict = Verdict::Borderline;
  double criterion_exponent = 1.5;
  double margin = 0.1;
  std::string explanation;
};

enum class Agreement { Consistent, Inconsistent };

inline const char* to_string(Agreement a) {
  return a == Agreement::Consistent ? "consistent" : "inconsistent";
}

namespace detail {

inline constexpr double kCriticalExponent = 1.5;
inline constexpr double kVerdictMargin = 0.1;

inline std::string tail_phrase(const char* side, const quad::TailModel& t) {
  if (t.insufficient_samples) return std::string(side) + " tail: " + t.diagnostic;
  if (t.super_polynomial) return std::string(side) + " tail decays faster than any power";
  return std::string(side) + " tail ~ |x|^-" + quad::detail::fmt(t.exponent_estimate);
}

inline Verdict verdict_for(const quad::TailModel* left, const quad::TailModel& right) {
  auto fast = [](const quad::TailModel& t) {
    return !t.insufficient_samples &&
           (t.super_polynomial || t.exponent_estimate > kCriticalExponent + kVerdictMargin);
  };
  auto slow = [](const quad::TailModel& t) {
    return !t.insufficient_samples && !t.super_polynomial &&
           t.exponent_estimate < kCriticalExponent - kVerdictMargin;
  };
  if (slow(right) || (left && slow(*left))) return Verdict::Extended;
  if (fast(right) && (!left || fast(*left))) return Verdict::TightlyBound;
  return Verdict::Borderline;
}

inline std::string explain(Verdict v, const std::string& tails) {
  switch (v) {
    case Verdict::TightlyBound:
      return tails + "; vanishes faster than |x|^-3/2, so <x^2> and the uncertainty product are finite";
    case Verdict::Extended:
      return tails + "; does not vanish faster than |x|^-3/2: loosely bound and spatially extended, <x^2> diverges";
    case Verdict::Borderline:
      return tails + "; within 0.1 of the critical exponent 3/2, no verdict";
  }
  return tails;
}

// A tail that underflows to zero everywhere beyond x_start says nothing about
// the exponent; retry closer in (down to x_start / 16) before giving up.
template <class F>
quad::TailModel tail_with_fallback(F&& f, quad::Side side, double x_start) {
  auto m = quad::tail_exponent(f, side, x_start);
  for (double s = 0.5 * x_start; m.insufficient_samples && s >= x_start / 16.0; s *= 0.5) {
    auto t = quad::tail_exponent(f, side, s);
    if (!t.insufficient_samples) {
      t.diagnostic += "; window moved in to " + quad::detail::fmt_g(s) + " because |psi| underflows beyond " +
                      quad::detail::fmt_g(x_start);
      return t;
    }
  }
  return m;
}

}  // namespace detail

inline DecayReport classify(const Wavefunction& w, double x_start = 4.0) {
  if (!(x_start > 0.0)) throw InvalidArgument("classify: x_start must be positive");
  auto abs_psi = [&](double x) { return std::abs(w(x)); };
  DecayReport r;
  r.left_tail = detail::tail_with_fallback(abs_psi, quad::Side::Left, x_start);
  r.right_tail = detail::tail_with_fallback(abs_psi, quad::Side::Right, x_start);
  r.verdict = detail::verdict_for(&*r.left_tail, r.right_tail);
  r.explanation = detail::explain(
      r.verdict, detail::tail_phrase("left", *r.left_tail) + "; " + detail::tail_phrase("right", r.right_tail));
  return r;
}

/// Half-line variant for a reduced radial function u(r), r >= 0.
inline DecayReport classify_radial(const Wavefunction& u, double r_start = 4.0) {
  if (!(r_start > 0.0)) throw InvalidArgument("classify_radial: r_start must be positive");
  DecayReport r;
  r.right_tail = detail::tail_with_fallback([&](double x) { return std::abs(u(x)); }, quad::Side::Right, r_start);
  r.verdict = detail::verdict_for(nullptr, r.right_tail);
  r.explanation = detail::explain(r.verdict, detail::tail_phrase("radial", r.right_tail) + "; left tail not applicable");
  return r;
}

struct ConsistencyResult {
  Agreement agreement = Agreement::Consistent;
  DecayReport decay;
  quad::ExtendedReal mean_x2;
  std::string note;
};

/// Tail verdict against a directly integrated <x^2>; Borderline never conflicts.
inline Agreement agreement_of(Verdict v, const quad::ExtendedReal& mean_x2) {
  if (v == Verdict::Borderline) return Agreement::Consistent;
  const bool tight = v == Verdict::TightlyBound;
  const bool extended = v == Verdict::Extended;
  const bool ok = (tight == mean_x2.is_finite()) && (extended == mean_x2.is_divergent());
  return ok ? Agreement::Consistent : Agreement::Inconsistent;
}

/// Cross-checks the tail verdict against direct quadrature of <x^2>.
inline ConsistencyResult consistency_check_detailed(const Wavefunction& w, const quad::Options& opt = {},
                                                    double x_start = 4.0) {
  ConsistencyResult c;
  c.decay = classify(w, x_start);
  c.mean_x2 = mean_x2(w, opt);
  c.agreement = agreement_of(c.decay.verdict, c.mean_x2);
  if (c.decay.verdict == Verdict::Borderline) {
    c.note = std::string("borderline decay; <x^2> is ") + quad::to_string(c.mean_x2.tag);
  } else {
    c.note = std::string("verdict ") + to_string(c.decay.verdict) + ", <x^2> " + quad::to_string(c.mean_x2.tag);
  }
  return c;
}

inline Agreement consistency_check(const Wavefunction& w, const quad::Options& opt = {}) {
  return consistency_check_detailed(w, opt).agreement;
}

}  // namespace boundstate
