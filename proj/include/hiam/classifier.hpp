#pragma once

/// @file classifier.hpp
/// @brief Validity horizon t*, extremum abscissae, and the price-pattern
///        verdict (constant / monotonic / single bounce / damped oscillation).
///
/// The closed forms for m and P describe the market exactly while every
/// decision margin stays inside the noise band, i.e. while
///     |band(t)| = |gamma + lambda * integral of m| <= theta - kappa.
/// The validity horizon t* is the first exit time of band from that strip
/// (infinity if it never leaves).  Since band' = lambda * m, the interior
/// critical points of band are exactly the roots of m, which this module
/// computes in closed form:
///   - non-oscillatory (q = a^2 - lambda/theta >= 0): at most one positive
///     root, t0 = (1/2c) log((a+D+c)/(a+D-c)) with D = gamma/(theta m0),
///     existing iff m0 != 0 and D > c - a;
///   - oscillatory (q < 0): sin-phase roots t_j = (j pi - psi)/b with
///     psi = atan2(m0, m1/b), infinitely many, spaced pi/b.
/// Exact exit analysis: |band| attains its supremum at t = 0 or at the first
/// one (non-oscillatory) or two (oscillatory) critical points; successive
/// oscillatory peaks shrink by the factor e^{-a pi / b} per half-period, so
/// later peaks never set the supremum.  t* = infinity iff that supremum stays
/// inside the strip; otherwise the first crossing is bracketed by a dense scan
/// and polished by bisection.
///
/// Every analytic root is certified by a bracketing sign change before use
/// (the damping factor e^{-at} is dropped for the check; it never changes
/// sign).  A failed certification throws std::logic_error.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <hiam/analytic.hpp>
#include <hiam/errors.hpp>
#include <hiam/params.hpp>

namespace hiam {

// ==============================================================================
// Verdict types
// ==============================================================================

enum class PricePattern { ConstantPrice, Monotonic, SingleBounce, DampedOscillation };

inline const char* to_string(PricePattern pat) {
  switch (pat) {
    case PricePattern::ConstantPrice: return "constant_price";
    case PricePattern::Monotonic: return "monotonic";
    case PricePattern::SingleBounce: return "single_bounce";
    case PricePattern::DampedOscillation: return "damped_oscillation";
  }
  return "unknown";
}

/// Rewrite A cos(x) + B sin(x) as amplitude * sin(x + phase).
struct AmplitudePhase {
  double amplitude;
  double phase;
};
inline AmplitudePhase amplitude_phase(double A, double B) {
  return AmplitudePhase{std::hypot(A, B), std::atan2(A, B)};
}

/// Classification of the price path, reported over the observation window:
/// `extrema` lists the interior extrema of P inside (0, min(t_star, window))
/// and `pattern` counts them (0 -> Monotonic/ConstantPrice, 1 -> SingleBounce,
/// >= 2 -> DampedOscillation).  `conditions` is the named boolean report of
/// the decision chain that produced the verdict.
struct ExtremaVerdict {
  double t_star = 0.0;
  PricePattern pattern = PricePattern::Monotonic;
  std::vector<double> extrema;
  std::vector<std::pair<std::string, bool>> conditions;
  DerivedConstants constants;
};

/// Regime-boundary values of each parameter with the other two held fixed.
struct CriticalValues {
  std::optional<double> kappa_c;  ///< theta(1 - 2 sqrt(lambda/theta)) when >= 0
  double theta_c = 0.0;           ///< kappa^2 / (sqrt(lambda+kappa) - sqrt(lambda))^2
  double lambda_c = 0.0;          ///< theta a^2
};

struct PatternReport {
  PricePattern pattern = PricePattern::Monotonic;
  CriticalValues critical;
};

// ==============================================================================
// Root machinery
// ==============================================================================

namespace detail {

inline constexpr double root_certify_delta = 1e-9;

/// m with the positive damping factor e^{-at} removed: same roots, same signs.
inline double undamped_m(const CaseACoeffs& k, double t) {
  const Basis bs = basis(k.q, t);
  return k.m0 * bs.C + k.m1 * bs.S;
}

/// Certifies an analytic root of m by a bracketing sign change.
inline void certify_root(const CaseACoeffs& k, double t) {
  if (t == 0.0) {
    if (k.m0 == 0.0) return;  // exact boundary root
    throw std::logic_error("root certification failed: t = 0 but m(0) != 0");
  }
  const double lo = undamped_m(k, t - root_certify_delta);
  const double hi = undamped_m(k, t + root_certify_delta);
  if (lo == 0.0 || hi == 0.0 || (lo < 0.0) == (hi < 0.0))
    throw std::logic_error("root certification failed: no sign change of m at t = " +
                           std::to_string(t));
}

/// The unique positive root of m when q >= 0, if it exists.  Writing
/// s = a + gamma/(theta m0), the root condition is s > c = sqrt(q), and
///     t0 = (1/2c) log((s+c)/(s-c)) = log1p(2c/(s-c))/(2c),
/// which degrades gracefully to the q = 0 limit 1/s.
inline std::optional<double> positive_root_nonosc(const CaseACoeffs& k) {
  if (k.m0 == 0.0) return std::nullopt;  // only the boundary root t = 0
  const double c = std::sqrt(k.q);
  const double s = k.a + k.gamma / (k.theta * k.m0);
  if (!(s > c)) return std::nullopt;
  const double t = c > 0.0 ? std::log1p(2.0 * c / (s - c)) / (2.0 * c) : 1.0 / s;
  certify_root(k, t);
  return t;
}

/// First `count` non-negative roots of m when q < 0 (t = 0 included iff
/// m0 = 0, as the boundary root).
inline std::vector<double> nonneg_roots_osc(const CaseACoeffs& k, int count) {
  const double b = std::sqrt(-k.q);
  const AmplitudePhase ap = amplitude_phase(k.m0, k.m1 / b);
  if (ap.amplitude == 0.0)
    throw std::logic_error("oscillation roots requested for identically zero m");
  std::vector<double> out;
  long j = static_cast<long>(std::ceil(ap.phase / std::numbers::pi));
  while (static_cast<int>(out.size()) < count) {
    const double t = (static_cast<double>(j) * std::numbers::pi - ap.phase) / b;
    ++j;
    if (t < 0.0) continue;
    certify_root(k, t);
    out.push_back(t);
  }
  return out;
}

/// All positive roots of m strictly below `cap` (q < 0).
inline std::vector<double> positive_roots_below(const CaseACoeffs& k, double cap) {
  const double b = std::sqrt(-k.q);
  const AmplitudePhase ap = amplitude_phase(k.m0, k.m1 / b);
  if (ap.amplitude == 0.0)
    throw std::logic_error("oscillation roots requested for identically zero m");
  std::vector<double> out;
  for (long j = static_cast<long>(std::ceil(ap.phase / std::numbers::pi));; ++j) {
    const double t = (static_cast<double>(j) * std::numbers::pi - ap.phase) / b;
    if (t >= cap) break;
    if (t <= 0.0) continue;
    certify_root(k, t);
    out.push_back(t);
  }
  return out;
}

/// Interior critical points of band that can set its supremum: the single
/// positive root (q >= 0) or the first two non-negative roots (q < 0).
inline std::vector<double> band_peak_times(const CaseACoeffs& k) {
  if (k.q < 0.0) return nonneg_roots_osc(k, 2);
  std::vector<double> out;
  if (auto r = positive_root_nonosc(k)) out.push_back(*r);
  return out;
}

}  // namespace detail

// ==============================================================================
// Named root operations
// ==============================================================================

/// Unique positive root of m_case_a in the overdamped regime; nullopt when
/// m0 = 0 or gamma/(theta m0) <= c - a (no bounce).
inline std::optional<double> bounce_time_t0(const ModelParams& p) {
  require_analytic(p);
  if (classify_regime(p) != Regime::Overdamped)
    throw validation_error("bounce_time_t0 requires the overdamped regime");
  return detail::positive_root_nonosc(detail::case_a_coeffs(p));
}

/// First `count` non-negative roots of m_case_a in the underdamped regime,
/// each certified by a bracketing sign change.
inline std::vector<double> oscillation_roots(const ModelParams& p, int count) {
  require_analytic(p);
  if (classify_regime(p) != Regime::Underdamped)
    throw validation_error("oscillation_roots requires the underdamped regime");
  if (p.m0 == 0.0 && p.gamma == 0.0)
    throw validation_error("oscillation_roots: m is identically zero (constant price)");
  if (count < 1) throw validation_error("oscillation_roots requires count >= 1");
  return detail::nonneg_roots_osc(detail::case_a_coeffs(p), count);
}

// ==============================================================================
// Validity horizon
// ==============================================================================

/// First time |gamma + lambda * integral of m| leaves [0, theta - kappa]
/// (infinity when it never does).  Price-following runs pin the offset at
/// gamma forever, so the answer is 0 or infinity there.  Constant-P_f runs
/// decide exactly via the critical-point supremum, then confirm infinite
/// answers on a dense grid and polish finite answers by scan + bisection to
/// 1e-10.
inline double t_star_numeric(const ModelParams& p, const FundamentalMode& mode) {
  require_analytic(p);
  const double w = p.theta - p.kappa;
  const double inf = std::numeric_limits<double>::infinity();
  if (is_follow_price(mode)) return std::abs(p.gamma) <= w ? inf : 0.0;

  const auto k = detail::case_a_coeffs(p);
  const double ag = std::abs(p.gamma);
  if (ag > w) return 0.0;
  if (p.gamma == 0.0 && p.m0 == 0.0) return inf;  // band identically zero
  // Exactly on the boundary: the horizon is 0 iff band moves outward, i.e.
  // band'(0) = lambda m0 has the sign of gamma (for m0 = 0 the next
  // derivative band''(0) = -lambda gamma / theta points inward).
  if (ag == w && p.gamma * p.m0 > 0.0) return 0.0;

  const std::vector<double> peaks = detail::band_peak_times(k);
  double sup = ag;
  for (double r : peaks)
    sup = std::max(sup, std::abs(detail::band_case_a_raw(k, r)));

  double t_char = 1.0 / k.a;
  if (k.q < 0.0) t_char = std::min(t_char, std::numbers::pi / std::sqrt(-k.q));
  const double h = 1e-3 * t_char;

  if (sup <= w) {
    // Certified infinite: the supremum over the critical points (and t = 0)
    // bounds |band| everywhere — later oscillatory peaks shrink by
    // e^{-a pi / b} each half-period, and the non-oscillatory band decays
    // monotonically after its last critical point.  Confirm on a grid.
    double t_end = peaks.empty() ? 10.0 / k.a : peaks.back() + 5.0 / k.a;
    t_end = std::min(t_end, 200.0);
    const double step = std::max(h, t_end / 200000.0);
    for (double t = 0.0; t <= t_end; t += step)
      if (std::abs(detail::band_case_a_raw(k, t)) > w * (1.0 + 1e-9))
        throw std::logic_error("band supremum certification failed");
    return inf;
  }

  // Finite horizon: the first critical point whose peak leaves the strip
  // bounds the exit from above; band is monotone between critical points, so
  // a scan at step h cannot miss the first crossing.
  double t_exceed = peaks.back();
  for (double r : peaks)
    if (std::abs(detail::band_case_a_raw(k, r)) > w) {
      t_exceed = r;
      break;
    }
  double lo = 0.0;
  double hi = 0.0;
  bool bracketed = false;
  for (double t = h; t <= t_exceed + h; t += h) {
    if (std::abs(detail::band_case_a_raw(k, t)) > w) {
      hi = t;
      bracketed = true;
      break;
    }
    lo = t;
  }
  if (!bracketed) throw std::logic_error("validity-exit bracket not found");
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    (std::abs(detail::band_case_a_raw(k, mid)) > w ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

// ==============================================================================
// Verdicts
// ==============================================================================

/// Verdict for constant-P_f runs.  Decision chains:
///   - non-oscillatory (overdamped/critical label): the bounce exists inside
///     the validity window iff |gamma| <= theta-kappa, m0 != 0, the positive
///     root of m exists, and |band(t0)| <= theta-kappa;
///   - oscillatory: with t1 <= t2 the first two non-negative roots of m, the
///     chain |gamma| <= theta-kappa, |band(t1)| <= theta-kappa,
///     |band(t2)| <= theta-kappa gives t* = infinity with every positive root
///     an extremum; earlier failures cut the horizon short.  (Peak decay
///     makes |band(t2)| < |band(t1)|, so a failure of the t2 check alone
///     cannot occur; the branch is kept for completeness.)
inline ExtremaVerdict verdict_case_a(const ModelParams& p, double window = 50.0) {
  require_analytic(p);
  ExtremaVerdict v;
  v.constants = derived_constants(p);
  const auto k = detail::case_a_coeffs(p);
  const double w = p.theta - p.kappa;
  const double inf = std::numeric_limits<double>::infinity();
  const bool oscillatory_label = classify_regime(p) == Regime::Underdamped;
  const bool sod = std::abs(p.gamma) <= w;

  if (p.gamma == 0.0 && p.m0 == 0.0) {
    v.t_star = inf;
    v.pattern = PricePattern::ConstantPrice;
    if (oscillatory_label) {
      v.conditions = {{"gamma_within_band", true},
                      {"first_peak_within_band", true},
                      {"second_peak_within_band", true}};
    } else {
      v.conditions = {{"gamma_within_band", true},
                      {"m0_nonzero", false},
                      {"m_crosses_zero", false},
                      {"bounce_within_band", false}};
    }
    return v;
  }

  const std::vector<double> peaks = detail::band_peak_times(k);
  auto band_at = [&](double t) { return std::abs(detail::band_case_a_raw(k, t)); };
  std::optional<double> first_pos;  // first strictly positive root of m
  for (double r : peaks)
    if (r > 0.0) {
      first_pos = r;
      break;
    }

  if (oscillatory_label) {
    const bool cosod = sod && band_at(peaks[0]) <= w;
    const bool docos = sod && band_at(peaks[1]) <= w;
    v.conditions = {{"gamma_within_band", sod},
                    {"first_peak_within_band", cosod},
                    {"second_peak_within_band", docos}};
  } else {
    v.conditions = {
        {"gamma_within_band", sod},
        {"m0_nonzero", p.m0 != 0.0},
        {"m_crosses_zero", first_pos.has_value()},
        {"bounce_within_band", first_pos.has_value() && band_at(*first_pos) <= w}};
  }

  v.t_star = t_star_numeric(p, constant_pf_mode(p));
  const double cap = std::min(v.t_star, window);
  if (k.q < 0.0) {
    v.extrema = detail::positive_roots_below(k, cap);
  } else if (first_pos && *first_pos < cap) {
    v.extrema = {*first_pos};
  }

  v.pattern = v.extrema.empty()
                  ? PricePattern::Monotonic
                  : (v.extrema.size() == 1 ? PricePattern::SingleBounce
                                           : PricePattern::DampedOscillation);
  return v;
}

/// Verdict for price-following runs: the exponential relaxation of m toward
/// m_star crosses zero (one price extremum) iff m0 and gamma share a nonzero
/// sign; the offset band is pinned at gamma, so t* is 0 or infinity.
inline ExtremaVerdict verdict_case_b(const ModelParams& p, double window = 50.0) {
  require_analytic(p);
  ExtremaVerdict v;
  v.constants = derived_constants(p);
  const double w = p.theta - p.kappa;
  const bool sod = std::abs(p.gamma) <= w;
  const bool signs_match = p.m0 * p.gamma > 0.0;
  v.conditions = {{"gamma_within_band", sod}, {"signs_match", signs_match}};

  if (!sod) {
    v.t_star = 0.0;  // frozen market from the start; see freeze_prediction
    v.pattern = PricePattern::Monotonic;
    return v;
  }
  v.t_star = std::numeric_limits<double>::infinity();
  if (p.gamma == 0.0 && p.m0 == 0.0) {
    v.pattern = PricePattern::ConstantPrice;
    return v;
  }
  if (!signs_match) {
    v.pattern = PricePattern::Monotonic;
    return v;
  }

  const double ms = -p.gamma / (p.theta - p.kappa);
  const double rate = 1.0 - p.kappa / p.theta;
  const double t_b = std::log((p.m0 - ms) / (-ms)) / rate;
  const double lo = m_case_b(t_b - detail::root_certify_delta, p);
  const double hi = m_case_b(t_b + detail::root_certify_delta, p);
  if (lo == 0.0 || hi == 0.0 || (lo < 0.0) == (hi < 0.0))
    throw std::logic_error("root certification failed for the relaxation crossing");
  if (t_b < window) {
    v.extrema = {t_b};
    v.pattern = PricePattern::SingleBounce;
  } else {
    v.pattern = PricePattern::Monotonic;
  }
  return v;
}

inline ExtremaVerdict classify_verdict(const ModelParams& p, const FundamentalMode& mode,
                                       double window = 50.0) {
  return is_follow_price(mode) ? verdict_case_b(p, window) : verdict_case_a(p, window);
}

// ==============================================================================
// Critical parameter values
// ==============================================================================

/// Boundary values at which D = 1 - kappa/theta - 2 sqrt(lambda/theta)
/// changes sign, one parameter at a time.
inline CriticalValues critical_values(const ModelParams& p) {
  require_analytic(p);
  CriticalValues cv;
  const double kc = p.theta * (1.0 - 2.0 * std::sqrt(p.lambda / p.theta));
  if (kc >= 0.0) cv.kappa_c = kc;
  if (p.kappa > 0.0) {
    const double d = std::sqrt(p.lambda + p.kappa) - std::sqrt(p.lambda);
    cv.theta_c = p.kappa * p.kappa / (d * d);
  } else {
    cv.theta_c = 4.0 * p.lambda;
  }
  const double a = 0.5 * (1.0 - p.kappa / p.theta);
  cv.lambda_c = p.theta * a * a;
  return cv;
}

inline PatternReport classify_pattern(const ModelParams& p, const FundamentalMode& mode) {
  PatternReport r;
  r.pattern = classify_verdict(p, mode).pattern;
  r.critical = critical_values(p);
  return r;
}

}  // namespace hiam
