#pragma once

/// @file analytic.hpp
/// @brief Closed-form expected relative excess demand m(t) and log-price P(t)
///        for both fundamental-value modes, plus the freeze-regime prediction.
///
/// Constant-P_f runs: m solves the damped-oscillator law
///     m'' + 2a m' + (lambda/theta) m = 0,
///     m(0) = m0,  m'(0) = -2a m0 - gamma/theta,
/// with a = (1 - kappa/theta)/2.  All three damping regimes are evaluated
/// through one basis pair
///     C(t) = cosh(c t) | 1      | cos(b t)
///     S(t) = sinh(c t)/c | t    | sin(b t)/b
/// written as functions of u = q t^2 with q = a^2 - lambda/theta:
///     C = sum u^k/(2k)!,   S = t * sum u^k/(2k+1)!.
/// Near the critical regime the series is summed directly, which removes the
/// catastrophic 1/c and 1/b cancellation of the textbook formulas; away from
/// it the series is folded back into cosh/cos closed forms.  Then
///     m(t)    = e^{-at} ( m0 C + m1 S ),          m1 = -(a m0 + gamma/theta)
///     band(t) = e^{-at} ( gamma C + beta S ),     beta = lambda m0 + a gamma
///     P(t)    = p0 + (band(t) - gamma),
/// where band(t) = gamma + lambda * integral of m equals the price-minus-
/// fundamental offset; the closed forms stay exact while |band| <= theta - kappa.
///
/// Price-following runs: m relaxes at rate 1 - kappa/theta toward
/// m_star = -gamma/(theta - kappa); when |m_star| > 1 the relaxation law
/// collides with |m| <= 1 and the population freezes (freeze_prediction).

#include <cmath>
#include <optional>

#include <hiam/errors.hpp>
#include <hiam/params.hpp>

namespace hiam {

namespace detail {

/// sum u^k/(2k)!  ==  cosh(sqrt(u))  (u >= 0)  or  cos(sqrt(-u))  (u < 0).
inline double cosh_like(double u) {
  if (std::abs(u) > 0.25)
    return u > 0.0 ? std::cosh(std::sqrt(u)) : std::cos(std::sqrt(-u));
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < 30; ++k) {
    term *= u / ((2.0 * k + 1.0) * (2.0 * k + 2.0));
    sum += term;
    if (std::abs(term) < 1e-20 * std::abs(sum)) break;
  }
  return sum;
}

/// sum u^k/(2k+1)!  ==  sinh(w)/w  (u = w^2)  or  sin(w)/w  (u = -w^2).
inline double sinch(double u) {
  if (std::abs(u) > 0.25) {
    const double w = std::sqrt(std::abs(u));
    return u > 0.0 ? std::sinh(w) / w : std::sin(w) / w;
  }
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < 30; ++k) {
    term *= u / ((2.0 * k + 2.0) * (2.0 * k + 3.0));
    sum += term;
    if (std::abs(term) < 1e-20 * std::abs(sum)) break;
  }
  return sum;
}

/// Basis pair (C(t), S(t)) for the oscillator with q = a^2 - lambda/theta.
struct Basis {
  double C;
  double S;
};
inline Basis basis(double q, double t) {
  const double u = q * t * t;
  return Basis{cosh_like(u), t * sinch(u)};
}

/// Raw constant-P_f evaluators.  No theta > kappa gate: the demonstration
/// scenarios run the undamped boundary a = 0 through these directly.
struct CaseACoeffs {
  double a, q, m0, m1, gamma, beta, theta, lambda, p0;
};
inline CaseACoeffs case_a_coeffs(const ModelParams& p) {
  CaseACoeffs k{};
  k.a = 0.5 * (1.0 - p.kappa / p.theta);
  k.q = k.a * k.a - p.lambda / p.theta;
  k.m0 = p.m0;
  k.m1 = -(k.a * p.m0 + p.gamma / p.theta);
  k.gamma = p.gamma;
  k.beta = p.lambda * p.m0 + k.a * p.gamma;
  k.theta = p.theta;
  k.lambda = p.lambda;
  k.p0 = p.p0;
  return k;
}

inline double m_case_a_raw(const CaseACoeffs& k, double t) {
  const Basis bs = basis(k.q, t);
  return std::exp(-k.a * t) * (k.m0 * bs.C + k.m1 * bs.S);
}

/// Slope dm/dt, used to certify roots by bracketing.
inline double m_slope_case_a_raw(const CaseACoeffs& k, double t) {
  const Basis bs = basis(k.q, t);
  return std::exp(-k.a * t) *
         ((k.m1 - k.a * k.m0) * bs.C + (k.q * k.m0 - k.a * k.m1) * bs.S);
}

/// band(t) = gamma + lambda * integral of m over [0, t] = P(t) - P_f(t).
inline double band_case_a_raw(const CaseACoeffs& k, double t) {
  const Basis bs = basis(k.q, t);
  return std::exp(-k.a * t) * (k.gamma * bs.C + k.beta * bs.S);
}

inline double price_case_a_raw(const CaseACoeffs& k, double t) {
  return k.p0 + (band_case_a_raw(k, t) - k.gamma);
}

}  // namespace detail

// ==============================================================================
// Constant-P_f closed forms
// ==============================================================================

/// Closed-form m(t) for constant-P_f runs.  Requires theta > kappa, lambda > 0,
/// t >= 0.
inline double m_case_a(double t, const ModelParams& p) {
  require_analytic(p);
  if (t < 0.0) throw validation_error("m_case_a requires t >= 0");
  return detail::m_case_a_raw(detail::case_a_coeffs(p), t);
}

/// Closed-form P(t) = p0 + lambda * integral of m for constant-P_f runs.
inline double price_case_a(double t, const ModelParams& p) {
  require_analytic(p);
  if (t < 0.0) throw validation_error("price_case_a requires t >= 0");
  return detail::price_case_a_raw(detail::case_a_coeffs(p), t);
}

// ==============================================================================
// Price-following closed forms
// ==============================================================================

/// Limit relative excess demand -gamma/(theta - kappa); |m_star| > 1 signals
/// the freeze regime.
inline double m_star(const ModelParams& p) {
  require_analytic(p);
  return -p.gamma / (p.theta - p.kappa);
}

/// Closed-form m(t) for price-following runs:
///     m(t) = (m0 - m_star) e^{-(1 - kappa/theta) t} + m_star.
/// Computed for any gamma; the result describes the true expectation for all
/// time only when |gamma| <= theta - kappa (otherwise it holds until the
/// freeze crossover — see freeze_prediction).
inline double m_case_b(double t, const ModelParams& p) {
  require_analytic(p);
  if (t < 0.0) throw validation_error("m_case_b requires t >= 0");
  const double ms = -p.gamma / (p.theta - p.kappa);
  const double rate = 1.0 - p.kappa / p.theta;
  return (p.m0 - ms) * std::exp(-rate * t) + ms;
}

/// Closed-form P(t) for price-following runs; refuses |gamma| > theta - kappa
/// (the freeze path applies there instead).
inline double price_case_b(double t, const ModelParams& p) {
  require_analytic(p);
  if (t < 0.0) throw validation_error("price_case_b requires t >= 0");
  if (std::abs(p.gamma) > p.theta - p.kappa)
    throw validation_error(
        "price_case_b requires |gamma| <= theta - kappa (freeze regime otherwise)");
  const double ms = -p.gamma / (p.theta - p.kappa);
  const double rate = 1.0 - p.kappa / p.theta;
  return p.p0 +
         p.lambda * p.theta / (p.theta - p.kappa) * (p.m0 - ms) *
             (1.0 - std::exp(-rate * t)) +
         p.lambda * ms * t;
}

// ==============================================================================
// Freeze prediction (price-following runs with |m_star| beyond reach)
// ==============================================================================

/// Piecewise prediction for price-following runs: the relaxation law holds
/// until the first time t_dstar at which every decision becomes deterministic
/// — all-buy once kappa*m - gamma >= theta (even the worst noise draw x = +theta
/// cannot flip the order), all-sell once kappa*m - gamma <= -theta — after
/// which m relaxes to the frozen value sign at unit rate:
///     m(t) = sign + (m(t_dstar) - sign) e^{-(t - t_dstar)},   t >= t_dstar.
/// When the threshold is never reached the prediction reduces to the plain
/// relaxation law and sign is 0.
struct FreezePrediction {
  std::optional<double> t_dstar;  ///< crossover time, or nullopt if never reached
  int sign = 0;                   ///< +1 all-buy, -1 all-sell, 0 no freeze
  double m_at_crossover = 0.0;    ///< m at the crossover (meaningful when frozen)
  ModelParams params;

  /// Long-run limit of m: the frozen direction, else m_star.
  double limit() const {
    if (sign != 0) return static_cast<double>(sign);
    return -params.gamma / (params.theta - params.kappa);
  }

  /// Piecewise m(t).
  double m(double t) const {
    if (!t_dstar || t < *t_dstar) return m_case_b(t, params);
    const double s = static_cast<double>(sign);
    return s + (m_at_crossover - s) * std::exp(-(t - *t_dstar));
  }

  /// Piecewise P(t) = p0 + lambda * integral of the piecewise m.
  double price(double t) const {
    const ModelParams& p = params;
    const double ms = -p.gamma / (p.theta - p.kappa);
    const double rate = 1.0 - p.kappa / p.theta;
    auto price_pre = [&](double u) {  // valid for any gamma (plain integral)
      return p.p0 +
             p.lambda * p.theta / (p.theta - p.kappa) * (p.m0 - ms) *
                 (1.0 - std::exp(-rate * u)) +
             p.lambda * ms * u;
    };
    if (!t_dstar || t < *t_dstar) return price_pre(t);
    const double s = static_cast<double>(sign);
    const double dtt = t - *t_dstar;
    return price_pre(*t_dstar) +
           p.lambda * (s * dtt + (m_at_crossover - s) * (1.0 - std::exp(-dtt)));
  }
};

/// Computes the freeze crossover for price-following runs.  Requires
/// theta > kappa and lambda > 0.
inline FreezePrediction freeze_prediction(const ModelParams& p) {
  require_analytic(p);
  FreezePrediction fp;
  fp.params = p;

  const double ms = -p.gamma / (p.theta - p.kappa);
  const double rate = 1.0 - p.kappa / p.theta;
  const double g0 = p.kappa * p.m0 - p.gamma;  // decision margin at t = 0

  // Crossing time of kappa * m(t) - gamma with a threshold, or nullopt.
  auto crossing = [&](double m_threshold) -> std::optional<double> {
    if (p.kappa == 0.0) return std::nullopt;             // margin is constant in t
    if (p.m0 == ms) return std::nullopt;                 // m is constant
    const double r = (m_threshold - ms) / (p.m0 - ms);   // e^{-rate t} at the crossing
    if (r <= 0.0 || r >= 1.0) return std::nullopt;       // unreachable or pre-crossed
    return -std::log(r) / rate;
  };

  std::optional<double> t_buy, t_sell;
  if (g0 >= p.theta) t_buy = 0.0;
  else if (p.kappa > 0.0) t_buy = crossing((p.theta + p.gamma) / p.kappa);
  if (g0 <= -p.theta) t_sell = 0.0;
  else if (p.kappa > 0.0) t_sell = crossing((p.gamma - p.theta) / p.kappa);

  // m(t) is monotone, so at most one threshold is ever reached; if both claim
  // a time (e.g. both at 0 in degenerate corners) take the earlier.
  if (t_buy && (!t_sell || *t_buy <= *t_sell)) {
    fp.t_dstar = t_buy;
    fp.sign = +1;
  } else if (t_sell) {
    fp.t_dstar = t_sell;
    fp.sign = -1;
  }
  if (fp.t_dstar) fp.m_at_crossover = m_case_b(*fp.t_dstar, p);
  return fp;
}

// ==============================================================================
// Bundled solution
// ==============================================================================

/// Callable closed-form pair (m, P) for either mode.
struct ClosedFormSolution {
  ModelParams params;
  bool follow_price = false;
  DerivedConstants constants;
  bool valid_forever = false;  ///< price-following with |gamma| <= theta - kappa

  double m(double t) const {
    return follow_price ? m_case_b(t, params) : m_case_a(t, params);
  }
  double price(double t) const {
    return follow_price ? price_case_b(t, params) : price_case_a(t, params);
  }
};

inline ClosedFormSolution closed_form_solution(const ModelParams& p,
                                               const FundamentalMode& mode) {
  require_analytic(p);
  ClosedFormSolution s;
  s.params = p;
  s.follow_price = is_follow_price(mode);
  s.constants = derived_constants(p);
  s.valid_forever = s.follow_price && std::abs(p.gamma) <= p.theta - p.kappa;
  return s;
}

}  // namespace hiam
