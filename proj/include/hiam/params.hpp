#pragma once

/// @file params.hpp
/// @brief Model parameters, derived constants, regime classification, and
///        validation shared by every other module.
///
/// The model couples a population of n_agents buy/sell spins to a log-price
/// P(t) through the relative excess demand m.  Five scalars control the
/// dynamics:
///
///   lambda  demand feedback: dP/dt = lambda * m           (per unit time, > 0)
///   theta   half-width of each agent's valuation noise    (log-price units, > 0)
///   kappa   social susceptibility (herding strength)      (log-price units, >= 0)
///   gamma   log-price minus fundamental-value offset:
///             constant-P_f runs: the offset at t = 0 (gamma = p0 - pf0);
///             price-following runs: the permanent offset P(t) - P_f(t)
///   m0      initial expected relative excess demand       (in [-1, 1])
///
/// All closed-form results require theta > kappa; the raw simulator does not
/// (test scenario 1 runs deliberately at kappa = theta).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include <hiam/errors.hpp>

namespace hiam {

// ==============================================================================
// Parameter bundle
// ==============================================================================

struct ModelParams {
  double lambda = 0.0;        ///< demand-feedback strength, > 0 (0 tolerated: frozen price)
  double theta = 0.0;         ///< valuation-noise half-width, > 0
  double kappa = 0.0;         ///< social susceptibility, >= 0
  double gamma = 0.0;         ///< initial/permanent price-minus-fundamental offset
  double p0 = 0.0;            ///< initial log price
  double m0 = 0.0;            ///< initial expected relative excess demand, |m0| <= 1
  std::int64_t n_agents = 0;  ///< population size, >= 2
};

/// How the average fundamental value P_f evolves.
struct ConstantPf {
  double pf0 = 0.0;  ///< P_f(t) = pf0 for all t; must satisfy p0 - pf0 = gamma
};
struct FollowPrice {
  double gamma = 0.0;  ///< P_f(t) = P(t) - gamma at every instant
};
using FundamentalMode = std::variant<ConstantPf, FollowPrice>;

/// Builds the constant-P_f mode consistent with params (pf0 = p0 - gamma).
inline ConstantPf constant_pf_mode(const ModelParams& p) {
  return ConstantPf{p.p0 - p.gamma};
}
/// Builds the price-following mode consistent with params.
inline FollowPrice follow_price_mode(const ModelParams& p) {
  return FollowPrice{p.gamma};
}
inline bool is_follow_price(const FundamentalMode& mode) {
  return std::holds_alternative<FollowPrice>(mode);
}

// ==============================================================================
// Derived constants and regime
// ==============================================================================

/// Shorthand constants of the expected-demand ODE
///   f'' + (1 - kappa/theta) f' + (lambda/theta) f = 0.
///
/// a is half the damping rate; b (resp. c) is the oscillation (resp. split)
/// frequency, defined only in the regime where the radicand is positive;
/// disc = 1 - kappa/theta - 2*sqrt(lambda/theta) shares its sign with a^2 - lambda/theta.
struct DerivedConstants {
  double a = 0.0;     ///< (1 - kappa/theta)/2
  double b = 0.0;     ///< sqrt(lambda/theta - a^2) when lambda/theta > a^2, else NaN
  double c = 0.0;     ///< sqrt(a^2 - lambda/theta) when a^2 > lambda/theta, else NaN
  double disc = 0.0;  ///< D = 1 - kappa/theta - 2*sqrt(lambda/theta)
  bool has_b() const { return !std::isnan(b); }
  bool has_c() const { return !std::isnan(c); }
};

/// Damping regime of the expected-demand oscillator, by the sign of disc.
enum class Regime { Overdamped, Critical, Underdamped };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::Overdamped: return "overdamped";
    case Regime::Critical: return "critical";
    case Regime::Underdamped: return "underdamped";
  }
  return "?";
}

/// |disc| at or below this bound counts as critically damped.
inline constexpr double critical_tolerance = 1e-9;

/// Within this wider band the closed forms switch to cancellation-safe
/// series evaluation (1/b and 1/c blow up as the regimes meet).
inline constexpr double near_critical_band = 1e-7;

// ==============================================================================
// Operations
// ==============================================================================

/// Outcome of validate(): hard errors plus advisory warnings.
struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

/// Checks the parameter invariants.
///
/// lambda < 0, theta <= 0, kappa < 0, |m0| > 1, n_agents < 2, and non-finite
/// values are hard errors.  Two conditions are warnings only:
///   - kappa >= theta: the simulator still runs, but every closed-form
///     operation refuses ("analytic results unavailable");
///   - lambda == 0: the price never moves, so the closed forms (which assume
///     lambda > 0) are likewise unavailable.
inline ValidationReport validate(const ModelParams& p, const FundamentalMode& mode) {
  ValidationReport rep;
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(p.lambda) || !finite(p.theta) || !finite(p.kappa) || !finite(p.gamma) ||
      !finite(p.p0) || !finite(p.m0)) {
    rep.errors.push_back("all parameters must be finite");
    return rep;
  }
  if (p.lambda < 0.0) rep.errors.push_back("lambda must be >= 0 (and > 0 for analytic results)");
  if (p.theta <= 0.0) rep.errors.push_back("theta must be > 0");
  if (p.kappa < 0.0) rep.errors.push_back("kappa must be >= 0");
  if (std::abs(p.m0) > 1.0) rep.errors.push_back("|m0| must be <= 1");
  if (p.n_agents < 2) rep.errors.push_back("n_agents must be >= 2");
  if (const auto* cp = std::get_if<ConstantPf>(&mode)) {
    if (std::abs((p.p0 - cp->pf0) - p.gamma) > 1e-12 * std::max(1.0, std::abs(p.gamma)))
      rep.errors.push_back("constant-P_f mode requires pf0 = p0 - gamma");
  } else if (const auto* fp = std::get_if<FollowPrice>(&mode)) {
    if (fp->gamma != p.gamma)
      rep.errors.push_back("price-following mode must carry the same gamma as the parameters");
  }
  if (rep.errors.empty()) {
    if (p.kappa >= p.theta)
      rep.warnings.push_back("kappa >= theta: analytic results unavailable; simulation only");
    if (p.lambda == 0.0)
      rep.warnings.push_back("lambda = 0: price is frozen; analytic results unavailable");
  }
  return rep;
}

/// Throws validation_error if the parameters carry any hard error.
inline void require_valid(const ModelParams& p, const FundamentalMode& mode) {
  ValidationReport rep = validate(p, mode);
  if (!rep.ok()) {
    std::string msg = "invalid parameters:";
    for (const auto& e : rep.errors) msg += " " + e + ";";
    throw validation_error(msg);
  }
}

/// Throws validation_error unless theta > kappa and lambda > 0 (every
/// closed-form operation needs both).
inline void require_analytic(const ModelParams& p) {
  if (!(p.theta > p.kappa))
    throw validation_error("analytic results unavailable: requires theta > kappa");
  if (!(p.lambda > 0.0))
    throw validation_error("analytic results unavailable: requires lambda > 0");
}

/// Computes a, b or c, and disc.  Requires valid parameters with theta > 0.
inline DerivedConstants derived_constants(const ModelParams& p) {
  if (!(p.theta > 0.0)) throw validation_error("derived_constants requires theta > 0");
  DerivedConstants d;
  const double ratio = p.lambda / p.theta;
  d.a = 0.5 * (1.0 - p.kappa / p.theta);
  d.disc = 1.0 - p.kappa / p.theta - 2.0 * std::sqrt(ratio);
  const double q = d.a * d.a - ratio;  // c^2 (if positive) or -b^2 (if negative)
  d.b = q < 0.0 ? std::sqrt(-q) : std::numeric_limits<double>::quiet_NaN();
  d.c = q > 0.0 ? std::sqrt(q) : std::numeric_limits<double>::quiet_NaN();
  return d;
}

/// Sign of disc with the critical tolerance band.
inline Regime classify_regime(const ModelParams& p) {
  const DerivedConstants d = derived_constants(p);
  if (std::abs(d.disc) <= critical_tolerance) return Regime::Critical;
  return d.disc > 0.0 ? Regime::Overdamped : Regime::Underdamped;
}

}  // namespace hiam
