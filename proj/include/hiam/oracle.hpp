#pragma once

/// @file oracle.hpp
/// @brief Independent numerical ground truth for the expected-demand dynamics:
///        fixed-step integration, quadrature of the price, extrema counting.
///
/// Everything here deliberately avoids the closed forms in analytic.hpp — the
/// point is to certify them.  The integrators are fixed-step (not adaptive)
/// so that every reported value is exactly reproducible from (params, dt).

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include <hiam/errors.hpp>
#include <hiam/params.hpp>

namespace hiam {

// ==============================================================================
// GridSeries
// ==============================================================================

/// A real-valued series sampled on the uniform grid t0, t0+dt, t0+2dt, ...
struct GridSeries {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double time_at(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
};

/// Largest pointwise |a - b|; the two series must share the same grid.
inline double max_abs_diff(const GridSeries& a, const GridSeries& b) {
  if (a.t0 != b.t0 || a.dt != b.dt || a.values.size() != b.values.size())
    throw validation_error("max_abs_diff: grid mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k)
    worst = std::max(worst, std::abs(a.values[k] - b.values[k]));
  return worst;
}

// ==============================================================================
// ODE integration of the expected relative excess demand
// ==============================================================================
// Constant-P_f runs obey the second-order law
//     f'' + (1 - kappa/theta) f' + (lambda/theta) f = 0,
//     f(0) = m0,   f'(0) = -m0 (1 - kappa/theta) - gamma/theta,
// price-following runs the first-order law
//     f' = -(1 - kappa/theta) f - gamma/theta.

namespace detail {

/// Classical 4th-order step for y' = rhs(y) with y in R^2.
template <class Rhs>
inline void rk4_step2(double y[2], double dt, Rhs rhs) {
  double k1[2], k2[2], k3[2], k4[2], tmp[2];
  rhs(y, k1);
  tmp[0] = y[0] + 0.5 * dt * k1[0]; tmp[1] = y[1] + 0.5 * dt * k1[1];
  rhs(tmp, k2);
  tmp[0] = y[0] + 0.5 * dt * k2[0]; tmp[1] = y[1] + 0.5 * dt * k2[1];
  rhs(tmp, k3);
  tmp[0] = y[0] + dt * k3[0]; tmp[1] = y[1] + dt * k3[1];
  rhs(tmp, k4);
  y[0] += dt / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
  y[1] += dt / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
}

}  // namespace detail

/// Integrates the expected-demand law for the given mode on [0, t_max] with a
/// classical 4th-order fixed-step scheme.  Requires theta > kappa, lambda > 0,
/// and dt <= 1e-3.
inline GridSeries integrate_ode(const ModelParams& p, const FundamentalMode& mode,
                                double t_max, double dt) {
  require_analytic(p);
  if (!(dt > 0.0) || dt > 1e-3) throw validation_error("integrate_ode requires 0 < dt <= 1e-3");
  if (!(t_max > 0.0)) throw validation_error("integrate_ode requires t_max > 0");

  const double damping = 1.0 - p.kappa / p.theta;   // both modes
  const double spring = p.lambda / p.theta;         // constant-P_f mode only
  const std::size_t steps = static_cast<std::size_t>(std::llround(t_max / dt));

  GridSeries out;
  out.t0 = 0.0;
  out.dt = dt;
  out.values.reserve(steps + 1);

  if (!is_follow_price(mode)) {
    double y[2] = {p.m0, -p.m0 * damping - p.gamma / p.theta};  // (f, f')
    auto rhs = [&](const double* v, double* d) {
      d[0] = v[1];
      d[1] = -damping * v[1] - spring * v[0];
    };
    out.values.push_back(y[0]);
    for (std::size_t s = 0; s < steps; ++s) {
      detail::rk4_step2(y, dt, rhs);
      out.values.push_back(y[0]);
    }
  } else {
    double y[2] = {p.m0, 0.0};
    auto rhs = [&](const double* v, double* d) {
      d[0] = -damping * v[0] - p.gamma / p.theta;
      d[1] = 0.0;
    };
    out.values.push_back(y[0]);
    for (std::size_t s = 0; s < steps; ++s) {
      detail::rk4_step2(y, dt, rhs);
      out.values.push_back(y[0]);
    }
  }
  return out;
}

/// Independent route for the constant-P_f law, kept in its original
/// integro-differential form
///     f'(t) = -(1 - kappa/theta) f(t) - (lambda/theta) I(t) - gamma/theta,
///     I(t) = integral of f over [0, t],
/// advanced by Heun's predictor-corrector with a running trapezoid for I.
/// Second-order accurate; used to confirm the reduction to the oscillator law.
inline GridSeries integrate_integro(const ModelParams& p, double t_max, double dt) {
  require_analytic(p);
  if (!(dt > 0.0) || dt > 1e-3)
    throw validation_error("integrate_integro requires 0 < dt <= 1e-3");
  if (!(t_max > 0.0)) throw validation_error("integrate_integro requires t_max > 0");

  const double damping = 1.0 - p.kappa / p.theta;
  const double feedback = p.lambda / p.theta;
  const double drift = p.gamma / p.theta;
  const std::size_t steps = static_cast<std::size_t>(std::llround(t_max / dt));

  GridSeries out;
  out.t0 = 0.0;
  out.dt = dt;
  out.values.reserve(steps + 1);

  double f = p.m0;
  double integral = 0.0;
  out.values.push_back(f);
  auto slope = [&](double fv, double iv) { return -damping * fv - feedback * iv - drift; };
  for (std::size_t s = 0; s < steps; ++s) {
    const double k1 = slope(f, integral);
    const double f_pred = f + dt * k1;
    const double i_pred = integral + 0.5 * dt * (f + f_pred);
    const double k2 = slope(f_pred, i_pred);
    const double f_next = f + 0.5 * dt * (k1 + k2);
    integral += 0.5 * dt * (f + f_next);
    f = f_next;
    out.values.push_back(f);
  }
  return out;
}

// ==============================================================================
// Price quadrature
// ==============================================================================

/// Cumulative-trapezoid price: P grid = p0 + lambda * integral of m.
inline GridSeries quadrature_price(const GridSeries& m, const ModelParams& p) {
  GridSeries out;
  out.t0 = m.t0;
  out.dt = m.dt;
  out.values.resize(m.values.size());
  if (m.values.empty()) return out;
  double acc = 0.0;
  out.values[0] = p.p0;
  for (std::size_t k = 1; k < m.values.size(); ++k) {
    acc += 0.5 * m.dt * (m.values[k - 1] + m.values[k]);
    out.values[k] = p.p0 + p.lambda * acc;
  }
  return out;
}

// ==============================================================================
// Extrema counting
// ==============================================================================

struct ExtremaCount {
  std::size_t count = 0;
  std::vector<double> locations;  ///< grid times of the detected extrema
};

/// Counts interior strict extrema of a gridded series via sign changes of the
/// consecutive differences.  Differences of magnitude <= tol count as flat and
/// are merged into the neighbouring run, so plateaus produce one extremum at
/// their midpoint instead of two.
inline ExtremaCount count_extrema(const GridSeries& series, double tol = 1e-9) {
  if (tol < 0.0) throw validation_error("count_extrema requires tol >= 0");
  ExtremaCount result;
  const auto& v = series.values;
  if (v.size() < 3) return result;

  int prev_sign = 0;
  std::size_t sign_change_start = 0;  // first index of the current flat/turn region
  for (std::size_t k = 0; k + 1 < v.size(); ++k) {
    const double d = v[k + 1] - v[k];
    int sign = 0;
    if (d > tol) sign = +1;
    else if (d < -tol) sign = -1;
    if (sign == 0) continue;  // flat: defer until the trend resumes
    if (prev_sign == 0) {
      prev_sign = sign;
      sign_change_start = k + 1;
      continue;
    }
    if (sign != prev_sign) {
      // Turning point: between the end of the previous trend and index k.
      const std::size_t lo = sign_change_start;
      const std::size_t hi = k;
      const std::size_t mid = lo + (hi - lo + 1) / 2;
      result.locations.push_back(series.time_at(mid));
      ++result.count;
      prev_sign = sign;
    }
    sign_change_start = k + 1;
  }
  return result;
}

// ==============================================================================
// Adaptive quadrature
// ==============================================================================

namespace detail {

inline double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double fa, double fb, double fm,
                                   double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  const double half_tol = std::max(0.5 * tol, 1e-17);
  return adaptive_simpson_rec(f, a, m, fa, fm, flm, left, half_tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, fb, frm, right, half_tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson integral of f over [a, b] with absolute tolerance tol.
inline double integrate_adaptive(const std::function<double(double)>& f, double a,
                                 double b, double tol = 1e-12) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = detail::simpson(a, fa, b, fb, fm);
  return detail::adaptive_simpson_rec(f, a, b, fa, fb, fm, whole, tol, 25);
}

}  // namespace hiam
