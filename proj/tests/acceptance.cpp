/// @file acceptance.cpp
/// @brief Release gate for the market-model toolkit.
///
/// Runs ten numbered end-to-end checks, each printing exactly one
/// [PASS]/[FAIL] line.  Every expected value is produced by an independent
/// method (direct numerical integration, quadrature, finite differences,
/// brute-force scans, or closed textbook constants), never by the code path
/// under test.  The process exit status is the number of failed criteria.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <hiam/analytic.hpp>
#include <hiam/classifier.hpp>
#include <hiam/graph.hpp>
#include <hiam/io.hpp>
#include <hiam/oracle.hpp>
#include <hiam/params.hpp>
#include <hiam/rng.hpp>
#include <hiam/simulate.hpp>

using namespace hiam;

namespace {

// ==============================================================================
// Harness
// ==============================================================================

struct Criterion {
  int id = 0;
  std::string title;
  bool pass = true;
  std::string detail;
  double seconds = 0.0;
};

class Checker {
 public:
  /// Records a failed sub-check; passing checks are silent.
  void require(bool ok, const std::string& what) {
    if (!ok) {
      ++failures_;
      if (!log_.empty()) log_ += "; ";
      if (failures_ <= 6) log_ += what;
    }
  }
  bool good() const { return failures_ == 0; }
  int failures() const { return failures_; }
  const std::string& log() const { return log_; }

 private:
  int failures_ = 0;
  std::string log_;
};

double now_seconds(const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

ModelParams make_params(double lambda, double theta, double kappa, double gamma,
                        double p0, double m0, int n_agents) {
  ModelParams p;
  p.lambda = lambda;
  p.theta = theta;
  p.kappa = kappa;
  p.gamma = gamma;
  p.p0 = p0;
  p.m0 = m0;
  p.n_agents = n_agents;
  return p;
}

/// Least-squares slope of y against x.
double regression_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Sign-change times of a sampled curve (linear interpolation), ignoring any
/// change within `debounce` of the previous one so sampling noise around a
/// crossing is counted once.
std::vector<double> crossing_times(const std::vector<double>& t,
                                   const std::vector<double>& y,
                                   double debounce) {
  std::vector<double> out;
  for (std::size_t i = 1; i < y.size(); ++i) {
    if ((y[i - 1] < 0.0 && y[i] >= 0.0) || (y[i - 1] > 0.0 && y[i] <= 0.0)) {
      const double frac = y[i - 1] / (y[i - 1] - y[i]);
      const double tc = t[i - 1] + frac * (t[i] - t[i - 1]);
      if (out.empty() || tc - out.back() > debounce) out.push_back(tc);
    }
  }
  return out;
}

/// Frequency estimate from successive sign-change times: consecutive crossings
/// of A e^{-at} cos(omega t + phi) are half-periods apart, so the regression
/// slope of time against crossing index is pi / omega.
std::optional<double> fit_frequency(const std::vector<double>& crossings) {
  if (crossings.size() < 2) return std::nullopt;
  std::vector<double> idx(crossings.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<double>(i);
  const double slope = regression_slope(idx, crossings);
  if (!(slope > 0.0)) return std::nullopt;
  return std::numbers::pi / slope;
}

// ==============================================================================
// Criterion 1: closed-form solutions against a direct integrator
// ==============================================================================

Criterion criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c{1, "closed forms match direct integration on a 27-set grid", true,
              "", 0.0};
  Checker ck;
  const double t_max = 10.0;
  const double dt = 1e-4;
  double worst = 0.0;
  int sets = 0;

  for (double kappa : {0.0, 0.2, 0.5}) {
    const double a = 0.5 * (1.0 - kappa);
    const double lam_crit = a * a;  // theta = 1
    for (double lambda : {0.8 * lam_crit, lam_crit, 2.0 * lam_crit}) {
      struct Combo {
        bool follow;
        double gamma, m0;
      };
      for (const Combo& combo : {Combo{false, 0.1, 0.5},
                                 Combo{false, -0.05, -0.3},
                                 Combo{true, 0.2, 0.4}}) {
        const ModelParams p =
            make_params(lambda, 1.0, kappa, combo.gamma, 1.0, combo.m0, 100);
        const FundamentalMode mode =
            combo.follow ? FundamentalMode{follow_price_mode(p)}
                         : FundamentalMode{constant_pf_mode(p)};
        const GridSeries numeric = integrate_ode(p, mode, t_max, dt);
        const ClosedFormSolution sol = closed_form_solution(p, mode);
        GridSeries closed;
        closed.t0 = numeric.t0;
        closed.dt = numeric.dt;
        closed.values.reserve(numeric.size());
        for (std::size_t i = 0; i < numeric.size(); ++i)
          closed.values.push_back(sol.m(numeric.time_at(i)));
        const double diff = max_abs_diff(closed, numeric);
        worst = std::max(worst, diff);
        ck.require(diff <= 1e-6, "set " + std::to_string(sets) + " diff " +
                                     fmt(diff, 3) + " > 1e-6");
        ++sets;
      }
    }
  }
  ck.require(sets == 27, "expected 27 sets");
  c.seconds = now_seconds(start);
  ck.require(c.seconds <= 30.0, "budget 30 s exceeded");
  c.pass = ck.good();
  c.detail = "27 sets, dt=1e-4, t<=10; worst |diff| = " + fmt(worst, 3) +
             " (tol 1e-6)" + (ck.good() ? "" : "; " + ck.log());
  return c;
}

// ==============================================================================
// Criterion 2: finite-difference residual of the governing equation
// ==============================================================================

Criterion criterion_2() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c{2, "closed forms satisfy the second-order law under finite differences",
              true, "", 0.0};
  Checker ck;
  Engine eng(88001);
  const double h = 1e-3;
  double worst_resid = 0.0;
  double worst_slope = 0.0;

  for (int trial = 0; trial < 50; ++trial) {
    const double theta = eng.uniform(0.3, 2.0);
    const double kappa = eng.uniform(0.0, 0.8) * theta;
    const double a = 0.5 * (1.0 - kappa / theta);
    const double lambda = theta * a * a * eng.uniform(0.3, 3.0);
    const double gamma = eng.uniform(-0.5, 0.5) * theta;
    const double m0 = eng.uniform(-1.0, 1.0);
    const ModelParams p = make_params(lambda, theta, kappa, gamma, 0.0, m0, 100);
    const auto k = detail::case_a_coeffs(p);
    auto f = [&](double t) { return detail::m_case_a_raw(k, t); };

    std::vector<double> times = {0.05, 0.3, 1.1, 2.7, 4.9};
    for (int j = 0; j < 3; ++j) times.push_back(eng.uniform(0.01, 8.0));
    for (double t : times) {
      // Fourth-order central stencils keep the finite-difference error far
      // below the 1e-5 relative budget.
      const double fm2 = f(t - 2.0 * h), fm1 = f(t - h), f0 = f(t),
                   fp1 = f(t + h), fp2 = f(t + 2.0 * h);
      const double d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
      const double d2 =
          (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
      const double term1 = d2;
      const double term2 = (1.0 - p.kappa / p.theta) * d1;
      const double term3 = (p.lambda / p.theta) * f0;
      const double resid = term1 + term2 + term3;
      const double scale = std::max(
          {std::abs(term1), std::abs(term2), std::abs(term3), 1e-12});
      const double rel = std::abs(resid) / scale;
      worst_resid = std::max(worst_resid, rel);
      ck.require(rel <= 1e-5, "trial " + std::to_string(trial) + " t=" + fmt(t) +
                                  " relative residual " + fmt(rel, 3));
    }

    // Initial slope of the solution equals the law's starting rate.
    const double d1_0 = (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) /
                        (12.0 * h);
    const double expected = -(1.0 - p.kappa / p.theta) * p.m0 - p.gamma / p.theta;
    const double err = std::abs(d1_0 - expected) / std::max(1.0, std::abs(expected));
    worst_slope = std::max(worst_slope, err);
    ck.require(err <= 1e-6,
               "trial " + std::to_string(trial) + " initial slope err " + fmt(err, 3));
  }
  c.seconds = now_seconds(start);
  c.pass = ck.good();
  c.detail = "50 random sets x 8 times; worst relative residual " +
             fmt(worst_resid, 3) + " (tol 1e-5), worst initial-slope error " +
             fmt(worst_slope, 3) + " (tol 1e-6)" +
             (ck.good() ? "" : "; " + ck.log());
  return c;
}

// ==============================================================================
// Criterion 3: accumulated-demand identity at the bounce time
// ==============================================================================

Criterion criterion_3() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c{3, "bounce-time identity holds against quadrature", true, "", 0.0};
  Checker ck;
  Engine eng(88002);
  double worst = 0.0;
  int accepted = 0;

  while (accepted < 12) {
    const double theta = eng.uniform(0.4, 2.0);
    const double u = eng.uniform(0.1, 0.9);
    const double a = 0.5 * (1.0 - u);
    const double lambda = theta * a * a * eng.uniform(0.2, 0.8);  // q > 0
    const double m0 = (eng.u01() < 0.5 ? 1.0 : -1.0) * eng.uniform(0.2, 1.0);
    const ModelParams probe = make_params(lambda, theta, u * theta, 0.0, 0.0, m0, 100);
    const DerivedConstants dc = derived_constants(probe);
    if (classify_regime(probe) != Regime::Overdamped) continue;
    // Choose gamma so the zero crossing exists: a + gamma/(theta m0) > c.
    const double s = dc.c + eng.uniform(0.1, 1.0);
    const double gamma = theta * m0 * (s - a);
    const ModelParams p = make_params(lambda, theta, u * theta, gamma, 0.0, m0, 100);
    const auto t0 = bounce_time_t0(p);
    if (!t0) continue;
    ++accepted;

    const double quad =
        p.gamma + p.lambda * integrate_adaptive(
                                 [&](double t) { return m_case_a(t, p); }, 0.0,
                                 *t0, 1e-14);
    const double delta = p.gamma / (p.theta * p.m0);
    const double predicted = p.theta * p.m0 * (dc.a + delta - dc.c) *
                             std::exp(-(dc.a - dc.c) * *t0);
    const double err = std::abs(quad - predicted);
    worst = std::max(worst, err);
    ck.require(err <= 1e-8, "set " + std::to_string(accepted) + " err " + fmt(err, 3));
  }
  c.seconds = now_seconds(start);
  c.pass = ck.good();
  c.detail =
      "12 zero-crossing sets; worst |quadrature - closed form| = " +
      fmt(worst, 3) +
      " (tol 1e-8).  Note: the identity requires the amplitude factor "
      "(a + gamma/(theta*m0) - c); a bare exponential theta*m0*exp(-(a-c)t0) "
      "differs from the quadrature by exactly that factor" +
      (ck.good() ? "" : "; " + ck.log());
  return c;
}

// ==============================================================================
// Criterion 4: pattern classifier against brute-force scans
// ==============================================================================

Criterion criterion_4() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c{4, "classifier agrees with brute-force scans on 100 sets", true,
              "", 0.0};
  Checker ck;
  Engine eng(88003);
  const double window = 50.0;
  const double dt = 1e-3;
  int disagreements = 0;

  for (int trial = 0; trial < 100; ++trial) {
    const bool follow = trial >= 60;
    const double theta = eng.uniform(0.4, 2.0);
    const double kappa = eng.uniform(0.0, 0.85) * theta;
    const double a = 0.5 * (1.0 - kappa / theta);
    const double lambda = theta * a * a * std::exp(eng.uniform(-1.2, 1.2));
    const double w = theta - kappa;
    const double gamma = eng.uniform(-1.2, 1.2) * w;
    const double m0 = eng.uniform(-1.0, 1.0);
    const ModelParams p = make_params(lambda, theta, kappa, gamma, 0.0, m0, 100);
    const FundamentalMode mode = follow ? FundamentalMode{follow_price_mode(p)}
                                        : FundamentalMode{constant_pf_mode(p)};
    const ExtremaVerdict v = classify_verdict(p, mode, window);
    const std::string tag = "trial " + std::to_string(trial);
    bool agreed = true;

    // --- Horizon oracle: integrate, accumulate, scan for the band exit. ---
    double horizon = 60.0;
    if (std::isfinite(v.t_star) && v.t_star > 0.0)
      horizon = std::min(200.0, std::max(60.0, 1.1 * v.t_star + 1.0));
    const GridSeries m_num = integrate_ode(p, mode, horizon, dt);
    const GridSeries price_num = quadrature_price(m_num, p);
    std::optional<double> exit_num;
    if (follow) {
      if (std::abs(gamma) > w) exit_num = 0.0;  // offset pinned outside
    } else {
      for (std::size_t i = 0; i < price_num.size(); ++i) {
        const double band = price_num.values[i] - p.p0 + p.gamma;
        if (std::abs(band) > w) {
          if (i == 0) {
            exit_num = 0.0;
          } else {
            const double b1 = std::abs(price_num.values[i - 1] - p.p0 + p.gamma);
            const double b2 = std::abs(band);
            exit_num = price_num.time_at(i - 1) + dt * (w - b1) / (b2 - b1);
          }
          break;
        }
      }
    }
    if (std::isfinite(v.t_star)) {
      if (!exit_num || std::abs(*exit_num - v.t_star) > 1e-3) {
        agreed = false;
        ck.require(false, tag + ": t* " + fmt(v.t_star) + " vs scan " +
                              (exit_num ? fmt(*exit_num) : std::string("none")));
      }
    } else if (exit_num && *exit_num <= 55.0) {
      agreed = false;
      ck.require(false, tag + ": claimed no exit but scan found " + fmt(*exit_num));
    }

    // --- Extrema oracle: count interior extrema of the price curve. ---
    // The scan reads the price as O(1) doubles, so once the oscillation
    // envelope has decayed toward the 1e-16 ulp scale the sampled curve is
    // numerically flat and later extrema stop being observable by any grid
    // method.  Restrict the comparison to times where the price's slope
    // amplitude lambda * b * hypot(m0, m1/b) * e^{-a t} still exceeds 1e-5 —
    // eleven orders of magnitude above that floor — and both sides are
    // compared exactly there.
    double resolvable_until = std::numeric_limits<double>::infinity();
    if (!follow) {
      const auto k = detail::case_a_coeffs(p);
      if (k.q < 0.0) {
        const double b = std::sqrt(-k.q);
        const double sig0 = p.lambda * b * std::hypot(p.m0, k.m1 / b);
        resolvable_until =
            sig0 <= 1e-5 ? 0.0 : std::log(sig0 / 1e-5) / k.a;
      }
    }
    const double cap = std::min(v.t_star, window);
    const double cmp_cap = std::min(cap - 2.0 * dt, resolvable_until);
    if (cmp_cap > 10.0 * dt) {
      GridSeries clipped;
      clipped.t0 = price_num.t0;
      clipped.dt = price_num.dt;
      const std::size_t npts =
          std::min(price_num.size(),
                   static_cast<std::size_t>(std::floor(cap / dt)) + 1);
      clipped.values.assign(price_num.values.begin(),
                            price_num.values.begin() +
                                static_cast<std::ptrdiff_t>(npts));
      const ExtremaCount brute = count_extrema(clipped, 1e-12);
      auto below_cap = [&](const std::vector<double>& xs) {
        std::vector<double> out;
        for (double x : xs)
          if (x < cmp_cap) out.push_back(x);
        return out;
      };
      const std::vector<double> ours = below_cap(v.extrema);
      const std::vector<double> ref = below_cap(brute.locations);
      if (ref.size() != ours.size()) {
        agreed = false;
        ck.require(false, tag + ": extrema " + std::to_string(ours.size()) +
                              " vs brute " + std::to_string(ref.size()));
      } else {
        for (std::size_t j = 0; j < ref.size(); ++j)
          if (std::abs(ref[j] - ours[j]) > 5e-3) {
            agreed = false;
            ck.require(false, tag + ": extremum location " + fmt(ours[j]) +
                                  " vs brute " + fmt(ref[j]));
            break;
          }
      }
    } else if (cap <= 10.0 * dt && !v.extrema.empty()) {
      agreed = false;
      ck.require(false, tag + ": extrema reported inside an empty window");
    }
    if (!agreed) ++disagreements;
  }
  c.seconds = now_seconds(start);
  c.pass = ck.good();
  c.detail = "100 random sets (60 constant, 40 price-following), horizons and "
             "extrema vs integrate-and-scan (extrema compared wherever the "
             "oscillation still moves the price above the double-precision "
             "floor): " +
             std::to_string(disagreements) + " disagreements (required 0)" +
             (ck.good() ? "" : "; " + ck.log());
  return c;
}

// ==============================================================================
// Criteria 5 and 6: oscillation frequency of the simulated market
// ==============================================================================

ModelParams oscillation_preset() {
  // kappa = theta puts the mean field exactly on the zero-damping line, so the
  // population mean should swing as m0 cos(sqrt(lambda/theta) t) indefinitely.
  return make_params(0.5, 1.0, 1.0, 0.0, 1.0, 0.5, 10000);
}

Criterion criterion_5() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c{5, "undamped swing frequency and ensemble mean on the complete graph",
              true, "", 0.0};
  Checker ck;
  const ModelParams p = oscillation_preset();
  const double omega_ref = std::sqrt(0.5);

  SimConfig cfg;
  cfg.t_max = 30.0;
  cfg.sample_dt = 0.01;
  cfg.seed = 88005;
  const PeerGraph g = fully_connected(p.n_agents);
  const Trajectory tr = simulate(p, constant_pf_mode(p), g, cfg);
  const std::vector<double> crossings = crossing_times(tr.times, tr.m_bar, 1.0);
  const auto omega = fit_frequency(crossings);
  ck.require(omega.has_value(), "no frequency fit from single history");
  double rel_err = 1.0;
  if (omega) {
    rel_err = std::abs(*omega - omega_ref) / omega_ref;
    ck.require(rel_err <= 0.02, "single-history frequency off by " + fmt(rel_err, 3));
  }

  SimConfig ecfg = cfg;
  ecfg.seed = 88105;
  const EnsembleStats es =
      run_ensemble(p, constant_pf_mode(p), FullyConnectedSpec{}, ecfg, 100, false);
  double sq = 0.0;
  for (std::size_t i = 0; i < es.times.size(); ++i) {
    const double ref = 0.5 * std::cos(omega_ref * es.times[i]);
    sq += (es.mean_m[i] - ref) * (es.mean_m[i] - ref);
  }
  const double rms = std::sqrt(sq / static_cast<double>(es.times.size()));
  ck.require(rms <= 0.03, "ensemble RMS " + fmt(rms, 3) + " > 0.03");

  c.seconds = now_seconds(start);
  ck.require(c.seconds <= 300.0, "budget 300 s exceeded");
  c.pass = ck.good();
  c.detail = "n=10000, t<=30: fitted frequency err " + fmt(rel_err, 3) +
             " (tol 0.02), 100-history mean RMS vs 0.5 cos(sqrt(0.5) t) = " +
             fmt(rms, 3) + " (tol 0.03)" + (ck.good() ? "" : "; " + ck.log());
  return c;
}

Criterion criterion_6() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c{6, "oscillation survives on a sparse random-regular graph", true,
              "", 0.0};
  Checker ck;
  const ModelParams p = oscillation_preset();
  const double omega_ref = std::sqrt(0.5);

  SimConfig cfg;
  cfg.t_max = 30.0;
  cfg.sample_dt = 0.01;
  cfg.seed = 88006;
  const PeerGraph g =
      build_graph(RandomRegularSpec{6}, p.n_agents, derive_stream_seed(cfg.seed, 0));
  const Trajectory tr = simulate(p, constant_pf_mode(p), g, cfg);
  const std::vector<double> crossings = crossing_times(tr.times, tr.m_bar, 1.0);
  ck.require(crossings.size() >= 3, "only " + std::to_string(crossings.size()) +
                                        " sign changes (need >= 3)");
  const auto omega = fit_frequency(crossings);
  ck.require(omega.has_value(), "no frequency fit");
  double rel_err = 1.0;
  if (omega) {
    rel_err = std::abs(*omega - omega_ref) / omega_ref;
    ck.require(rel_err <= 0.10, "frequency off by " + fmt(rel_err, 3));
  }
  c.seconds = now_seconds(start);
  c.pass = ck.good();
  c.detail = "six peers per trader, n=10000: " + std::to_string(crossings.size()) +
             " sign changes, frequency err " + fmt(rel_err, 3) + " (tol 0.10)" +
             (ck.good() ? "" : "; " + ck.log());
  return c;
}

// ==============================================================================
// Criterion 7: saturation of a frozen market
// ==============================================================================

Criterion criterion_7() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c{7, "frozen-market saturation follows the piecewise prediction", true,
              "", 0.0};
  Checker ck;
  const ModelParams p = make_params(1.0, 1.0, 0.5, -0.75, 0.0, 0.0, 1000);
  const FreezePrediction fp = freeze_prediction(p);
  double worst_sup = 0.0;

  struct Case {
    const char* name;
    GraphSpec spec;
  };
  for (const Case& gc : {Case{"complete", FullyConnectedSpec{}},
                         Case{"6-regular", RandomRegularSpec{6}}}) {
    SimConfig cfg;
    cfg.t_max = 10.0;
    cfg.sample_dt = 0.01;
    cfg.seed = 88007;
    const PeerGraph g =
        build_graph(gc.spec, p.n_agents, derive_stream_seed(cfg.seed, 0));
    SimConfig run = cfg;
    run.seed = derive_stream_seed(cfg.seed, 1);
    const Trajectory tr = simulate(p, follow_price_mode(p), g, run);

    double sup = 0.0;
    bool held = true;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
      sup = std::max(sup, std::abs(tr.m_bar[i] - fp.m(tr.times[i])));
      if (tr.times[i] >= 6.0 && tr.m_bar[i] < 0.95) held = false;
    }
    worst_sup = std::max(worst_sup, sup);
    ck.require(held, std::string(gc.name) + ": mean fell below 0.95 after t=6");
    ck.require(sup <= 0.1, std::string(gc.name) + ": sup deviation " + fmt(sup, 3));
  }
  c.seconds = now_seconds(start);
  ck.require(c.seconds <= 60.0, "budget 60 s exceeded");
  c.pass = ck.good();
  c.detail = "complete and 6-regular, n=1000: worst sup |sim - prediction| = " +
             fmt(worst_sup, 3) + " (tol 0.1), mean >= 0.95 for t >= 6" +
             (ck.good() ? "" : "; " + ck.log());
  return c;
}

// ==============================================================================
// Criterion 8: per-agent expectations across peer structures
// ==============================================================================

Criterion criterion_8() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c{8, "agent-level means track the population law on three graphs",
              true, "", 0.0};
  Checker ck;
  const ModelParams p = make_params(0.5, 1.0, 0.4, 0.1, 1.0, 0.3, 200);
  const int histories = 2000;
  // Decisions stay strictly inside the noise band up to the guarantee time
  // (theta - kappa - |gamma|) / lambda = 1, so every spin has expectation f(t)
  // regardless of the peer structure and the comparison below is unbiased.
  const double horizon = t_star_lower_bound(p);

  SimConfig cfg;
  cfg.t_max = horizon;
  cfg.sample_dt = 0.1;
  cfg.seed = 88008;

  struct GraphCase {
    const char* name;
    GraphSpec spec;
  };
  const std::vector<GraphCase> cases = {
      {"complete", FullyConnectedSpec{}},
      {"ring", RingSpec{3}},
      {"directed", RandomDirectedSpec{6}},
  };

  std::vector<EnsembleStats> stats;
  for (const GraphCase& gc : cases) {
    stats.push_back(run_ensemble(p, constant_pf_mode(p), gc.spec, cfg, histories,
                                 /*record_per_agent=*/true));
  }

  double worst_z = 0.0;
  double worst_outlier_frac = 0.0;
  for (std::size_t gi = 0; gi < cases.size(); ++gi) {
    const EnsembleStats& es = stats[gi];
    const std::string name = cases[gi].name;
    // Population mean within 3 standard errors of the law at each positive
    // grid time.
    for (std::size_t i = 1; i < es.times.size(); ++i) {
      const double f = m_case_a(es.times[i], p);
      const double z = std::abs(es.mean_m[i] - f) /
                       std::max(es.stderr_m[i], 1e-12);
      worst_z = std::max(worst_z, z);
      ck.require(z <= 3.0, name + ": mean off law at t=" + fmt(es.times[i]) +
                               " (z=" + fmt(z, 3) + ")");
    }
    // Individual agents: each mean-over-histories is an average of `histories`
    // independent spins with expectation f, so its standard error is
    // sqrt((1 - f^2)/histories).  At three standard errors at most a small
    // fraction may stray; five standard errors must never be hit.
    std::size_t outliers3 = 0, outliers5 = 0, cells = 0;
    for (std::size_t i = 1; i < es.times.size(); ++i) {
      const double f = m_case_a(es.times[i], p);
      const double se =
          std::sqrt((1.0 - f * f) / static_cast<double>(histories));
      for (double am : es.per_agent_mean[i]) {
        const double dev = std::abs(am - f);
        if (dev > 3.0 * se) ++outliers3;
        if (dev > 5.0 * se) ++outliers5;
        ++cells;
      }
    }
    const double frac = static_cast<double>(outliers3) / static_cast<double>(cells);
    worst_outlier_frac = std::max(worst_outlier_frac, frac);
    ck.require(frac <= 0.02,
               name + ": 3-sigma agent outlier fraction " + fmt(frac, 3));
    ck.require(outliers5 == 0,
               name + ": " + std::to_string(outliers5) + " agents beyond 5 sigma");
  }
  // The three graphs estimate the same law: pairwise differences within three
  // combined standard errors.
  for (std::size_t g1 = 0; g1 < cases.size(); ++g1)
    for (std::size_t g2 = g1 + 1; g2 < cases.size(); ++g2)
      for (std::size_t i = 1; i < stats[g1].times.size(); ++i) {
        const double se = std::hypot(stats[g1].stderr_m[i], stats[g2].stderr_m[i]);
        const double z =
            std::abs(stats[g1].mean_m[i] - stats[g2].mean_m[i]) /
            std::max(se, 1e-12);
        worst_z = std::max(worst_z, z);
        ck.require(z <= 3.0, std::string(cases[g1].name) + " vs " +
                                 cases[g2].name + " at t=" +
                                 fmt(stats[g1].times[i]) + " (z=" + fmt(z, 3) + ")");
      }

  c.seconds = now_seconds(start);
  ck.require(c.seconds <= 600.0, "budget 600 s exceeded");
  c.pass = ck.good();
  c.detail = "n=200, 2000 histories, t<=1: worst |z| = " + fmt(worst_z, 3) +
             " (limit 3), worst 3-sigma agent outlier fraction " +
             fmt(worst_outlier_frac, 3) + " (limit 0.02)" +
             (ck.good() ? "" : "; " + ck.log());
  return c;
}

// ==============================================================================
// Criterion 9: decoupled decisions decay at unit rate
// ==============================================================================

Criterion criterion_9() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c{9, "decoupled spins forget their start at unit rate", true, "", 0.0};
  Checker ck;
  // With kappa = 0 and a pinned zero offset every decision is a fair coin, so
  // each spin's expectation is m0 e^{-t}: the clock rings at rate 1 and the
  // first ring erases the initial value.
  const ModelParams p = make_params(0.5, 1.0, 0.0, 0.0, 0.0, 0.8, 2000);
  SimConfig cfg;
  cfg.t_max = 2.0;
  cfg.sample_dt = 0.05;
  cfg.seed = 88009;
  const EnsembleStats es =
      run_ensemble(p, follow_price_mode(p), FullyConnectedSpec{}, cfg, 40, false);

  std::vector<double> ts, logs;
  for (std::size_t i = 0; i < es.times.size(); ++i) {
    if (es.mean_m[i] >= 0.05) {
      ts.push_back(es.times[i]);
      logs.push_back(std::log(es.mean_m[i]));
    }
  }
  ck.require(ts.size() >= 20, "too few usable samples for the decay fit");
  const double rate = -regression_slope(ts, logs);
  ck.require(std::abs(rate - 1.0) <= 0.05,
             "fitted decay rate " + fmt(rate, 4) + " outside 1 +- 0.05");

  // Long-run mean of the relaxation: exact arithmetic spot checks.
  const ModelParams q1 = make_params(1.0, 1.0, 0.5, 0.25, 0.0, 0.3, 10);
  ck.require(m_star(q1) == -0.5, "m_star(0.25, 1, 0.5) != -0.5");
  const ModelParams q2 = make_params(1.0, 2.0, 0.5, 0.75, 0.0, 0.0, 10);
  ck.require(m_star(q2) == -0.5, "m_star(0.75, 2, 0.5) != -0.5");
  const ModelParams q3 = make_params(1.0, 1.0, 0.0, 0.0, 0.0, 0.9, 10);
  ck.require(m_star(q3) == 0.0, "m_star(0, 1, 0) != 0");

  c.seconds = now_seconds(start);
  c.pass = ck.good();
  c.detail = "40 histories, n=2000: fitted rate " + fmt(rate, 4) +
             " (want 1 +- 0.05); relaxation limits exact" +
             (ck.good() ? "" : "; " + ck.log());
  return c;
}

// ==============================================================================
// Criterion 10: bitwise reproducibility
// ==============================================================================

Criterion criterion_10() {
  const auto start = std::chrono::steady_clock::now();
  Criterion c{10, "identical seeds produce byte-identical output", true, "", 0.0};
  Checker ck;
  const ModelParams p = make_params(0.5, 1.0, 0.4, 0.1, 1.0, 0.3, 300);
  SimConfig cfg;
  cfg.t_max = 3.0;
  cfg.sample_dt = 0.05;
  cfg.seed = 88010;

  // Single histories, in process.
  const PeerGraph g = fully_connected(p.n_agents);
  std::ostringstream s1, s2;
  write_trajectory_csv(s1, simulate(p, constant_pf_mode(p), g, cfg));
  write_trajectory_csv(s2, simulate(p, constant_pf_mode(p), g, cfg));
  ck.require(s1.str() == s2.str(), "trajectory CSVs differ across reruns");

  // Ensembles, serial versus three worker threads.
  const EnsembleStats e1 =
      run_ensemble(p, constant_pf_mode(p), RingSpec{3}, cfg, 12, true);
  ck.require(setenv("HIAM_THREADS", "3", 1) == 0, "setenv failed");
  const EnsembleStats e2 =
      run_ensemble(p, constant_pf_mode(p), RingSpec{3}, cfg, 12, true);
  ck.require(unsetenv("HIAM_THREADS") == 0, "unsetenv failed");
  std::ostringstream b1, b2;
  write_ensemble_csv(b1, e1);
  write_ensemble_csv(b2, e2);
  ck.require(b1.str() == b2.str(), "ensemble CSVs differ between 1 and 3 threads");
  ck.require(e1.per_agent_mean == e2.per_agent_mean,
             "per-agent means differ between 1 and 3 threads");

  // Full command-line round trip.
  namespace fs = std::filesystem;
  const char* bin_env = std::getenv("HIAM_CLI_BIN");
  const std::string bin = bin_env != nullptr ? bin_env : "./hiam_cli";
  const fs::path d1 = "acceptance_scratch/rep_a";
  const fs::path d2 = "acceptance_scratch/rep_b";
  fs::remove_all("acceptance_scratch");
  fs::create_directories(d1);
  fs::create_directories(d2);
  auto run = [&](const fs::path& dir) {
    const std::string cmd = bin + " reproduce-fig 3 --out " + dir.string() +
                            " --seed 17 > " + (dir / "log.txt").string() + " 2>&1";
    const int raw = std::system(cmd.c_str());
    return raw != -1 && WIFEXITED(raw) && WEXITSTATUS(raw) == 0;
  };
  ck.require(run(d1) && run(d2), "command-line rerun failed");
  auto slurp = [](const fs::path& f) {
    std::ifstream in(f, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  for (const char* name : {"fc_single.csv", "nu6_single.csv", "prediction.csv"}) {
    const std::string a = slurp(d1 / name);
    ck.require(!a.empty() && a == slurp(d2 / name),
               std::string(name) + " differs across command-line reruns");
  }

  c.seconds = now_seconds(start);
  c.pass = ck.good();
  c.detail = "trajectory, threaded ensemble, and command-line outputs identical" +
             (ck.good() ? std::string() : "; " + ck.log());
  return c;
}

}  // namespace

int main() {
  std::vector<std::function<Criterion()>> criteria = {
      criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
      criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Criterion c;
    try {
      c = criteria[i]();
    } catch (const std::exception& e) {
      c.id = static_cast<int>(i) + 1;
      c.title = "aborted";
      c.pass = false;
      c.detail = std::string("unexpected exception: ") + e.what();
    }
    if (!c.pass) ++failed;
    std::cout << (c.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id << ": "
              << c.title << " -- " << c.detail << " (" << fmt(c.seconds, 3)
              << " s)\n";
    std::cout.flush();
  }
  std::cout << (10 - failed) << "/10 criteria passed\n";
  return failed;
}
