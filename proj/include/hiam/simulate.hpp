#pragma once

/// @file simulate.hpp
/// @brief Exact event-driven realization of the spin/price Markov process,
///        plus ensemble statistics over independent histories.
///
/// Time advances by a single global exponential clock at rate n with a uniform
/// choice of the deciding agent — equivalent in law to n independent unit-rate
/// clocks, at O(1) per event.  Between events the excess demand is constant,
/// so the log-price advances exactly linearly at slope lambda * m_bar; output
/// samples are exact evaluations of the piecewise process at grid times, never
/// binned averages.  A grid time that coincides with an event time (possible
/// only through order-of-rounding coincidences) records the pre-decision
/// state.
///
/// Determinism: a fixed (params, mode, graph, config) pins the full draw
/// sequence — n initialization uniforms, then per event one exponential wait,
/// one agent index, one noise uniform — so trajectories are bit-identical
/// across runs and thread counts.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <hiam/errors.hpp>
#include <hiam/graph.hpp>
#include <hiam/params.hpp>
#include <hiam/rng.hpp>

namespace hiam {

// ==============================================================================
// State and configuration
// ==============================================================================

/// Idiosyncratic evaluation noise: uniform density on [-half_width, +half_width].
struct NoiseModel {
  double half_width = 1.0;
};

struct AgentStates {
  std::vector<std::int8_t> s;  ///< one spin per agent, each in {-1, +1}
};

struct SimConfig {
  double t_max = 10.0;      ///< simulation horizon
  double sample_dt = 0.01;  ///< output grid spacing
  std::uint64_t seed = 1;   ///< RNG stream seed
  bool record_validity = false;  ///< track first grid time with |P - P_f| > theta - kappa
};

struct Trajectory {
  std::vector<double> times;   ///< 0, sample_dt, 2*sample_dt, ..., <= t_max
  std::vector<double> m_bar;   ///< relative excess demand at each grid time
  std::vector<double> price;   ///< P at each grid time
  std::vector<double> pf;      ///< P_f at each grid time
  std::int64_t events = 0;     ///< total decisions taken
  std::optional<double> validity_exit;  ///< first grid time outside the band, if tracked
};

struct EnsembleStats {
  std::vector<double> times;
  std::vector<double> mean_m;    ///< per-time average of m_bar over histories
  std::vector<double> stderr_m;  ///< per-time standard error of that average
  /// per_agent_mean[g][i]: average of s_i at grid time g over histories
  /// (filled only when requested; costs O(grid * n) memory).
  std::vector<std::vector<double>> per_agent_mean;
  std::int64_t n_histories = 0;
};

// ==============================================================================
// Initialization
// ==============================================================================

namespace detail {

/// Draws i.i.d. spins with P(+1) = (1 + m0)/2 from an existing engine.
inline AgentStates draw_states(std::int64_t n, double m0, Engine& eng) {
  AgentStates st;
  st.s.resize(static_cast<std::size_t>(n));
  const double p_up = 0.5 * (1.0 + m0);
  for (auto& si : st.s) si = eng.u01() < p_up ? std::int8_t{+1} : std::int8_t{-1};
  return st;
}

}  // namespace detail

/// I.i.d. spins with P(s_i = +1) = (1 + m0)/2; m0 = +-1 is exactly degenerate.
inline AgentStates init_states(std::int64_t n, double m0, std::uint64_t seed) {
  if (n < 1) throw validation_error("init_states requires n >= 1");
  if (!(std::abs(m0) <= 1.0)) throw validation_error("init_states requires |m0| <= 1");
  Engine eng(seed);
  return detail::draw_states(n, m0, eng);
}

// ==============================================================================
// Event loop
// ==============================================================================

namespace detail {

inline std::size_t grid_size(double t_max, double sample_dt) {
  return static_cast<std::size_t>(std::floor(t_max / sample_dt + 1e-9)) + 1;
}

/// Observer invoked at every flushed grid point: (grid index, spins, spin sum).
using GridObserver =
    std::function<void(std::size_t, const std::vector<std::int8_t>&, std::int64_t)>;

inline void simulate_impl(const ModelParams& p, const FundamentalMode& mode,
                          const PeerGraph& graph, const SimConfig& cfg, Trajectory& out,
                          const GridObserver* on_grid) {
  require_valid(p, mode);
  if (graph.n != p.n_agents)
    throw validation_error("graph node count does not match n_agents");
  if (!(cfg.t_max > 0.0)) throw validation_error("t_max must be positive");
  if (!(cfg.sample_dt > 0.0)) throw validation_error("sample_dt must be positive");
  if (auto violations = validate_graph(graph); !violations.empty())
    throw validation_error("invalid graph: " + violations.front());

  const std::int64_t n = p.n_agents;
  const bool followp = is_follow_price(mode);
  const double pf_const = followp ? 0.0 : std::get<ConstantPf>(mode).pf0;
  const NoiseModel noise{p.theta};
  const double band_width = p.theta - p.kappa;

  Engine eng(cfg.seed);
  AgentStates st = draw_states(n, p.m0, eng);
  std::int64_t spin_total = 0;
  for (std::int8_t si : st.s) spin_total += si;

  const std::size_t n_grid = grid_size(cfg.t_max, cfg.sample_dt);
  out.times.reserve(n_grid);
  out.m_bar.reserve(n_grid);
  out.price.reserve(n_grid);
  out.pf.reserve(n_grid);

  double t_cur = 0.0;   // time of the last event (price anchor)
  double p_cur = p.p0;  // P at t_cur
  std::size_t g = 0;    // next grid index to flush

  auto pf_of = [&](double price_now) { return followp ? price_now - p.gamma : pf_const; };

  auto flush_to = [&](double t_limit) {
    const double m_now = static_cast<double>(spin_total) / static_cast<double>(n);
    while (g < n_grid) {
      const double tg = static_cast<double>(g) * cfg.sample_dt;
      if (tg > t_limit) break;
      const double price_g = p_cur + p.lambda * m_now * (tg - t_cur);
      const double pf_g = pf_of(price_g);
      out.times.push_back(tg);
      out.m_bar.push_back(m_now);
      out.price.push_back(price_g);
      out.pf.push_back(pf_g);
      if (cfg.record_validity && !out.validity_exit &&
          std::abs(price_g - pf_g) > band_width)
        out.validity_exit = tg;
      if (on_grid) (*on_grid)(g, st.s, spin_total);
      ++g;
    }
  };

  while (true) {
    const double wait = eng.exponential(static_cast<double>(n));
    const double t_next = t_cur + wait;
    if (t_next > cfg.t_max) {
      flush_to(cfg.t_max);
      break;
    }
    flush_to(t_next);
    p_cur += p.lambda * (static_cast<double>(spin_total) / static_cast<double>(n)) *
             (t_next - t_cur);
    t_cur = t_next;

    const auto i =
        static_cast<std::int64_t>(eng.below(static_cast<std::uint64_t>(n)));
    const double x = eng.uniform(-noise.half_width, noise.half_width);
    const std::int64_t psum = graph.peer_spin_sum(i, st.s, spin_total);
    const std::int64_t deg = graph.degree(i);
    // An empty peer group exerts no social pull (the peer average of nothing
    // is taken as zero, not 0/0).
    const double peer_term =
        deg > 0 ? p.kappa * static_cast<double>(psum) / static_cast<double>(deg) : 0.0;
    // Follow-price mode pins P_f - P at exactly -gamma; computing the margin
    // directly avoids re-deriving that constant from two large cancelling
    // price values.
    const double margin = followp ? peer_term - p.gamma + x
                                  : peer_term + pf_const + x - p_cur;
    const std::int8_t s_new = margin >= 0.0 ? std::int8_t{+1} : std::int8_t{-1};
    spin_total += s_new - st.s[static_cast<std::size_t>(i)];
    st.s[static_cast<std::size_t>(i)] = s_new;
    ++out.events;
  }

  if (!std::isfinite(p_cur)) throw std::logic_error("price diverged to non-finite");
}

}  // namespace detail

/// One exact realization on the given graph.
inline Trajectory simulate(const ModelParams& p, const FundamentalMode& mode,
                           const PeerGraph& graph, const SimConfig& cfg) {
  Trajectory out;
  detail::simulate_impl(p, mode, graph, cfg, out, nullptr);
  return out;
}

// ==============================================================================
// Ensembles
// ==============================================================================

/// Worker threads for ensembles, from HIAM_THREADS (default 1).
inline int ensemble_threads() {
  if (const char* env = std::getenv("HIAM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(std::min(v, 64L));
  }
  return 1;
}

/// Independent histories on one shared topology.  The graph is built from
/// stream 0 of the base seed; history h runs on stream h+1.  Accumulation is
/// in exact integer sums, so the result is identical for any thread count.
inline EnsembleStats run_ensemble(const ModelParams& p, const FundamentalMode& mode,
                                  const GraphSpec& spec, const SimConfig& cfg,
                                  std::int64_t n_histories,
                                  bool record_per_agent = false) {
  if (n_histories < 1) throw validation_error("run_ensemble requires n_histories >= 1");
  require_valid(p, mode);
  if (!(cfg.t_max > 0.0)) throw validation_error("t_max must be positive");
  if (!(cfg.sample_dt > 0.0)) throw validation_error("sample_dt must be positive");

  const PeerGraph graph = build_graph(spec, p.n_agents, derive_stream_seed(cfg.seed, 0));
  const std::size_t n_grid = detail::grid_size(cfg.t_max, cfg.sample_dt);
  const std::size_t n_sz = static_cast<std::size_t>(p.n_agents);

  const int n_threads =
      static_cast<int>(std::min<std::int64_t>(ensemble_threads(), n_histories));
  std::vector<std::vector<std::int64_t>> sum_s(n_threads), sum_s2(n_threads),
      agent_sum(n_threads);
  std::vector<std::exception_ptr> errors(n_threads);

  auto worker = [&](int tid) {
    try {
      auto& loc_s = sum_s[static_cast<std::size_t>(tid)];
      auto& loc_s2 = sum_s2[static_cast<std::size_t>(tid)];
      auto& loc_agent = agent_sum[static_cast<std::size_t>(tid)];
      loc_s.assign(n_grid, 0);
      loc_s2.assign(n_grid, 0);
      if (record_per_agent) loc_agent.assign(n_grid * n_sz, 0);
      detail::GridObserver observer = [&](std::size_t gi,
                                          const std::vector<std::int8_t>& spins,
                                          std::int64_t spin_total) {
        loc_s[gi] += spin_total;
        loc_s2[gi] += spin_total * spin_total;
        if (record_per_agent) {
          std::int64_t* row = loc_agent.data() + gi * n_sz;
          for (std::size_t i = 0; i < n_sz; ++i) row[i] += spins[i];
        }
      };
      for (std::int64_t h = tid; h < n_histories; h += n_threads) {
        SimConfig hist_cfg = cfg;
        hist_cfg.seed = derive_stream_seed(cfg.seed, static_cast<std::uint64_t>(h) + 1);
        hist_cfg.record_validity = false;
        Trajectory scratch;
        detail::simulate_impl(p, mode, graph, hist_cfg, scratch, &observer);
      }
    } catch (...) {
      errors[static_cast<std::size_t>(tid)] = std::current_exception();
    }
  };

  if (n_threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  // Merge: plain integer addition, associative and order-independent.
  for (int t = 1; t < n_threads; ++t) {
    for (std::size_t gi = 0; gi < n_grid; ++gi) {
      sum_s[0][gi] += sum_s[static_cast<std::size_t>(t)][gi];
      sum_s2[0][gi] += sum_s2[static_cast<std::size_t>(t)][gi];
    }
    if (record_per_agent)
      for (std::size_t j = 0; j < n_grid * n_sz; ++j)
        agent_sum[0][j] += agent_sum[static_cast<std::size_t>(t)][j];
  }

  EnsembleStats stats;
  stats.n_histories = n_histories;
  stats.times.resize(n_grid);
  stats.mean_m.resize(n_grid);
  stats.stderr_m.resize(n_grid);
  const double nn = static_cast<double>(p.n_agents);
  const double hh = static_cast<double>(n_histories);
  for (std::size_t gi = 0; gi < n_grid; ++gi) {
    stats.times[gi] = static_cast<double>(gi) * cfg.sample_dt;
    const double s1 = static_cast<double>(sum_s[0][gi]);
    const double s2 = static_cast<double>(sum_s2[0][gi]);
    stats.mean_m[gi] = s1 / (nn * hh);
    if (n_histories > 1) {
      const double var_m = std::max(0.0, (s2 - s1 * s1 / hh) / (hh - 1.0)) / (nn * nn);
      stats.stderr_m[gi] = std::sqrt(var_m / hh);
    } else {
      stats.stderr_m[gi] = 0.0;
    }
  }
  if (record_per_agent) {
    stats.per_agent_mean.assign(n_grid, std::vector<double>(n_sz, 0.0));
    for (std::size_t gi = 0; gi < n_grid; ++gi)
      for (std::size_t i = 0; i < n_sz; ++i)
        stats.per_agent_mean[gi][i] =
            static_cast<double>(agent_sum[0][gi * n_sz + i]) / hh;
  }
  return stats;
}

// ==============================================================================
// Deterministic validity bound
// ==============================================================================

/// Largest horizon on which |P - P_f| <= theta - kappa is guaranteed for every
/// realization: the offset starts at |gamma| and moves at most lambda per unit
/// time, so the bound is max(0, (theta - kappa - |gamma|)/lambda).  Returns 0
/// when theta <= kappa, +infinity when lambda = 0 with slack in the band.
inline double t_star_lower_bound(const ModelParams& p) {
  const double slack = p.theta - p.kappa - std::abs(p.gamma);
  if (!(slack > 0.0)) return 0.0;
  return slack / p.lambda;  // lambda = 0 gives +infinity, the correct limit
}

}  // namespace hiam
