#pragma once

/// @file graph.hpp
/// @brief Directed peer graphs: each agent i has a non-empty peer group J(i)
///        whose current positions weigh on i's next decision.
///
/// Node identity is the integer index 0..n-1, and peer lists are kept sorted
/// so that construction is deterministic given (generator, n, seed).  The
/// complete graph is stored implicitly — materializing n*(n-1) peer entries
/// for large populations would be pure waste.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include <hiam/errors.hpp>
#include <hiam/rng.hpp>

namespace hiam {

// ==============================================================================
// PeerGraph
// ==============================================================================

struct PeerGraph {
  std::int64_t n = 0;       ///< node count
  bool directed = false;    ///< false: j in J(i) <=> i in J(j) was enforced
  bool complete = false;    ///< true: J(i) = all nodes but i, stored implicitly
  std::vector<std::vector<std::int32_t>> peers;  ///< sorted J(i); empty if complete

  std::int64_t degree(std::int64_t i) const {
    return complete ? n - 1 : static_cast<std::int64_t>(peers[i].size());
  }

  /// Sum of peer spins, by direct summation over J(i).
  /// `spins` holds +-1 per node; `spin_total` is the precomputed full-population
  /// sum, which turns the complete-graph case into O(1).  Both paths agree
  /// exactly because spins are integers.
  std::int64_t peer_spin_sum(std::int64_t i, const std::vector<std::int8_t>& spins,
                             std::int64_t spin_total) const {
    if (complete) return spin_total - spins[i];
    std::int64_t s = 0;
    for (std::int32_t j : peers[i]) s += spins[j];
    return s;
  }
};

// ==============================================================================
// Generators
// ==============================================================================

/// Complete graph: J(i) = all other nodes.  n >= 2.
inline PeerGraph fully_connected(std::int64_t n) {
  if (n < 2) throw validation_error("fully_connected requires n >= 2");
  PeerGraph g;
  g.n = n;
  g.directed = false;
  g.complete = true;
  return g;
}

/// 2k-regular ring: J(i) = { i-k, ..., i-1, i+1, ..., i+k } mod n.
/// Requires 1 <= k <= (n-1)/2 so that the 2k neighbours are distinct.
inline PeerGraph ring_lattice(std::int64_t n, std::int64_t k) {
  if (n < 2) throw validation_error("ring_lattice requires n >= 2");
  if (k < 1 || 2 * k > n - 1)
    throw validation_error("ring_lattice requires 1 <= k <= (n-1)/2");
  PeerGraph g;
  g.n = n;
  g.directed = false;
  g.peers.resize(n);
  for (std::int64_t i = 0; i < n; ++i) {
    auto& row = g.peers[i];
    row.reserve(2 * k);
    for (std::int64_t d = 1; d <= k; ++d) {
      row.push_back(static_cast<std::int32_t>((i + d) % n));
      row.push_back(static_cast<std::int32_t>((i - d + n) % n));
    }
    std::sort(row.begin(), row.end());
  }
  return g;
}

/// Independent uniform nu-subsets: J(i) is a uniform random subset of size nu
/// of the other nodes, drawn independently per node; symmetry not enforced.
inline PeerGraph random_directed(std::int64_t n, std::int64_t nu, std::uint64_t seed) {
  if (n < 2) throw validation_error("random_directed requires n >= 2");
  if (nu < 1 || nu > n - 1)
    throw validation_error("random_directed requires 1 <= nu <= n-1");
  PeerGraph g;
  g.n = n;
  g.directed = true;
  g.peers.resize(n);
  rng::Engine eng(seed);
  std::unordered_set<std::int32_t> chosen;
  for (std::int64_t i = 0; i < n; ++i) {
    chosen.clear();
    auto& row = g.peers[i];
    row.clear();
    row.reserve(nu);
    // Rejection sampling: cheap because nu << n in practice; still correct
    // (just slower) when nu approaches n-1.
    while (static_cast<std::int64_t>(row.size()) < nu) {
      std::int64_t j = static_cast<std::int64_t>(eng.below(static_cast<std::uint64_t>(n - 1)));
      if (j >= i) ++j;  // skip self while keeping the draw uniform over the others
      auto ins = chosen.insert(static_cast<std::int32_t>(j));
      if (ins.second) row.push_back(static_cast<std::int32_t>(j));
    }
    std::sort(row.begin(), row.end());
  }
  return g;
}

/// Random nu-regular undirected graph (no self-loops, no duplicate edges).
///
/// Pairing construction on nu stubs per node.  Stub pairs are drawn uniformly
/// and rejected individually when unsuitable (same node or already adjacent);
/// if the remaining stubs admit no suitable pair at all — detected by an
/// exhaustive scan once random draws keep failing — the whole graph is
/// restarted.  Pair-level rejection is essential: restarting the whole graph
/// on every collision would practically never terminate at nu = 6, n = 10^4.
inline PeerGraph random_regular_undirected(std::int64_t n, std::int64_t nu,
                                           std::uint64_t seed) {
  if (n < 2) throw validation_error("random_regular_undirected requires n >= 2");
  if (nu < 1 || nu >= n)
    throw validation_error("random_regular_undirected requires 1 <= nu < n");
  if ((n * nu) % 2 != 0)
    throw validation_error("random_regular_undirected requires n*nu even");

  constexpr int max_restarts = 1000;
  rng::Engine eng(seed);
  std::vector<std::unordered_set<std::int32_t>> adj(n);
  std::vector<std::int32_t> stubs;
  stubs.reserve(n * nu);

  for (int attempt = 0; attempt < max_restarts; ++attempt) {
    for (auto& s : adj) s.clear();
    stubs.clear();
    for (std::int64_t i = 0; i < n; ++i)
      for (std::int64_t d = 0; d < nu; ++d) stubs.push_back(static_cast<std::int32_t>(i));

    bool stuck = false;
    auto suitable = [&](std::int32_t u, std::int32_t v) {
      return u != v && adj[u].find(v) == adj[u].end();
    };
    auto take = [&](std::size_t pos) {  // swap-remove, order irrelevant
      std::int32_t v = stubs[pos];
      stubs[pos] = stubs.back();
      stubs.pop_back();
      return v;
    };

    while (!stubs.empty() && !stuck) {
      bool paired = false;
      for (int draw = 0; draw < 200 && !paired; ++draw) {
        std::size_t pi = static_cast<std::size_t>(eng.below(stubs.size()));
        std::size_t pj = static_cast<std::size_t>(eng.below(stubs.size() - 1));
        if (pj >= pi) ++pj;
        std::int32_t u = stubs[pi];
        std::int32_t v = stubs[pj];
        if (!suitable(u, v)) continue;
        adj[u].insert(v);
        adj[v].insert(u);
        // Remove the higher position first so the lower one stays valid.
        take(std::max(pi, pj));
        take(std::min(pi, pj));
        paired = true;
      }
      if (paired) continue;
      // Random draws keep colliding: enumerate the remaining pairs to tell a
      // tight corner from a dead end, and pick uniformly among the survivors.
      std::uint64_t count = 0;
      std::size_t si = 0, sj = 0;
      for (std::size_t x = 0; x + 1 < stubs.size(); ++x)
        for (std::size_t y = x + 1; y < stubs.size(); ++y)
          if (suitable(stubs[x], stubs[y])) {
            ++count;
            if (eng.below(count) == 0) { si = x; sj = y; }
          }
      if (count == 0) {
        stuck = true;  // dead end: restart the whole construction
        break;
      }
      adj[stubs[si]].insert(stubs[sj]);
      adj[stubs[sj]].insert(stubs[si]);
      take(std::max(si, sj));
      take(std::min(si, sj));
    }
    if (!stubs.empty()) continue;  // restart

    PeerGraph g;
    g.n = n;
    g.directed = false;
    g.peers.resize(n);
    for (std::int64_t i = 0; i < n; ++i) {
      g.peers[i].assign(adj[i].begin(), adj[i].end());
      std::sort(g.peers[i].begin(), g.peers[i].end());
    }
    return g;
  }
  throw validation_error("random_regular_undirected: construction failed after max retries");
}

// ==============================================================================
// Validation
// ==============================================================================

/// Checks the PeerGraph invariants; violations are reported, not thrown.
inline std::vector<std::string> validate_graph(const PeerGraph& g) {
  std::vector<std::string> violations;
  if (g.n < 2) violations.push_back("graph must have at least 2 nodes");
  if (g.complete) {
    if (!g.peers.empty()) violations.push_back("complete graph must not store peer lists");
    return violations;
  }
  if (static_cast<std::int64_t>(g.peers.size()) != g.n) {
    violations.push_back("peer-list count differs from node count");
    return violations;
  }
  for (std::int64_t i = 0; i < g.n; ++i) {
    const auto& row = g.peers[i];
    if (row.empty()) violations.push_back("lonely trader at node " + std::to_string(i));
    if (!std::is_sorted(row.begin(), row.end()))
      violations.push_back("unsorted peer list at node " + std::to_string(i));
    for (std::size_t k = 0; k < row.size(); ++k) {
      std::int64_t j = row[k];
      if (j < 0 || j >= g.n)
        violations.push_back("peer index out of range at node " + std::to_string(i));
      else if (j == i)
        violations.push_back("self-loop at node " + std::to_string(i));
      if (k > 0 && row[k] == row[k - 1])
        violations.push_back("duplicate peer " + std::to_string(j) + " at node " +
                             std::to_string(i));
    }
  }
  if (!g.directed) {
    for (std::int64_t i = 0; i < g.n; ++i)
      for (std::int32_t j : g.peers[i])
        if (j >= 0 && j < g.n &&
            !std::binary_search(g.peers[j].begin(), g.peers[j].end(),
                                static_cast<std::int32_t>(i)))
          violations.push_back("asymmetric bond " + std::to_string(j) + "->" +
                               std::to_string(i) + " in undirected graph");
  }
  return violations;
}

// ==============================================================================
// Edge-list serialization
// ==============================================================================
// Format: first line "n directed|undirected", then one "i j" line per
// influence bond j -> i (i.e. j is a peer of i).

inline void write_edge_list(std::ostream& out, const PeerGraph& g) {
  out << g.n << ' ' << (g.directed ? "directed" : "undirected") << '\n';
  for (std::int64_t i = 0; i < g.n; ++i) {
    if (g.complete) {
      for (std::int64_t j = 0; j < g.n; ++j)
        if (j != i) out << i << ' ' << j << '\n';
    } else {
      for (std::int32_t j : g.peers[i]) out << i << ' ' << j << '\n';
    }
  }
}

inline PeerGraph read_edge_list(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw io_error("edge list: missing header line");
  std::istringstream hs(header);
  std::int64_t n = 0;
  std::string kind;
  if (!(hs >> n >> kind) || (kind != "directed" && kind != "undirected"))
    throw validation_error("edge list: header must be \"n directed|undirected\"");
  if (n < 2) throw validation_error("edge list: node count must be >= 2");
  PeerGraph g;
  g.n = n;
  g.directed = (kind == "directed");
  g.peers.resize(n);
  std::int64_t i = 0, j = 0;
  while (in >> i >> j) {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw validation_error("edge list: node index out of range");
    g.peers[i].push_back(static_cast<std::int32_t>(j));
  }
  for (auto& row : g.peers) std::sort(row.begin(), row.end());
  return g;
}

// ==============================================================================
// GraphSpec
// ==============================================================================

/// Declarative description of a peer topology, resolved to a PeerGraph by
/// build_graph.  Lets ensemble runs and config files name a topology without
/// materializing it.
struct FullyConnectedSpec {};
struct RandomRegularSpec {
  std::int64_t nu = 6;  ///< undirected degree
};
struct RandomDirectedSpec {
  std::int64_t nu = 6;  ///< out-neighbourhood size |J(i)|
};
struct RingSpec {
  std::int64_t k = 3;  ///< neighbours on each side (degree 2k)
};
using GraphSpec =
    std::variant<FullyConnectedSpec, RandomRegularSpec, RandomDirectedSpec, RingSpec>;

inline PeerGraph build_graph(const GraphSpec& spec, std::int64_t n, std::uint64_t seed) {
  if (std::holds_alternative<FullyConnectedSpec>(spec)) return fully_connected(n);
  if (const auto* rr = std::get_if<RandomRegularSpec>(&spec))
    return random_regular_undirected(n, rr->nu, seed);
  if (const auto* rd = std::get_if<RandomDirectedSpec>(&spec))
    return random_directed(n, rd->nu, seed);
  return ring_lattice(n, std::get<RingSpec>(spec).k);
}

inline std::string graph_spec_label(const GraphSpec& spec) {
  if (std::holds_alternative<FullyConnectedSpec>(spec)) return "fully_connected";
  if (const auto* rr = std::get_if<RandomRegularSpec>(&spec))
    return "random_regular(nu=" + std::to_string(rr->nu) + ")";
  if (const auto* rd = std::get_if<RandomDirectedSpec>(&spec))
    return "random_directed(nu=" + std::to_string(rd->nu) + ")";
  return "ring(k=" + std::to_string(std::get<RingSpec>(spec).k) + ")";
}

}  // namespace hiam
