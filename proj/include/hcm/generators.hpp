#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hcm/errors.hpp"
#include "hcm/graph.hpp"

namespace hcm {

// Named reference graphs -----------------------------------------------------

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw std::invalid_argument("cycle needs n >= 3");
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i) e.emplace_back(i, static_cast<Vertex>((i + 1) % n));
  return Graph::from_edges(n, e);
}

inline Graph path_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  return Graph::from_edges(n, e);
}

inline Graph complete_graph(std::size_t n) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

inline Graph empty_graph(std::size_t n) { return Graph(n); }

/// K_{1,leaves} with centre 0.
inline Graph star_graph(std::size_t leaves) {
  std::vector<Edge> e;
  for (Vertex i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph::from_edges(leaves + 1, e);
}

inline Graph complete_bipartite(std::size_t a, std::size_t b) {
  std::vector<Edge> e;
  for (Vertex i = 0; i < a; ++i)
    for (Vertex j = 0; j < b; ++j) e.emplace_back(i, static_cast<Vertex>(a + j));
  return Graph::from_edges(a + b, e);
}

/// Outer 5-cycle 0..4, inner pentagram 5..9, spokes i ~ i+5.
inline Graph petersen_graph() {
  std::vector<Edge> e;
  for (Vertex i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
    e.emplace_back(i, 5 + i);
  }
  return Graph::from_edges(10, e);
}

/// Kneser graph K(n, k): k-subsets of {0..n-1}, adjacent when disjoint.
/// Vertices are the subsets in increasing order of their bit masks.
inline Graph kneser_graph(std::size_t n, std::size_t k) {
  if (n > 30 || k == 0 || k > n) throw std::invalid_argument("kneser needs 1 <= k <= n <= 30");
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t m = 0; m < (1u << n); ++m)
    if (static_cast<std::size_t>(std::popcount(m)) == k) subsets.push_back(m);
  std::vector<Edge> e;
  for (Vertex i = 0; i < subsets.size(); ++i)
    for (Vertex j = i + 1; j < subsets.size(); ++j)
      if ((subsets[i] & subsets[j]) == 0) e.emplace_back(i, j);
  return Graph::from_edges(subsets.size(), e);
}

/// G(n, p): each pair independently with probability p.
inline Graph erdos_renyi(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("edge probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> e;
  for (Vertex i = 0; i < n; ++i)
    for (Vertex j = i + 1; j < n; ++j)
      if (coin(rng)) e.emplace_back(i, j);
  return Graph::from_edges(n, e);
}

/// Vertices of h are shifted by g.order().
inline Graph disjoint_union(const Graph& g, const Graph& h) {
  auto e = g.edges();
  const auto shift = static_cast<Vertex>(g.order());
  for (auto [u, v] : h.edges()) e.emplace_back(u + shift, v + shift);
  return Graph::from_edges(g.order() + h.order(), e);
}

// Random regular graphs --------------------------------------------------------

struct RegularOptions {
  /// Full restarts of the pairing before giving up.
  std::size_t attempts = 10000;
};

namespace detail {

// One pass of the pairing model that refuses loops and repeated edges pair by
// pair (Steger-Wormald style). Returns false when it paints itself into a corner.
inline bool try_pairing(std::size_t n, std::size_t d, std::mt19937_64& rng, std::vector<Edge>& out) {
  std::vector<Vertex> stubs;
  stubs.reserve(n * d);
  for (Vertex v = 0; v < n; ++v)
    for (std::size_t k = 0; k < d; ++k) stubs.push_back(v);
  std::vector<std::set<Vertex>> nbrs(n);
  out.clear();
  auto ok = [&](Vertex a, Vertex b) { return a != b && !nbrs[a].count(b); };
  while (!stubs.empty()) {
    bool paired = false;
    for (int tries = 0; tries < 64 && !paired; ++tries) {
      std::uniform_int_distribution<std::size_t> pick(0, stubs.size() - 1);
      std::size_t i = pick(rng), j = pick(rng);
      if (i == j || !ok(stubs[i], stubs[j])) continue;
      if (i < j) std::swap(i, j);  // remove the larger index first
      const Vertex a = stubs[i], b = stubs[j];
      stubs[i] = stubs.back();
      stubs.pop_back();
      stubs[j] = stubs.back();
      stubs.pop_back();
      nbrs[a].insert(b);
      nbrs[b].insert(a);
      out.emplace_back(std::min(a, b), std::max(a, b));
      paired = true;
    }
    if (paired) continue;
    // Random probing failed; check whether any admissible pair is left at all.
    std::vector<std::pair<std::size_t, std::size_t>> admissible;
    for (std::size_t i = 0; i < stubs.size(); ++i)
      for (std::size_t j = i + 1; j < stubs.size(); ++j)
        if (ok(stubs[i], stubs[j])) admissible.emplace_back(i, j);
    if (admissible.empty()) return false;
    std::uniform_int_distribution<std::size_t> pick(0, admissible.size() - 1);
    auto [j, i] = admissible[pick(rng)];
    const Vertex a = stubs[i], b = stubs[j];
    stubs[i] = stubs.back();
    stubs.pop_back();
    stubs[j] = stubs.back();
    stubs.pop_back();
    nbrs[a].insert(b);
    nbrs[b].insert(a);
    out.emplace_back(std::min(a, b), std::max(a, b));
  }
  return true;
}

inline void check_regular_params(std::size_t n, std::size_t d) {
  if (d >= n && !(n == 0 && d == 0)) throw std::invalid_argument("regular graph needs d < n");
  if ((n * d) % 2) throw std::invalid_argument("regular graph needs n*d even");
}

}  // namespace detail

/// Simple d-regular graph from the configuration (pairing) model. Pairs that
/// would create a loop or a repeated edge are refused as they are drawn; a
/// dead end restarts the pairing, up to `opts.attempts` times.
inline Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed, const RegularOptions& opts = {}) {
  detail::check_regular_params(n, d);
  std::mt19937_64 rng(seed);
  std::vector<Edge> edges;
  for (std::size_t attempt = 0; attempt < opts.attempts; ++attempt)
    if (detail::try_pairing(n, d, rng, edges)) return Graph::from_edges(n, edges);
  throw BudgetExceeded("random_regular: no simple pairing within " + std::to_string(opts.attempts) + " attempts");
}

struct TriangleFreeOptions {
  /// Restart-rejection is used when n*d is at most this; switching otherwise.
  std::size_t rejection_limit = 200;
  std::size_t attempts = 10000;
  std::size_t switch_budget = 1000000;
};

namespace detail {

inline std::uint64_t count_triangles(const std::vector<std::set<Vertex>>& adj) {
  std::uint64_t t = 0;
  for (Vertex u = 0; u < adj.size(); ++u)
    for (Vertex v : adj[u])
      if (v > u)
        for (Vertex w : adj[v])
          if (w > v && adj[u].count(w)) ++t;
  return t;
}

// Triangles with at least one corner in `touch`.
inline std::uint64_t triangles_touching(const std::vector<std::set<Vertex>>& adj, const std::vector<Vertex>& touch) {
  std::set<std::array<Vertex, 3>> seen;
  for (Vertex a : touch)
    for (Vertex b : adj[a])
      for (Vertex c : adj[b])
        if (c != a && adj[a].count(c)) {
          std::array<Vertex, 3> t{a, b, c};
          std::sort(t.begin(), t.end());
          seen.insert(t);
        }
  return seen.size();
}

}  // namespace detail

/// d-regular graph with no triangles. Small instances (n*d <= 200) use restart
/// rejection on random_regular; larger ones, and small ones whose rejection
/// budget runs out, start from a random regular graph
/// and apply double-edge switches that never increase the triangle count and
/// always break some triangle edge. The result is not uniformly distributed
/// over triangle-free d-regular graphs.
inline Graph triangle_free_regular(std::size_t n, std::size_t d, std::uint64_t seed,
                                   const TriangleFreeOptions& opts = {}) {
  detail::check_regular_params(n, d);
  if (2 * d > n) throw std::invalid_argument("no triangle-free d-regular graph on n vertices exists when d > n/2");
  std::mt19937_64 rng(seed);
  if (n * d <= opts.rejection_limit) {
    std::vector<Edge> edges;
    for (std::size_t attempt = 0; attempt < opts.attempts; ++attempt) {
      if (!detail::try_pairing(n, d, rng, edges)) continue;
      Graph g = Graph::from_edges(n, edges);
      if (audit(g).triangle_free()) return g;
    }
    // Rejection exhausted (triangle-free pairings get rare as d grows); repair by switching.
  }

  Graph start = random_regular(n, d, rng());
  std::vector<std::set<Vertex>> adj(n);
  for (auto [u, v] : start.edges()) {
    adj[u].insert(v);
    adj[v].insert(u);
  }
  std::uint64_t triangles = detail::count_triangles(adj);
  std::vector<Edge> edges = start.edges();
  std::uniform_int_distribution<std::size_t> pick_edge(0, edges.size() - 1);
  for (std::size_t s = 0; s < opts.switch_budget && triangles > 0; ++s) {
    // Pick a triangle edge {u, v} and any other edge {x, y}; rewire to {u, x}, {v, y}.
    std::size_t i = pick_edge(rng);
    auto [u, v] = edges[i];
    bool in_triangle = false;
    for (Vertex w : adj[u])
      if (adj[v].count(w)) { in_triangle = true; break; }
    if (!in_triangle) continue;
    std::size_t j = pick_edge(rng);
    if (j == i) continue;
    auto [x, y] = edges[j];
    if (rng() & 1) std::swap(x, y);
    if (x == u || x == v || y == u || y == v) continue;
    if (adj[u].count(x) || adj[v].count(y)) continue;
    const std::vector<Vertex> touch{u, v, x, y};
    const auto before = detail::triangles_touching(adj, touch);
    adj[u].erase(v); adj[v].erase(u); adj[x].erase(y); adj[y].erase(x);
    adj[u].insert(x); adj[x].insert(u); adj[v].insert(y); adj[y].insert(v);
    const auto after = detail::triangles_touching(adj, touch);
    if (after <= before) {
      triangles = triangles - before + after;
      edges[i] = {std::min(u, x), std::max(u, x)};
      edges[j] = {std::min(v, y), std::max(v, y)};
    } else {
      adj[u].erase(x); adj[x].erase(u); adj[v].erase(y); adj[y].erase(v);
      adj[u].insert(v); adj[v].insert(u); adj[x].insert(y); adj[y].insert(x);
    }
  }
  if (triangles > 0) throw BudgetExceeded("triangle_free_regular: switch budget exhausted");
  return Graph::from_edges(n, edges);
}

// Constructions -----------------------------------------------------------------

/// Replaces each vertex v by a b-clique {(v, i)} labelled v*b + i, and each
/// edge by a complete bipartite join. A d-regular input gives a
/// (b(d+1) - 1)-regular output.
inline Graph clique_blowup(const Graph& g, std::size_t b) {
  if (b < 1) throw std::invalid_argument("blow-up factor must be >= 1");
  std::vector<Edge> e;
  auto label = [b](Vertex v, std::size_t i) { return static_cast<Vertex>(v * b + i); };
  for (Vertex v = 0; v < g.order(); ++v)
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = i + 1; j < b; ++j) e.emplace_back(label(v, i), label(v, j));
  for (auto [u, v] : g.edges())
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < b; ++j) e.emplace_back(label(u, i), label(v, j));
  return Graph::from_edges(g.order() * b, e);
}

struct BadVertexDeletion {
  Graph remainder;                 ///< induced on V \ bad
  std::vector<Vertex> label_map;   ///< remainder vertex -> original vertex
  std::vector<Vertex> bad;         ///< vertices in more than the threshold of triangles
  double threshold = 0;            ///< eps^-2 Delta^2 / f
};

/// Removes every vertex lying in more than eps^-2 Delta^2 / f triangles.
inline BadVertexDeletion bad_vertex_deletion(const Graph& g, double f, double eps) {
  if (!(f > 0) || !(eps > 0)) throw std::invalid_argument("f and eps must be positive");
  const auto a = audit(g);
  if (a.max_degree < 1) throw std::domain_error("bad_vertex_deletion needs maximum degree >= 1");
  BadVertexDeletion out;
  const double d = static_cast<double>(a.max_degree);
  out.threshold = d * d / (eps * eps * f);
  std::vector<Vertex> good;
  for (Vertex v = 0; v < g.order(); ++v)
    (static_cast<double>(a.nbhd_edges[v]) > out.threshold ? out.bad : good).push_back(v);
  auto sub = induced_subgraph(g, good);
  out.remainder = std::move(sub.graph);
  out.label_map = std::move(sub.label_map);
  return out;
}

// Spec-driven construction ------------------------------------------------------

enum class GenKind { random_regular, triangle_free_regular, blowup, cycle, complete, petersen, kneser, erdos_renyi };

inline GenKind parse_gen_kind(const std::string& s) {
  if (s == "random-regular") return GenKind::random_regular;
  if (s == "triangle-free-regular") return GenKind::triangle_free_regular;
  if (s == "blowup") return GenKind::blowup;
  if (s == "cycle") return GenKind::cycle;
  if (s == "complete") return GenKind::complete;
  if (s == "petersen") return GenKind::petersen;
  if (s == "kneser") return GenKind::kneser;
  if (s == "erdos-renyi") return GenKind::erdos_renyi;
  throw std::invalid_argument("unknown graph kind '" + s + "'");
}

inline std::string to_string(GenKind k) {
  switch (k) {
    case GenKind::random_regular: return "random-regular";
    case GenKind::triangle_free_regular: return "triangle-free-regular";
    case GenKind::blowup: return "blowup";
    case GenKind::cycle: return "cycle";
    case GenKind::complete: return "complete";
    case GenKind::petersen: return "petersen";
    case GenKind::kneser: return "kneser";
    case GenKind::erdos_renyi: return "erdos-renyi";
  }
  return "?";
}

struct GenSpec {
  GenKind kind = GenKind::cycle;
  std::size_t n = 0;
  std::size_t d = 0;
  std::size_t b = 1;
  std::size_t k = 0;
  double p = 0;
  std::uint64_t seed = 0;
  /// Base graph for blowup; a cycle on n vertices when absent.
  std::optional<Graph> base;
};

inline Graph generate(const GenSpec& s) {
  switch (s.kind) {
    case GenKind::random_regular: return random_regular(s.n, s.d, s.seed);
    case GenKind::triangle_free_regular: return triangle_free_regular(s.n, s.d, s.seed);
    case GenKind::blowup: return clique_blowup(s.base ? *s.base : cycle_graph(s.n), s.b);
    case GenKind::cycle: return cycle_graph(s.n);
    case GenKind::complete: return complete_graph(s.n);
    case GenKind::petersen: return petersen_graph();
    case GenKind::kneser: return kneser_graph(s.n, s.k);
    case GenKind::erdos_renyi: return erdos_renyi(s.n, s.p, s.seed);
  }
  throw std::logic_error("unhandled graph kind");
}

}  // namespace hcm
