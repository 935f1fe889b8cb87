#pragma once

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hcm/errors.hpp"

namespace hcm {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Immutable simple undirected graph on vertices 0..n-1 with sorted
/// adjacency lists.
class Graph {
 public:
  Graph() = default;

  /// Edgeless graph on n vertices.
  explicit Graph(std::size_t n) : adjacency_(n) {}

  /// Builds a graph from an edge list. Throws std::invalid_argument on an
  /// out-of-range endpoint, a self-loop or a repeated edge.
  static Graph from_edges(std::size_t n, std::span<const Edge> edges) {
    Graph g(n);
    for (const auto& [u, v] : edges) {
      if (u >= n || v >= n)
        throw std::invalid_argument("edge {" + std::to_string(u) + "," + std::to_string(v) +
                                    "} has an endpoint >= n = " + std::to_string(n));
      if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
      g.adjacency_[u].push_back(v);
      g.adjacency_[v].push_back(u);
    }
    for (Vertex v = 0; v < n; ++v) {
      auto& nb = g.adjacency_[v];
      std::sort(nb.begin(), nb.end());
      if (auto dup = std::adjacent_find(nb.begin(), nb.end()); dup != nb.end())
        throw std::invalid_argument("duplicate edge {" + std::to_string(std::min(v, *dup)) + "," +
                                    std::to_string(std::max(v, *dup)) + "}");
    }
    g.edge_count_ = edges.size();
    return g;
  }

  static Graph from_edges(std::size_t n, std::initializer_list<Edge> edges) {
    return from_edges(n, std::span<const Edge>(edges.begin(), edges.size()));
  }

  std::size_t order() const noexcept { return adjacency_.size(); }
  std::size_t size() const noexcept { return edge_count_; }
  bool empty() const noexcept { return adjacency_.empty(); }

  std::span<const Vertex> neighbours(Vertex v) const { return adjacency_.at(v); }
  std::size_t degree(Vertex v) const { return adjacency_.at(v).size(); }

  std::size_t max_degree() const noexcept {
    std::size_t d = 0;
    for (const auto& nb : adjacency_) d = std::max(d, nb.size());
    return d;
  }

  bool adjacent(Vertex u, Vertex v) const {
    const auto& nb = adjacency_.at(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Edges as (u, v) with u < v, in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < order(); ++u)
      for (Vertex v : adjacency_[u])
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  /// Adjacency as one bit mask per vertex. Requires order() <= 64.
  std::vector<std::uint64_t> adjacency_masks() const {
    if (order() > 64) throw CapExceeded("bit-mask adjacency needs n <= 64, got " + std::to_string(order()));
    std::vector<std::uint64_t> masks(order(), 0);
    for (Vertex v = 0; v < order(); ++v)
      for (Vertex u : adjacency_[v]) masks[v] |= std::uint64_t{1} << u;
    return masks;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::vector<Vertex>> adjacency_;
  std::size_t edge_count_ = 0;
};

enum class GraphFormat { edge_list, json };

namespace detail {

inline std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

inline bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); });
}

// Reads exactly `count` unsigned integers from a line; anything else is malformed.
inline std::vector<std::uint64_t> read_uints(const std::string& line, std::size_t count, std::size_t lineno) {
  std::istringstream in(line);
  std::vector<std::uint64_t> out;
  std::string token;
  while (in >> token) {
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
      throw FormatError("expected a non-negative integer, got '" + token + "'", lineno);
    out.push_back(value);
  }
  if (out.size() != count)
    throw FormatError("expected " + std::to_string(count) + " integers, got " + std::to_string(out.size()), lineno);
  return out;
}

inline Graph build_checked(std::size_t n, const std::vector<Edge>& edges, const std::vector<std::size_t>& lines) {
  std::vector<std::vector<Vertex>> seen(n);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    auto [u, v] = edges[i];
    if (u >= n || v >= n)
      throw FormatError("vertex index " + std::to_string(std::max(u, v)) + " >= n = " + std::to_string(n), lines[i]);
    if (u == v) throw FormatError("self-loop at vertex " + std::to_string(u), lines[i]);
    auto a = std::min(u, v), b = std::max(u, v);
    if (std::find(seen[a].begin(), seen[a].end(), b) != seen[a].end())
      throw FormatError("duplicate edge {" + std::to_string(a) + "," + std::to_string(b) + "}", lines[i]);
    seen[a].push_back(b);
  }
  return Graph::from_edges(n, edges);
}

}  // namespace detail

/// Parses the edge-list format: a header line "n m" followed by m lines "u v".
/// Accepts LF or CRLF; blank lines are ignored.
inline Graph read_edge_list(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::size_t header_line = 0;
  std::uint64_t n = 0, m = 0;
  bool have_header = false;
  std::vector<Edge> edges;
  std::vector<std::size_t> lines;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::strip_cr(std::move(line));
    if (detail::blank(line)) continue;
    if (!have_header) {
      auto hdr = detail::read_uints(line, 2, lineno);
      n = hdr[0];
      m = hdr[1];
      if (n > std::numeric_limits<Vertex>::max()) throw FormatError("vertex count too large", lineno);
      have_header = true;
      header_line = lineno;
      continue;
    }
    if (edges.size() == m) throw FormatError("more edge lines than the declared m = " + std::to_string(m), lineno);
    auto uv = detail::read_uints(line, 2, lineno);
    if (uv[0] >= n || uv[1] >= n)
      throw FormatError("vertex index " + std::to_string(std::max(uv[0], uv[1])) + " >= n = " + std::to_string(n),
                        lineno);
    edges.emplace_back(static_cast<Vertex>(uv[0]), static_cast<Vertex>(uv[1]));
    lines.push_back(lineno);
  }
  if (!have_header) throw FormatError("missing header line \"n m\"", 0);
  if (edges.size() != m)
    throw FormatError("declared m = " + std::to_string(m) + " but found " + std::to_string(edges.size()) + " edges",
                      header_line);
  return detail::build_checked(static_cast<std::size_t>(n), edges, lines);
}

/// Parses {"n": int, "edges": [[u, v], ...]}. Line numbers in errors refer to
/// the edge's position in the array (1-based).
inline Graph read_json_graph(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what(), 0);
  }
  if (!doc.is_object() || !doc.contains("n") || !doc["n"].is_number_unsigned())
    throw FormatError("JSON graph needs a non-negative integer field \"n\"", 0);
  const auto n = doc["n"].get<std::uint64_t>();
  if (n > std::numeric_limits<Vertex>::max()) throw FormatError("vertex count too large", 0);
  std::vector<Edge> edges;
  std::vector<std::size_t> index;
  if (doc.contains("edges")) {
    const auto& arr = doc["edges"];
    if (!arr.is_array()) throw FormatError("\"edges\" must be an array", 0);
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& e = arr[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned())
        throw FormatError("edge must be a pair of non-negative integers", i + 1);
      const auto u = e[0].get<std::uint64_t>(), v = e[1].get<std::uint64_t>();
      if (u >= n || v >= n)
        throw FormatError("vertex index " + std::to_string(std::max(u, v)) + " >= n = " + std::to_string(n), i + 1);
      edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
      index.push_back(i + 1);
    }
  }
  return detail::build_checked(static_cast<std::size_t>(n), edges, index);
}

inline Graph load_graph(std::istream& in, GraphFormat format) {
  return format == GraphFormat::json ? read_json_graph(in) : read_edge_list(in);
}

inline Graph load_graph(std::string_view text, GraphFormat format) {
  std::istringstream in{std::string(text)};
  return load_graph(in, format);
}

/// Loads from a file; the format is JSON when the path ends in ".json".
inline Graph load_graph_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return load_graph(in, json ? GraphFormat::json : GraphFormat::edge_list);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << g.order() << ' ' << g.size() << '\n';
  for (auto [u, v] : g.edges()) out << u << ' ' << v << '\n';
}

inline nlohmann::json graph_to_json(const Graph& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (auto [u, v] : g.edges()) edges.push_back({u, v});
  return {{"n", g.order()}, {"edges", std::move(edges)}};
}

struct InducedSubgraph {
  Graph graph;
  /// label_map[i] is the vertex of the parent graph that became vertex i.
  std::vector<Vertex> label_map;
};

/// Subgraph induced by `vertices` (treated as a set), relabelled 0..k-1 in
/// increasing order of the original labels.
inline InducedSubgraph induced_subgraph(const Graph& g, std::span<const Vertex> vertices) {
  std::vector<Vertex> keep(vertices.begin(), vertices.end());
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  if (!keep.empty() && keep.back() >= g.order())
    throw std::out_of_range("vertex " + std::to_string(keep.back()) + " not in graph of order " +
                            std::to_string(g.order()));
  constexpr Vertex absent = std::numeric_limits<Vertex>::max();
  std::vector<Vertex> relabel(g.order(), absent);
  for (Vertex i = 0; i < keep.size(); ++i) relabel[keep[i]] = i;
  std::vector<Edge> edges;
  for (Vertex i = 0; i < keep.size(); ++i)
    for (Vertex u : g.neighbours(keep[i]))
      if (relabel[u] != absent && relabel[u] > i) edges.emplace_back(i, relabel[u]);
  return {Graph::from_edges(keep.size(), edges), std::move(keep)};
}

inline InducedSubgraph induced_subgraph(const Graph& g, std::initializer_list<Vertex> vertices) {
  return induced_subgraph(g, std::span<const Vertex>(vertices.begin(), vertices.size()));
}

/// Local triangle-sparsity statistics of a graph.
struct SparsityAudit {
  std::size_t order = 0;
  std::size_t edges = 0;
  std::size_t max_degree = 0;
  /// Edges spanned by N(v), i.e. triangles through v.
  std::vector<std::uint64_t> nbhd_edges;
  std::uint64_t max_nbhd_edges = 0;
  std::uint64_t triangle_total = 0;
  /// Largest f with every neighbourhood spanning at most Delta^2/f edges;
  /// Delta^2 + 1 when triangle-free (1 for the edgeless case, Delta = 0).
  double implied_f = 1.0;

  bool triangle_free() const noexcept { return triangle_total == 0; }
};

inline SparsityAudit audit(const Graph& g) {
  SparsityAudit a;
  a.order = g.order();
  a.edges = g.size();
  a.max_degree = g.max_degree();
  a.nbhd_edges.assign(g.order(), 0);
  std::uint64_t sum = 0;
  for (Vertex v = 0; v < g.order(); ++v) {
    auto nv = g.neighbours(v);
    std::uint64_t twice = 0;
    for (Vertex u : nv) {
      auto nu = g.neighbours(u);
      // |N(u) ∩ N(v)| by merging sorted lists.
      auto i = nv.begin();
      auto j = nu.begin();
      while (i != nv.end() && j != nu.end()) {
        if (*i < *j) ++i;
        else if (*j < *i) ++j;
        else { ++twice; ++i; ++j; }
      }
    }
    a.nbhd_edges[v] = twice / 2;
    a.max_nbhd_edges = std::max(a.max_nbhd_edges, a.nbhd_edges[v]);
    sum += a.nbhd_edges[v];
  }
  a.triangle_total = sum / 3;
  const double d2 = static_cast<double>(a.max_degree) * static_cast<double>(a.max_degree);
  a.implied_f = a.max_nbhd_edges > 0 ? d2 / static_cast<double>(a.max_nbhd_edges) : d2 + 1.0;
  return a;
}

}  // namespace hcm
