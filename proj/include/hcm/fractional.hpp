#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "hcm/errors.hpp"
#include "hcm/fugacity.hpp"
#include "hcm/graph.hpp"
#include "hcm/hardcore_exact.hpp"
#include "hcm/rational.hpp"
#include "hcm/simplex.hpp"

namespace hcm {

using VertexSet = std::vector<Vertex>;

inline constexpr std::size_t default_mis_cap = 24;

namespace detail {

inline VertexSet mask_to_set(std::uint64_t mask) {
  VertexSet s;
  for_each_bit(mask, [&](Vertex v) { s.push_back(v); });
  return s;
}

inline std::uint64_t low_mask(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

// Bron-Kerbosch with pivoting on the complement graph: cliques there are
// independent sets here.
inline void bron_kerbosch(const std::vector<std::uint64_t>& free_of, std::uint64_t r, std::uint64_t p,
                          std::uint64_t x, std::vector<std::uint64_t>& out) {
  if (!p && !x) {
    out.push_back(r);
    return;
  }
  Vertex pivot = 0;
  int best = -1;
  for_each_bit(p | x, [&](Vertex u) {
    const int c = std::popcount(p & free_of[u]);
    if (c > best) {
      best = c;
      pivot = u;
    }
  });
  for_each_bit(p & ~free_of[pivot], [&](Vertex v) {
    const std::uint64_t bit = std::uint64_t{1} << v;
    bron_kerbosch(free_of, r | bit, p & free_of[v], x & free_of[v], out);
    p &= ~bit;
    x |= bit;
  });
}

}  // namespace detail

/// Inclusion-maximal independent sets as bit masks, sorted by their sorted
/// vertex lists.
inline std::vector<std::uint64_t> maximal_independent_masks(const Graph& g, std::size_t cap = default_mis_cap) {
  const std::size_t n = g.order();
  if (n > cap || n > 64)
    throw CapExceeded("maximal independent set enumeration is capped at n = " + std::to_string(std::min<std::size_t>(cap, 64)) +
                      " (graph has n = " + std::to_string(n) + ")");
  std::vector<std::uint64_t> out;
  if (n == 0) return out;
  const auto adj = g.adjacency_masks();
  const std::uint64_t all = detail::low_mask(n);
  std::vector<std::uint64_t> free_of(n);
  for (Vertex v = 0; v < n; ++v) free_of[v] = all & ~adj[v] & ~(std::uint64_t{1} << v);
  detail::bron_kerbosch(free_of, 0, all, 0, out);
  std::sort(out.begin(), out.end(),
            [](std::uint64_t a, std::uint64_t b) { return detail::mask_to_set(a) < detail::mask_to_set(b); });
  return out;
}

inline std::vector<VertexSet> maximal_independent_sets(const Graph& g, std::size_t cap = default_mis_cap) {
  std::vector<VertexSet> sets;
  for (auto m : maximal_independent_masks(g, cap)) sets.push_back(detail::mask_to_set(m));
  return sets;
}

struct ColoringAtom {
  VertexSet set;
  Rational weight;
};

struct FractionalColoring {
  std::vector<ColoringAtom> atoms;  ///< positive-weight atoms only
  Rational objective;
};

struct FractionalChromatic {
  Rational value;
  FractionalColoring coloring;
  /// Optimal dual: y_v >= 0 with sum over every independent set <= 1 and
  /// sum_v y_v = value.
  std::vector<Rational> vertex_weights;
  std::size_t columns = 0;
  std::size_t pivots = 0;
};

struct FractionalOptions {
  std::size_t max_vertices = default_mis_cap;
  /// Largest number of maximal independent sets admitted as LP columns.
  std::size_t max_columns = 20000;
};

/// Exact fractional chromatic number: min sum_I w_I subject to
/// sum_{I ∋ v} w_I >= 1 for every v, w >= 0.
///
/// Only maximal independent sets are used as columns. This loses nothing:
/// weight on a non-maximal set can be moved to any maximal superset without
/// changing the objective or uncovering a vertex.
///
/// The returned colouring and vertex weights are checked exactly before
/// returning (primal and dual feasibility, equal objectives); any failure is
/// a solver bug and throws std::logic_error.
inline FractionalChromatic chif_exact(const Graph& g, const FractionalOptions& opt = {}) {
  const std::size_t n = g.order();
  FractionalChromatic out;
  if (n == 0) return out;
  const auto masks = maximal_independent_masks(g, opt.max_vertices);
  if (masks.size() > opt.max_columns)
    throw CapExceeded("covering LP has " + std::to_string(masks.size()) + " columns (cap " +
                      std::to_string(opt.max_columns) + ")");
  const std::size_t m = masks.size();
  out.columns = m;

  // Equality form: A w - s = 1 with surplus s >= 0.
  std::vector<std::vector<Rational>> A(n, std::vector<Rational>(m + n, Rational(0)));
  for (std::size_t j = 0; j < m; ++j) detail::for_each_bit(masks[j], [&](Vertex v) { A[v][j] = 1; });
  for (std::size_t v = 0; v < n; ++v) A[v][m + v] = -1;
  std::vector<Rational> b(n, Rational(1));
  std::vector<Rational> c(m + n, Rational(0));
  for (std::size_t j = 0; j < m; ++j) c[j] = 1;

  const auto lp = solve_lp(std::move(A), std::move(b), std::move(c));
  if (lp.status != LpStatus::optimal) throw std::logic_error("covering LP did not reach an optimum");
  out.pivots = lp.pivots;
  out.value = lp.objective;

  std::vector<Rational> cover(n, Rational(0));
  for (std::size_t j = 0; j < m; ++j) {
    if (lp.x[j] < 0) throw std::logic_error("covering LP returned a negative weight");
    if (lp.x[j] == 0) continue;
    out.coloring.atoms.push_back({detail::mask_to_set(masks[j]), lp.x[j]});
    out.coloring.objective += lp.x[j];
    detail::for_each_bit(masks[j], [&](Vertex v) { cover[v] += lp.x[j]; });
  }
  for (std::size_t v = 0; v < n; ++v)
    if (cover[v] < 1) throw std::logic_error("covering LP solution leaves a vertex uncovered");

  out.vertex_weights = lp.dual;
  Rational dual_total = 0;
  for (const auto& y : out.vertex_weights) {
    if (y < 0) throw std::logic_error("dual vertex weight is negative");
    dual_total += y;
  }
  for (auto mask : masks) {
    Rational load = 0;
    detail::for_each_bit(mask, [&](Vertex v) { load += out.vertex_weights[v]; });
    if (load > 1) throw std::logic_error("dual vertex weights overload an independent set");
  }
  if (dual_total != out.value || out.coloring.objective != out.value)
    throw std::logic_error("covering LP primal and dual objectives differ");
  return out;
}

enum class CertificateMode { exhaustive, sampled };

struct CertificateOptions {
  CertificateMode mode = CertificateMode::exhaustive;
  /// Random induced subgraphs checked in sampled mode, on top of the full
  /// graph and every single-vertex deletion.
  std::size_t samples = 256;
  std::uint64_t seed = 0;
};

inline constexpr std::size_t exhaustive_certificate_cap = 15;

struct Certificate {
  Rational alpha;
  Rational beta;
  Fugacity lambda{1.0};
  bool verified = false;
  bool exhaustive = false;
  bool exact_arithmetic = false;
  double worst_margin = 0;                 ///< min over checks of LHS, minus 1
  std::optional<Rational> worst_margin_exact;
  std::optional<VertexSet> witness_subgraph;  ///< where the worst margin occurs, when unverified
  std::optional<Vertex> witness_vertex;
  std::size_t subgraphs_checked = 0;
};

/// Checks alpha Pr(v in I_H) + beta E|N_H(v) ∩ I_H| >= 1 for every checked
/// induced subgraph H and every v in H, where I_H is hard-core at lambda on H.
/// With a rational fugacity every comparison is exact; otherwise it is done in
/// long double.
inline Certificate verify_certificate(const Graph& g, const Rational& alpha, const Rational& beta,
                                      const Fugacity& lambda, const CertificateOptions& opt = {}) {
  if (alpha < 0 || beta < 0) throw std::invalid_argument("alpha and beta must be non-negative");
  const std::size_t n = g.order();
  if (opt.mode == CertificateMode::exhaustive && n > exhaustive_certificate_cap)
    throw CapExceeded("exhaustive certificate check is capped at n = " + std::to_string(exhaustive_certificate_cap) +
                      " (graph has n = " + std::to_string(n) + "); use sampled mode");
  if (n > enumeration_hard_ceiling)
    throw CapExceeded("certificate check needs exact enumeration, capped at n = " +
                      std::to_string(enumeration_hard_ceiling));

  Certificate cert;
  cert.alpha = alpha;
  cert.beta = beta;
  cert.lambda = lambda;
  cert.exhaustive = opt.mode == CertificateMode::exhaustive;
  cert.exact_arithmetic = lambda.is_exact();
  if (n == 0) {
    cert.verified = true;
    return cert;
  }
  const auto adj = g.adjacency_masks();
  const std::uint64_t all = detail::low_mask(n);

  std::vector<std::uint64_t> family;
  if (cert.exhaustive) {
    for (std::uint64_t s = 1; s <= all; ++s) family.push_back(s);
  } else {
    family.push_back(all);
    for (Vertex v = 0; v < n; ++v)
      if (n > 1) family.push_back(all & ~(std::uint64_t{1} << v));
    std::mt19937_64 rng(opt.seed);
    for (std::size_t i = 0; i < opt.samples; ++i) {
      std::uint64_t s = 0;
      while (!s) s = rng() & all;
      family.push_back(s);
    }
  }

  const double alpha_d = to_double(alpha), beta_d = to_double(beta);
  std::optional<detail::RationalEvaluator> eval;
  if (cert.exact_arithmetic) eval.emplace(*lambda.exact(), n);
  bool first = true;
  Rational worst_exact;
  long double worst_ld = 0;
  std::uint64_t worst_set = 0;
  Vertex worst_vertex = 0;

  for (const std::uint64_t s : family) {
    const auto counts = IndependenceCounts::enumerate_masks(adj, s, false);
    ++cert.subgraphs_checked;
    if (eval) {
      const Integer z = (*eval)(counts.sets_by_size());
      std::vector<Integer> member(n);
      detail::for_each_bit(s, [&](Vertex v) { member[v] = (*eval)(counts.containing(v)); });
      detail::for_each_bit(s, [&](Vertex v) {
        Integer nbr = 0;
        detail::for_each_bit(adj[v] & s, [&](Vertex u) { nbr += member[u]; });
        Rational margin = (alpha * Rational(member[v]) + beta * Rational(nbr)) / Rational(z) - 1;
        if (first || margin < worst_exact) {
          worst_exact = std::move(margin);
          worst_set = s;
          worst_vertex = v;
          first = false;
        }
      });
    } else {
      const long double x = lambda.value();
      const long double z = detail::horner(counts.sets_by_size(), x);
      std::vector<long double> member(n, 0);
      detail::for_each_bit(s, [&](Vertex v) { member[v] = detail::horner(counts.containing(v), x) / z; });
      detail::for_each_bit(s, [&](Vertex v) {
        long double nbr = 0;
        detail::for_each_bit(adj[v] & s, [&](Vertex u) { nbr += member[u]; });
        const long double margin = alpha_d * member[v] + beta_d * nbr - 1;
        if (first || margin < worst_ld) {
          worst_ld = margin;
          worst_set = s;
          worst_vertex = v;
          first = false;
        }
      });
    }
  }

  if (eval) {
    cert.worst_margin_exact = worst_exact;
    cert.worst_margin = to_double(worst_exact);
    cert.verified = worst_exact >= 0;
  } else {
    cert.worst_margin = static_cast<double>(worst_ld);
    cert.verified = worst_ld >= 0;
  }
  if (!cert.verified) {
    cert.witness_subgraph = detail::mask_to_set(worst_set);
    cert.witness_vertex = worst_vertex;
  }
  return cert;
}

/// Upper bound alpha + beta Delta on the fractional chromatic number, valid
/// once the certificate has been verified on every induced subgraph.
inline Rational certified_upper_bound(const Graph& g, const Certificate& cert) {
  if (!cert.verified) throw std::logic_error("certificate is not verified");
  if (!cert.exhaustive) throw std::logic_error("certificate was only sampled; an upper bound needs the exhaustive check");
  return cert.alpha + cert.beta * Rational(static_cast<unsigned long>(g.max_degree()));
}

}  // namespace hcm
