#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hcm/bounds.hpp"
#include "hcm/errors.hpp"
#include "hcm/fugacity.hpp"
#include "hcm/graph.hpp"
#include "hcm/rational.hpp"

namespace hcm {

struct EnumerationLimits {
  /// Largest graph the enumerator accepts. Hard ceiling: 48 (bit masks and
  /// 64-bit counters).
  std::size_t max_vertices = 30;
  /// Exact rational results are produced when the fugacity is rational and
  /// n is at most this; double precision otherwise.
  std::size_t rational_max_vertices = 20;
};

inline constexpr std::size_t enumeration_hard_ceiling = 48;

namespace detail {

struct BinomialTable {
  std::array<std::array<std::uint64_t, 65>, 65> c{};
  constexpr BinomialTable() {
    for (std::size_t n = 0; n <= 64; ++n) {
      c[n][0] = 1;
      for (std::size_t k = 1; k <= n; ++k) c[n][k] = c[n - 1][k - 1] + (k <= n - 1 ? c[n - 1][k] : 0);
    }
  }
};

inline const BinomialTable& binomials() {
  static const BinomialTable table;
  return table;
}

template <class F>
inline void for_each_bit(std::uint64_t mask, F&& f) {
  while (mask) {
    f(static_cast<Vertex>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
}

}  // namespace detail

/// Size-graded counts over all independent sets of a graph: the coefficients
/// of the independence polynomial, and per vertex the polynomials whose ratio
/// to it gives Pr(v in I) and E|V(F_v)| at any fugacity.
///
/// F_v is the set of neighbours u of v that are externally uncovered by I,
/// i.e. no vertex of I outside N(v) is adjacent to u. Equivalently
/// N(u) ∩ I ⊆ N(v).
///
/// Enumeration branches include/exclude on the vertex of largest degree among
/// the remaining candidates. Once the candidates span no edges, every subset
/// of them extends the current set, and that whole subtree is added in closed
/// form with binomial coefficients.
class IndependenceCounts {
 public:
  static IndependenceCounts enumerate(const Graph& g, const EnumerationLimits& limits = {},
                                      bool with_uncovered = true) {
    const std::size_t cap = std::min(limits.max_vertices, enumeration_hard_ceiling);
    if (g.order() > cap)
      throw CapExceeded("exact enumeration is capped at n = " + std::to_string(cap) + " (graph has n = " +
                        std::to_string(g.order()) + "); use the Glauber sampler instead");
    const auto masks = g.adjacency_masks();
    const std::uint64_t all = g.order() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << g.order()) - 1;
    return enumerate_masks(masks, all, with_uncovered);
  }

  /// Counts for the subgraph induced by `active`, keeping the parent's vertex
  /// labels. Entries for inactive vertices stay zero.
  static IndependenceCounts enumerate_masks(std::span<const std::uint64_t> adjacency, std::uint64_t active,
                                            bool with_uncovered) {
    IndependenceCounts c;
    c.n_ = adjacency.size();
    if (c.n_ > enumeration_hard_ceiling)
      throw CapExceeded("exact enumeration is capped at n = " + std::to_string(enumeration_hard_ceiling));
    c.active_ = active;
    c.adj_.assign(c.n_, 0);
    for (std::size_t v = 0; v < c.n_; ++v)
      if (active >> v & 1) c.adj_[v] = adjacency[v] & active;
    c.stride_ = c.n_ + 1;
    c.sets_.assign(c.stride_, 0);
    c.member_.assign(c.n_ * c.stride_, 0);
    c.has_uncovered_ = with_uncovered;
    if (with_uncovered) c.uncovered_.assign(c.n_ * c.stride_, 0);
    c.descend(0, active);
    return c;
  }

  std::size_t order() const noexcept { return n_; }
  std::uint64_t active() const noexcept { return active_; }
  std::span<const std::uint64_t> adjacency() const noexcept { return adj_; }

  /// Coefficient k = number of independent sets of size k.
  std::span<const std::uint64_t> sets_by_size() const noexcept { return sets_; }

  /// Coefficient k = number of independent sets of size k containing v.
  std::span<const std::uint64_t> containing(Vertex v) const {
    check_vertex(v);
    return {member_.data() + v * stride_, stride_};
  }

  /// Coefficient k = sum over independent sets I of size k of |V(F_v)|.
  std::span<const std::uint64_t> uncovered(Vertex v) const {
    check_vertex(v);
    if (!has_uncovered_) throw std::logic_error("uncovered-neighbour counts were not requested");
    return {uncovered_.data() + v * stride_, stride_};
  }

  bool has_uncovered() const noexcept { return has_uncovered_; }

  /// Total number of independent sets, including the empty set.
  std::uint64_t independent_sets() const noexcept {
    std::uint64_t t = 0;
    for (auto x : sets_) t += x;
    return t;
  }

  std::uint64_t branch_nodes() const noexcept { return nodes_; }

 private:
  void check_vertex(Vertex v) const {
    if (v >= n_) throw std::out_of_range("vertex " + std::to_string(v) + " out of range");
  }

  void descend(std::uint64_t chosen, std::uint64_t candidates) {
    ++nodes_;
    Vertex pivot = 0;
    int best = -1;
    detail::for_each_bit(candidates, [&](Vertex v) {
      const int d = std::popcount(adj_[v] & candidates);
      if (d > best) {
        best = d;
        pivot = v;
      }
    });
    if (best <= 0) {
      close_leaf(chosen, candidates);
      return;
    }
    const std::uint64_t bit = std::uint64_t{1} << pivot;
    descend(chosen | bit, candidates & ~bit & ~adj_[pivot]);
    descend(chosen, candidates & ~bit);
  }

  // Adds every set chosen ∪ S with S ⊆ free; `free` spans no edges and has no
  // neighbour in `chosen`.
  void close_leaf(std::uint64_t chosen, std::uint64_t free) {
    const auto& C = detail::binomials().c;
    const int k = std::popcount(chosen);
    const int p = std::popcount(free);
    for (int j = 0; j <= p; ++j) sets_[k + j] += C[p][j];
    detail::for_each_bit(chosen, [&](Vertex v) {
      auto* row = member_.data() + v * stride_ + k;
      for (int j = 0; j <= p; ++j) row[j] += C[p][j];
    });
    detail::for_each_bit(free, [&](Vertex v) {
      auto* row = member_.data() + v * stride_ + k;
      for (int j = 1; j <= p; ++j) row[j] += C[p - 1][j - 1];
    });
    if (!has_uncovered_) return;
    std::array<std::uint64_t, 65> by_blockers{};
    detail::for_each_bit(active_, [&](Vertex v) {
      const std::uint64_t outside = ~adj_[v];
      bool any = false;
      by_blockers.fill(0);
      detail::for_each_bit(adj_[v], [&](Vertex u) {
        if (adj_[u] & chosen & outside) return;  // already covered from outside N(v)
        ++by_blockers[std::popcount(adj_[u] & outside & free)];
        any = true;
      });
      if (!any) return;
      auto* row = uncovered_.data() + v * stride_ + k;
      for (int r = 0; r <= p; ++r) {
        if (!by_blockers[r]) continue;
        for (int j = 0; j <= p - r; ++j) row[j] += by_blockers[r] * C[p - r][j];
      }
    });
  }

  std::size_t n_ = 0;
  std::size_t stride_ = 1;
  std::uint64_t active_ = 0;
  bool has_uncovered_ = false;
  std::uint64_t nodes_ = 0;
  std::vector<std::uint64_t> adj_;
  std::vector<std::uint64_t> sets_;
  std::vector<std::uint64_t> member_;
  std::vector<std::uint64_t> uncovered_;
};

/// Hard-core model quantities at one fugacity.
template <class Scalar>
struct HardCoreExact {
  Scalar lambda{};
  Scalar partition{};           ///< Z(lambda)
  Scalar occupancy{};           ///< E|I|
  std::vector<Scalar> marginal; ///< Pr(v in I)
  std::vector<Scalar> nbr_occ;  ///< E|N(v) ∩ I|
  std::vector<Scalar> uncovered;///< E|V(F_v)|; empty when not requested

  Scalar occupancy_fraction() const {
    return marginal.empty() ? Scalar(0) : occupancy / Scalar(static_cast<unsigned>(marginal.size()));
  }
};

namespace detail {

// Evaluates size-graded polynomials at lambda = p/q, all scaled by the same
// q^N so that ratios come out exact.
class RationalEvaluator {
 public:
  RationalEvaluator(const Rational& lambda, std::size_t degree) : weights_(degree + 1) {
    const Integer p = boost::multiprecision::numerator(lambda);
    const Integer q = boost::multiprecision::denominator(lambda);
    std::vector<Integer> qpow(degree + 1);
    qpow[0] = 1;
    for (std::size_t k = 1; k <= degree; ++k) qpow[k] = qpow[k - 1] * q;
    Integer ppow = 1;
    for (std::size_t k = 0; k <= degree; ++k) {
      weights_[k] = ppow * qpow[degree - k];
      ppow *= p;
    }
    scale_ = qpow[degree];
  }

  Integer operator()(std::span<const std::uint64_t> coeffs) const {
    Integer acc = 0;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
      if (coeffs[k]) acc += weights_[k] * Integer(coeffs[k]);
    return acc;
  }

  const Integer& scale() const noexcept { return scale_; }

 private:
  std::vector<Integer> weights_;
  Integer scale_;
};

inline long double horner(std::span<const std::uint64_t> coeffs, long double x) {
  long double acc = 0;
  for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * x + static_cast<long double>(coeffs[k]);
  return acc;
}

}  // namespace detail

/// Exact values at a rational fugacity.
inline HardCoreExact<Rational> evaluate(const IndependenceCounts& c, const Rational& lambda) {
  if (lambda <= 0) throw std::domain_error("fugacity must be positive");
  const std::size_t n = c.order();
  detail::RationalEvaluator eval(lambda, n);
  HardCoreExact<Rational> r;
  r.lambda = lambda;
  const Integer z = eval(c.sets_by_size());
  r.partition = Rational(z, eval.scale());
  r.marginal.assign(n, Rational(0));
  r.nbr_occ.assign(n, Rational(0));
  for (Vertex v = 0; v < n; ++v)
    if (c.active() >> v & 1) r.marginal[v] = Rational(eval(c.containing(v)), z);
  if (c.has_uncovered()) {
    r.uncovered.assign(n, Rational(0));
    for (Vertex v = 0; v < n; ++v)
      if (c.active() >> v & 1) r.uncovered[v] = Rational(eval(c.uncovered(v)), z);
  }
  for (Vertex v = 0; v < n; ++v) {
    r.occupancy += r.marginal[v];
    detail::for_each_bit(c.adjacency()[v], [&](Vertex u) { r.nbr_occ[v] += r.marginal[u]; });
  }
  return r;
}

/// Floating-point values at any positive fugacity.
inline HardCoreExact<double> evaluate(const IndependenceCounts& c, double lambda) {
  if (!(lambda > 0)) throw std::domain_error("fugacity must be positive");
  const std::size_t n = c.order();
  const long double x = lambda;
  const long double z = detail::horner(c.sets_by_size(), x);
  HardCoreExact<double> r;
  r.lambda = lambda;
  r.partition = static_cast<double>(z);
  r.marginal.assign(n, 0.0);
  r.nbr_occ.assign(n, 0.0);
  for (Vertex v = 0; v < n; ++v)
    if (c.active() >> v & 1) r.marginal[v] = static_cast<double>(detail::horner(c.containing(v), x) / z);
  if (c.has_uncovered()) {
    r.uncovered.assign(n, 0.0);
    for (Vertex v = 0; v < n; ++v)
      if (c.active() >> v & 1) r.uncovered[v] = static_cast<double>(detail::horner(c.uncovered(v), x) / z);
  }
  for (Vertex v = 0; v < n; ++v) {
    r.occupancy += r.marginal[v];
    detail::for_each_bit(c.adjacency()[v], [&](Vertex u) { r.nbr_occ[v] += r.marginal[u]; });
  }
  return r;
}

/// Z(lambda) = sum over independent sets I (including the empty set) of lambda^|I|.
template <class Scalar>
Scalar partition_function(const Graph& g, const Scalar& lambda, const EnumerationLimits& limits = {}) {
  const auto c = IndependenceCounts::enumerate(g, limits, false);
  if constexpr (std::is_same_v<Scalar, Rational>) {
    detail::RationalEvaluator eval(lambda, c.order());
    return Rational(eval(c.sets_by_size()), eval.scale());
  } else {
    return static_cast<Scalar>(detail::horner(c.sets_by_size(), static_cast<long double>(lambda)));
  }
}

/// Marginals, neighbourhood occupancies and uncovered-neighbour expectations
/// from a single enumeration.
template <class Scalar>
HardCoreExact<Scalar> exact_marginals(const Graph& g, const Scalar& lambda, const EnumerationLimits& limits = {}) {
  return evaluate(IndependenceCounts::enumerate(g, limits, true), lambda);
}

/// E|V(F_v)|: expected number of neighbours of v externally uncovered by I.
template <class Scalar>
Scalar uncovered_expectation(const Graph& g, const Scalar& lambda, Vertex v, const EnumerationLimits& limits = {}) {
  if (v >= g.order()) throw std::out_of_range("vertex " + std::to_string(v) + " not in graph");
  return exact_marginals(g, lambda, limits).uncovered[v];
}

using HardCoreValues = std::variant<HardCoreExact<Rational>, HardCoreExact<double>>;

/// Rational arithmetic when lambda is an exact rational and the graph is
/// small enough; doubles otherwise.
inline bool rational_mode(const Graph& g, const Fugacity& lambda, const EnumerationLimits& limits) {
  return lambda.is_exact() && g.order() <= limits.rational_max_vertices;
}

inline HardCoreValues solve_hard_core(const Graph& g, const Fugacity& lambda, const EnumerationLimits& limits = {}) {
  const auto c = IndependenceCounts::enumerate(g, limits, true);
  if (rational_mode(g, lambda, limits)) return evaluate(c, *lambda.exact());
  return evaluate(c, lambda.value());
}

/// Result of checking the two occupancy inequalities that hold on every graph:
///   (i)  Pr(v in I) >= lambda/(1+lambda) (1+lambda)^{-E|V(F_v)|}  for each v
///   (ii) E|I| >= lambda/(1+lambda) |V| (1+lambda)^{-2|E|/|V|}
/// Margins are LHS - RHS.
struct GenhcmReport {
  bool exact_mode = false;
  double tolerance = 0;
  std::vector<double> vertex_lhs, vertex_rhs, vertex_margin;
  double global_lhs = 0, global_rhs = 0, global_margin = 0;
  bool vertex_holds = true;
  bool global_holds = true;
  std::optional<Vertex> witness;  ///< vertex with the smallest margin in (i), when (i) fails

  bool holds() const noexcept { return vertex_holds && global_holds; }
};

namespace detail {

template <class Real, class Scalar>
GenhcmReport genhcm_margins(const Graph& g, const HardCoreExact<Scalar>& hc, const Real& lambda, bool exact,
                            double tol_abs, double tol_rel) {
  using std::abs;
  using std::max;
  using std::pow;
  auto to_real = [](const Scalar& s) -> Real {
    if constexpr (std::is_same_v<Scalar, Rational>) return Real(s);
    else return Real(s);
  };
  GenhcmReport rep;
  rep.exact_mode = exact;
  rep.tolerance = tol_abs;
  const Real base = 1 + lambda;
  const Real ceiling = lambda / base;
  const std::size_t n = g.order();
  Real worst = 0;
  for (Vertex v = 0; v < n; ++v) {
    const Real lhs = to_real(hc.marginal[v]);
    const Real rhs = ceiling * pow(base, -to_real(hc.uncovered[v]));
    const Real margin = lhs - rhs;
    rep.vertex_lhs.push_back(static_cast<double>(lhs));
    rep.vertex_rhs.push_back(static_cast<double>(rhs));
    rep.vertex_margin.push_back(static_cast<double>(margin));
    if (margin < -(tol_abs + tol_rel * abs(rhs))) {
      rep.vertex_holds = false;
      if (!rep.witness || margin < worst) {
        worst = margin;
        rep.witness = v;
      }
    }
  }
  if (n > 0) {
    const Real lhs = to_real(hc.occupancy);
    const Real nn = static_cast<Real>(static_cast<double>(n));
    const Real rhs = ceiling * nn * pow(base, -(2 * static_cast<Real>(static_cast<double>(g.size()))) / nn);
    rep.global_lhs = static_cast<double>(lhs);
    rep.global_rhs = static_cast<double>(rhs);
    rep.global_margin = static_cast<double>(lhs - rhs);
    rep.global_holds = !(lhs - rhs < -(tol_abs + tol_rel * abs(rhs)));
  }
  return rep;
}

}  // namespace detail

/// Checks (i) and (ii) above. In rational mode the exact hard-core values are
/// compared against right-hand sides evaluated to 50 digits with absolute
/// tolerance 1e-12; in double mode the tolerance is 1e-9 relative.
inline GenhcmReport verify_genhcm(const Graph& g, const Fugacity& lambda, const EnumerationLimits& limits = {}) {
  const auto values = solve_hard_core(g, lambda, limits);
  if (const auto* exact = std::get_if<HardCoreExact<Rational>>(&values))
    return detail::genhcm_margins(g, *exact, to_wide(*lambda.exact()), true, 1e-12, 0.0);
  return detail::genhcm_margins(g, std::get<HardCoreExact<double>>(values), static_cast<long double>(lambda.value()),
                                false, 0.0, 1e-9);
}

/// Per-vertex check of
///   alpha Pr(v in I) + beta E|N(v) ∩ I| >= lambda/(1+lambda) min_z (...)
/// with (Delta, f) taken from the graph's own audit.
struct LocalBoundReport {
  bool exact_mode = false;
  std::size_t delta = 0;
  double f = 0;
  double rhs = 0;  ///< same for every vertex
  std::vector<double> lhs, margin;
  bool holds = true;
  std::optional<Vertex> witness;
};

inline LocalBoundReport verify_hcmbound_local(const Graph& g, const Fugacity& lambda, double alpha, double beta,
                                              const EnumerationLimits& limits = {}) {
  if (!(alpha > 0) || !(beta > 0)) throw std::invalid_argument("alpha and beta must be positive");
  const auto a = audit(g);
  LocalBoundReport rep;
  rep.delta = a.max_degree;
  rep.f = a.implied_f;
  const auto values = solve_hard_core(g, lambda, limits);
  const std::size_t n = g.order();

  // f = Delta^2 / max_nbhd_edges exactly, or Delta^2 + 1.
  auto f_as = [&]<class Real>(Real) -> Real {
    const Real d2 = static_cast<Real>(static_cast<double>(a.max_degree * a.max_degree));
    return a.max_nbhd_edges ? d2 / static_cast<Real>(static_cast<double>(a.max_nbhd_edges)) : d2 + 1;
  };

  auto finish = [&]<class Real>(const Real& rhs, auto&& lhs_of, double tol) {
    rep.rhs = static_cast<double>(rhs);
    Real worst = 0;
    for (Vertex v = 0; v < n; ++v) {
      const Real lhs = lhs_of(v);
      const Real margin = lhs - rhs;
      rep.lhs.push_back(static_cast<double>(lhs));
      rep.margin.push_back(static_cast<double>(margin));
      if (margin < -tol && (!rep.witness || margin < worst)) {
        rep.holds = false;
        worst = margin;
        rep.witness = v;
      }
    }
  };

  if (const auto* exact = std::get_if<HardCoreExact<Rational>>(&values)) {
    rep.exact_mode = true;
    const Wide lam = to_wide(*lambda.exact());
    const Wide al(alpha), be(beta);
    const Wide rhs = local_bound_rhs<Wide>(a.max_degree, f_as(Wide{}), lam, al, be);
    finish(rhs, [&](Vertex v) { return al * Wide(exact->marginal[v]) + be * Wide(exact->nbr_occ[v]); }, 1e-12);
  } else {
    const auto& hc = std::get<HardCoreExact<double>>(values);
    using LD = long double;
    const LD rhs = local_bound_rhs<LD>(a.max_degree, f_as(LD{}), lambda.value(), alpha, beta);
    finish(rhs, [&](Vertex v) { return LD(alpha) * hc.marginal[v] + LD(beta) * hc.nbr_occ[v]; },
           1e-9 * static_cast<double>(rhs));
  }
  return rep;
}

}  // namespace hcm
