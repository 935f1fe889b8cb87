#include <gtest/gtest.h>

#include <random>

#include "hcm/bounds.hpp"
#include "hcm/generators.hpp"
#include "hcm/hardcore_exact.hpp"
#include "support/oracles.hpp"

using namespace hcm;

namespace {

std::vector<Graph> random_graphs(std::size_t count, std::size_t max_n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Graph> out;
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = 1 + rng() % max_n;
    const double p = 0.1 + 0.8 * double(rng() % 1000) / 1000.0;
    out.push_back(erdos_renyi(n, p, rng()));
  }
  return out;
}

}  // namespace

TEST(Exact, CycleOfFive) {
  auto hc = exact_marginals(cycle_graph(5), Rational(1));
  EXPECT_EQ(hc.partition, Rational(11));
  EXPECT_EQ(hc.occupancy_fraction(), Rational(3, 11));
  for (auto m : hc.marginal) EXPECT_EQ(m, Rational(3, 11));
}

TEST(Exact, MatchesBruteForceOracle) {
  const std::vector<Rational> lambdas = {Rational(1, 3), Rational(1), Rational(5, 2)};
  std::size_t i = 0;
  for (const auto& g : random_graphs(60, 11, 101)) {
    const Rational lam = lambdas[i++ % lambdas.size()];
    const auto hc = exact_marginals(g, lam);
    const auto ref = oracle::brute_hard_core(g, lam);
    ASSERT_EQ(hc.partition, ref.Z);
    EXPECT_EQ(hc.occupancy, ref.occupancy);
    EXPECT_EQ(hc.marginal, ref.marginal);
    EXPECT_EQ(hc.nbr_occ, ref.nbr_occ);
    EXPECT_EQ(hc.uncovered, ref.uncovered);
  }
}

TEST(Exact, DoubleModeAgreesWithRational) {
  for (const auto& g : random_graphs(30, 14, 7)) {
    const auto r = exact_marginals(g, Rational(3, 4));
    const auto d = exact_marginals(g, 0.75);
    EXPECT_NEAR(d.partition / to_double(r.partition), 1.0, 1e-12);
    for (Vertex v = 0; v < g.order(); ++v) {
      EXPECT_NEAR(d.marginal[v], to_double(r.marginal[v]), 1e-12);
      EXPECT_NEAR(d.uncovered[v], to_double(r.uncovered[v]), 1e-12);
    }
  }
}

TEST(Exact, VertexRecurrence) {
  // Z(G) = Z(G - v) + lambda Z(G - N[v])
  const Rational lam(2, 7);
  for (const auto& g : random_graphs(40, 12, 3)) {
    const Vertex v = static_cast<Vertex>(g.order() - 1);
    std::vector<bool> closed(g.order(), false);
    closed[v] = true;
    for (Vertex u : g.neighbours(v)) closed[u] = true;
    EXPECT_EQ(partition_function(g, lam),
              partition_function(oracle::delete_vertex(g, v), lam) +
                  lam * partition_function(oracle::without(g, closed), lam));
  }
}

TEST(Exact, EdgeDeletionContraction) {
  // Z(G) = Z(G - e) - lambda^2 Z(G - N[u] - N[v])
  const Rational lam(3, 2);
  for (const auto& g : random_graphs(40, 12, 4)) {
    for (auto e : g.edges()) {
      std::vector<bool> drop(g.order(), false);
      for (Vertex x : {e.first, e.second}) {
        drop[x] = true;
        for (Vertex u : g.neighbours(x)) drop[u] = true;
      }
      EXPECT_EQ(partition_function(g, lam),
                partition_function(oracle::delete_edge(g, e), lam) -
                    lam * lam * partition_function(oracle::without(g, drop), lam));
      break;
    }
  }
}

TEST(Exact, OccupationGivenEmptyNeighbourhood) {
  // Pr(v in I) = lambda/(1+lambda) Pr(N(v) ∩ I = ∅)
  const Rational lam(5, 3);
  for (const auto& g : random_graphs(30, 10, 9)) {
    const auto hc = exact_marginals(g, lam);
    for (Vertex v = 0; v < g.order(); ++v) {
      std::vector<bool> drop(g.order(), false);
      for (Vertex u : g.neighbours(v)) drop[u] = true;
      const Rational empty_nbhd = partition_function(oracle::without(g, drop), lam) / hc.partition;
      EXPECT_EQ(hc.marginal[v], lam / (1 + lam) * empty_nbhd);
    }
  }
}

TEST(Exact, OccupancyIncreasesWithFugacity) {
  for (const auto& g : random_graphs(20, 12, 21)) {
    if (g.order() == 0) continue;
    Rational prev = -1;
    for (int k = 1; k <= 12; ++k) {
      const auto occ = exact_marginals(g, Rational(k, 4)).occupancy;
      EXPECT_GT(occ, prev);
      prev = occ;
    }
  }
}

TEST(Exact, UniformAtFugacityOne) {
  for (const auto& g : random_graphs(20, 10, 31)) {
    const auto sets = oracle::independent_sets(g);
    const auto hc = exact_marginals(g, Rational(1));
    EXPECT_EQ(hc.partition, Rational(static_cast<unsigned>(sets.size())));
    for (Vertex v = 0; v < g.order(); ++v) {
      unsigned containing = 0;
      for (const auto& I : sets) containing += std::count(I.begin(), I.end(), v) ? 1 : 0;
      EXPECT_EQ(hc.marginal[v], Rational(containing, static_cast<unsigned>(sets.size())));
    }
  }
}

TEST(Exact, EdgelessGraphsCloseInOneLeaf) {
  EnumerationLimits lim;
  lim.max_vertices = 48;
  const auto c = IndependenceCounts::enumerate(empty_graph(40), lim, true);
  EXPECT_EQ(c.branch_nodes(), 1u);
  EXPECT_EQ(c.independent_sets(), std::uint64_t{1} << 40);
  EXPECT_EQ(c.sets_by_size()[20], 137846528820ULL);
}

TEST(Exact, CapsAndErrors) {
  EXPECT_THROW(IndependenceCounts::enumerate(cycle_graph(31)), CapExceeded);
  EnumerationLimits lim;
  lim.max_vertices = 100;
  EXPECT_THROW(IndependenceCounts::enumerate(cycle_graph(49), lim), CapExceeded);
  EXPECT_THROW(exact_marginals(cycle_graph(5), Rational(0)), std::domain_error);
  EXPECT_THROW(uncovered_expectation(cycle_graph(5), Rational(1), 9), std::out_of_range);
}

TEST(Exact, ModeSelection) {
  EXPECT_TRUE(std::holds_alternative<HardCoreExact<Rational>>(solve_hard_core(cycle_graph(6), Fugacity::parse("1/2"))));
  EXPECT_TRUE(std::holds_alternative<HardCoreExact<double>>(solve_hard_core(cycle_graph(6), Fugacity(0.5))));
  EXPECT_TRUE(std::holds_alternative<HardCoreExact<double>>(solve_hard_core(cycle_graph(22), Fugacity::parse("1/2"))));
}

TEST(Exact, UncoveredNeighboursOfAStarCentre) {
  // For the centre of K_{1,3} the leaves are uncovered unless the centre is
  // occupied: 3 (1 - lambda / Z) with Z = (1+lambda)^3 + lambda.
  const auto g = star_graph(3);
  for (const Rational lam : {Rational(1, 2), Rational(4)}) {
    const Rational z = (1 + lam) * (1 + lam) * (1 + lam) + lam;
    EXPECT_EQ(uncovered_expectation(g, lam, 0), 3 * (1 - lam / z));
  }
  // For a leaf, the centre is covered by any occupied leaf (the leaf itself
  // included); of the 9 independent sets only {} and {0} leave it uncovered.
  EXPECT_EQ(exact_marginals(g, Rational(1)).uncovered[1], Rational(2, 9));
}

TEST(Genhcm, HoldsOnSmallFamilies) {
  for (const auto& g : {cycle_graph(5), petersen_graph(), complete_graph(5), star_graph(6), complete_bipartite(3, 4)})
    for (const char* lam : {"1/10", "1", "7"}) {
      const auto r = verify_genhcm(g, Fugacity::parse(lam));
      EXPECT_TRUE(r.exact_mode);
      EXPECT_TRUE(r.holds()) << lam;
    }
  const auto d = verify_genhcm(cycle_graph(24), Fugacity(0.5));
  EXPECT_FALSE(d.exact_mode);
  EXPECT_TRUE(d.holds());
}

TEST(LocalBound, AlphaBetaFromAuditHold) {
  for (const auto& g : {cycle_graph(5), petersen_graph(), clique_blowup(cycle_graph(5), 2)})
    for (double lam : {0.25, 1.0, 3.0}) {
      const auto a = audit(g);
      const long double f = a.max_nbhd_edges ? (long double)(a.max_degree * a.max_degree) / a.max_nbhd_edges
                                             : (long double)(a.max_degree * a.max_degree) + 1;
      const auto ab = alpha_beta<long double>(a.max_degree, f, lam);
      const auto r = verify_hcmbound_local(g, Fugacity(lam), double(ab.alpha), double(ab.beta));
      EXPECT_TRUE(r.holds);
      EXPECT_NEAR(r.rhs, 1.0, 1e-9);
    }
  EXPECT_THROW(verify_hcmbound_local(cycle_graph(5), Fugacity(1.0), 0.0, 1.0), std::invalid_argument);
}
