#include <gtest/gtest.h>

#include <random>
#include <set>

#include "hcm/bounds.hpp"
#include "hcm/fractional.hpp"
#include "hcm/generators.hpp"
#include "support/oracles.hpp"

using namespace hcm;

namespace {

// Maximal independent sets by subset enumeration.
std::vector<VertexSet> brute_maximal(const Graph& g) {
  const auto all = oracle::independent_sets(g);
  std::vector<VertexSet> out;
  for (const auto& I : all) {
    bool maximal = true;
    for (Vertex v = 0; v < g.order() && maximal; ++v) {
      if (std::count(I.begin(), I.end(), v)) continue;
      bool blocked = false;
      for (Vertex u : I) blocked = blocked || g.adjacent(u, v);
      if (!blocked) maximal = false;
    }
    if (maximal) out.push_back(I);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST(Simplex, SmallTextbookProgram) {
  // min -x - y  s.t.  x + 2y + s1 = 4,  3x + y + s2 = 6
  std::vector<std::vector<Rational>> A = {{1, 2, 1, 0}, {3, 1, 0, 1}};
  auto lp = solve_lp(A, {4, 6}, {-1, -1, 0, 0});
  ASSERT_EQ(lp.status, LpStatus::optimal);
  EXPECT_EQ(lp.objective, Rational(-14, 5));
  EXPECT_EQ(lp.x[0], Rational(8, 5));
  EXPECT_EQ(lp.x[1], Rational(6, 5));
  EXPECT_EQ(lp.dual[0] * 4 + lp.dual[1] * 6, lp.objective);
}

TEST(Simplex, InfeasibleAndUnbounded) {
  EXPECT_EQ(solve_lp<Rational>({{1, 1}}, {-1}, {1, 1}).status, LpStatus::infeasible);
  EXPECT_EQ(solve_lp<Rational>({{1, -1}}, {1}, {-1, 0}).status, LpStatus::unbounded);
}

TEST(Simplex, RedundantRows) {
  auto lp = solve_lp<Rational>({{1, 1}, {2, 2}}, {1, 2}, {1, 2});
  ASSERT_EQ(lp.status, LpStatus::optimal);
  EXPECT_EQ(lp.objective, Rational(1));
}

TEST(MaximalIndependentSets, Examples) {
  EXPECT_EQ(maximal_independent_sets(complete_graph(3)), (std::vector<VertexSet>{{0}, {1}, {2}}));
  EXPECT_EQ(maximal_independent_sets(cycle_graph(5)),
            (std::vector<VertexSet>{{0, 2}, {0, 3}, {1, 3}, {1, 4}, {2, 4}}));
  EXPECT_EQ(maximal_independent_sets(empty_graph(4)), (std::vector<VertexSet>{{0, 1, 2, 3}}));
  EXPECT_THROW(maximal_independent_sets(empty_graph(25)), CapExceeded);
}

TEST(MaximalIndependentSets, MatchBruteForce) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 80; ++i) {
    const auto g = erdos_renyi(1 + rng() % 12, 0.05 + 0.9 * (rng() % 100) / 100.0, rng());
    EXPECT_EQ(maximal_independent_sets(g), brute_maximal(g));
  }
}

TEST(Chif, KnownValues) {
  for (std::size_t n = 1; n <= 8; ++n) EXPECT_EQ(chif_exact(complete_graph(n)).value, Rational(n));
  for (unsigned k = 1; k <= 5; ++k) EXPECT_EQ(chif_exact(cycle_graph(2 * k + 1)).value, 2 + Rational(1, k));
  EXPECT_EQ(chif_exact(petersen_graph()).value, Rational(5, 2));
  EXPECT_EQ(chif_exact(cycle_graph(6)).value, Rational(2));
  EXPECT_EQ(chif_exact(empty_graph(5)).value, Rational(1));
  EXPECT_EQ(chif_exact(Graph(0)).value, Rational(0));
}

TEST(Chif, ColouringAndDualAreCertificates) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 40; ++i) {
    const auto g = erdos_renyi(2 + rng() % 10, 0.2 + 0.6 * (rng() % 100) / 100.0, rng());
    const auto fc = chif_exact(g);
    std::vector<Rational> cover(g.order(), Rational(0));
    Rational total = 0;
    for (const auto& atom : fc.coloring.atoms) {
      EXPECT_TRUE(oracle::independent(g, atom.set));
      EXPECT_GT(atom.weight, 0);
      total += atom.weight;
      for (Vertex v : atom.set) cover[v] += atom.weight;
    }
    for (const auto& c : cover) EXPECT_GE(c, 1);
    EXPECT_EQ(total, fc.value);
    Rational dual = 0;
    for (const auto& y : fc.vertex_weights) {
      EXPECT_GE(y, 0);
      dual += y;
    }
    EXPECT_EQ(dual, fc.value);
    for (const auto& I : oracle::independent_sets(g)) {
      Rational load = 0;
      for (Vertex v : I) load += fc.vertex_weights[v];
      EXPECT_LE(load, 1);
    }
    // n / alpha(G) is a lower bound
    EXPECT_GE(fc.value, Rational(static_cast<unsigned>(g.order()),
                                 static_cast<unsigned>(oracle::independence_number(g))));
  }
}

TEST(Chif, DisjointUnionIsMaxOfParts) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 25; ++i) {
    const auto g = erdos_renyi(2 + rng() % 7, 0.5, rng());
    const auto h = erdos_renyi(2 + rng() % 7, 0.5, rng());
    EXPECT_EQ(chif_exact(disjoint_union(g, h)).value, std::max(chif_exact(g).value, chif_exact(h).value));
  }
}

TEST(Certificate, TrivialParametersAlwaysVerify) {
  // (1+lambda)/lambda Pr(v in I) + E|N(v) ∩ I| >= Pr(N(v) ∩ I = ∅) + Pr(N(v) ∩ I ≠ ∅)
  std::mt19937_64 rng(31);
  for (int i = 0; i < 30; ++i) {
    const auto g = erdos_renyi(1 + rng() % 10, 0.4, rng());
    for (const char* l : {"1/3", "1", "4"}) {
      const auto lam = Fugacity::parse(l);
      const auto cert = verify_certificate(g, (1 + *lam.exact()) / *lam.exact(), Rational(1), lam);
      EXPECT_TRUE(cert.verified);
      EXPECT_GE(*cert.worst_margin_exact, 0);
      EXPECT_EQ(cert.subgraphs_checked, (std::size_t{1} << g.order()) - 1);
      EXPECT_GE(certified_upper_bound(g, cert), chif_exact(g).value);
    }
  }
}

TEST(Certificate, ZeroParametersFail) {
  const auto cert = verify_certificate(cycle_graph(4), Rational(0), Rational(0), Fugacity(1.0));
  EXPECT_FALSE(cert.verified);
  EXPECT_DOUBLE_EQ(cert.worst_margin, -1.0);
  ASSERT_TRUE(cert.witness_subgraph.has_value());
  EXPECT_THROW(certified_upper_bound(cycle_graph(4), cert), std::logic_error);
  EXPECT_THROW(verify_certificate(cycle_graph(4), Rational(-1), Rational(1), Fugacity(1.0)), std::invalid_argument);
}

TEST(Certificate, BoundExamples) {
  const auto lam = Fugacity::parse("1");
  const auto c5 = cycle_graph(5);
  const auto cert = verify_certificate(c5, Rational(2), Rational(1), lam);
  EXPECT_EQ(certified_upper_bound(c5, cert), Rational(4));
  const auto k4 = complete_graph(4);
  const auto lam2 = Fugacity::parse("1/2");
  const auto ck = verify_certificate(k4, Rational(3), Rational(1), lam2);
  EXPECT_EQ(certified_upper_bound(k4, ck), Rational(6));
  // single vertex: the bound (1+lambda)/lambda decreases to chi_f = 1
  Rational prev = 100;
  for (int l : {1, 10, 100, 1000}) {
    const auto lv = Fugacity(Rational(l));
    const auto c1 = verify_certificate(Graph(1), (1 + Rational(l)) / l, Rational(1), lv);
    const Rational b = certified_upper_bound(Graph(1), c1);
    EXPECT_GE(b, 1);
    EXPECT_LT(b, prev);
    prev = b;
  }
}

TEST(Certificate, AlphaBetaOnCycleOfFive) {
  for (const char* l : {"1/10", "1/4", "1/2", "1"}) {
    const auto lam = Fugacity::parse(l);
    const auto ab = alpha_beta<long double>(2, 5.0L, lam.value());
    const auto cert = verify_certificate(cycle_graph(5), Rational(double(ab.alpha)), Rational(double(ab.beta)), lam);
    EXPECT_TRUE(cert.verified) << l;
    EXPECT_GE(certified_upper_bound(cycle_graph(5), cert), Rational(5, 2));
  }
}

TEST(Certificate, SampledModeAndCaps) {
  const auto g = triangle_free_regular(20, 3, 1);
  EXPECT_THROW(verify_certificate(g, Rational(3), Rational(1), Fugacity(0.5)), CapExceeded);
  CertificateOptions opt;
  opt.mode = CertificateMode::sampled;
  opt.samples = 50;
  opt.seed = 4;
  const auto cert = verify_certificate(g, Rational(3), Rational(1), Fugacity::parse("1/2"), opt);
  EXPECT_TRUE(cert.verified);
  EXPECT_FALSE(cert.exhaustive);
  EXPECT_EQ(cert.subgraphs_checked, 1u + 20u + 50u);
  EXPECT_THROW(certified_upper_bound(g, cert), std::logic_error);
  // inexact fugacity uses floating point
  const auto approx = verify_certificate(cycle_graph(5), Rational(3), Rational(1), Fugacity(0.5));
  EXPECT_FALSE(approx.exact_arithmetic);
  EXPECT_TRUE(approx.verified);
}
