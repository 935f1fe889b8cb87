#include <gtest/gtest.h>

#include "hcm/generators.hpp"

using namespace hcm;

namespace {

bool regular(const Graph& g, std::size_t d) {
  for (Vertex v = 0; v < g.order(); ++v)
    if (g.degree(v) != d) return false;
  return true;
}

}  // namespace

TEST(Named, Basics) {
  EXPECT_EQ(cycle_graph(5).size(), 5u);
  EXPECT_TRUE(regular(cycle_graph(7), 2));
  EXPECT_EQ(complete_graph(4).size(), 6u);
  EXPECT_EQ(path_graph(4).size(), 3u);
  EXPECT_EQ(star_graph(4).degree(0), 4u);
  EXPECT_EQ(complete_bipartite(2, 3).size(), 6u);
  const auto p = petersen_graph();
  EXPECT_TRUE(regular(p, 3));
  EXPECT_TRUE(audit(p).triangle_free());
  const auto k = kneser_graph(5, 2);
  EXPECT_EQ(k.order(), 10u);
  EXPECT_TRUE(regular(k, 3));
  EXPECT_TRUE(audit(k).triangle_free());
  EXPECT_THROW(cycle_graph(2), std::invalid_argument);
  EXPECT_THROW(erdos_renyi(5, 1.5, 0), std::invalid_argument);
}

TEST(RandomRegular, DegreesAndDeterminism) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = random_regular(50, 3, seed);
    EXPECT_TRUE(regular(g, 3));
    EXPECT_EQ(g, random_regular(50, 3, seed));
  }
  EXPECT_EQ(random_regular(4, 3, 1), complete_graph(4));
  const auto two = random_regular(30, 2, 8);
  EXPECT_TRUE(regular(two, 2));
  EXPECT_THROW(random_regular(5, 3, 0), std::invalid_argument);
  EXPECT_THROW(random_regular(4, 4, 0), std::invalid_argument);
}

TEST(TriangleFreeRegular, RejectionAndSwitching) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto small = triangle_free_regular(10, 3, seed);  // n d = 30: rejection
    EXPECT_TRUE(regular(small, 3));
    EXPECT_TRUE(audit(small).triangle_free());
    const auto big = triangle_free_regular(120, 4, seed);  // n d = 480: switching
    EXPECT_TRUE(regular(big, 4));
    EXPECT_TRUE(audit(big).triangle_free());
    EXPECT_EQ(big, triangle_free_regular(120, 4, seed));
  }
  const auto k33 = triangle_free_regular(6, 3, 2);
  EXPECT_TRUE(audit(k33).triangle_free());
  EXPECT_THROW(triangle_free_regular(4, 3, 0), std::invalid_argument);
}

TEST(Blowup, StructureAndLabels) {
  EXPECT_EQ(clique_blowup(petersen_graph(), 1), petersen_graph());
  EXPECT_EQ(clique_blowup(Graph(1), 4), complete_graph(4));
  const auto c5 = clique_blowup(cycle_graph(5), 2);
  EXPECT_EQ(c5.order(), 10u);
  EXPECT_TRUE(regular(c5, 5));
  EXPECT_TRUE(c5.adjacent(0, 1));  // (0,0) ~ (0,1)
  EXPECT_TRUE(c5.adjacent(0, 3));  // (0,0) ~ (1,1)
  EXPECT_FALSE(c5.adjacent(0, 4));  // (0,0) !~ (2,0)
  for (std::size_t d : {2u, 3u, 4u})
    for (std::size_t b : {1u, 2u, 3u}) EXPECT_TRUE(regular(clique_blowup(random_regular(12, d, d * b), b), b * (d + 1) - 1));
  EXPECT_THROW(clique_blowup(cycle_graph(5), 0), std::invalid_argument);
}

TEST(BadVertices, Examples) {
  const auto tf = bad_vertex_deletion(petersen_graph(), 3.0, 0.5);
  EXPECT_TRUE(tf.bad.empty());
  EXPECT_EQ(tf.remainder, petersen_graph());

  const auto k4 = bad_vertex_deletion(complete_graph(4), 9.0, 1.0);
  EXPECT_EQ(k4.bad.size(), 4u);
  EXPECT_EQ(k4.remainder.order(), 0u);

  // K3 next to a 4-regular triangle-free graph: Delta = 4, f = 16 gives
  // threshold 1 with eps = 1; the K3 vertices lie in one triangle each, so
  // take f = 32 to bring the threshold to 1/2.
  const auto g = disjoint_union(complete_graph(3), triangle_free_regular(20, 4, 3));
  const auto split = bad_vertex_deletion(g, 32.0, 1.0);
  EXPECT_EQ(split.bad, (std::vector<Vertex>{0, 1, 2}));
  EXPECT_EQ(split.remainder.order(), 20u);
  EXPECT_EQ(split.label_map.front(), 3u);
}

TEST(GenSpecs, ParseAndGenerate) {
  for (auto k : {GenKind::random_regular, GenKind::triangle_free_regular, GenKind::blowup, GenKind::cycle,
                 GenKind::complete, GenKind::petersen, GenKind::kneser, GenKind::erdos_renyi})
    EXPECT_EQ(parse_gen_kind(to_string(k)), k);
  EXPECT_THROW(parse_gen_kind("mystery"), std::invalid_argument);
  GenSpec s;
  s.kind = GenKind::blowup;
  s.n = 5;
  s.b = 3;
  EXPECT_EQ(generate(s), clique_blowup(cycle_graph(5), 3));
  s.kind = GenKind::kneser;
  s.n = 5;
  s.k = 2;
  EXPECT_EQ(generate(s).order(), 10u);
}
