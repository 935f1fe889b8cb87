#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "hcm/experiment.hpp"
#include "hcm/generators.hpp"

using namespace hcm;

namespace {

json small_spec() {
  return json::parse(R"({
    "seed": 11,
    "eps": 0.1,
    "lambdas": ["1/2", 1],
    "operations": ["audit", "exact", "sample", "bound", "chif", "certify"],
    "graphs": [
      {"name": "c5", "gen": {"kind": "cycle", "n": 5}},
      {"name": "petersen", "gen": {"kind": "petersen"}}
    ],
    "sampler": {"burn_in": 200, "samples": 2000, "chains": 4}
  })");
}

}  // namespace

TEST(Spec, Validation) {
  auto j = small_spec();
  EXPECT_NO_THROW(parse_experiment_spec(j).validate());
  j["lambdas"] = json::array();
  EXPECT_THROW(parse_experiment_spec(j).validate(), SpecError);
  j["lambdas"] = {1, "1/2"};
  EXPECT_THROW(parse_experiment_spec(j).validate(), SpecError);
  j = small_spec();
  j["graphs"] = {{{"name", "missing"}, {"file", "no/such/file.txt"}}};
  EXPECT_THROW(parse_experiment_spec(j).validate(), SpecError);
  j = small_spec();
  j["operations"] = {"audit", "dance"};
  EXPECT_THROW(parse_experiment_spec(j), SpecError);
  j = small_spec();
  j["sampler"]["chains"] = 1;
  EXPECT_THROW(parse_experiment_spec(j).validate(), SpecError);
}

TEST(Spec, ExactFugacitiesFromNumbers) {
  const auto s = parse_experiment_spec(json::parse(R"({"graphs":[{"name":"k","gen":{"kind":"complete","n":3}}],
      "lambdas":[0.25, "3/4", 2], "operations":["exact"]})"));
  ASSERT_EQ(s.lambdas.size(), 3u);
  for (const auto& l : s.lambdas) EXPECT_TRUE(l.is_exact());
  EXPECT_EQ(*s.lambdas[0].exact(), Rational(1, 4));
}

TEST(Run, RowsPassOnSmallGraphs) {
  const auto spec = parse_experiment_spec(small_spec());
  RunOptions opts;
  opts.deterministic = true;
  const auto report = run_experiment(spec, opts);
  EXPECT_FALSE(report.any_failure());
  ASSERT_EQ(report.rows.size(), 4u);
  for (const auto& r : report.rows) {
    EXPECT_EQ(r.flat.at("occ_source"), "exact-rational");
    EXPECT_EQ(r.flat.at("occ_check"), "pass");
    EXPECT_EQ(r.flat.at("genhcm_check"), "pass");
    EXPECT_EQ(r.flat.at("certify_check"), "pass");
    EXPECT_FALSE(r.flat.contains("time_ms"));
  }
  EXPECT_EQ(report.rows[2].flat.at("chif"), "5/2");
  EXPECT_EQ(report.rows[0].flat.at("chif"), "5/2");
  EXPECT_EQ(report.rows[1].flat.at("lambda"), "1/1");
}

TEST(Run, DeterministicOutputIsByteIdentical) {
  const auto spec = parse_experiment_spec(small_spec());
  RunOptions one, many;
  one.deterministic = many.deterministic = true;
  many.threads = 3;
  const auto a = run_experiment(spec, one);
  const auto b = run_experiment(spec, many);
  EXPECT_EQ(a.to_json().dump(), b.to_json().dump());
  EXPECT_EQ(a.to_csv(), b.to_csv());
}

TEST(Run, CsvHasHeaderAndOneLinePerRow) {
  const auto report = run_experiment(parse_experiment_spec(small_spec()), RunOptions{true, 1});
  const std::string csv = report.to_csv();
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), 1 + report.rows.size());
  EXPECT_EQ(csv.rfind("graph,n,m,max_degree", 0), 0u);
}

TEST(Run, RelativeFilesResolveAgainstSpecDirectory) {
  const auto dir = std::filesystem::temp_directory_path() / "hcm_spec_test";
  std::filesystem::create_directories(dir / "g");
  std::ofstream(dir / "g" / "p3.txt") << "3 2\n0 1\n1 2\n";
  std::ofstream(dir / "spec.json")
      << R"({"graphs":[{"name":"p3","file":"g/p3.txt"}],"lambdas":[1],"operations":["exact"]})";
  const auto spec = load_experiment_spec((dir / "spec.json").string());
  EXPECT_EQ(spec.graphs.at(0).load(), path_graph(3));
  std::filesystem::remove_all(dir);
}

TEST(Sweep, RatiosAtLeastOne) {
  const auto grid = std::vector<Fugacity>{Fugacity::parse("1/20"), Fugacity::parse("1/4"), Fugacity::parse("1"),
                                          Fugacity::parse("5")};
  for (const auto& g : {cycle_graph(5), Graph(1), clique_blowup(cycle_graph(5), 2), petersen_graph()}) {
    const auto rows = compare_occupancy_sweep(g, grid);
    ASSERT_EQ(rows.size(), grid.size());
    for (const auto& r : rows) {
      EXPECT_EQ(r.source, "exact");
      EXPECT_GE(r.ratio, 1.0);
      EXPECT_GT(r.occ_lower, 0.0);
    }
  }
  const auto single = compare_occupancy_sweep(Graph(1), {Fugacity::parse("1")});
  EXPECT_EQ(*single[0].exact_value, Rational(1, 2));
  EXPECT_THROW(compare_occupancy_sweep(Graph(0), grid), std::domain_error);
}

TEST(Sweep, SampledAboveCap) {
  ChainConfig cfg;
  cfg.burn_in = 200;
  cfg.samples = 2000;
  cfg.thinning = 5;
  cfg.chains = 4;
  cfg.seed = 2;
  const auto rows = compare_occupancy_sweep(triangle_free_regular(40, 3, 1), {Fugacity(1.0)}, {}, cfg);
  EXPECT_EQ(rows[0].source, "sampled");
  EXPECT_GT(rows[0].std_error, 0.0);
  EXPECT_GE(rows[0].ratio, 1.0);
}
