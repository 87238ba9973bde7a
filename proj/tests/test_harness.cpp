#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bwt/harness.hpp"
#include "bwt/oracles.hpp"

using namespace bwt;

namespace {

AdversaryParams adv(Adversary s, double gamma, int k, double p, std::uint64_t seed) {
  AdversaryParams ap;
  ap.strategy = s;
  ap.gamma = gamma;
  ap.k = k;
  ap.p = p;
  ap.seed = seed;
  return ap;
}

int deleted_at(const Graph& before, const Graph& after, int v) { return before.degree(v) - after.degree(v); }

}  // namespace

TEST(Adversary, FloorFormula) {
  EXPECT_EQ(degree_floor(1000, 2, 0.2, 0.4), 280);
  EXPECT_EQ(degree_floor(500, 2, 0.2, 0.5), 175);
  EXPECT_EQ(degree_floor(10, 3, 0.1, 1.0), 8);
}

TEST(Adversary, IdentityWhenNothingCanGo) {
  Graph g = gnp(300, 0.5, 3);
  // floor equal to the current minimum degree
  const double gamma = static_cast<double>(g.min_degree()) / (0.5 * 300) - 0.5;
  ASSERT_EQ(degree_floor(300, 2, gamma, 0.5), g.min_degree());
  Graph h = adversary_delete(g, adv(Adversary::random, gamma, 2, 0.5, 1));
  EXPECT_GE(h.min_degree(), g.min_degree());
  AdversaryParams zero = adv(Adversary::random, 0.1, 2, 0.5, 1);
  zero.budget = 0.0;
  EXPECT_EQ(adversary_delete(g, zero).edges(), g.edges());
  EXPECT_EQ(adversary_delete(g, adv(Adversary::none, 0.1, 2, 0.5, 1)).edges(), g.edges());
}

TEST(Adversary, FloorAndBudgetHoldForEveryStrategy) {
  Graph g = gnp(400, 0.5, 4);
  for (Adversary s : {Adversary::random, Adversary::triangle_killer, Adversary::bipartite_push}) {
    for (double budget : {0.25, 1.0}) {
      AdversaryParams ap = adv(s, 0.15, 2, 0.5, 7);
      ap.budget = budget;
      Graph h = adversary_delete(g, ap);
      EXPECT_TRUE(h.is_subgraph_of(g));
      EXPECT_GE(h.min_degree(), degree_floor(400, 2, 0.15, 0.5)) << adversary_name(s);
      for (int v = 0; v < 400; ++v) EXPECT_LE(deleted_at(g, h, v), budget * g.degree(v) + 1e-9);
      if (s != Adversary::none) EXPECT_LT(h.m(), g.m()) << adversary_name(s);
    }
  }
}

TEST(Adversary, TriangleKillerClearsTarget) {
  Graph g = gnp(500, 0.5, 9);
  ASSERT_GT(triangles_at(g, 0), 0);
  AdversaryParams ap = adv(Adversary::triangle_killer, 0.1, 2, 0.5, 9);
  Graph h = adversary_delete(g, ap);
  EXPECT_EQ(triangles_at(h, 0), 0);
  EXPECT_GE(h.min_degree(), degree_floor(500, 2, 0.1, 0.5));
}

TEST(Adversary, TriangleKillerStopsOnlyAtTheFloor) {
  // at gamma = 0.2 the floor blocks a full clearing; every surviving
  // triangle at the target needs an edge whose removal breaks the floor
  Graph g = gnp(500, 0.5, 9);
  const int floor = degree_floor(500, 2, 0.2, 0.5);
  Graph h = adversary_delete(g, adv(Adversary::triangle_killer, 0.2, 2, 0.5, 9));
  EXPECT_EQ(h.degree(0), floor);
  EXPECT_EQ(triangles_at(h, 0), 1653);  // frozen
  VertexSet nb = h.neighbourhood(0);
  nb.for_each([&](int u) {
    h.neighbours(u).for_each([&](int w) {
      if (u < w && nb.contains(w)) EXPECT_TRUE(h.degree(u) == floor || h.degree(w) == floor);
    });
  });
}

TEST(Adversary, RejectsUnsatisfiableFloorAndNames) {
  EXPECT_THROW(adversary_delete(gnp(200, 0.3, 1), adv(Adversary::random, 0.45, 2, 0.3, 1)), std::invalid_argument);
  for (Adversary a : {Adversary::none, Adversary::random, Adversary::triangle_killer, Adversary::bipartite_push})
    EXPECT_EQ(parse_adversary(adversary_name(a)), a);
  EXPECT_THROW(parse_adversary("greedy"), std::invalid_argument);
}

TEST(Guests, HamiltonCycleParity) {
  GuestInstance even = make_guest("hamilton_cycle", 1000, 2, 0.004, 1);
  EXPECT_EQ(even.colours_needed, 2);
  EXPECT_TRUE(even.zero_vertices.empty());
  EXPECT_EQ(even.bandwidth, 2);
  EXPECT_EQ(even.graph.m(), 1000);

  const double beta = 0.004;
  GuestInstance odd = make_guest("hamilton_cycle", 1001, 2, beta, 1);
  ASSERT_EQ(odd.zero_vertices.size(), 1u);
  EXPECT_GE(odd.labelling.position(odd.zero_vertices[0]), static_cast<int>(std::floor(std::sqrt(beta) * 1001)));
  EXPECT_EQ(odd.colouring[odd.zero_vertices[0]], 0);
  for (int v = 0; v < 1001; ++v) EXPECT_EQ(odd.graph.degree(v), 2);
}

TEST(Guests, SquaredCycle) {
  GuestInstance g = make_guest("power_cycle:2", 60, 3, 0.05, 1);
  EXPECT_EQ(g.graph.m(), 120);
  EXPECT_EQ(g.graph.max_degree(), 4);
  EXPECT_EQ(g.graph.min_degree(), 4);
  EXPECT_EQ(g.colours_needed, 3);
  EXPECT_TRUE(is_proper(g.graph, g.colouring));
  int triangles = 0;
  for (auto [u, v] : g.graph.edges()) triangles += (g.graph.neighbourhood(u) & g.graph.neighbourhood(v)).size();
  EXPECT_EQ(triangles, 3 * 60);  // each triangle {i, i+1, i+2} counted on its three edges
  EXPECT_EQ(g.triangle_free_prefix, 0);
}

TEST(Guests, MetadataHonesty) {
  struct Case {
    const char* spec;
    int k;
  };
  for (Case c : {Case{"hamilton_cycle", 2}, Case{"power_cycle:2", 3}, Case{"power_path:2", 3},
                 Case{"bounded_tree:3", 2}, Case{"f_factor:K3", 3}, Case{"f_factor:K4", 4}, Case{"f_factor:C4", 2},
                 Case{"f_factor:C5", 3}, Case{"f_factor:P3", 2}, Case{"f_factor:K2", 2}}) {
    SCOPED_TRACE(c.spec);
    const int n = 1200;
    const double beta = 0.01;
    GuestInstance g = make_guest(c.spec, n, c.k, beta, 3);
    EXPECT_EQ(g.graph.n(), n);
    EXPECT_EQ(g.bandwidth, bandwidth_of_labelling(g.graph, g.labelling));
    EXPECT_LE(g.bandwidth, beta * n);
    EXPECT_TRUE(is_proper(g.graph, g.colouring));
    EXPECT_LE(g.colours_needed, c.k);
    for (int col : g.colouring) EXPECT_LE(col, c.k);
    EXPECT_TRUE(check_zero_free(g.colouring, g.labelling, 10.0 / 0.01, beta, c.k));
    EXPECT_EQ(g.triangle_free_prefix, triangle_free_prefix(g.graph, g.labelling));
    EXPECT_EQ(g.degeneracy, degeneracy_order(g.graph).d);
    for (int x : g.zero_vertices) EXPECT_EQ(g.colouring[x], 0);
  }
}

TEST(Guests, RejectsBadFamilies) {
  EXPECT_THROW(make_guest("power_cycle:0", 60, 3, 0.05, 1), std::invalid_argument);
  EXPECT_THROW(make_guest("f_factor:K3", 100, 3, 0.05, 1), std::invalid_argument);
  EXPECT_THROW(make_guest("f_factor:K6", 120, 6, 0.05, 1), std::invalid_argument);
  EXPECT_THROW(make_guest("power_cycle:2", 60, 2, 0.05, 1), std::invalid_argument);
  EXPECT_THROW(make_guest("wheel", 60, 3, 0.05, 1), std::invalid_argument);
  EXPECT_THROW(make_guest("f_factor:C5", 100, 2, 0.05, 1), std::invalid_argument);
}

TEST(Config, TextAndValidation) {
  ExperimentConfig cfg;
  std::istringstream is("# sweep cell\nn = 600\np=0.5  # dense\n\nguest = power_cycle:2\nk = 3\ngamma = 0.1\n");
  apply_config_text(cfg, is);
  EXPECT_EQ(cfg.n, 600);
  EXPECT_DOUBLE_EQ(cfg.p, 0.5);
  EXPECT_EQ(cfg.guest, "power_cycle:2");
  EXPECT_NO_THROW(cfg.validate());

  std::istringstream unknown("colour = 3\n");
  EXPECT_THROW(apply_config_text(cfg, unknown), std::invalid_argument);
  std::istringstream junk("n = many\n");
  EXPECT_THROW(apply_config_text(cfg, junk), std::invalid_argument);

  for (auto [key, value] : std::vector<std::pair<std::string, std::string>>{
           {"eps", "1.5"}, {"gamma", "0.6"}, {"k", "0"}, {"mode", "quantum"}, {"adversary", "greedy"}, {"p", "0"}}) {
    ExperimentConfig c;
    apply_config_value(c, key, value);
    EXPECT_THROW(c.validate(), std::invalid_argument) << key;
  }
}

TEST(Pipeline, CompleteHostSucceeds) {
  ExperimentConfig cfg;
  cfg.n = 200;
  cfg.p = 1.0;
  RunRecord rec = run_pipeline(cfg);
  EXPECT_TRUE(rec.success) << rec.failure_stage << ": " << rec.failure_message;
}

TEST(Pipeline, UnsatisfiableFloorFailsAtAdversary) {
  ExperimentConfig cfg;
  cfg.gamma = 0.45;
  RunRecord rec = run_pipeline(cfg);
  EXPECT_FALSE(rec.success);
  EXPECT_EQ(rec.failure_stage, "adversary");
}

TEST(Pipeline, Seed10Regression) {
  ExperimentConfig cfg;
  cfg.seed = 10;
  PipelineArtifacts A;
  RunRecord rec = run_pipeline(cfg, &A);
  ASSERT_TRUE(rec.success) << rec.failure_stage << ": " << rec.failure_message;
  EXPECT_GT(rec.runtime_ms, 0.0);
  EXPECT_TRUE(verify_embedding(A.g, A.guest.graph, A.embedding.phi, A.pre.restr));
  EXPECT_GE(A.g.min_degree(), degree_floor(cfg.n, cfg.k, cfg.gamma, cfg.p));
  // frozen
  EXPECT_EQ(csv_row(rec, false), "10,1000,0.4,2,0.2,hamilton_cycle,random,random,true,,2,1,23,0,");
}

TEST(Pipeline, Deterministic) {
  ExperimentConfig cfg;
  cfg.seed = 3;
  cfg.n = 600;
  RunRecord a = run_pipeline(cfg), b = run_pipeline(cfg);
  EXPECT_EQ(csv_row(a, false), csv_row(b, false));
  EXPECT_EQ(a.warnings, b.warnings);
}

TEST(Csv, HeaderAndRow) {
  EXPECT_EQ(csv_header(),
            "seed,n,p,k,gamma,guest,adversary,mode,success,failure_stage,r,v0_size,moved,embed_retries,runtime_ms");
  RunRecord rec;
  rec.config.seed = 4;
  rec.failure_stage = "lemma_g";
  rec.runtime_ms = 12.5;
  const std::string row = csv_row(rec);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 14);
  EXPECT_EQ(row.rfind("4,1000,0.4,2,0.2,hamilton_cycle,random,random,false,lemma_g,", 0), 0u);
}

TEST(ClusterTargets, EvenShareToSmallest) {
  std::vector<VertexSet> cl{VertexSet(20, {0, 1, 2}), VertexSet(20, {3, 4}), VertexSet(20, {5, 6, 7})};
  EXPECT_EQ(cluster_targets(cl, 4), (std::vector<int>{4, 4, 4}));
  EXPECT_EQ(cluster_targets(cl, 0), (std::vector<int>{3, 2, 3}));
}
