#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "bwt/regularity.hpp"
#include "bwt/rng.hpp"

using namespace bwt;

namespace {

Graph complete_bipartite(int a, int b) {
  std::vector<Edge> e;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) e.emplace_back(i, a + j);
  return Graph::from_edges(a + b, e);
}

// Bipartite instance on 2s vertices: X = [0, s), Y = [s, 2s).
struct Slice {
  Graph g;
  VertexSet x, y;
};

Slice random_slice(int s, double p, std::uint64_t seed) {
  Slice sl{gnp(2 * s, p, seed), VertexSet::range(2 * s, 0, s), VertexSet::range(2 * s, s, 2 * s)};
  return sl;
}

}  // namespace

TEST(SubpairThreshold, Ceil) {
  EXPECT_EQ(subpair_threshold(0.3, 14), 5);
  EXPECT_EQ(subpair_threshold(0.25, 12), 3);
  EXPECT_EQ(subpair_threshold(0.01, 10), 1);
}

TEST(LowerRegular, Examples) {
  Graph kb = complete_bipartite(4, 5);
  VertexSet x = VertexSet::range(9, 0, 4), y = VertexSet::range(9, 4, 9);
  for (double eps : {0.1, 0.5, 0.9}) {
    auto v = check_lower_regular(kb, x, y, eps, 1.0, 1.0, CheckMode::exhaustive());
    EXPECT_EQ(v.kind, PairKind::lower_regular);
    EXPECT_TRUE(v.exact);
  }
  // X = {a, b} = {0, 1}, Y = {c, d} = {2, 3}, only ac.
  Graph g = Graph::from_edges(4, {{0, 2}});
  auto v = check_lower_regular(g, VertexSet(4, {0, 1}), VertexSet(4, {2, 3}), 0.4, 0.9, 1.0, CheckMode::exhaustive());
  EXPECT_EQ(v.kind, PairKind::irregular);
  ASSERT_TRUE(v.witness.has_value());
  EXPECT_EQ(v.witness->x, std::vector<int>({1}));
  EXPECT_EQ(v.witness->y, std::vector<int>({3}));
}

TEST(LowerRegular, SliceRegression) {
  Graph g = gnp(28, 0.5, 3);
  VertexSet x = VertexSet::range(28, 0, 14), y = VertexSet::range(28, 14, 28);
  // d - eps = 0 makes the condition vacuous
  auto v = check_lower_regular(g, x, y, 0.3, 0.3, 0.5, CheckMode::exhaustive());
  EXPECT_EQ(v.kind, PairKind::lower_regular);
  EXPECT_NEAR(v.d_observed, 1.0306122448979591, 1e-12);  // frozen
  // smallest admissible subpair p-density 0.24, so d = 0.5 passes and d = 0.7 fails
  auto v5 = check_lower_regular(g, x, y, 0.3, 0.5, 0.5, CheckMode::exhaustive());
  EXPECT_EQ(v5.kind, PairKind::lower_regular);
  EXPECT_NEAR(v5.min_density, 0.24, 1e-12);
  auto v7 = check_lower_regular(g, x, y, 0.3, 0.7, 0.5, CheckMode::exhaustive());
  EXPECT_EQ(v7.kind, PairKind::irregular);
}

TEST(LowerRegular, ExactRejectsOversized) {
  Graph g = gnp(50, 0.5, 1);
  EXPECT_THROW(check_lower_regular(g, VertexSet::range(50, 0, 25), VertexSet::range(50, 25, 50), 0.3, 0.3, 0.5,
                                   CheckMode::exhaustive()),
               std::invalid_argument);
}

TEST(LowerRegular, IrregularWitnessIsValid) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Slice s = random_slice(12, 0.4, 300 + seed);
    const double eps = 0.25, d = 0.6, p = 0.4;
    for (const CheckMode& m : {CheckMode::exhaustive(), CheckMode{false, 300, seed, false}}) {
      auto v = check_lower_regular(s.g, s.x, s.y, eps, d, p, m);
      if (v.kind != PairKind::irregular) continue;
      ASSERT_TRUE(v.witness.has_value());
      VertexSet wx(24, v.witness->x), wy(24, v.witness->y);
      EXPECT_TRUE(wx.subset_of(s.x));
      EXPECT_TRUE(wy.subset_of(s.y));
      EXPECT_GE(wx.size(), eps * 12 - 1e-9);
      EXPECT_GE(wy.size(), eps * 12 - 1e-9);
      EXPECT_LT(p_density(s.g, wx, wy, p), d - eps);
    }
  }
}

TEST(LowerRegular, SampledAgreesWithExactAtFallbackSize) {
  for (int t = 0; t < 200; ++t) {
    Slice s = random_slice(12, 0.3 + 0.002 * t, 7000 + t);
    const double eps = 0.25, d = 0.5 + 0.002 * t, p = 0.5;
    auto ex = check_lower_regular(s.g, s.x, s.y, eps, d, p, CheckMode::exhaustive());
    auto sm = check_lower_regular(s.g, s.x, s.y, eps, d, p, CheckMode::sampled(200, t));
    EXPECT_EQ(ex.kind, sm.kind) << "instance " << t;
  }
}

TEST(LowerRegular, SampledWithoutFallbackIsSound) {
  // a sampled irregular verdict always carries a real witness, so exact agrees
  for (int t = 0; t < 200; ++t) {
    Slice s = random_slice(12, 0.45, 9000 + t);
    auto ex = check_lower_regular(s.g, s.x, s.y, 0.25, 0.6, 0.5, CheckMode::exhaustive());
    auto sm = check_lower_regular(s.g, s.x, s.y, 0.25, 0.6, 0.5, CheckMode{false, 100, static_cast<std::uint64_t>(t), false});
    if (sm.kind == PairKind::irregular) EXPECT_EQ(ex.kind, PairKind::irregular) << t;
    if (ex.kind == PairKind::lower_regular) EXPECT_EQ(sm.kind, PairKind::lower_regular) << t;
  }
}

TEST(LowerRegular, FewLowDegreeVerticesInCertifiedPairs) {
  int certified = 0;
  for (int t = 0; t < 200; ++t) {
    Slice s = random_slice(12, 0.7, 11000 + t);
    const double eps = 0.25, d = 0.5, p = 0.7;
    auto v = check_lower_regular(s.g, s.x, s.y, eps, d, p, CheckMode::exhaustive());
    if (v.kind != PairKind::lower_regular) continue;
    ++certified;
    EXPECT_LT(count_low_degree(s.g, s.x, s.y, eps, d, p), eps * 12);
  }
  EXPECT_GT(certified, 0);
}

TEST(LowerRegular, AlterationStability) {
  Rng rng(17);
  int checked = 0;
  for (int t = 0; t < 60; ++t) {
    Graph g = gnp(30, 0.7, 12000 + t);
    VertexSet x = VertexSet::range(30, 0, 12), y = VertexSet::range(30, 12, 24);
    const double eps = 0.2, d = 0.4, p = 0.7;
    if (check_lower_regular(g, x, y, eps, d, p, CheckMode::exhaustive()).kind != PairKind::lower_regular) continue;
    for (int mu12 : {1, 2}) {
      const double mu = mu12 / 12.0;
      const double eps_hat = eps + 4.0 * std::sqrt(mu);
      // swap mu12 vertices on each side with spare vertices 24..29
      VertexSet xh = x, yh = y;
      auto spare = rng.sample(6, 2 * mu12);
      auto xs = rng.sample(12, mu12), ys = rng.sample(12, mu12);
      for (int q = 0; q < mu12; ++q) {
        xh.erase(xs[q]);
        xh.insert(24 + spare[q]);
        yh.erase(12 + ys[q]);
        yh.insert(24 + spare[mu12 + q]);
      }
      auto v = check_lower_regular(g, xh, yh, eps_hat, d, p, CheckMode::exhaustive());
      EXPECT_EQ(v.kind, PairKind::lower_regular) << "instance " << t << " mu " << mu;
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(Regular, CompletePairIsRegular) {
  Graph kb = complete_bipartite(6, 6);
  auto v = check_regular(kb, VertexSet::range(12, 0, 6), VertexSet::range(12, 6, 12), 0.2, 0.5, 1.0,
                         CheckMode::exhaustive());
  EXPECT_EQ(v.kind, PairKind::regular);
}

TEST(SuperRegular, Examples) {
  Graph kb = complete_bipartite(30, 30);
  VertexSet x = VertexSet::range(60, 0, 30), y = VertexSet::range(60, 30, 60);
  EXPECT_TRUE(check_super_regular(kb, kb, x, y, 0.1, 0.5, 1.0));

  std::vector<Edge> removed;
  for (int j = 30; j < 60; ++j) removed.emplace_back(0, j);
  Graph iso = kb.without_edges(removed);
  EXPECT_FALSE(check_super_regular(iso, kb, x, y, 0.1, 0.5, 1.0));
}

TEST(SuperRegular, DegreeDeletedVertexFails) {
  const double p = 0.5, d = 0.3, eps = 0.05;
  Graph host = gnp(200, p, 21);
  VertexSet x = VertexSet::range(200, 0, 100), y = VertexSet::range(200, 100, 200);
  // cut vertex 0 down to 0.1 p |Y| neighbours in Y
  std::vector<int> nb = (host.neighbourhood(0) & y).to_vector();
  const int keep = static_cast<int>(0.1 * p * 100);
  std::vector<Edge> removed;
  for (std::size_t q = keep; q < nb.size(); ++q) removed.emplace_back(0, nb[q]);
  Graph g = host.without_edges(removed);
  EXPECT_EQ(g.degree_into(0, y), keep);
  EXPECT_LT(g.degree_into(0, y), (d - eps) * p * 100);
  EXPECT_FALSE(check_super_regular(g, host, x, y, eps, d, p));
}

TEST(LowDegree, DirectScan) {
  Graph g = Graph::from_edges(6, {{0, 3}, {0, 4}, {0, 5}, {1, 3}});
  EXPECT_EQ(count_low_degree(g, VertexSet(6, {0, 1, 2}), VertexSet(6, {3, 4, 5}), 0.1, 0.5, 1.0), 2);
}

TEST(Inheritance, Examples) {
  // X = 0..4, Y = 5..9, z = 10 adjacent to all of X and Y
  std::vector<Edge> e;
  for (int a = 0; a < 5; ++a)
    for (int b = 5; b < 10; ++b) e.emplace_back(a, b);
  for (int v = 0; v < 10; ++v) e.emplace_back(v, 10);
  e.emplace_back(11, 12);
  Graph g = Graph::from_edges(13, e);
  VertexSet x = VertexSet::range(13, 0, 5), y = VertexSet::range(13, 5, 10);
  EXPECT_EQ(count_inheritance_failures(g, g, x, y, VertexSet(13, {10}), 0.2, 0.5, 1.0, true), 0);
  EXPECT_EQ(count_inheritance_failures(g, g, x, y, VertexSet(13, {11}), 0.2, 0.5, 1.0, false), 1);
  EXPECT_EQ(count_inheritance_failures(g, g, x, y, VertexSet(13, {10, 11, 12}), 0.2, 0.5, 1.0, true), 2);
}

TEST(Inheritance, SeededRegression) {
  Graph g = gnp(400, 0.4, 11);
  VertexSet x = VertexSet::range(400, 0, 100), y = VertexSet::range(400, 100, 200), c = VertexSet::range(400, 200, 400);
  ASSERT_TRUE(check_lower_regular(g, x, y, 0.3, 0.5, 0.4, CheckMode::sampled(200, 1)).lower_ok());
  const int one = count_inheritance_failures(g, g, x, y, c, 0.3, 0.5, 0.4, false);
  const int two = count_inheritance_failures(g, g, x, y, c, 0.3, 0.5, 0.4, true);
  EXPECT_LE(one, 0.05 * 200);
  EXPECT_LE(two, 0.05 * 200);
  EXPECT_EQ(one, 0);  // frozen
  EXPECT_EQ(two, 5);  // frozen
}

TEST(Energy, PairEnergyConvexForm) {
  const double L = 4.0;
  EXPECT_DOUBLE_EQ(pair_energy(1.5, L), 2.25);
  EXPECT_DOUBLE_EQ(pair_energy(4.0, L), 16.0);
  EXPECT_DOUBLE_EQ(pair_energy(6.0, L), 2 * L * 6.0 - L * L);
  EXPECT_DOUBLE_EQ(energy_cap(L, 3), L * L + 16 * L * 9);
}

TEST(Energy, TrivialGraphs) {
  for (double p : {0.3, 1.0}) {
    Graph g = p == 1.0 ? gnp(120, 1.0, 1) : Graph(120);
    std::vector<VertexSet> init = {VertexSet::range(120, 0, 60), VertexSet::range(120, 60, 120)};
    auto res = energy_partition(g, init, 0.2, p == 1.0 ? 1.0 : 0.3);
    EXPECT_TRUE(res.regular);
    EXPECT_TRUE(res.rounds.empty());
    for (auto& r : res.residues) EXPECT_TRUE(r.empty());
  }
}

TEST(Energy, SinglePartRegression) {
  auto res = energy_partition(gnp(600, 0.35, 4), {VertexSet::all(600)}, 0.25, 0.35);
  EXPECT_LE(res.rounds.size(), 5u);
  EXPECT_EQ(res.rounds.size(), 0u);  // frozen: one part has no pairs to refine
  EXPECT_DOUBLE_EQ(res.state.energy, 0.0);
  EXPECT_EQ(res.stop_reason, "regular");
}

TEST(Energy, MonotoneWithIncrementAndCap) {
  const double eps = 0.25;
  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    Graph g = gnp(600, 0.35, seed);
    std::vector<VertexSet> init;
    for (int i = 0; i < 4; ++i) init.push_back(VertexSet::range(600, 150 * i, 150 * i + 150));
    auto res = energy_partition(g, init, eps, 0.35);
    const double cap = energy_cap(res.state.L, 4);
    double last = -1.0;
    for (auto& r : res.rounds) {
      EXPECT_GE(r.energy_after, r.energy_before);
      EXPECT_GE(r.energy_before, last);
      if (r.triggered) EXPECT_GE(r.energy_after - r.energy_before, std::pow(eps, 5) / 1000);
      EXPECT_LE(r.energy_after, cap);
      last = r.energy_after;
    }
    EXPECT_LE(res.state.energy, cap);
    if (seed == 1) {
      EXPECT_EQ(res.rounds.size(), 3u);                     // frozen
      EXPECT_NEAR(res.state.energy, 7.7280158656488362, 1e-9);  // frozen
    }
  }
}

TEST(Energy, RecomputedEnergyMatchesState) {
  Graph g = gnp(300, 0.4, 2);
  std::vector<VertexSet> init = {VertexSet::range(300, 0, 150), VertexSet::range(300, 150, 300)};
  auto res = energy_partition(g, init, 0.25, 0.4);
  EXPECT_NEAR(partition_energy(g, res.state.partition, {150, 150}, 0.4, res.state.L), res.state.energy, 1e-12);
}

TEST(MinDegreePartition, CompleteGraph) {
  auto r = min_degree_regular_partition(gnp(200, 1.0, 1), 0.1, 0.5, 1.0, 4);
  const int t = static_cast<int>(r.clusters.size());
  EXPECT_GE(t, 4);
  EXPECT_EQ(static_cast<int>(r.reduced_edges.size()), t * (t - 1) / 2);
  EXPECT_EQ(r.reduced_min_degree, t - 1);
}

TEST(MinDegreePartition, EdgelessFails) {
  EXPECT_THROW(min_degree_regular_partition(Graph(200), 0.1, 0.5, 1.0, 4), std::runtime_error);
}

TEST(MinDegreePartition, AdversarialRegression) {
  // random deletions down to delta >= 0.7 p n
  Graph host = gnp(1000, 0.4, 5);
  Rng rng(5, 1);
  std::vector<Edge> edges = host.edges();
  rng.shuffle(edges);
  std::vector<int> deg(1000);
  for (int v = 0; v < 1000; ++v) deg[v] = host.degree(v);
  const int floor = static_cast<int>(std::ceil(0.7 * 0.4 * 1000));
  std::vector<Edge> removed;
  for (auto [u, v] : edges)
    if (deg[u] > floor && deg[v] > floor) {
      --deg[u];
      --deg[v];
      removed.emplace_back(u, v);
    }
  Graph g = host.without_edges(removed);
  ASSERT_GE(g.min_degree(), floor);
  RegularPartitionOptions opt;
  opt.seed = 5;
  auto r = min_degree_regular_partition(g, 0.2, 0.1, 0.4, 4, opt);
  const int t = static_cast<int>(r.clusters.size());
  EXPECT_TRUE(r.certified);
  EXPECT_GE(r.reduced_min_degree, 0.4 * t);
  EXPECT_LE(r.exceptional.size(), 0.2 * 1000);
  // partition invariants
  VertexSet seen = r.exceptional;
  int lo = 1000, hi = 0;
  for (auto& c : r.clusters) {
    EXPECT_TRUE(seen.disjoint(c));
    seen |= c;
    lo = std::min(lo, c.size());
    hi = std::max(hi, c.size());
  }
  EXPECT_EQ(seen.size(), 1000);
  EXPECT_LE(hi - lo, 1);
  EXPECT_LE(t * (t - 1) / 2 - static_cast<int>(r.regular_pairs.size()), 0.2 * t * (t - 1) / 2);
}

TEST(MinDegreePartition, DumpFormat) {
  auto r = min_degree_regular_partition(gnp(100, 1.0, 1), 0.1, 0.5, 1.0, 4);
  std::ostringstream os;
  write_partition(os, r);
  std::istringstream is(os.str());
  std::string word;
  int t, one;
  is >> word >> t >> one;
  EXPECT_EQ(word, "partition");
  EXPECT_EQ(t, static_cast<int>(r.clusters.size()));
  EXPECT_NE(os.str().find("exceptional"), std::string::npos);
}
