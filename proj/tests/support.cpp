#include "support.hpp"

#include <algorithm>
#include <cmath>

#include "bwt/oracles.hpp"
#include "bwt/rng.hpp"

namespace bwt::fixtures {

TailTrial chernoff_trial(double eps, double mean, int trials, int reps, std::uint64_t seed) {
  TailTrial out;
  out.eps = eps;
  out.expectation = mean;
  out.t = eps * mean;
  TailBoundQuery q;
  q.family = TailFamily::binomial_chernoff;
  q.eps = eps;
  q.mean = mean;
  out.bound = tail_bound(q);
  const double p = mean / trials;
  Rng rng(seed, 0xC4);
  int hits = 0;
  for (int r = 0; r < reps; ++r) {
    int x = 0;
    for (int i = 0; i < trials; ++i) x += rng.bernoulli(p);
    if (std::abs(x - mean) > out.t) ++hits;
  }
  out.freq = static_cast<double>(hits) / reps;
  return out;
}

TailTrial hypergeometric_trial(double eps, int N, int m, int s, double t, int reps, std::uint64_t seed) {
  TailTrial out;
  out.eps = eps;
  out.expectation = static_cast<double>(m) * s / N;
  out.t = t;
  TailBoundQuery q;
  q.family = TailFamily::hypergeometric;
  q.eps = eps;
  q.t = t;
  out.bound = tail_bound(q);
  Rng rng(seed, 0x48);
  int hits = 0;
  for (int r = 0; r < reps; ++r) {
    int red_left = m, left = N, x = 0;
    for (int i = 0; i < s; ++i, --left)
      if (rng.below(left) < static_cast<std::uint64_t>(red_left)) {
        ++x;
        --red_left;
      }
    if (std::abs(x - out.expectation) > t) ++hits;
  }
  out.freq = static_cast<double>(hits) / reps;
  return out;
}

GInstance g_instance(const ExperimentConfig& cfg) {
  GInstance in;
  in.cfg = cfg;
  in.host = gnp(cfg.n, cfg.p, cfg.seed);
  AdversaryParams ap;
  ap.strategy = parse_adversary(cfg.adversary);
  ap.gamma = cfg.gamma;
  ap.k = cfg.k;
  ap.p = cfg.p;
  ap.budget = cfg.budget;
  ap.seed = cfg.seed;
  in.g = adversary_delete(in.host, ap);
  in.guest = make_guest(cfg.guest, cfg.n, cfg.k, resolved_beta(cfg, 1), cfg.seed);
  in.beta = resolved_beta(cfg, in.guest.bandwidth);
  in.guest = make_guest(cfg.guest, cfg.n, cfg.k, in.beta, cfg.seed);
  LemmaGParams gp;
  gp.p = cfg.p;
  gp.gamma = cfg.gamma;
  gp.k = cfg.k;
  gp.eps = cfg.eps;
  gp.d = cfg.d;
  gp.seed = cfg.seed;
  in.lg = lemma_for_g(in.g, in.host, gp);
  return in;
}

PreInstance pre_instance(const ExperimentConfig& cfg, int v0_size, std::uint64_t seed) {
  PreInstance in;
  in.base = g_instance(cfg);
  const LemmaGResult& lg = in.base.lg;
  in.V0 = lg.V0;
  in.clusters = lg.clusters;
  // Take from a largest cluster each time so rows stay k-equitable.
  Rng rng(seed, 0x70);
  while (in.V0.size() < v0_size) {
    int most = 0;
    for (const auto& c : in.clusters) most = std::max(most, c.size());
    if (most == 0) break;
    std::vector<int> cells;
    for (int c = 0; c < static_cast<int>(in.clusters.size()); ++c)
      if (in.clusters[c].size() == most) cells.push_back(c);
    VertexSet& from = in.clusters[cells[rng.below(cells.size())]];
    std::vector<int> members = from.to_vector();
    const int v = members[rng.below(members.size())];
    from.erase(v);
    in.V0.insert(v);
  }

  LemmaHParams hp;
  hp.k = cfg.k;
  hp.xi = cfg.xi;
  hp.beta = in.base.beta;
  hp.z = cfg.z;
  hp.seed = seed;
  hp.strict = false;
  const GuestInstance& gi = in.base.guest;
  in.assignment = lemma_for_h(gi.graph, gi.labelling, gi.colouring, lg.reduced,
                              cluster_targets(in.clusters, in.V0.size()), hp);

  ReserveParams rp;
  rp.mu = cfg.mu;
  rp.eps = cfg.eps;
  rp.p = cfg.p;
  rp.seed = seed;
  in.S = reserve_set(in.base.g, in.base.host, in.clusters, rp).S;

  PreEmbedParams pp;
  pp.eps = cfg.eps;
  pp.d = cfg.d;
  pp.p = cfg.p;
  pp.mu = cfg.mu;
  pp.zeta = cfg.zeta;
  pp.seed = seed;
  in.pre = pre_embed(in.base.g, in.base.host, in.V0, in.clusters, lg.reduced, gi.graph, gi.labelling,
                     in.assignment.f, in.S, pp);
  return in;
}

ReducedGraph synthetic_reduced(int r, int k, double extra, std::uint64_t seed) {
  ReducedGraph R;
  R.index = BackboneIndex{r, k};
  std::vector<Edge> edges = R.index.backbone_edges();
  R.extension.assign(r, 0);
  for (int i = 0; i < r; ++i) {
    const int other = i + 1 < r ? i + 1 : i - 1;
    R.extension[i] = R.index.id(other, 0);
    edges.emplace_back(std::min(R.index.id(i, 0), R.index.id(other, 0)),
                       std::max(R.index.id(i, 0), R.index.id(other, 0)));
  }
  Rng rng(seed, 0x52);
  const int cells = R.index.size();
  for (int a = 0; a < cells; ++a)
    for (int b = a + 1; b < cells; ++b)
      if (rng.bernoulli(extra)) edges.emplace_back(a, b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  R.edges = Graph::from_edges(cells, edges);
  return R;
}

std::vector<int> equal_targets(int n, int cells) {
  std::vector<int> m(cells, n / cells);
  for (int c = 0; c < n % cells; ++c) ++m[c];
  return m;
}

std::vector<int> perturbed_targets(const std::vector<VertexSet>& clusters, int max_shift, std::uint64_t seed) {
  const int cells = static_cast<int>(clusters.size());
  std::vector<int> base(cells), m(cells);
  for (int c = 0; c < cells; ++c) base[c] = m[c] = clusters[c].size();
  Rng rng(seed, 0x7A);
  for (int round = 0; round < 4 * cells; ++round) {
    const int a = static_cast<int>(rng.below(cells));
    const int b = static_cast<int>(rng.below(cells));
    if (a == b) continue;
    int u = 1 + static_cast<int>(rng.below(max_shift));
    u = std::min({u, max_shift - (m[a] - base[a]), max_shift - (base[b] - m[b])});
    if (u <= 0) continue;
    m[a] += u;
    m[b] -= u;
  }
  return m;
}

}  // namespace bwt::fixtures
