// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bwt/errors.hpp"
#include "bwt/oracles.hpp"
#include "support.hpp"

using namespace bwt;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Verdict& v, double secs) {
  std::printf("%s criterion %d (%s): %s [%.1fs]\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), v.detail.c_str(),
              secs);
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

void run(int id, const std::string& name, const std::function<Verdict()>& body) {
  auto t0 = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("exception: ") + e.what();
  }
  report(id, name, v, seconds_since(t0));
}

template <class... A>
std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

// CSV rows (without runtime) of every pipeline run, replayed by criterion 10.
std::vector<std::pair<ExperimentConfig, std::string>> recorded;

RunRecord record_run(const ExperimentConfig& cfg, PipelineArtifacts* art) {
  RunRecord rec = run_pipeline(cfg, art);
  recorded.emplace_back(cfg, csv_row(rec, false));
  return rec;
}

// ---- 1, 2: resilience runs ----

Verdict resilience(int n, int need, bool zero_check) {
  int ok = 0, unnamed = 0, zero_bad = 0;
  double worst = 0.0;
  std::string failed;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.seed = seed;
    PipelineArtifacts art;
    RunRecord rec = record_run(cfg, &art);
    worst = std::max(worst, rec.runtime_ms / 1000.0);
    if (!rec.success) {
      if (rec.failure_stage.empty()) ++unnamed;
      failed += fmt(" %d:%s", static_cast<int>(seed), rec.failure_stage.c_str());
      continue;
    }
    if (!verify_embedding(art.g, art.guest.graph, art.embedding.phi, art.pre.restr)) {
      failed += fmt(" %d:unverified", static_cast<int>(seed));
      continue;
    }
    ++ok;
    if (!zero_check) continue;
    // the zero vertex must be assigned to an extension cell, as read back from the dump
    const auto& zeros = art.guest.zero_vertices;
    bool routed = zeros.size() == 1;
    if (routed) {
      const int x = zeros[0];
      const BackboneIndex& idx = art.lemma_g.index;
      std::ostringstream os;
      write_assignment(os, art.assignment, idx);
      std::istringstream is(os.str());
      std::string line;
      int cell = -1;
      while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string tag;
        int v, i, j;
        if ((ls >> tag >> v >> i >> j) && tag == "assign" && v == x) cell = idx.id(i - 1, j - 1);
      }
      const auto& ext = art.lemma_g.reduced.extension;
      routed = cell >= 0 && std::find(ext.begin(), ext.end(), cell) != ext.end() &&
               art.assignment.special.contains(x);
    }
    if (!routed) ++zero_bad;
  }
  Verdict v;
  v.pass = ok >= need && worst <= 120.0 && unnamed == 0 && zero_bad == 0;
  v.detail = fmt("%d/20 verified (need %d), max run %.2fs (limit 120s), unnamed failures %d", ok, need, worst, unnamed);
  if (zero_check) v.detail += fmt(", zero vertex off extension in %d runs", zero_bad);
  if (!failed.empty()) v.detail += ", failed:" + failed;
  return v;
}

// ---- 3: sampled vs exhaustive regularity ----

Verdict oracle_equivalence() {
  const double eps = 0.25, p = 0.5;
  int disagree = 0, certified = 0, low_bad = 0;
  for (int t = 0; t < 200; ++t) {
    const double q = 0.3 + 0.0025 * t;
    const double d = 0.2 + 0.004 * (t % 100);
    Graph g = gnp(24, q, 20000 + t);
    VertexSet x = VertexSet::range(24, 0, 12), y = VertexSet::range(24, 12, 24);
    auto ex = check_lower_regular(g, x, y, eps, d, p, CheckMode::exhaustive());
    auto sm = check_lower_regular(g, x, y, eps, d, p, CheckMode::sampled(200, t));
    auto ex2 = check_regular(g, x, y, eps, d, p, CheckMode::exhaustive());
    auto sm2 = check_regular(g, x, y, eps, d, p, CheckMode::sampled(200, t));
    if (ex.kind != sm.kind || ex2.kind != sm2.kind) ++disagree;
    if (ex.kind == PairKind::lower_regular) {
      ++certified;
      if (count_low_degree(g, x, y, eps, d, p) >= eps * 12) ++low_bad;
    }
  }
  Verdict v;
  v.pass = disagree == 0 && low_bad == 0 && certified > 0;
  v.detail = fmt("200 instances, %d disagreements, %d certified pairs, %d with >= eps|X| low-degree vertices",
                 disagree, certified, low_bad);
  return v;
}

// ---- 4: energy increment ----

Verdict energy_increment() {
  const double eps = 0.25, p = 0.35;
  const double gain = std::pow(eps, 5) / 1000.0;
  int decreasing = 0, small_gain = 0, over_cap = 0, slow = 0, triggered = 0, total_rounds = 0;
  double worst = 0.0;
  for (int s = 1; s <= 50; ++s) {
    Graph g = gnp(600, p, s);
    std::vector<VertexSet> init;
    for (int i = 0; i < 4; ++i) init.push_back(VertexSet::range(600, 150 * i, 150 * i + 150));
    auto t0 = Clock::now();
    EnergyResult er = energy_partition(g, init, eps, p);
    const double secs = seconds_since(t0);
    worst = std::max(worst, secs);
    if (secs > 30.0) ++slow;
    const double L = er.state.L;
    const double cap = std::ceil(1000.0 * std::pow(eps, -5) * (L * L + 16.0 * L));
    if (static_cast<double>(er.rounds.size()) > cap) ++over_cap;
    double prev = -1.0;
    for (const EnergyRound& r : er.rounds) {
      ++total_rounds;
      if (r.energy_after < r.energy_before || r.energy_before < prev) ++decreasing;
      prev = r.energy_after;
      if (r.triggered) {
        ++triggered;
        if (r.energy_after - r.energy_before < gain) ++small_gain;
      }
    }
  }
  Verdict v;
  v.pass = decreasing == 0 && small_gain == 0 && over_cap == 0 && slow == 0;
  v.detail = fmt("50 instances, %d rounds (%d triggered), %d decreases, %d triggered gains < eps^5/1000, "
                 "%d over round cap, max %.2fs (limit 30s)",
                 total_rounds, triggered, decreasing, small_gain, over_cap, worst);
  return v;
}

// ---- 5: Lemma H certificates ----

Verdict lemma_h_suite() {
  const std::vector<std::pair<std::string, int>> families = {
      {"hamilton_cycle", 2}, {"power_cycle:2", 3}, {"power_path:2", 3}, {"bounded_tree:3", 2},
      {"f_factor:K2", 2},    {"f_factor:K3", 3},   {"f_factor:K4", 4},  {"f_factor:K5", 5},
      {"f_factor:C3", 3},    {"f_factor:C4", 2},   {"f_factor:C5", 3},  {"f_factor:P2", 2},
      {"f_factor:P3", 2},    {"f_factor:P4", 2},   {"f_factor:P5", 2}};
  const double xi = 0.01;
  int bad = 0, h3_edges = 0;
  std::string failed;
  for (int t = 0; t < 50; ++t) {
    const auto& [spec, k] = families[t % families.size()];
    int n = 12000 + 1000 * (t % 5);
    if (spec != "hamilton_cycle") n -= n % 60;
    else if (t % 2) n += 1;  // odd cycles carry one zero vertex
    const int r = 2 + t % 3;
    ExperimentConfig cfg;
    cfg.n = n;
    cfg.k = k;
    GuestInstance probe = make_guest(spec, n, k, 0.01, t);
    const double beta = resolved_beta(cfg, probe.bandwidth);
    GuestInstance g = make_guest(spec, n, k, beta, t);
    ReducedGraph R = fixtures::synthetic_reduced(r, k, 0.3, t);
    LemmaHParams hp;
    hp.k = k;
    hp.xi = xi;
    hp.beta = beta;
    hp.seed = t;
    GuestAssignment a;
    try {
      a = lemma_for_h(g.graph, g.labelling, g.colouring, R, fixtures::equal_targets(n, r * k), hp);
    } catch (const StageFailure& e) {
      ++bad;
      failed += fmt(" %d:%s", t, e.what());
      continue;
    }
    // independent full edge scan for H3
    int h3 = 0;
    for (auto [x, y] : g.graph.edges()) h3 += !R.has_edge(a.f[x], a.f[y]);
    h3_edges += g.graph.m();
    const bool ok = a.all_hold() && h3 == 0 && a.h1_deviation <= xi * n;
    if (!ok) {
      ++bad;
      failed += fmt(" %d:%s", t, a.violation.empty() ? "H3/H1 recount" : a.violation.c_str());
    }
  }
  Verdict v;
  v.pass = bad == 0;
  v.detail = fmt("50 instances over %d families, %d failing, %d guest edges scanned", static_cast<int>(families.size()),
                 bad, h3_edges);
  if (!failed.empty()) v.detail += ", failed:" + failed;
  return v;
}

// ---- 6: balancing ----

Verdict balancing_suite() {
  int bad_size = 0, bad_cons = 0, bad_touch = 0, fixtures_run = 0;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    ExperimentConfig cfg;
    cfg.seed = seed;
    fixtures::GInstance gi = fixtures::g_instance(cfg);
    const auto& cl = gi.lg.clusters;
    for (std::uint64_t rep = 0; rep < 4; ++rep) {
      ++fixtures_run;
      std::vector<int> t = fixtures::perturbed_targets(cl, static_cast<int>(cfg.xi * cfg.n), 100 * seed + rep);
      BalanceParams bp;
      bp.eps = cfg.eps;
      bp.d = cfg.d;
      bp.p = cfg.p;
      bp.xi = cfg.xi;
      bp.gamma = cfg.gamma;
      bp.seed = 100 * seed + rep;
      BalanceOutcome o = balance(cl, t, gi.lg.reduced, gi.g, gi.host, bp);
      for (std::size_t c = 0; c < cl.size(); ++c)
        if (o.clusters[c].size() != t[c]) {
          ++bad_size;
          break;
        }
      std::vector<int> before, after;
      for (const auto& c : cl)
        c.for_each([&](int v) { before.push_back(v); });
      for (const auto& c : o.clusters)
        c.for_each([&](int v) { after.push_back(v); });
      std::sort(before.begin(), before.end());
      std::sort(after.begin(), after.end());
      if (before != after) ++bad_cons;
      for (int c = 0; c < static_cast<int>(cl.size()); ++c)
        if (o.log.touches(c) > 3) {
          ++bad_touch;
          break;
        }
    }
  }
  Verdict v;
  v.pass = bad_size == 0 && bad_cons == 0 && bad_touch == 0;
  v.detail = fmt("%d fixtures, %d with inexact sizes, %d not conserving, %d with a cluster touched > 3 times",
                 fixtures_run, bad_size, bad_cons, bad_touch);
  return v;
}

// ---- 7: pre-embedding ----

std::vector<int> bfs(const Graph& h, int s) {
  std::vector<int> dist(h.n(), -1);
  std::deque<int> q{s};
  dist[s] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    h.neighbours(u).for_each([&](int w) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        q.push_back(w);
      }
    });
  }
  return dist;
}

Verdict pre_embedding_suite() {
  int cover = 0, image = 0, sep = 0, hom = 0, rp = 0, largest = 0;
  std::string failed;
  for (int t = 0; t < 50; ++t) {
    const int v0 = 1 + t % 8;
    ExperimentConfig cfg;
    cfg.seed = 200 + t;
    fixtures::PreInstance in;
    try {
      in = fixtures::pre_instance(cfg, v0, cfg.seed);
    } catch (const StageFailure& e) {
      ++cover;
      failed += fmt(" %d:%s", t, e.what());
      continue;
    }
    const Graph& h = in.base.guest.graph;
    const PreEmbedState& st = in.pre.state;
    VertexSet im = st.image(cfg.n);
    largest = std::max(largest, in.V0.size());
    // lemma G may already leave more than v0 exceptional vertices
    if (in.V0.size() < 1 || in.V0.size() > 8 || !(in.V0 - im).empty()) ++cover;
    if (!(im - (in.V0 | in.S)).empty()) ++image;
    const int need = 2 * in.base.lg.index.r + 20;
    bool far = true;
    for (std::size_t a = 0; a < st.anchors.size() && far; ++a) {
      std::vector<int> dist = bfs(h, st.anchors[a].first);
      for (std::size_t b = a + 1; b < st.anchors.size(); ++b)
        if (dist[st.anchors[b].first] >= 0 && dist[st.anchors[b].first] < need) far = false;
    }
    if (!far) ++sep;
    if (homomorphism_violations(h, in.pre.fstar, in.base.lg.reduced) != 0) ++hom;
    RestrictionParams q;
    q.rho = cfg.rho;
    q.zeta = cfg.zeta;
    q.Delta = cfg.Delta;
    q.DeltaJ = cfg.Delta;
    q.inner_eps = cfg.eps;
    q.d = cfg.d;
    q.p = cfg.p;
    RestrictionReport rr = validate_restriction_pair(in.pre.restr, h, st.domain(cfg.n), in.pre.fstar, in.pre.clusters,
                                                     in.base.g, in.base.host, q);
    if (!rr.ok()) {
      ++rp;
      failed += fmt(" %d:RP", t);
    }
  }
  Verdict v;
  v.pass = cover == 0 && image == 0 && sep == 0 && hom == 0 && rp == 0;
  v.detail = fmt("50 instances, largest |V0| %d; uncovered %d, image outside V0+S %d, anchors too close %d, "
                 "homomorphism violations %d, RP failures %d",
                 largest, cover, image, sep, hom, rp);
  if (!failed.empty()) v.detail += ", failed:" + failed;
  return v;
}

// ---- 8: tail bounds ----

Verdict tail_bounds() {
  int over = 0;
  double worst = 0.0;
  for (int e = 0; e < 20; ++e)
    for (double eps : {0.1, 0.3}) {
      const double mean = (eps == 0.1 ? 250.0 : 30.0) * (1.0 + 0.05 * e);
      auto c = fixtures::chernoff_trial(eps, mean, 10000, 100, 500 + e);
      const double ex = 2000.0 * 3000.0 / 10000.0;
      const double t = std::max(eps * ex, 3.0 * std::log(4.0) / (eps * eps)) * (1.0 + 0.05 * e);
      auto h = fixtures::hypergeometric_trial(eps, 10000, 3000, 2000, t, 200, 900 + e);
      over += (c.freq > c.bound) + (h.freq > h.bound);
      worst = std::max({worst, c.freq - c.bound, h.freq - h.bound});
    }
  Verdict v;
  v.pass = over == 0;
  v.detail = fmt("40 binomial + 40 urn experiments, %d above the bound, max(freq - bound) %.4f", over, worst);
  return v;
}

// ---- 9: bijumbled host ----

Verdict bijumbled_suite() {
  int ok = 0;
  double nu = 0.0;
  bool feasible = true;
  std::string failed;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ExperimentConfig cfg;
    cfg.mode = "bijumbled";
    cfg.n = 101;
    cfg.p = 0.5;
    cfg.k = 2;
    cfg.gamma = 0.1;
    cfg.seed = seed;
    RunRecord rec = record_run(cfg, nullptr);
    if (seed == 1) {
      nu = rec.nu_measured;
      feasible = rec.nu_feasible && bijumbled_feasible(cfg.p, nu, cfg.n);
    }
    if (rec.success) ++ok;
    else failed += fmt(" %d:%s", static_cast<int>(seed), rec.failure_stage.c_str());
  }
  Verdict v;
  v.pass = feasible && ok >= 8;
  v.detail = fmt("paley(101) measured nu %.4f %s; %d/10 succeeded (need 8)", nu, feasible ? "feasible" : "infeasible", ok);
  if (!failed.empty()) v.detail += ", failed:" + failed;
  return v;
}

// ---- 10: determinism ----

Verdict determinism() {
  int mismatched = 0;
  for (const auto& [cfg, row] : recorded)
    if (csv_row(run_pipeline(cfg), false) != row) ++mismatched;
  Verdict v;
  v.pass = !recorded.empty() && mismatched == 0;
  v.detail = fmt("%d runs replayed, %d CSV rows differ", static_cast<int>(recorded.size()), mismatched);
  return v;
}

}  // namespace

int main() {
  run(1, "resilience n=1000", [] { return resilience(1000, 18, false); });
  run(2, "odd cycle n=1001", [] { return resilience(1001, 16, true); });
  run(3, "regularity oracle equivalence", oracle_equivalence);
  run(4, "energy increment", energy_increment);
  run(5, "lemma H certificates", lemma_h_suite);
  run(6, "balancing exactness", balancing_suite);
  run(7, "pre-embedding invariants", pre_embedding_suite);
  run(8, "tail-bound ceiling", tail_bounds);
  run(9, "bijumbled host", bijumbled_suite);
  run(10, "determinism", determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
