#include "bwt/pre_embedding.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "bwt/errors.hpp"
#include "bwt/rng.hpp"

namespace bwt {

VertexSet PreEmbedState::domain(int guest_n) const {
  VertexSet d(guest_n);
  for (int x = 0; x < static_cast<int>(phi.size()); ++x)
    if (phi[x] >= 0) d.insert(x);
  return d;
}

VertexSet PreEmbedState::image(int host_n) const {
  VertexSet im(host_n);
  for (int v : phi)
    if (v >= 0) im.insert(v);
  return im;
}

ReserveResult reserve_set(const Graph& g, const Graph& host, const std::vector<VertexSet>& clusters,
                          const ReserveParams& P) {
  (void)g;
  if (!(P.mu > 0) || P.mu > 1) throw std::invalid_argument("reserve_set: mu must lie in (0, 1]");
  const int n = host.n();
  const int size = static_cast<int>(std::floor(P.mu * n + 1e-9));
  ReserveResult best;
  for (int att = 0; att < std::max(1, P.retries); ++att) {
    Rng rng(P.seed, 0x5200 + att);
    VertexSet S(n, rng.sample(n, size));
    int fails = 0;
    for (const VertexSet& c : clusters)
      if (S.intersection_size(c) > P.slack * 2.0 * P.mu * c.size() + 1e-9) ++fails;
    Rng probe(P.seed, 0x5300 + att);
    for (int q = 0; q < P.probes && n > 0; ++q) {
      int ell = 1 + static_cast<int>(probe.below(std::max(1, P.max_tuple)));
      std::vector<int> tuple;
      for (int s = 0; s < ell; ++s) tuple.push_back(static_cast<int>(probe.below(n)));
      VertexSet nb = host.common_neighbourhood(tuple);
      double expect = P.mu * nb.size();
      double err = P.eps * P.mu * expect + P.eps * P.mu * std::pow(P.p, ell) * n;
      err = std::max(err, std::sqrt(expect * (1.0 - P.mu)));  // one sampling standard deviation
      if (std::abs(S.intersection_size(nb) - expect) > P.slack * err + 1e-9) ++fails;
    }
    if (att == 0 || fails < best.probe_failures) {
      best.S = S;
      best.attempts = att + 1;
      best.probe_failures = fails;
    }
    if (fails == 0) return best;
  }
  throw StageFailure("reserve", "probe certification failed after " + std::to_string(P.retries) + " attempts (" +
                                    std::to_string(best.probe_failures) + " violations)");
}

namespace {

struct Ctx {
  const Graph& g;
  const Graph& host;
  const Graph& guest;
  const ReducedGraph& reduced;
  const PreEmbedParams& P;
  std::vector<VertexSet> cl;  // current V' clusters
};

VertexSet common_g(const Graph& g, const std::vector<int>& J, const VertexSet& base) {
  VertexSet out = base;
  for (int u : J) out = out & g.neighbourhood(u);
  return out;
}

}  // namespace

PreEmbedResult pre_embed(const Graph& g, const Graph& host, const VertexSet& V0, const std::vector<VertexSet>& clusters,
                         const ReducedGraph& reduced, const Graph& guest, const Labelling& l,
                         const std::vector<int>& f, const VertexSet& S, const PreEmbedParams& P) {
  const int n = g.n();
  const int gn = guest.n();
  const BackboneIndex& idx = reduced.index;
  const int r = idx.r, k = idx.k;
  const int sep = P.anchor_sep >= 0 ? P.anchor_sep : 2 * r + 20;
  const int radius = r + 1;
  PreEmbedResult res;
  res.state.phi.assign(gn, -1);
  res.state.S = S;
  res.fstar = f;
  res.clusters = clusters;
  if (V0.empty()) return res;

  VertexSet im(n);
  VertexSet covered_guest(gn);
  VertexSet blocked(gn);
  std::vector<int> sec_row(gn);
  for (int x = 0; x < gn; ++x) sec_row[x] = idx.row(f[x]);
  std::map<int, std::vector<int>> J;  // guest -> host images of embedded neighbours

  VertexSet uncovered = V0;
  int scan = 0;  // anchor candidates are scanned in label order
  Rng rng(P.seed, 0x9E);
  while (!uncovered.empty()) {
    const int t = res.state.t;
    // Line "choose v": fewest available reserve neighbours.
    int v = -1, best_avail = 0;
    uncovered.for_each([&](int u) {
      VertexSet a = (g.neighbourhood(u) & S) - im;
      if (v < 0 || a.size() < best_avail) {
        v = u;
        best_avail = a.size();
      }
    });
    res.state.available.push_back(best_avail);
    if (best_avail < P.mu * P.p * n / 4.0)
      throw StageFailure("pre_embedding", "step " + std::to_string(t + 1) + ": vertex " + std::to_string(v) + " has " +
                                              std::to_string(best_avail) + " available reserve neighbours, below mu p n / 4");
    VertexSet Y = (g.neighbourhood(v) & S) - im;

    // Anchor x: independent neighbourhood, far from earlier anchors, clean ball.
    int x = -1;
    for (; scan < gn && x < 0; ++scan) {
      int cand = l.at(scan);
      if (blocked.contains(cand)) continue;
      std::vector<int> nb = guest.neighbours(cand).to_vector();
      if (static_cast<int>(nb.size()) > Y.size()) continue;
      bool ok = true;
      for (std::size_t a = 0; a < nb.size() && ok; ++a)
        for (std::size_t b = a + 1; b < nb.size() && ok; ++b) {
          if (guest.adjacent(nb[a], nb[b])) ok = false;
          if (P.c4_free && guest.neighbours(nb[a]).and_count(guest.neighbours(nb[b])) > 1) ok = false;
        }
      if (!ok) continue;
      std::vector<int> dist = guest.bfs_distances(cand, radius);
      for (int z = 0; z < gn && ok; ++z)
        if (dist[z] >= 0 && sec_row[z] != sec_row[cand]) ok = false;
      if (ok) x = cand;
    }
    if (x < 0)
      throw StageFailure("pre_embedding", "step " + std::to_string(t + 1) + ": no anchor candidate at distance >= " +
                                              std::to_string(sep) + " from earlier anchors");
    const int s_row = sec_row[x];

    // Claim chooseW: drop Gamma-deviants, keep the majority row.
    std::vector<int> row_votes(r, 0);
    std::vector<std::vector<int>> supports;
    std::vector<int> ys;
    Y.for_each([&](int y) {
      bool dev = host.degree_into(y, V0) >= P.eps * P.p * n;
      for (int c = 0; c < idx.size() && !dev; ++c) {
        double e = P.p * clusters[c].size();
        dev = std::abs(host.degree_into(y, clusters[c]) - e) > P.eps * e + 1e-9;
      }
      if (dev) return;
      std::vector<int> rows;
      for (int i = 0; i < r; ++i) {
        bool all = true;
        for (int j = 0; j < k && all; ++j) {
          const VertexSet& c = clusters[idx.id(i, j)];
          all = g.degree_into(y, c) >= P.d * P.p * c.size();
        }
        if (all) {
          rows.push_back(i);
          ++row_votes[i];
        }
      }
      ys.push_back(y);
      supports.push_back(rows);
    });
    int it = 0;
    for (int i = 1; i < r; ++i)
      if (row_votes[i] > row_votes[it]) it = i;
    std::vector<int> W;
    for (std::size_t q = 0; q < ys.size(); ++q)
      if (std::find(supports[q].begin(), supports[q].end(), it) != supports[q].end()) W.push_back(ys[q]);
    if (W.empty())
      throw StageFailure("pre_embedding", "step " + std::to_string(t + 1) + ": Claim chooseW left no candidates");

    // f* on the ball around x: distance 2 goes to row i_t, then one row per
    // step back towards the anchor's own row.
    std::vector<int> dist = guest.bfs_distances(x, radius);
    std::vector<int> fnew = res.fstar;
    for (int z = 0; z < gn; ++z) {
      int h = dist[z];
      if (h < 2) continue;
      int row = it < s_row ? std::min(s_row, it + (h - 2)) : std::max(s_row, it - (h - 2));
      fnew[z] = idx.id(row, idx.col(f[z]));
    }

    // Sequential greedy for the neighbour images (L-conditions).
    std::vector<int> nbrs = guest.neighbours(x).to_vector();
    std::vector<int> second;  // distance-2 vertices
    for (int z = 0; z < gn; ++z)
      if (dist[z] == 2) second.push_back(z);
    std::vector<int> chosen;
    rng.shuffle(W);
    std::map<std::string, int> reasons;
    VertexSet used = im;
    used.insert(v);
    for (std::size_t s = 0; s < nbrs.size(); ++s) {
      const int y = nbrs[s];
      int pick = -1;
      for (int w : W) {
        if (used.contains(w)) continue;
        std::string bad;
        for (int z : second) {
          if (!guest.adjacent(z, y)) continue;
          std::vector<int> Jz = J[z];
          for (std::size_t q = 0; q < s; ++q)
            if (guest.adjacent(z, nbrs[q])) Jz.push_back(chosen[q]);
          Jz.push_back(w);
          const VertexSet& Vc = res.clusters[fnew[z]];
          const int js = static_cast<int>(Jz.size());
          VertexSet ng = common_g(g, Jz, Vc);
          if (ng.size() < P.zeta * std::pow(P.d * P.p, js) * Vc.size()) {
            bad = "L2";
            break;
          }
          VertexSet ngam = common_g(host, Jz, Vc);
          double e = std::pow(P.p, js) * Vc.size();
          if (std::abs(ngam.size() - e) > P.window_eps * e + 1e-9) {
            bad = "L3";
            break;
          }
          if (host.common_neighbourhood(Jz).size() > (1 + P.window_eps) * std::pow(P.p, js) * n + 1e-9) {
            bad = "L4";
            break;
          }
          bool reg = true;
          guest.neighbours(z).for_each([&](int z2) {
            if (!reg || dist[z2] == 1 || dist[z2] == 0 || covered_guest.contains(z2)) return;
            VertexSet other = res.clusters[fnew[z2]];
            auto jt = J.find(z2);
            if (jt != J.end()) other = common_g(host, jt->second, other);
            if (ngam.empty() || other.empty() ||
                !check_lower_regular(g, ngam, other, P.eps, P.d, P.p, P.mode).lower_ok())
              reg = false;
          });
          if (!reg) {
            bad = "L6";
            break;
          }
        }
        if (bad.empty()) {
          pick = w;
          break;
        }
        ++reasons[bad];
      }
      if (pick < 0) {
        std::string worst = "L1";
        int cnt = -1;
        for (auto& [key, c] : reasons)
          if (c > cnt) {
            worst = key;
            cnt = c;
          }
        throw StageFailure("pre_embedding", "step " + std::to_string(t + 1) + ": no image for neighbour " +
                                                std::to_string(y) + " of anchor " + std::to_string(x) + " (" + worst +
                                                " violated)");
      }
      chosen.push_back(pick);
      used.insert(pick);
    }

    // Commit.
    res.state.phi[x] = v;
    im.insert(v);
    uncovered.erase(v);
    covered_guest.insert(x);
    for (std::size_t s = 0; s < nbrs.size(); ++s) {
      res.state.phi[nbrs[s]] = chosen[s];
      im.insert(chosen[s]);
      uncovered.erase(chosen[s]);
      covered_guest.insert(nbrs[s]);
      res.state.leaves.emplace_back(t + 1, nbrs[s], chosen[s]);
      guest.neighbours(nbrs[s]).for_each([&](int z) {
        if (z != x) J[z].push_back(chosen[s]);
      });
    }
    res.state.anchors.emplace_back(x, v);
    res.state.rows.push_back(it);
    res.fstar = fnew;
    std::vector<int> far = guest.bfs_distances(x, sep - 1);
    for (int z = 0; z < gn; ++z)
      if (far[z] >= 0) blocked.insert(z);
    for (int c = 0; c < idx.size(); ++c) res.clusters[c] = clusters[c] - im;
    res.state.t = t + 1;
  }

  for (int x = 0; x < gn; ++x) {
    if (res.state.phi[x] >= 0) {
      res.fstar[x] = -1;
      continue;
    }
    if (res.fstar[x] != f[x]) res.reroutes.emplace_back(x, res.fstar[x]);
  }
  for (auto& [z, hosts] : J)
    if (res.state.phi[z] < 0) res.restr.J[z] = hosts;
  assemble_images(res.restr, res.fstar, res.clusters, g);
  return res;
}

void assemble_images(RestrictionPair& restr, const std::vector<int>& fstar, const std::vector<VertexSet>& clusters,
                     const Graph& g) {
  restr.I.clear();
  restr.R.assign(clusters.size(), {});
  for (auto& [x, hosts] : restr.J) {
    if (hosts.empty()) continue;
    const int c = fstar[x];
    restr.I[x] = common_g(g, hosts, clusters[c]);
    restr.R[c].push_back(x);
  }
}

RestrictionReport validate_restriction_pair(const RestrictionPair& restr, const Graph& guest, const VertexSet& removed,
                                            const std::vector<int>& fstar, const std::vector<VertexSet>& clusters,
                                            const Graph& g, const Graph& host, const RestrictionParams& P) {
  RestrictionReport rep;
  const int cells = static_cast<int>(clusters.size());
  auto fail = [&](int q, int who) {
    rep.rp[q] = false;
    rep.violators[q].push_back(who);
  };
  std::vector<int> parts(cells, 0);
  for (int x = 0; x < guest.n(); ++x)
    if (!removed.contains(x) && fstar[x] >= 0) ++parts[fstar[x]];
  for (int c = 0; c < cells; ++c) {
    int rc = c < static_cast<int>(restr.R.size()) ? static_cast<int>(restr.R[c].size()) : 0;
    if (rc > P.rho * parts[c] + 1e-9) fail(0, c);
  }
  auto gamma_set = [&](int x) {
    VertexSet s = clusters[fstar[x]];
    auto it = restr.J.find(x);
    if (it != restr.J.end()) s = common_g(host, it->second, s);
    return s;
  };
  for (const auto& [x, I] : restr.I) {
    const int c = fstar[x];
    const int js = restr.j_size(x);
    const VertexSet& Vc = clusters[c];
    VertexSet allowed = Vc;
    auto it = restr.J.find(x);
    if (it != restr.J.end()) allowed = common_g(g, it->second, Vc);
    if (I.size() < P.zeta * std::pow(P.d * P.p, js) * Vc.size() || !I.subset_of(allowed)) fail(1, x);
    double e = std::pow(P.p, js) * Vc.size();
    if (std::abs(gamma_set(x).size() - e) > P.eps * e + 1e-9) fail(4, x);
  }
  std::map<int, int> uses;
  for (const auto& [x, hosts] : restr.J) {
    int deg = guest.degree(x) - guest.degree_into(x, removed);
    if (static_cast<int>(hosts.size()) + deg > P.Delta) fail(2, x);
    if (!hosts.empty()) {
      const int c = fstar[x];
      bool listed = c >= 0 && c < static_cast<int>(restr.R.size()) &&
                    std::find(restr.R[c].begin(), restr.R[c].end(), x) != restr.R[c].end();
      if (!listed && !restr.R.empty()) fail(2, x);
    }
    for (int u : hosts) ++uses[u];
  }
  for (auto& [u, cnt] : uses)
    if (cnt > P.DeltaJ) fail(3, u);
  for (auto [x, y] : guest.edges()) {
    if (removed.contains(x) || removed.contains(y)) continue;
    if (!restr.restricted(x) && !restr.restricted(y)) continue;
    VertexSet a = gamma_set(x), b = gamma_set(y);
    if (a.empty() || b.empty() || !check_lower_regular(g, a, b, P.inner_eps, P.d, P.p, P.mode).lower_ok())
      fail(5, x);
  }
  return rep;
}

int homomorphism_violations(const Graph& guest, const std::vector<int>& fstar, const ReducedGraph& reduced) {
  int bad = 0;
  for (auto [x, y] : guest.edges()) {
    if (fstar[x] < 0 || fstar[y] < 0) continue;
    if (fstar[x] == fstar[y] || !reduced.has_edge(fstar[x], fstar[y])) ++bad;
  }
  return bad;
}

void write_transcript(std::ostream& os, const PreEmbedResult& res, const BackboneIndex& index) {
  for (std::size_t t = 0; t < res.state.anchors.size(); ++t)
    os << "anchor " << t + 1 << ' ' << res.state.anchors[t].first << ' ' << res.state.anchors[t].second << '\n';
  for (auto [t, y, w] : res.state.leaves) os << "leaf " << t << ' ' << y << ' ' << w << '\n';
  for (auto [z, c] : res.reroutes) os << "reroute " << z << ' ' << index.row(c) + 1 << ' ' << index.col(c) + 1 << '\n';
}

}  // namespace bwt
