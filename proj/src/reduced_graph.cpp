#include "bwt/reduced_graph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "bwt/errors.hpp"
#include "bwt/rng.hpp"

namespace bwt {

bool BackboneIndex::backbone_edge(int a, int b) const {
  return col(a) != col(b) && std::abs(row(a) - row(b)) <= 1;
}

bool BackboneIndex::clique_edge(int a, int b) const { return a != b && row(a) == row(b); }

std::vector<Edge> BackboneIndex::backbone_edges() const {
  std::vector<Edge> out;
  for (int a = 0; a < size(); ++a)
    for (int b = a + 1; b < size(); ++b)
      if (backbone_edge(a, b)) out.emplace_back(a, b);
  return out;
}

std::vector<Edge> BackboneIndex::clique_edges() const {
  std::vector<Edge> out;
  for (int a = 0; a < size(); ++a)
    for (int b = a + 1; b < size(); ++b)
      if (clique_edge(a, b)) out.emplace_back(a, b);
  return out;
}

long long backbone_edge_count(int r, int k) {
  long long kk = static_cast<long long>(k) * (k - 1);
  return r * kk / 2 + (r - 1) * kk;
}

bool ReducedGraph::consistent() const {
  for (auto [a, b] : index.backbone_edges())
    if (!has_edge(a, b)) return false;
  if (static_cast<int>(extension.size()) != index.r) return false;
  for (int i = 0; i < index.r; ++i) {
    int z = extension[i];
    if (z < 0 || z >= index.size() || index.row(z) == i) return false;
    for (int j = 0; j < index.k; ++j)
      if (!has_edge(z, index.id(i, j))) return false;
  }
  return true;
}

namespace {

class BackboneDfs {
 public:
  BackboneDfs(const Graph& R, BackboneIndex idx, long long budget, std::vector<int> rank)
      : R_(R), idx_(idx), budget_(budget), rank_(std::move(rank)), assign_(idx.size(), -1), used_(R.n()) {}

  bool run() { return extend(0); }
  long long steps() const { return steps_; }
  int depth() const { return depth_; }
  bool exhausted() const { return steps_ > budget_; }
  const std::vector<int>& assignment() const { return assign_; }
  const std::vector<int>& extension() const { return ext_; }

 private:
  const Graph& R_;
  BackboneIndex idx_;
  long long budget_;
  std::vector<int> rank_;
  std::vector<int> assign_;
  std::vector<int> ext_;
  Bitset used_;
  long long steps_ = 0;
  int depth_ = 0;

  bool find_extension() {
    ext_.assign(idx_.r, -1);
    for (int i = 0; i < idx_.r; ++i) {
      for (int c = 0; c < idx_.size() && ext_[i] < 0; ++c) {
        if (idx_.row(c) == i) continue;
        bool ok = true;
        for (int j = 0; j < idx_.k && ok; ++j) ok = R_.adjacent(assign_[c], assign_[idx_.id(i, j)]);
        if (ok) ext_[i] = c;
      }
      if (ext_[i] < 0) return false;
    }
    return true;
  }

  bool extend(int c) {
    depth_ = std::max(depth_, c);
    if (c == idx_.size()) return find_extension();
    if (++steps_ > budget_) return false;
    Bitset cand(R_.n());
    for (int v = 0; v < R_.n(); ++v) cand.set(v);
    cand.and_not(used_);
    for (int prev = 0; prev < c; ++prev)
      if (idx_.backbone_edge(prev, c)) cand &= R_.neighbours(assign_[prev]);
    Bitset free = cand;
    std::vector<std::pair<int, int>> order;
    Bitset unused(R_.n());
    for (int v = 0; v < R_.n(); ++v)
      if (!used_.test(v)) unused.set(v);
    cand.for_each([&](int v) { order.emplace_back(-R_.neighbours(v).and_count(unused), rank_[v]); });
    std::sort(order.begin(), order.end());
    std::vector<int> by_rank(R_.n());
    for (int v = 0; v < R_.n(); ++v) by_rank[rank_[v]] = v;
    for (auto [score, rk] : order) {
      int v = by_rank[rk];
      assign_[c] = v;
      used_.set(v);
      if (extend(c + 1)) return true;
      used_.reset(v);
      assign_[c] = -1;
      if (steps_ > budget_) return false;
    }
    return false;
  }
};

}  // namespace

BackboneSearch find_backbone(const Graph& reduced, int r, int k, double gamma, long long budget,
                             std::uint64_t seed) {
  BackboneSearch out;
  BackboneIndex idx{r, k};
  if (reduced.n() != r * k) {
    out.message = "reduced graph has " + std::to_string(reduced.n()) + " vertices, expected r k";
    return out;
  }
  out.precondition = reduced.min_degree() >= ((k - 1.0) / k + gamma / 2.0) * k * r - 1e-9;
  const int restarts = 4;
  for (int attempt = 0; attempt < restarts; ++attempt) {
    Rng rng(seed, 0xBB00 + attempt);
    std::vector<int> rank = attempt == 0 ? [&] {
      std::vector<int> id(reduced.n());
      for (int v = 0; v < reduced.n(); ++v) id[v] = v;
      return id;
    }()
                                         : rng.permutation(reduced.n());
    BackboneDfs dfs(reduced, idx, budget / restarts, rank);
    bool ok = dfs.run();
    out.steps += dfs.steps();
    out.depth = std::max(out.depth, dfs.depth());
    if (ok) {
      out.found = true;
      out.embedding = dfs.assignment();
      out.extension = dfs.extension();
      return out;
    }
    if (!dfs.exhausted()) break;  // search space exhausted: no copy exists
  }
  std::ostringstream msg;
  msg << "no backbone copy found (deepest " << out.depth << " of " << r * k << " cells, " << out.steps
      << " steps)";
  out.message = msg.str();
  return out;
}

bool validate_k_equitable(const std::vector<std::vector<int>>& row_sizes) {
  for (const auto& row : row_sizes) {
    if (row.empty()) continue;
    auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    if (*hi - *lo > 1) return false;
  }
  return true;
}

bool validate_k_equitable(const std::vector<VertexSet>& clusters, const BackboneIndex& index) {
  std::vector<std::vector<int>> rows(index.r);
  for (int c = 0; c < index.size(); ++c) rows[index.row(c)].push_back(clusters[c].size());
  return validate_k_equitable(rows);
}

namespace {

// Trim each row so its cluster sizes differ by at most one; removed vertices
// (lowest ids first) are added to `sink`.
void pad_k_equitable(std::vector<VertexSet>& cl, const BackboneIndex& idx, VertexSet& sink) {
  for (int i = 0; i < idx.r; ++i) {
    int lo = cl[idx.id(i, 0)].size();
    for (int j = 1; j < idx.k; ++j) lo = std::min(lo, cl[idx.id(i, j)].size());
    for (int j = 0; j < idx.k; ++j) {
      VertexSet& c = cl[idx.id(i, j)];
      int excess = c.size() - (lo + 1);
      if (excess <= 0) continue;
      std::vector<int> members = c.to_vector();
      for (int q = 0; q < excess; ++q) {
        c.erase(members[q]);
        sink.insert(members[q]);
      }
    }
  }
}

bool degree_in_window(const Graph& host, int v, const VertexSet& c, double p, double tol) {
  double expect = p * c.size();
  return std::abs(host.degree_into(v, c) - expect) <= tol * expect + 1e-9;
}

bool inheritance_ok(const Graph& g, const Graph& host, int v, const VertexSet& a, const VertexSet& b, double eps,
                    double d, double p, bool two_sided, const CheckMode& mode) {
  VertexSet na = host.neighbourhood(v) & a;
  if (na.empty()) return false;
  if (!check_lower_regular(g, na, b, eps, d, p, mode).lower_ok()) return false;
  if (!two_sided) return true;
  VertexSet nb = host.neighbourhood(v) & b;
  if (nb.empty()) return false;
  return check_lower_regular(g, na, nb, eps, d, p, mode).lower_ok();
}

LemmaGResult lemma_g_attempt(const Graph& g, const Graph& host, const LemmaGParams& P, std::uint64_t seed) {
  const int n = g.n();
  const int k = P.k;
  const double p = P.p;
  const double eps_star = P.eps_star > 0 ? P.eps_star : P.eps / 10.0;
  const CheckMode mode = CheckMode::sampled(P.samples, seed);

  RegularPartitionOptions po = P.partition;
  po.seed = seed;
  RegularPartitionResult part;
  try {
    part = min_degree_regular_partition(g, P.eps, P.d, p, P.r0, po);
  } catch (const std::runtime_error& e) {
    throw StageFailure("regularity", e.what());
  }

  // Drop at most k-1 clusters, lowest reduced degree first.
  const int t = static_cast<int>(part.clusters.size());
  std::vector<int> deg(t, 0);
  for (auto [a, b] : part.reduced_edges) {
    ++deg[a];
    ++deg[b];
  }
  std::vector<int> by_deg(t);
  for (int c = 0; c < t; ++c) by_deg[c] = c;
  std::stable_sort(by_deg.begin(), by_deg.end(), [&](int a, int b) { return deg[a] > deg[b]; });
  const int keep = t - t % k;
  std::vector<int> kept(by_deg.begin(), by_deg.begin() + keep);
  std::sort(kept.begin(), kept.end());
  VertexSet U0 = part.exceptional;
  for (int q = keep; q < t; ++q) U0 |= part.clusters[by_deg[q]];
  const int r = keep / k;
  if (r < 2) throw StageFailure("backbone", "need at least two rows, have " + std::to_string(r));

  std::vector<int> pos(t, -1);
  for (int q = 0; q < keep; ++q) pos[kept[q]] = q;
  std::vector<Edge> redges;
  for (auto [a, b] : part.reduced_edges)
    if (pos[a] >= 0 && pos[b] >= 0) redges.emplace_back(pos[a], pos[b]);
  Graph R = Graph::from_edges(keep, redges);
  BackboneSearch bb = find_backbone(R, r, k, P.gamma, P.backbone_budget, seed);
  if (!bb.found) throw StageFailure("backbone", bb.message);

  LemmaGResult res;
  res.n = n;
  res.index = BackboneIndex{r, k};
  const BackboneIndex& idx = res.index;
  const int cells = idx.size();
  std::vector<VertexSet> U(cells);
  res.source_cluster.resize(cells);
  for (int c = 0; c < cells; ++c) {
    U[c] = part.clusters[kept[bb.embedding[c]]];
    res.source_cluster[c] = kept[bb.embedding[c]];
  }
  std::vector<Edge> cell_edges;
  for (int a = 0; a < cells; ++a)
    for (int b = a + 1; b < cells; ++b)
      if (R.adjacent(bb.embedding[a], bb.embedding[b])) cell_edges.emplace_back(a, b);
  res.reduced.index = idx;
  res.reduced.edges = Graph::from_edges(cells, cell_edges);
  res.reduced.extension = bb.extension;

  int smallest = n;
  for (const VertexSet& c : U) smallest = std::min(smallest, c.size());
  const double tol = P.degree_tol > 0 ? P.degree_tol
                                      : std::max(P.eps, 4.0 * std::sqrt((1.0 - p) / (p * std::max(1, smallest))));
  res.g4_tol = tol;

  // Z1: Gamma-degree deviants, heavy U0 neighbours, inheritance failures.
  VertexSet Z1(n);
  for (int v = 0; v < n; ++v) {
    bool bad = host.degree_into(v, U0) > 2.0 * eps_star * p * n;
    for (int c = 0; c < cells && !bad; ++c) bad = !degree_in_window(host, v, U[c], p, tol);
    for (auto [a, b] : cell_edges) {
      if (bad) break;
      bad = !inheritance_ok(g, host, v, U[a], U[b], P.eps / 2, P.d, p, P.two_sided, mode) ||
            !inheritance_ok(g, host, v, U[b], U[a], P.eps / 2, P.d, p, P.two_sided, mode);
    }
    if (bad) Z1.insert(v);
  }
  std::vector<VertexSet> base(cells);
  for (int c = 0; c < cells; ++c) base[c] = U[c] - Z1;
  pad_k_equitable(base, idx, Z1);
  res.z1 = Z1.size();

  // W: old exceptional vertices plus super-regularity violators.
  VertexSet W = U0 - Z1;
  for (int c = 0; c < cells; ++c) {
    const int i = idx.row(c), j = idx.col(c);
    base[c].for_each([&](int v) {
      for (int jj = 0; jj < k; ++jj) {
        if (jj == j) continue;
        const VertexSet& other = U[idx.id(i, jj)];
        if (g.degree_into(v, other) < (P.d - 2 * eps_star) * p * other.size()) {
          W.insert(v);
          break;
        }
      }
    });
  }
  for (int c = 0; c < cells; ++c) base[c] -= W;
  pad_k_equitable(base, idx, W);
  res.w = W.size();

  // Redistribute W by c(w).
  const double cap = 100.0 / r * k * eps_star / P.gamma * n;
  std::vector<int> row_assigned(r, 0);
  std::vector<VertexSet> Vp = base;
  VertexSet unplaced(n);
  W.for_each([&](int w) {
    for (int i = 0; i < r; ++i) {
      if (row_assigned[i] >= cap) continue;
      bool ok = true;
      for (int jj = 0; jj < k && ok; ++jj) {
        const VertexSet& c = U[idx.id(i, jj)];
        ok = g.degree_into(w, c) >= 2.0 * P.d * p * c.size();
      }
      if (!ok) continue;
      int best = 0;
      for (int jj = 1; jj < k; ++jj)
        if (Vp[idx.id(i, jj)].size() < Vp[idx.id(i, best)].size()) best = jj;
      Vp[idx.id(i, best)].insert(w);
      ++row_assigned[i];
      return;
    }
    unplaced.insert(w);
  });

  // Z2: vertices with many Gamma-neighbours among moved vertices.
  VertexSet Z2 = unplaced;
  for (int v = 0; v < n; ++v) {
    if (Z1.contains(v)) continue;
    for (int c = 0; c < cells; ++c) {
      VertexSet diff = (U[c] - Vp[c]) | (Vp[c] - U[c]);
      if (host.degree_into(v, diff) >= P.z2_c * p * U[c].size()) {
        Z2.insert(v);
        break;
      }
    }
  }
  std::vector<VertexSet> V(cells);
  for (int c = 0; c < cells; ++c) V[c] = Vp[c] - Z2;
  pad_k_equitable(V, idx, Z2);
  res.z2 = Z2.size();

  // Enforce the G4 window on the final clusters.
  VertexSet covered(n);
  for (auto& c : V) covered |= c;
  for (int round = 0; round < 20; ++round) {
    VertexSet viol(n);
    covered.for_each([&](int v) {
      for (int c = 0; c < cells; ++c)
        if (!degree_in_window(host, v, V[c], p, tol)) {
          viol.insert(v);
          break;
        }
    });
    if (viol.empty()) break;
    res.g4_fix += viol.size();
    VertexSet sink(n);
    for (auto& c : V) c -= viol;
    pad_k_equitable(V, idx, sink);
    res.g4_fix += sink.size();
    covered -= viol;
    covered -= sink;
  }
  res.clusters = V;
  res.V0 = VertexSet::all(n) - covered;

  // Certificates.
  LemmaGCerts& cert = res.certs;
  cert.sample_budget = P.samples;
  cert.g1 = true;
  for (auto& c : V) {
    double lo = n / (4.0 * k * r), hi = 4.0 * n / (k * r);
    if (c.size() < lo || c.size() > hi) cert.g1 = false;
  }
  cert.g2 = validate_k_equitable(V, idx);
  for (auto [a, b] : cell_edges) {
    if (!cert.g2) break;
    if (V[a].empty() || V[b].empty()) {
      cert.g2 = false;
      break;
    }
    cert.g2 = check_lower_regular(g, V[a], V[b], P.eps, P.d, p, mode).lower_ok();
    if (cert.g2 && idx.clique_edge(a, b)) cert.g2 = check_super_regular(g, host, V[a], V[b], P.eps, P.d, p, mode);
  }
  std::vector<int> probes = covered.to_vector();
  if (P.d - P.eps > 0 && static_cast<int>(probes.size()) > P.g3_probes) {
    Rng rng(seed, 0x63);
    std::vector<int> pick = rng.sample(static_cast<int>(probes.size()), P.g3_probes);
    std::vector<int> chosen;
    for (int q : pick) chosen.push_back(probes[q]);
    probes = chosen;
  }
  cert.g3 = true;
  cert.g3_probed = static_cast<int>(probes.size());
  for (int v : probes) {
    for (auto [a, b] : cell_edges) {
      if (!inheritance_ok(g, host, v, V[a], V[b], P.eps, P.d, p, P.two_sided, mode) ||
          !inheritance_ok(g, host, v, V[b], V[a], P.eps, P.d, p, P.two_sided, mode)) {
        cert.g3 = false;
        break;
      }
    }
    if (!cert.g3) break;
  }
  cert.g4 = true;
  covered.for_each([&](int v) {
    for (int c = 0; c < cells && cert.g4; ++c) cert.g4 = degree_in_window(host, v, V[c], p, tol);
  });
  if (!cert.g1) throw StageFailure("lemma_g", "G1 cluster size window violated");
  if (!cert.g2) throw StageFailure("lemma_g", "G2 regularity on the reduced graph not certified");
  if (!cert.g3) throw StageFailure("lemma_g", "G3 inheritance not certified");
  if (!cert.g4) throw StageFailure("lemma_g", "G4 Gamma-degree window violated");
  return res;
}

}  // namespace

LemmaGResult lemma_for_g(const Graph& g, const Graph& host, const LemmaGParams& P) {
  if (g.n() != host.n()) throw std::invalid_argument("lemma_for_g: g and host differ in order");
  if (!g.is_subgraph_of(host)) throw std::invalid_argument("lemma_for_g: g is not a subgraph of host");
  if (P.k < 1 || !(P.p > 0) || !(P.gamma > 0)) throw std::invalid_argument("lemma_for_g: bad parameters");
  const double floor_deg = ((P.k - 1.0) / P.k + P.gamma) * P.p * g.n();
  if (g.min_degree() < floor_deg - 1e-9)
    throw std::invalid_argument("lemma_for_g: minimum degree " + std::to_string(g.min_degree()) +
                                " below ((k-1)/k + gamma) p n = " + std::to_string(floor_deg));
  std::string last;
  std::string last_stage = "lemma_g";
  for (int attempt = 0; attempt <= P.retries; ++attempt) {
    try {
      return lemma_g_attempt(g, host, P, P.seed + 0x9E37ULL * attempt);
    } catch (const StageFailure& e) {
      last = e.what();
      last_stage = e.stage();
    }
  }
  throw StageFailure(last_stage, "after retries: " + last);
}

void write_lemma_g(std::ostream& os, const LemmaGResult& res) {
  const BackboneIndex& idx = res.index;
  os << "partition " << idx.r << ' ' << idx.k << '\n';
  for (int c = 0; c < idx.size(); ++c) {
    os << "cluster " << idx.row(c) + 1 << ' ' << idx.col(c) + 1 << ' ' << res.clusters[c].size();
    res.clusters[c].for_each([&](int v) { os << ' ' << v; });
    os << '\n';
  }
  os << "exceptional " << res.V0.size();
  res.V0.for_each([&](int v) { os << ' ' << v; });
  os << '\n';
  for (auto [a, b] : res.reduced.edges.edges())
    os << "reduced-edge " << idx.row(a) + 1 << ' ' << idx.col(a) + 1 << ' ' << idx.row(b) + 1 << ' '
       << idx.col(b) + 1 << '\n';
  for (int c = 0; c < idx.size(); ++c)
    os << "backbone " << idx.row(c) + 1 << ' ' << idx.col(c) + 1 << ' ' << res.source_cluster[c] + 1 << '\n';
  for (int i = 0; i < idx.r; ++i) {
    int z = res.reduced.extension[i];
    os << "extension " << i + 1 << ' ' << idx.row(z) + 1 << ' ' << idx.col(z) + 1 << '\n';
  }
}

}  // namespace bwt
