#include "bwt/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <string>

#include "bwt/rng.hpp"

namespace bwt {

VertexSet::VertexSet(int n, const std::vector<int>& members) : bits_(n) {
  for (int v : members) {
    if (v < 0 || v >= n) throw std::invalid_argument("vertex out of range");
    bits_.set(v);
  }
  count_ = bits_.count();
}

VertexSet VertexSet::all(int n) { return range(n, 0, n); }

VertexSet VertexSet::range(int n, int lo, int hi) {
  VertexSet s(n);
  for (int v = std::max(lo, 0); v < std::min(hi, n); ++v) s.insert(v);
  return s;
}

bool VertexSet::subset_of(const VertexSet& o) const {
  return intersection_size(o) == size();
}

Labelling::Labelling(std::vector<int> order) : order_(std::move(order)) {
  const int n = static_cast<int>(order_.size());
  pos_.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    int v = order_[i];
    if (v < 0 || v >= n || pos_[v] != -1) throw std::invalid_argument("labelling is not a permutation");
    pos_[v] = i;
  }
}

Labelling Labelling::identity(int n) {
  std::vector<int> o(n);
  std::iota(o.begin(), o.end(), 0);
  return Labelling(std::move(o));
}

Graph::Graph(int n) : n_(n), adj_(n, Bitset(n)) { finish(); }

Graph Graph::from_edges(int n, const std::vector<Edge>& edges) {
  Graph g(n);
  for (auto [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("edge endpoint out of range");
    if (u == v) throw std::invalid_argument("self-loop " + std::to_string(u));
    if (g.adj_[u].test(v))
      throw std::invalid_argument("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    g.adj_[u].set(v);
    g.adj_[v].set(u);
  }
  g.finish();
  return g;
}

Graph Graph::from_adjacency(std::vector<Bitset> adj) {
  Graph g;
  g.n_ = static_cast<int>(adj.size());
  g.adj_ = std::move(adj);
  for (int v = 0; v < g.n_; ++v) {
    if (g.adj_[v].universe() != g.n_) throw std::invalid_argument("adjacency universe mismatch");
    if (g.adj_[v].test(v)) throw std::invalid_argument("self-loop");
    g.adj_[v].for_each([&](int u) {
      if (!g.adj_[u].test(v)) throw std::invalid_argument("asymmetric adjacency");
    });
  }
  g.finish();
  return g;
}

void Graph::finish() {
  deg_.assign(n_, 0);
  long long total = 0;
  for (int v = 0; v < n_; ++v) {
    deg_[v] = adj_[v].count();
    total += deg_[v];
  }
  m_ = total / 2;
}

int Graph::min_degree() const {
  return n_ == 0 ? 0 : *std::min_element(deg_.begin(), deg_.end());
}

int Graph::max_degree() const {
  return n_ == 0 ? 0 : *std::max_element(deg_.begin(), deg_.end());
}

long long Graph::edges_between(const VertexSet& x, const VertexSet& y) const {
  long long e = 0;
  x.for_each([&](int v) { e += adj_[v].and_count(y.bits()); });
  return e;
}

long long Graph::edges_inside(const VertexSet& x) const { return edges_between(x, x) / 2; }

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(m_));
  for (int u = 0; u < n_; ++u)
    adj_[u].for_each([&](int v) {
      if (u < v) out.emplace_back(u, v);
    });
  return out;
}

VertexSet Graph::common_neighbourhood(const std::vector<int>& vs) const {
  if (vs.empty()) return VertexSet::all(n_);
  Bitset b = adj_[vs[0]];
  for (std::size_t i = 1; i < vs.size(); ++i) b &= adj_[vs[i]];
  return VertexSet(std::move(b));
}

Graph Graph::without_edges(const std::vector<Edge>& removed) const {
  std::vector<Bitset> adj = adj_;
  for (auto [u, v] : removed) {
    adj[u].reset(v);
    adj[v].reset(u);
  }
  Graph g;
  g.n_ = n_;
  g.adj_ = std::move(adj);
  g.finish();
  return g;
}

bool Graph::is_subgraph_of(const Graph& host) const {
  if (host.n_ != n_) return false;
  for (int v = 0; v < n_; ++v)
    if (adj_[v].and_count(host.adj_[v]) != deg_[v]) return false;
  return true;
}

std::vector<int> Graph::bfs_distances(int src, int cap) const {
  std::vector<int> dist(n_, -1);
  std::deque<int> q{src};
  dist[src] = 0;
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    if (cap >= 0 && dist[u] >= cap) continue;
    adj_[u].for_each([&](int w) {
      if (dist[w] < 0) {
        dist[w] = dist[u] + 1;
        q.push_back(w);
      }
    });
  }
  return dist;
}

Graph gnp(int n, double p, std::uint64_t seed) {
  if (n < 1 || !(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gnp: need n >= 1 and 0 <= p <= 1");
  Rng rng(seed);
  std::vector<Bitset> adj(n, Bitset(n));
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (rng.bernoulli(p)) {
        adj[u].set(v);
        adj[v].set(u);
      }
  return Graph::from_adjacency(std::move(adj));
}

bool is_prime(long long q) {
  if (q < 2) return false;
  for (long long d = 2; d * d <= q; ++d)
    if (q % d == 0) return false;
  return true;
}

Graph paley(int q) {
  if (!is_prime(q) || q % 4 != 1) throw std::invalid_argument("paley: q must be a prime congruent to 1 mod 4");
  std::vector<char> residue(q, 0);
  for (long long x = 1; x < q; ++x) residue[(x * x) % q] = 1;
  std::vector<Bitset> adj(q, Bitset(q));
  for (int u = 0; u < q; ++u)
    for (int v = u + 1; v < q; ++v)
      if (residue[v - u]) {
        adj[u].set(v);
        adj[v].set(u);
      }
  return Graph::from_adjacency(std::move(adj));
}

double p_density(const Graph& g, const VertexSet& x, const VertexSet& y, double p) {
  if (x.empty() || y.empty()) throw std::invalid_argument("p_density: empty side");
  if (!x.disjoint(y)) throw std::invalid_argument("p_density: sides overlap");
  if (!(p > 0.0)) throw std::invalid_argument("p_density: p must be positive");
  return static_cast<double>(g.edges_between(x, y)) / (p * x.size() * static_cast<double>(y.size()));
}

int bandwidth_of_labelling(const Graph& g, const Labelling& l) {
  if (l.size() != g.n()) throw std::invalid_argument("labelling size mismatch");
  int bw = 0;
  for (auto [u, v] : g.edges()) bw = std::max(bw, std::abs(l.position(u) - l.position(v)));
  return bw;
}

DegeneracyResult degeneracy_order(const Graph& g) {
  const int n = g.n();
  std::vector<int> deg(n);
  std::set<std::pair<int, int>> queue;
  for (int v = 0; v < n; ++v) {
    deg[v] = g.degree(v);
    queue.emplace(deg[v], v);
  }
  std::vector<char> removed(n, 0);
  std::vector<int> order;
  order.reserve(n);
  int d = 0;
  while (!queue.empty()) {
    auto [dv, v] = *queue.begin();
    queue.erase(queue.begin());
    d = std::max(d, dv);
    removed[v] = 1;
    order.push_back(v);
    g.neighbours(v).for_each([&](int u) {
      if (!removed[u]) {
        queue.erase({deg[u], u});
        --deg[u];
        queue.emplace(deg[u], u);
      }
    });
  }
  return {Labelling(std::move(order)), d};
}

}  // namespace bwt
