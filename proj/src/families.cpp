#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "bwt/harness.hpp"
#include "bwt/rng.hpp"

namespace bwt {

namespace {

struct Spec {
  std::string name;
  std::string param;
};

Spec split_spec(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) return {s, ""};
  return {s.substr(0, colon), s.substr(colon + 1)};
}

int int_param(const std::string& p, int fallback, const std::string& family) {
  if (p.empty()) return fallback;
  try {
    std::size_t used = 0;
    int v = std::stoi(p, &used);
    if (used != p.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(family + ": parameter '" + p + "' is not an integer");
  }
}

// Position 2i holds vertex i, position 2i+1 holds vertex n-1-i.
Labelling fold_labelling(int n) {
  std::vector<int> order;
  order.reserve(n);
  for (int lo = 0, hi = n - 1; lo <= hi; ++lo, --hi) {
    order.push_back(lo);
    if (lo != hi) order.push_back(hi);
  }
  return Labelling(std::move(order));
}

Graph power_cycle_graph(int n, int c) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int s = 1; s <= c; ++s) {
      int j = (i + s) % n;
      if (s < n - s || (s == n - s && i < j)) e.emplace_back(std::min(i, j), std::max(i, j));
    }
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  return Graph::from_edges(n, e);
}

// (c+1)-periodic colours 1..c+1 around the cycle, with n mod (c+1) segments
// of length c+2 (one zero each) starting at vertex s.
Colouring power_cycle_colouring(int n, int c, int s) {
  const int rem = n % (c + 1);
  Colouring col(n);
  int t = 0;
  for (int seg = 0; seg < rem; ++seg)
    for (int q = 0; q < c + 2; ++q, ++t) col[(s + t) % n] = q;
  for (int q = 0; t < n; ++t, ++q) col[(s + t) % n] = 1 + q % (c + 1);
  return col;
}

// Vertex s such that positions 2s .. 2(s + span - 1) of the fold labelling
// lie in one block, as late as possible and past the protected prefix. Section
// cuts never need the last block.
int zero_start(int n, int span, int block_len, double beta) {
  const double prefix = std::sqrt(beta) * n;
  for (int start = (n - 1) / block_len * block_len; start >= 0; start -= block_len) {
    const int s = (start + 1) / 2;
    const int last = 2 * (s + span - 1);
    if (last < std::min(n, start + block_len) && 2.0 * s >= prefix) return s;
  }
  throw std::invalid_argument("zero segment of " + std::to_string(span) + " vertices does not fit one block of " +
                              std::to_string(block_len));
}

void fill_zero_list(GuestInstance& g) {
  for (int v = 0; v < g.graph.n(); ++v)
    if (g.colouring[v] == 0) g.zero_vertices.push_back(v);
}

GuestInstance cycle_family(const std::string& spec, int n, int c, int k, double beta) {
  if (c < 1) throw std::invalid_argument(spec + ": c must be at least 1");
  if (n < 2 * c + 3) throw std::invalid_argument(spec + ": n too small");
  if (k < c + 1) throw std::invalid_argument(spec + ": needs k >= " + std::to_string(c + 1));
  GuestInstance g;
  g.graph = power_cycle_graph(n, c);
  g.labelling = fold_labelling(n);
  const int rem = n % (c + 1);
  if (n < rem * (c + 2)) throw std::invalid_argument(spec + ": n too small for a proper colouring");
  int s = 0;
  if (rem > 0) s = zero_start(n, rem * (c + 2), block_length(n, k, beta), beta);
  g.colouring = power_cycle_colouring(n, c, s);
  return g;
}

GuestInstance path_family(const std::string& spec, int n, int c, int k) {
  if (c < 1) throw std::invalid_argument(spec + ": c must be at least 1");
  if (k < c + 1) throw std::invalid_argument(spec + ": needs k >= " + std::to_string(c + 1));
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i)
    for (int s = 1; s <= c && i + s < n; ++s) e.emplace_back(i, i + s);
  GuestInstance g;
  g.graph = Graph::from_edges(n, e);
  g.labelling = Labelling::identity(n);
  g.colouring.resize(n);
  for (int i = 0; i < n; ++i) g.colouring[i] = 1 + i % (c + 1);
  return g;
}

// Random tree: vertex v hangs below an unsaturated vertex among the previous
// w = ceil(log2 n) ones, so the identity labelling has bandwidth <= w.
GuestInstance tree_family(const std::string& spec, int n, int max_deg, int k, std::uint64_t seed) {
  if (max_deg < 2) throw std::invalid_argument(spec + ": Delta must be at least 2");
  if (k < 2) throw std::invalid_argument(spec + ": needs k >= 2");
  const int w = std::max(2, static_cast<int>(std::ceil(std::log2(std::max(2, n)))));
  Rng rng(seed, 0x7EE);
  std::vector<int> deg(n, 0), depth(n, 0);
  std::vector<Edge> e;
  for (int v = 1; v < n; ++v) {
    std::vector<int> open;
    for (int u = std::max(0, v - w); u < v; ++u)
      if (deg[u] < max_deg) open.push_back(u);
    int u = open[rng.below(open.size())];
    ++deg[u];
    ++deg[v];
    depth[v] = depth[u] + 1;
    e.emplace_back(u, v);
  }
  GuestInstance g;
  g.graph = Graph::from_edges(n, e);
  g.labelling = Labelling::identity(n);
  g.colouring.resize(n);
  for (int v = 0; v < n; ++v) g.colouring[v] = 1 + depth[v] % 2;
  return g;
}

GuestInstance factor_family(const std::string& spec, int n, const std::string& F, int k) {
  if (F.size() < 2) throw std::invalid_argument(spec + ": unknown factor '" + F + "'");
  const char kind = F[0];
  const int t = int_param(F.substr(1), 0, spec);
  std::vector<Edge> fe;
  std::vector<int> fc(t);
  if (kind == 'K' && t >= 2 && t <= 5) {
    for (int a = 0; a < t; ++a)
      for (int b = a + 1; b < t; ++b) fe.emplace_back(a, b);
    for (int a = 0; a < t; ++a) fc[a] = a + 1;
  } else if (kind == 'C' && t >= 3 && t <= 5) {
    for (int a = 0; a + 1 < t; ++a) fe.emplace_back(a, a + 1);
    fe.emplace_back(0, t - 1);
    for (int a = 0; a < t; ++a) fc[a] = 1 + a % 2;
    if (t % 2) fc[t - 1] = 3;
  } else if (kind == 'P' && t >= 2 && t <= 5) {
    for (int a = 0; a + 1 < t; ++a) fe.emplace_back(a, a + 1);
    for (int a = 0; a < t; ++a) fc[a] = 1 + a % 2;
  } else {
    throw std::invalid_argument(spec + ": unknown factor '" + F + "'");
  }
  if (n % t) throw std::invalid_argument(spec + ": n must be divisible by " + std::to_string(t));
  if (*std::max_element(fc.begin(), fc.end()) > k)
    throw std::invalid_argument(spec + ": needs more than k colours");
  std::vector<Edge> e;
  for (int base = 0; base < n; base += t)
    for (auto [a, b] : fe) e.emplace_back(base + a, base + b);
  GuestInstance g;
  g.graph = Graph::from_edges(n, e);
  g.labelling = Labelling::identity(n);
  g.colouring.resize(n);
  // colours rotate from one copy to the next so every colour class has about n/k vertices
  for (int v = 0; v < n; ++v) g.colouring[v] = 1 + (fc[v % t] - 1 + v / t) % k;
  return g;
}

}  // namespace

int triangle_free_prefix(const Graph& h, const Labelling& l) {
  int q = 0;
  for (; q < h.n(); ++q) {
    const int v = l.at(q);
    bool tri = false;
    h.neighbours(v).for_each([&](int u) {
      if (!tri && h.neighbours(u).intersects(h.neighbours(v))) tri = true;
    });
    if (tri) break;
  }
  return q;
}

GuestInstance make_guest(const std::string& spec, int n, int k, double beta, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("make_guest: n must be at least 3");
  Spec s = split_spec(spec);
  GuestInstance g;
  if (s.name == "hamilton_cycle") {
    if (!s.param.empty()) throw std::invalid_argument("hamilton_cycle takes no parameter");
    g = cycle_family(spec, n, 1, k, beta);
  } else if (s.name == "power_cycle") {
    g = cycle_family(spec, n, int_param(s.param, 2, s.name), k, beta);
  } else if (s.name == "power_path") {
    g = path_family(spec, n, int_param(s.param, 2, s.name), k);
  } else if (s.name == "bounded_tree") {
    g = tree_family(spec, n, int_param(s.param, 3, s.name), k, seed);
  } else if (s.name == "f_factor") {
    g = factor_family(spec, n, s.param.empty() ? "K3" : s.param, k);
  } else {
    throw std::invalid_argument("unknown guest family '" + s.name + "'");
  }
  g.family = spec;
  g.colours_needed = *std::max_element(g.colouring.begin(), g.colouring.end());
  g.bandwidth = bandwidth_of_labelling(g.graph, g.labelling);
  fill_zero_list(g);
  g.triangle_free_prefix = triangle_free_prefix(g.graph, g.labelling);
  g.degeneracy = degeneracy_order(g.graph).d;
  return g;
}

// ---- adversaries ----

Adversary parse_adversary(const std::string& name) {
  if (name == "none") return Adversary::none;
  if (name == "random") return Adversary::random;
  if (name == "triangle_killer") return Adversary::triangle_killer;
  if (name == "bipartite_push") return Adversary::bipartite_push;
  throw std::invalid_argument("unknown adversary '" + name + "'");
}

std::string adversary_name(Adversary a) {
  switch (a) {
    case Adversary::none: return "none";
    case Adversary::random: return "random";
    case Adversary::triangle_killer: return "triangle_killer";
    case Adversary::bipartite_push: return "bipartite_push";
  }
  return "?";
}

int degree_floor(int n, int k, double gamma, double p) {
  return static_cast<int>(std::ceil(((k - 1.0) / k + gamma) * p * n - 1e-9));
}

int triangles_at(const Graph& g, int v) {
  int t = 0;
  g.neighbours(v).for_each([&](int u) { t += g.neighbours(u).and_count(g.neighbours(v)); });
  return t / 2;
}

namespace {

class Deleter {
 public:
  Deleter(const Graph& g, int floor, double budget) : g_(g), floor_(floor), deg_(g.n()), cap_(g.n()), gone_(g.n()) {
    for (int v = 0; v < g.n(); ++v) {
      deg_[v] = g.degree(v);
      cap_[v] = static_cast<int>(std::floor(budget * g.degree(v) + 1e-9));
    }
  }
  bool can(int v) const { return deg_[v] > floor_ && gone_[v] < cap_[v]; }
  bool try_delete(int u, int v) {
    if (!can(u) || !can(v)) return false;
    --deg_[u];
    --deg_[v];
    ++gone_[u];
    ++gone_[v];
    removed_.emplace_back(std::min(u, v), std::max(u, v));
    return true;
  }
  Graph result() const { return g_.without_edges(removed_); }

 private:
  const Graph& g_;
  int floor_;
  std::vector<int> deg_, cap_, gone_;
  std::vector<Edge> removed_;
};

}  // namespace

Graph adversary_delete(const Graph& g, const AdversaryParams& P) {
  const int n = g.n();
  const int floor = degree_floor(n, P.k, P.gamma, P.p);
  if (n > 0 && g.min_degree() < floor)
    throw std::invalid_argument("adversary: minimum degree " + std::to_string(g.min_degree()) +
                                " is below the floor " + std::to_string(floor));
  if (P.budget < 0) throw std::invalid_argument("adversary: negative budget");
  Deleter del(g, floor, P.budget);
  Rng rng(P.seed, 0xAD);
  switch (P.strategy) {
    case Adversary::none:
      return g;
    case Adversary::random: {
      std::vector<Edge> e = g.edges();
      rng.shuffle(e);
      for (auto [u, v] : e) del.try_delete(u, v);
      break;
    }
    case Adversary::bipartite_push: {
      std::vector<int> cls(n);
      for (int v = 0; v < n; ++v) cls[v] = static_cast<int>(rng.below(P.k));
      std::vector<Edge> e;
      for (auto [u, v] : g.edges())
        if (cls[u] == cls[v]) e.push_back({u, v});
      rng.shuffle(e);
      for (auto [u, v] : e) del.try_delete(u, v);
      break;
    }
    case Adversary::triangle_killer: {
      const int v = P.target;
      if (v < 0 || v >= n) throw std::invalid_argument("adversary: target out of range");
      // Shrink N(v) by dropping the neighbours with most edges inside it,
      // then clear the edges inside what is left.
      VertexSet nb = g.neighbourhood(v);
      std::vector<int> order = nb.to_vector();
      std::vector<int> inside(n, 0);
      for (int u : order) inside[u] = g.degree_into(u, nb);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return inside[a] > inside[b]; });
      for (int u : order)
        if (del.try_delete(v, u)) nb.erase(u);
      std::vector<Edge> e;
      for (int u : nb.to_vector())
        g.neighbours(u).for_each([&](int w) {
          if (u < w && nb.contains(w)) e.push_back({u, w});
        });
      for (auto [u, w] : e)
        if (!del.try_delete(u, w) && del.try_delete(v, u)) nb.erase(u);
      break;
    }
  }
  return del.result();
}

}  // namespace bwt
