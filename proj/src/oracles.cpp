#include "bwt/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "bwt/rng.hpp"

namespace bwt {

namespace {

// Graphs with maximum degree <= 2 are disjoint paths and cycles.
int bandwidth_degree_two(const Graph& g) {
  if (g.m() == 0) return 0;
  const int n = g.n();
  std::vector<char> seen(n, 0);
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    int vertices = 0;
    long long degsum = 0;
    std::vector<int> stack{s};
    seen[s] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      ++vertices;
      degsum += g.degree(u);
      g.neighbours(u).for_each([&](int w) {
        if (!seen[w]) { seen[w] = 1; stack.push_back(w); }
      });
    }
    if (degsum / 2 == vertices) return 2;  // a cycle component
  }
  return 1;
}

class BandwidthSearch {
 public:
  explicit BandwidthSearch(const Graph& g) : g_(g), n_(g.n()), adj_(n_, 0) {
    for (int v = 0; v < n_; ++v)
      g.neighbours(v).for_each([&](int u) { adj_[v] |= 1u << u; });
  }

  bool feasible(int b) {
    b_ = b;
    failed_.clear();
    order_.clear();
    return extend(0u);
  }
  const std::vector<int>& order() const { return order_; }

 private:
  const Graph& g_;
  int n_;
  int b_ = 0;
  std::vector<std::uint32_t> adj_;
  std::vector<int> order_;
  std::unordered_set<std::string> failed_;

  std::string key(std::uint32_t placed) const {
    std::string k(reinterpret_cast<const char*>(&placed), sizeof(placed));
    int t = static_cast<int>(order_.size());
    for (int q = std::max(0, t - b_); q < t; ++q) k.push_back(static_cast<char>(order_[q]));
    return k;
  }

  bool extend(std::uint32_t placed) {
    const int t = static_cast<int>(order_.size());
    if (t == n_) return true;
    // Every placed vertex at position q needs its unplaced neighbours within q + b.
    for (int q = std::max(0, t - b_); q < t; ++q) {
      int unplaced = std::popcount(adj_[order_[q]] & ~placed);
      if (unplaced > q + b_ - t + 1) return false;
    }
    if (t - b_ - 1 >= 0 && (adj_[order_[t - b_ - 1]] & ~placed)) return false;
    std::string k = key(placed);
    if (failed_.count(k)) return false;
    for (int v = 0; v < n_; ++v) {
      if (placed & (1u << v)) continue;
      // Placed neighbours of v must sit within distance b of position t.
      std::uint32_t nb = adj_[v] & placed;
      bool ok = true;
      for (int q = 0; q < t - b_ && ok; ++q)
        if (nb & (1u << order_[q])) ok = false;
      if (!ok) continue;
      order_.push_back(v);
      if (extend(placed | (1u << v))) return true;
      order_.pop_back();
    }
    failed_.insert(std::move(k));
    return false;
  }
};

}  // namespace

std::pair<int, Labelling> exact_bandwidth_labelling(const Graph& g) {
  const int n = g.n();
  if (n > 16) throw std::invalid_argument("exact_bandwidth: exhaustive search limited to n <= 16");
  if (g.m() == 0) return {0, Labelling::identity(n)};
  BandwidthSearch search(g);
  for (int b = std::max(1, (g.max_degree() + 1) / 2); b < n; ++b)
    if (search.feasible(b)) return {b, Labelling(search.order())};
  return {n - 1, Labelling::identity(n)};
}

int exact_bandwidth(const Graph& g) {
  if (g.max_degree() <= 2) return bandwidth_degree_two(g);
  if (g.n() > 16) throw std::invalid_argument("exact_bandwidth: graph too large for exhaustive search");
  return exact_bandwidth_labelling(g).first;
}

namespace {

class SubgraphSearch {
 public:
  SubgraphSearch(const Graph& host, const Graph& guest) : host_(host), guest_(guest) {
    const int k = guest.n();
    // Order guest vertices so each one has as many earlier neighbours as possible.
    std::vector<char> used(k, 0);
    for (int step = 0; step < k; ++step) {
      int best = -1, best_conn = -1, best_deg = -1;
      for (int v = 0; v < k; ++v) {
        if (used[v]) continue;
        int conn = 0;
        for (int u : order_) conn += guest.adjacent(u, v);
        if (conn > best_conn || (conn == best_conn && guest.degree(v) > best_deg)) {
          best = v;
          best_conn = conn;
          best_deg = guest.degree(v);
        }
      }
      used[best] = 1;
      order_.push_back(best);
    }
    image_.assign(k, -1);
  }

  bool run() { return extend(0, Bitset(host_.n())); }

 private:
  const Graph& host_;
  const Graph& guest_;
  std::vector<int> order_;
  std::vector<int> image_;

  bool extend(std::size_t idx, const Bitset& used) {
    if (idx == order_.size()) return true;
    const int x = order_[idx];
    Bitset cand(host_.n());
    for (int v = 0; v < host_.n(); ++v) cand.set(v);
    cand.and_not(used);
    for (std::size_t j = 0; j < idx; ++j)
      if (guest_.adjacent(x, order_[j])) cand &= host_.neighbours(image_[order_[j]]);
    bool found = false;
    cand.for_each([&](int v) {
      if (found || host_.degree(v) < guest_.degree(x)) return;
      image_[x] = v;
      Bitset next = used;
      next.set(v);
      if (extend(idx + 1, next)) found = true;
    });
    return found;
  }
};

}  // namespace

bool exhaustive_subgraph_check(const Graph& host, const Graph& guest) {
  if (guest.n() > 10) throw std::invalid_argument("exhaustive_subgraph_check: guest limited to 10 vertices");
  if (guest.n() > host.n()) return false;
  if (guest.m() > host.m()) return false;
  return SubgraphSearch(host, guest).run();
}

namespace {

double discrepancy_ratio(long long e, double p, int x, int y) {
  double xy = static_cast<double>(x) * y;
  return std::abs(static_cast<double>(e) - p * xy) / std::sqrt(xy);
}

struct ExhaustiveBijumbled {
  int n;
  double p;
  std::vector<std::uint32_t> adj;
  double best = -1.0;
  std::uint32_t best_x = 0, best_y = 0;

  void run(int i, std::uint32_t xm, std::uint32_t ym, long long e) {
    if (i == n) {
      if (xm && ym) {
        double r = discrepancy_ratio(e, p, std::popcount(xm), std::popcount(ym));
        if (r > best) { best = r; best_x = xm; best_y = ym; }
      }
      return;
    }
    run(i + 1, xm, ym, e);
    run(i + 1, xm | (1u << i), ym, e + std::popcount(adj[i] & ym));
    run(i + 1, xm, ym | (1u << i), e + std::popcount(adj[i] & xm));
  }
};

std::vector<int> mask_to_vector(std::uint32_t m) {
  std::vector<int> v;
  for (int i = 0; m; ++i, m >>= 1)
    if (m & 1u) v.push_back(i);
  return v;
}

struct SampledBijumbled {
  const Graph& g;
  double p;
  double best = -1.0;
  std::vector<int> best_x, best_y;

  void consider(const std::vector<int>& x, const std::vector<int>& y) {
    if (x.empty() || y.empty()) return;
    VertexSet xs(g.n(), x), ys(g.n(), y);
    double r = discrepancy_ratio(g.edges_between(xs, ys), p, xs.size(), ys.size());
    if (r > best) { best = r; best_x = x; best_y = y; }
  }

  // Best-response partner for a fixed side: sort outside vertices by excess
  // degree and scan prefixes in both directions.
  std::vector<int> respond(const std::vector<int>& x) {
    VertexSet xs(g.n(), x);
    std::vector<std::pair<double, int>> c;
    for (int v = 0; v < g.n(); ++v)
      if (!xs.contains(v)) c.emplace_back(g.degree_into(v, xs) - p * xs.size(), v);
    std::vector<int> out;
    double out_r = -1.0;
    for (int dir = 0; dir < 2; ++dir) {
      std::sort(c.begin(), c.end(), [&](auto& a, auto& b) {
        return dir == 0 ? (a.first > b.first || (a.first == b.first && a.second < b.second))
                        : (a.first < b.first || (a.first == b.first && a.second < b.second));
      });
      double sum = 0.0;
      for (std::size_t t = 0; t < c.size(); ++t) {
        sum += c[t].first;
        double r = std::abs(sum) / std::sqrt(static_cast<double>(x.size()) * (t + 1));
        if (r > out_r) {
          out_r = r;
          out.clear();
          for (std::size_t q = 0; q <= t; ++q) out.push_back(c[q].second);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }
};

}  // namespace

BijumbledResult bijumbled_check(const Graph& g, double p, double nu, const BijumbledMode& mode) {
  const int n = g.n();
  BijumbledResult res;
  if (n < 2) {
    res.holds = true;
    res.exact = true;
    return res;
  }
  bool exhaustive = mode.exhaustive || (mode.fallback && n <= 14);
  if (exhaustive) {
    if (n > 14) throw std::invalid_argument("bijumbled_check: exhaustive mode limited to n <= 14");
    ExhaustiveBijumbled ex{n, p, std::vector<std::uint32_t>(n, 0)};
    for (int v = 0; v < n; ++v)
      g.neighbours(v).for_each([&](int u) { ex.adj[v] |= 1u << u; });
    ex.run(0, 0, 0, 0);
    res.worst_ratio = ex.best;
    res.worst_x = mask_to_vector(ex.best_x);
    res.worst_y = mask_to_vector(ex.best_y);
    res.exact = true;
  } else {
    SampledBijumbled s{g, p, -1.0, {}, {}};
    std::vector<int> by_deg(n);
    std::iota(by_deg.begin(), by_deg.end(), 0);
    std::stable_sort(by_deg.begin(), by_deg.end(), [&](int a, int b) { return g.degree(a) > g.degree(b); });
    for (int a = 1; 2 * a <= n; ++a) {
      std::vector<int> top(by_deg.begin(), by_deg.begin() + a);
      std::vector<int> next(by_deg.begin() + a, by_deg.begin() + 2 * a);
      std::vector<int> bottom(by_deg.end() - a, by_deg.end());
      s.consider(top, next);
      s.consider(top, bottom);
      s.consider(top, s.respond(top));
      s.consider(bottom, s.respond(bottom));
    }
    Rng rng(mode.seed, 0xB1);
    for (int it = 0; it < mode.samples; ++it) {
      int a = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
      std::vector<int> x = rng.sample(n, a);
      std::vector<int> y = s.respond(x);
      s.consider(x, y);
      if (!y.empty()) {
        std::vector<int> x2 = s.respond(y);
        s.consider(x2, y);
      }
    }
    res.worst_ratio = s.best;
    res.worst_x = s.best_x;
    res.worst_y = s.best_y;
  }
  res.holds = res.worst_ratio <= nu + 1e-12;
  return res;
}

bool bijumbled_feasible(double p, double nu, int n) {
  if (n <= 0) return true;
  double dn = n;
  bool guarded = p > 16.0 / dn && p < 1.0 - 16.0 / dn;
  if (!guarded) return true;
  double cap = std::min(std::sqrt(p * dn / 32.0), std::sqrt((1.0 - p) * dn / 32.0));
  return nu > cap;
}

double tail_bound(const TailBoundQuery& q) {
  switch (q.family) {
    case TailFamily::binomial_chernoff:
      if (q.eps < 0 || q.eps > 1.5 || q.mean < 0)
        throw std::invalid_argument("chernoff: need 0 <= eps <= 3/2 and mean >= 0");
      return 2.0 * std::exp(-q.eps * q.eps * q.mean / 3.0);
    case TailFamily::hypergeometric:
      if (q.eps < 0 || q.t < 0) throw std::invalid_argument("hypergeometric: need eps >= 0 and t >= 0");
      return 2.0 * std::exp(-q.eps * q.eps * q.t / 3.0);
    case TailFamily::mcdiarmid: {
      if (q.eps < 0 || q.c.empty()) throw std::invalid_argument("mcdiarmid: need eps >= 0 and nonempty c");
      double s = 0.0;
      for (double ci : q.c) {
        if (ci < 0) throw std::invalid_argument("mcdiarmid: negative bounded difference");
        s += ci * ci;
      }
      if (q.eps == 0.0) return 2.0;
      if (s == 0.0) return 0.0;
      return 2.0 * std::exp(-2.0 * q.eps * q.eps / s);
    }
  }
  throw std::invalid_argument("unknown tail family");
}

}  // namespace bwt
