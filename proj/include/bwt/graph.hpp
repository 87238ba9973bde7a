#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bwt {

using Edge = std::pair<int, int>;

// Fixed-universe bitset. All binary operations require equal universes.
class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(int n) : n_(n), w_(static_cast<std::size_t>((n + 63) / 64), 0) {}

  int universe() const { return n_; }
  bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1ULL; }
  void set(int i) { w_[i >> 6] |= 1ULL << (i & 63); }
  void reset(int i) { w_[i >> 6] &= ~(1ULL << (i & 63)); }
  void clear() { std::fill(w_.begin(), w_.end(), 0); }

  int count() const {
    int c = 0;
    for (auto x : w_) c += std::popcount(x);
    return c;
  }
  int and_count(const Bitset& o) const {
    int c = 0;
    for (std::size_t i = 0; i < w_.size(); ++i) c += std::popcount(w_[i] & o.w_[i]);
    return c;
  }
  bool intersects(const Bitset& o) const {
    for (std::size_t i = 0; i < w_.size(); ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }
  bool none() const {
    for (auto x : w_)
      if (x) return false;
    return true;
  }

  Bitset& operator&=(const Bitset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
    return *this;
  }
  Bitset& and_not(const Bitset& o) {
    for (std::size_t i = 0; i < w_.size(); ++i) w_[i] &= ~o.w_[i];
    return *this;
  }
  friend Bitset operator&(Bitset a, const Bitset& b) { return a &= b; }
  friend Bitset operator|(Bitset a, const Bitset& b) { return a |= b; }
  bool operator==(const Bitset& o) const = default;

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < w_.size(); ++i) {
      std::uint64_t x = w_[i];
      while (x) {
        f(static_cast<int>(i * 64 + std::countr_zero(x)));
        x &= x - 1;
      }
    }
  }
  std::vector<int> to_vector() const {
    std::vector<int> v;
    for_each([&](int i) { v.push_back(i); });
    return v;
  }
  const std::vector<std::uint64_t>& words() const { return w_; }

 private:
  int n_ = 0;
  std::vector<std::uint64_t> w_;
};

// Bitset with cached cardinality.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int n) : bits_(n) {}
  VertexSet(int n, const std::vector<int>& members);
  explicit VertexSet(Bitset b) : bits_(std::move(b)), count_(bits_.count()) {}

  static VertexSet all(int n);
  static VertexSet range(int n, int lo, int hi);  // [lo, hi)

  int universe() const { return bits_.universe(); }
  int size() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool contains(int v) const { return bits_.test(v); }
  void insert(int v) {
    if (!bits_.test(v)) { bits_.set(v); ++count_; }
  }
  void erase(int v) {
    if (bits_.test(v)) { bits_.reset(v); --count_; }
  }
  const Bitset& bits() const { return bits_; }
  std::vector<int> to_vector() const { return bits_.to_vector(); }
  template <class F>
  void for_each(F&& f) const { bits_.for_each(std::forward<F>(f)); }

  bool disjoint(const VertexSet& o) const { return !bits_.intersects(o.bits_); }
  bool subset_of(const VertexSet& o) const;
  int intersection_size(const VertexSet& o) const { return bits_.and_count(o.bits_); }

  VertexSet operator&(const VertexSet& o) const { return VertexSet(bits_ & o.bits_); }
  VertexSet operator|(const VertexSet& o) const { return VertexSet(bits_ | o.bits_); }
  VertexSet operator-(const VertexSet& o) const {
    Bitset b = bits_;
    b.and_not(o.bits_);
    return VertexSet(std::move(b));
  }
  VertexSet& operator|=(const VertexSet& o) {
    bits_ |= o.bits_;
    count_ = bits_.count();
    return *this;
  }
  VertexSet& operator-=(const VertexSet& o) {
    bits_.and_not(o.bits_);
    count_ = bits_.count();
    return *this;
  }
  bool operator==(const VertexSet& o) const { return bits_ == o.bits_; }

 private:
  Bitset bits_;
  int count_ = 0;
};

// Position -> vertex permutation with its inverse.
class Labelling {
 public:
  Labelling() = default;
  explicit Labelling(std::vector<int> order);  // throws unless bijective
  static Labelling identity(int n);

  int size() const { return static_cast<int>(order_.size()); }
  int at(int position) const { return order_[position]; }
  int position(int v) const { return pos_[v]; }
  const std::vector<int>& order() const { return order_; }

 private:
  std::vector<int> order_;
  std::vector<int> pos_;
};

// Immutable undirected simple graph with bitset adjacency.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);  // edgeless
  // Throws std::invalid_argument on out-of-range ends, self-loops and duplicates.
  static Graph from_edges(int n, const std::vector<Edge>& edges);
  // Throws unless symmetric and loop-free.
  static Graph from_adjacency(std::vector<Bitset> adj);

  int n() const { return n_; }
  long long m() const { return m_; }
  bool adjacent(int u, int v) const { return adj_[u].test(v); }
  const Bitset& neighbours(int v) const { return adj_[v]; }
  int degree(int v) const { return deg_[v]; }
  int degree_into(int v, const VertexSet& s) const { return adj_[v].and_count(s.bits()); }
  int min_degree() const;
  int max_degree() const;
  long long edges_between(const VertexSet& x, const VertexSet& y) const;
  long long edges_inside(const VertexSet& x) const;
  std::vector<Edge> edges() const;  // u < v, lexicographic
  VertexSet neighbourhood(int v) const { return VertexSet(adj_[v]); }
  // Common neighbourhood of the given vertices (all vertices if empty).
  VertexSet common_neighbourhood(const std::vector<int>& vs) const;
  Graph without_edges(const std::vector<Edge>& removed) const;
  bool is_subgraph_of(const Graph& host) const;
  std::vector<int> bfs_distances(int src, int cap = -1) const;  // -1 = unreachable

 private:
  int n_ = 0;
  long long m_ = 0;
  std::vector<Bitset> adj_;
  std::vector<int> deg_;
  void finish();
};

Graph gnp(int n, double p, std::uint64_t seed);
Graph paley(int q);
bool is_prime(long long q);

double p_density(const Graph& g, const VertexSet& x, const VertexSet& y, double p);

int bandwidth_of_labelling(const Graph& g, const Labelling& l);

struct DegeneracyResult {
  Labelling order;  // removal order
  int d = 0;
};
DegeneracyResult degeneracy_order(const Graph& g);

}  // namespace bwt
