#include "bwt/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "bwt/rng.hpp"

namespace bwt {

VertexSet BufferPlan::all(int guest_n) const {
  VertexSet s(guest_n);
  for (const auto& cell : buffers)
    for (int x : cell) s.insert(x);
  return s;
}

BufferPlan choose_buffers(const Graph& guest, const std::vector<int>& fstar, const Labelling& order,
                          const RestrictionPair& restr, const VertexSet& special, int k, double vartheta) {
  const int n = guest.n();
  int cells = 0;
  for (int c : fstar) cells = std::max(cells, c + 1);
  std::vector<int> part(cells, 0);
  for (int c : fstar)
    if (c >= 0) ++part[c];
  BufferPlan plan;
  plan.buffers.assign(cells, {});
  VertexSet near(n);  // within distance 2 of a chosen buffer vertex
  for (int pos = 0; pos < n; ++pos) {
    int x = order.at(pos);
    int c = fstar[x];
    if (c < 0 || near.contains(x) || special.contains(x) || restr.restricted(x) || restr.j_size(x) > 0) continue;
    if (static_cast<int>(plan.buffers[c].size()) >= vartheta * part[c]) continue;
    bool ok = true;
    guest.neighbours(x).for_each([&](int y) {
      if (fstar[y] < 0 || fstar[y] / k != c / k || restr.j_size(y) > 0) ok = false;
    });
    if (!ok) continue;
    plan.buffers[c].push_back(x);
    std::vector<int> d = guest.bfs_distances(x, 2);
    for (int z = 0; z < n; ++z)
      if (d[z] >= 0) near.insert(z);
  }
  return plan;
}

namespace {

class Attempt {
 public:
  Attempt(const Graph& g, const std::vector<VertexSet>& clusters, const Graph& guest, const std::vector<int>& fstar,
          const RestrictionPair& restr, const BufferPlan& buffers, const Labelling& order,
          const std::vector<int>& initial, const EmbedParams& P, std::uint64_t seed)
      : g_(g), cl_(clusters), h_(guest), f_(fstar), restr_(restr), plan_(buffers), order_(order), P_(P),
        rng_(seed, 0xE3), phi_(initial), used_(g.n()), forbidden_(guest.n()), owner_(g.n(), -1),
        fixed_(guest.n()) {
    for (int x = 0; x < guest.n(); ++x)
      if (phi_[x] >= 0) {
        used_.insert(phi_[x]);
        owner_[phi_[x]] = x;
        fixed_.insert(x);
      }
    is_buffer_ = plan_.all(guest.n());
  }

  bool run(EmbedResult& out) {
    std::vector<int> main;
    std::vector<int> main_pos(h_.n(), -1);
    for (int pos = 0; pos < h_.n(); ++pos) {
      int x = order_.at(pos);
      if (phi_[x] >= 0 || is_buffer_.contains(x)) continue;
      main_pos[x] = static_cast<int>(main.size());
      main.push_back(x);
    }
    std::vector<int> undo_count(h_.n(), 0);
    std::size_t i = 0;
    while (i < main.size()) {
      const int x = main[i];
      VertexSet C = candidates(x);
      if (C.empty()) {
        VertexSet visited(h_.n());
        visited.insert(x);
        nodes_ = 0;
        if (relocate(x, kSwapDepth, visited)) {
          ++out.swaps;
          ++i;
          continue;
        }
        int y = -1;
        h_.neighbours(x).for_each([&](int z) {
          if (main_pos[z] >= 0 && main_pos[z] < static_cast<int>(i) && (y < 0 || main_pos[z] > main_pos[y])) y = z;
        });
        if (y < 0 || undo_count[x] >= P_.max_undo) {
          out.stuck_vertex = x;
          out.trace.push_back("main phase stuck at guest " + std::to_string(x) + " (cell " + std::to_string(f_[x]) +
                              "), " + std::to_string(undo_count[x]) + " undos");
          return false;
        }
        ++undo_count[x];
        ++out.undos;
        const int back = main_pos[y];
        const int old = phi_[y];
        for (std::size_t q = back; q < i; ++q) {
          int z = main[q];
          unplace(z);
          if (z != y) forbidden_[z].clear();
        }
        forbidden_[y].push_back(old);
        i = back;
        continue;
      }
      place(x, choose(x, C));
      ++i;
    }
    return match_buffers(out);
  }

  std::vector<int> phi() const { return phi_; }

 private:
  const Graph& g_;
  const std::vector<VertexSet>& cl_;
  const Graph& h_;
  const std::vector<int>& f_;
  const RestrictionPair& restr_;
  const BufferPlan& plan_;
  const Labelling& order_;
  const EmbedParams& P_;
  Rng rng_;
  std::vector<int> phi_;
  VertexSet used_;
  std::vector<std::vector<int>> forbidden_;
  std::vector<int> owner_;  // host -> guest
  VertexSet fixed_;         // pre-embedded guests
  VertexSet is_buffer_;

  struct Op {
    int guest, host;
    bool placed;
  };
  std::vector<Op> journal_;

  static constexpr int kSwapDepth = 5;
  static constexpr int kSwapWidth = 16;
  static constexpr long long kSwapNodes = 20000;  // per repair
  long long nodes_ = 0;
  static constexpr long long kAnnealIters = 400000;

  void place(int x, int u) {
    phi_[x] = u;
    used_.insert(u);
    owner_[u] = x;
    journal_.push_back({x, u, true});
  }
  void unplace(int x) {
    const int u = phi_[x];
    used_.erase(u);
    owner_[u] = -1;
    phi_[x] = -1;
    journal_.push_back({x, u, false});
  }
  void rollback(std::size_t mark) {
    while (journal_.size() > mark) {
      Op op = journal_.back();
      journal_.pop_back();
      if (op.placed) {
        used_.erase(op.host);
        owner_[op.host] = -1;
        phi_[op.guest] = -1;
      } else {
        phi_[op.guest] = op.host;
        used_.insert(op.host);
        owner_[op.host] = op.guest;
      }
    }
  }

  // Admissible images of x ignoring which hosts are used.
  VertexSet feasible(int x) const {
    auto it = restr_.I.find(x);
    VertexSet c = it != restr_.I.end() ? it->second : cl_[f_[x]];
    h_.neighbours(x).for_each([&](int y) {
      if (phi_[y] >= 0) c = c & g_.neighbourhood(phi_[y]);
    });
    for (int v : forbidden_[x]) c.erase(v);
    return c;
  }

  // Places the unplaced x within depth nested moves: either x takes a host
  // whose owner is placed again elsewhere, or a placed neighbour of x is
  // lifted and placed again after x. Changes are undone on failure.
  bool relocate(int x, int depth, VertexSet& visited) {
    if (++nodes_ > kSwapNodes) return false;
    VertexSet C = candidates(x);
    if (!C.empty()) {
      place(x, choose(x, C));
      return true;
    }
    if (depth == 0) return false;
    const std::size_t mark = journal_.size();
    std::vector<int> hosts = (feasible(x) & used_).to_vector();
    rng_.shuffle(hosts);
    if (static_cast<int>(hosts.size()) > kSwapWidth) hosts.resize(kSwapWidth);
    for (int u : hosts) {
      const int y = owner_[u];
      if (y < 0 || fixed_.contains(y) || visited.contains(y)) continue;
      visited.insert(y);
      unplace(y);
      place(x, u);
      if (relocate(y, depth - 1, visited)) return true;
      rollback(mark);
    }
    std::vector<int> nbrs;
    h_.neighbours(x).for_each([&](int y) {
      if (phi_[y] >= 0 && !fixed_.contains(y) && !visited.contains(y)) nbrs.push_back(y);
    });
    for (int y : nbrs) {
      visited.insert(y);
      unplace(y);
      if (relocate(x, depth - 1, visited) && relocate(y, depth - 1, visited)) return true;
      rollback(mark);
    }
    return false;
  }

  VertexSet candidates(int x) const { return feasible(x) - used_; }

  int choose(int x, const VertexSet& C) {
    std::vector<int> cand = C.to_vector();
    if (static_cast<int>(cand.size()) > P_.candidate_cap) {
      rng_.shuffle(cand);
      cand.resize(P_.candidate_cap);
    }
    std::vector<VertexSet> pending;
    h_.neighbours(x).for_each([&](int z) {
      if (phi_[z] < 0) pending.push_back(candidates(z));
    });
    if (pending.empty()) return cand[rng_.below(cand.size())];
    int best = -1;
    std::vector<int> ties;
    for (int u : cand) {
      int score = h_.n() + g_.n();
      for (const VertexSet& s : pending) score = std::min(score, g_.neighbours(u).and_count(s.bits()));
      if (score > best) {
        best = score;
        ties.clear();
      }
      if (score == best) ties.push_back(u);
    }
    return ties[rng_.below(ties.size())];
  }

  bool match_buffers(EmbedResult& out) {
    bool stuck = false;
    for (std::size_t c = 0; c < plan_.buffers.size(); ++c) {
      const std::vector<int>& xs = plan_.buffers[c];
      if (xs.empty()) continue;
      std::vector<int> hosts = (cl_[c] - used_).to_vector();
      if (hosts.size() != xs.size()) {
        out.trace.push_back("cell " + std::to_string(c) + ": " + std::to_string(hosts.size()) +
                            " unused hosts for " + std::to_string(xs.size()) + " buffer vertices");
        return false;
      }
      std::vector<std::vector<int>> adj(xs.size());
      for (std::size_t a = 0; a < xs.size(); ++a) {
        VertexSet C = candidates(xs[a]);
        for (std::size_t b = 0; b < hosts.size(); ++b)
          if (C.contains(hosts[b])) adj[a].push_back(static_cast<int>(b));
      }
      std::vector<int> match_host(hosts.size(), -1);
      std::vector<char> seen;
      std::function<bool(int)> augment = [&](int a) {
        for (int b : adj[a]) {
          if (seen[b]) continue;
          seen[b] = 1;
          if (match_host[b] < 0 || augment(match_host[b])) {
            match_host[b] = a;
            return true;
          }
        }
        return false;
      };
      int matched = 0;
      for (std::size_t a = 0; a < xs.size(); ++a) {
        seen.assign(hosts.size(), 0);
        if (augment(static_cast<int>(a))) ++matched;
      }
      std::vector<bool> is_matched(xs.size(), false);
      for (std::size_t b = 0; b < hosts.size(); ++b)
        if (match_host[b] >= 0) {
          place(xs[match_host[b]], hosts[b]);
          is_matched[match_host[b]] = true;
        }
      // Leftover buffer vertices reach the free hosts through swaps.
      for (std::size_t a = 0; a < xs.size(); ++a) {
        if (is_matched[a]) continue;
        VertexSet visited(h_.n());
        visited.insert(xs[a]);
        nodes_ = 0;
        if (relocate(xs[a], kSwapDepth, visited)) {
          ++out.swaps;
          ++matched;
          continue;
        }
        out.stuck_vertex = xs[a];
        out.trace.push_back("cell " + std::to_string(c) + ": buffer matching covers " + std::to_string(matched) +
                            " of " + std::to_string(xs.size()));
        stuck = true;
        std::vector<int> free_hosts = (cl_[c] - used_).to_vector();
        for (std::size_t q = a, h = 0; q < xs.size(); ++q)
          if (!is_matched[q] && phi_[xs[q]] < 0) place(xs[q], free_hosts[h++]);
        break;
      }
    }
    if (!stuck) return true;
    if (anneal()) {
      ++out.swaps;
      return true;
    }
    return false;
  }

  // Last resort once every guest has a host: swaps images of two guests in
  // the same cell, annealing on the number of guest edges mapped to non-edges.
  bool anneal() {
    const int n = h_.n();
    for (int x = 0; x < n; ++x)
      if (phi_[x] < 0) return false;
    auto bad_at = [&](int x) {
      int b = 0;
      h_.neighbours(x).for_each([&](int y) { b += !g_.adjacent(phi_[x], phi_[y]); });
      return b;
    };
    std::vector<std::vector<int>> movable(cl_.size());
    for (int x = 0; x < n; ++x)
      if (!fixed_.contains(x) && !restr_.I.count(x)) movable[f_[x]].push_back(x);
    std::vector<int> pool;
    for (const auto& m : movable)
      if (m.size() >= 2)
        for (int x : m) pool.push_back(x);
    if (pool.empty()) return false;
    long long cost = 0;
    for (auto [x, y] : h_.edges()) cost += !g_.adjacent(phi_[x], phi_[y]);
    const long long iters = kAnnealIters;
    double T = 1.0;
    const double cool = std::pow(0.02, 1.0 / static_cast<double>(iters));
    for (long long it = 0; it < iters && cost > 0; ++it, T *= cool) {
      const int x = pool[rng_.below(pool.size())];
      const int bx = bad_at(x);
      if (bx == 0 && rng_.uniform() > 0.05) continue;
      const auto& m = movable[f_[x]];
      const int y = m[rng_.below(m.size())];
      if (y == x) continue;
      const bool xy = h_.neighbours(x).test(y);
      const int before = bx + bad_at(y) - (xy && !g_.adjacent(phi_[x], phi_[y]));
      std::swap(phi_[x], phi_[y]);
      const int after = bad_at(x) + bad_at(y) - (xy && !g_.adjacent(phi_[x], phi_[y]));
      const int delta = after - before;
      if (delta <= 0 || rng_.uniform() < std::exp(-delta / T)) {
        cost += delta;
        owner_[phi_[x]] = x;
        owner_[phi_[y]] = y;
      } else {
        std::swap(phi_[x], phi_[y]);
      }
    }
    return cost == 0;
  }
};

}  // namespace

EmbedResult embed(const Graph& g, const std::vector<VertexSet>& clusters, const Graph& guest,
                  const std::vector<int>& fstar, const RestrictionPair& restr, const BufferPlan& buffers,
                  const Labelling& order, const std::vector<int>& initial, const EmbedParams& P) {
  EmbedResult out;
  const int gn = guest.n();
  if (static_cast<int>(fstar.size()) != gn || static_cast<int>(initial.size()) != gn || order.size() != gn)
    throw std::invalid_argument("embed: size mismatch");
  for (int x = 0; x < gn; ++x)
    if (initial[x] < 0 && (fstar[x] < 0 || fstar[x] >= static_cast<int>(clusters.size())))
      throw std::invalid_argument("embed: guest vertex without a cluster");
  std::vector<int> part(clusters.size(), 0);
  for (int x = 0; x < gn; ++x)
    if (initial[x] < 0) ++part[fstar[x]];
  for (std::size_t c = 0; c < clusters.size(); ++c)
    if (part[c] != clusters[c].size()) {
      out.failure = "cell " + std::to_string(c) + " has " + std::to_string(clusters[c].size()) + " hosts for " +
                    std::to_string(part[c]) + " guests";
      return out;
    }
  for (int attempt = 0; attempt <= P.restarts; ++attempt) {
    Attempt a(g, clusters, guest, fstar, restr, buffers, order, initial, P, P.seed + 0x1000193ULL * attempt);
    out.restarts_used = attempt;
    if (a.run(out)) {
      out.success = true;
      out.phi = a.phi();
      out.failure.clear();
      return out;
    }
  }
  out.failure = out.trace.empty() ? "embedding failed" : out.trace.back();
  return out;
}

bool verify_embedding(const Graph& g, const Graph& guest, const std::vector<int>& phi, const RestrictionPair& restr,
                      std::string* report) {
  std::ostringstream msg;
  auto fail = [&](const std::string& s) {
    if (report) *report = s;
    return false;
  };
  if (static_cast<int>(phi.size()) != guest.n()) return fail("phi has the wrong length");
  VertexSet seen(g.n());
  for (int x = 0; x < guest.n(); ++x) {
    if (phi[x] < 0 || phi[x] >= g.n()) return fail("guest " + std::to_string(x) + " unmapped");
    if (seen.contains(phi[x])) return fail("host " + std::to_string(phi[x]) + " used twice");
    seen.insert(phi[x]);
  }
  for (auto [x, y] : guest.edges())
    if (!g.adjacent(phi[x], phi[y]))
      return fail("edge " + std::to_string(x) + "-" + std::to_string(y) + " maps to non-edge " +
                  std::to_string(phi[x]) + "-" + std::to_string(phi[y]));
  for (const auto& [x, I] : restr.I)
    if (!I.contains(phi[x])) return fail("guest " + std::to_string(x) + " outside its image restriction");
  if (report) report->clear();
  return true;
}

void write_embedding(std::ostream& os, const std::vector<int>& phi) {
  for (int x = 0; x < static_cast<int>(phi.size()); ++x) os << "embed " << x << ' ' << phi[x] << '\n';
}

}  // namespace bwt
