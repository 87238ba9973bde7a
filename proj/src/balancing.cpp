#include "bwt/balancing.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "bwt/errors.hpp"
#include "bwt/rng.hpp"

namespace bwt {

int MoveLog::touches(int cell) const {
  int t = 0;
  for (const Move& m : moves) t += (m.from == cell) + (m.to == cell);
  return t;
}

int MoveLog::moved_total() const {
  int t = 0;
  for (const Move& m : moves) t += static_cast<int>(m.moved.size());
  return t;
}

VertexSet small_move_select(const Graph& g, const Graph& host, const VertexSet& x,
                            const std::vector<VertexSet>& z_list, int m, double eps, double d, double p,
                            std::uint64_t seed) {
  (void)host;
  if (m < 0) throw std::invalid_argument("small_move_select: negative m");
  std::vector<int> eligible;
  x.for_each([&](int v) {
    for (const VertexSet& z : z_list)
      if (g.degree_into(v, z) < (d - eps) * p * z.size() - 1e-9) return;
    eligible.push_back(v);
  });
  if (static_cast<int>(eligible.size()) < m)
    throw StageFailure("balancing", "only " + std::to_string(eligible.size()) + " eligible vertices for a move of " +
                                        std::to_string(m));
  Rng rng(seed, 0x5E);
  rng.shuffle(eligible);
  VertexSet s(g.n());
  for (int q = 0; q < m; ++q) s.insert(eligible[q]);
  return s;
}

namespace {

void check_inputs(const std::vector<VertexSet>& clusters, const std::vector<int>& targets, const BackboneIndex& idx) {
  if (static_cast<int>(clusters.size()) != idx.size() || static_cast<int>(targets.size()) != idx.size())
    throw std::invalid_argument("balancing: cluster or target count does not match r k");
  long long diff = 0;
  for (int c = 0; c < idx.size(); ++c) diff += clusters[c].size() - targets[c];
  if (diff != 0) throw std::invalid_argument("balancing: targets do not sum to the cluster total");
}

Move apply_move(std::vector<VertexSet>& cl, int from, int to, const VertexSet& s, const std::string& stage) {
  cl[from] -= s;
  cl[to] |= s;
  return Move{from, to, s.to_vector(), stage};
}

}  // namespace

BalanceOutcome global_balance(const std::vector<VertexSet>& clusters, const std::vector<int>& targets,
                              const ReducedGraph& reduced, const Graph& g, const Graph& host,
                              const BalanceParams& P) {
  const BackboneIndex& idx = reduced.index;
  check_inputs(clusters, targets, idx);
  const int r = idx.r, k = idx.k;
  BalanceOutcome out;
  out.clusters = clusters;
  auto& cl = out.clusters;
  if (P.gamma * k * r / 2.0 <= 3.0 * k)
    out.warnings.push_back("gamma k r / 2 <= 3k: free rows for global moves are not guaranteed");
  auto col_surplus = [&](int j) {
    long long s = 0;
    for (int i = 0; i < r; ++i) s += cl[idx.id(i, j)].size() - targets[idx.id(i, j)];
    return s;
  };
  std::vector<bool> flagged(idx.size(), false);
  for (int iter = 0; iter <= k; ++iter) {
    int jstar = 0;
    bool balanced = true;
    for (int j = 0; j < k; ++j) {
      if (col_surplus(j) != 0) balanced = false;
      if (col_surplus(j) > col_surplus(jstar)) jstar = j;
    }
    if (balanced) return out;
    if (iter == k) throw std::logic_error("global_balance: loop exceeded k iterations");
    const long long surplus = col_surplus(jstar);
    const int src = idx.id(0, jstar);
    if (surplus > cl[src].size() / 2)
      throw StageFailure("balancing", "row-1 cluster (1," + std::to_string(jstar + 1) + ") too small for surplus " +
                                          std::to_string(surplus));
    int jdst = -1;
    for (int j = 0; j < k && jdst < 0; ++j)
      if (col_surplus(j) < 0) jdst = j;
    int iprime = -1;
    for (int i = 1; i < r && iprime < 0; ++i) {
      bool ok = true;
      for (int j = 0; j < k && ok; ++j) ok = !flagged[idx.id(i, j)] && reduced.has_edge(src, idx.id(i, j));
      for (int j = 0; j < k && ok && P.check_pairs; ++j)
        ok = check_lower_regular(g, cl[src], cl[idx.id(i, j)], P.eps, P.d, P.p, P.mode).lower_ok();
      if (ok) iprime = i;
    }
    if (iprime < 0) throw StageFailure("balancing", "no unflagged row adjacent to the donor in R with regular pairs");
    std::vector<VertexSet> zs;
    for (int j = 0; j < k; ++j)
      if (j != jdst) zs.push_back(cl[idx.id(iprime, j)]);
    VertexSet s = small_move_select(g, host, cl[src], zs, static_cast<int>(surplus), P.eps / 4, P.d, P.p,
                                    P.seed + 0x61ULL * (iter + 1));
    const int dst = idx.id(iprime, jdst);
    out.log.moves.push_back(apply_move(cl, src, dst, s, "global"));
    flagged[src] = flagged[dst] = true;
  }
  return out;
}

BalanceOutcome local_balance(const std::vector<VertexSet>& clusters, const std::vector<int>& targets,
                             const ReducedGraph& reduced, const Graph& g, const Graph& host,
                             const BalanceParams& P) {
  const BackboneIndex& idx = reduced.index;
  check_inputs(clusters, targets, idx);
  const int r = idx.r, k = idx.k;
  for (int j = 0; j < k; ++j) {
    long long s = 0;
    for (int i = 0; i < r; ++i) s += clusters[idx.id(i, j)].size() - targets[idx.id(i, j)];
    if (s != 0) throw std::invalid_argument("local_balance: columns are not globally balanced");
  }
  BalanceOutcome out;
  out.clusters = clusters;
  auto& cl = out.clusters;
  for (int i = 0; i + 1 < r; ++i) {
    for (int j = 0; j < k; ++j) {
      const int here = idx.id(i, j), next = idx.id(i + 1, j);
      const int delta = cl[here].size() - targets[here];
      if (delta == 0) continue;
      const int from = delta > 0 ? here : next;
      const int to = delta > 0 ? next : here;
      const int zrow = delta > 0 ? i + 1 : i;
      const int m = std::abs(delta);
      if (m > cl[from].size() / 2)
        throw StageFailure("balancing", "cluster (" + std::to_string(idx.row(from) + 1) + "," + std::to_string(j + 1) +
                                            ") too small for a local move of " + std::to_string(m));
      std::vector<VertexSet> zs;
      for (int jj = 0; jj < k; ++jj)
        if (jj != j) zs.push_back(cl[idx.id(zrow, jj)]);
      VertexSet s;
      try {
        s = small_move_select(g, host, cl[from], zs, m, 3 * P.eps / 4, P.d, P.p, P.seed + 0x10CULL * (here + 1));
      } catch (const StageFailure& e) {
        throw StageFailure("balancing", std::string(e.what()) + " at (" + std::to_string(i + 1) + "," +
                                            std::to_string(j + 1) + ")");
      }
      out.log.moves.push_back(apply_move(cl, from, to, s, "local"));
    }
  }
  for (int c = 0; c < idx.size(); ++c)
    if (cl[c].size() != targets[c]) throw std::logic_error("local_balance: final sizes differ from targets");
  return out;
}

BalanceOutcome balance(const std::vector<VertexSet>& clusters, const std::vector<int>& targets,
                       const ReducedGraph& reduced, const Graph& g, const Graph& host, const BalanceParams& P) {
  BalanceOutcome a = global_balance(clusters, targets, reduced, g, host, P);
  BalanceOutcome b = local_balance(a.clusters, targets, reduced, g, host, P);
  a.clusters = std::move(b.clusters);
  for (Move& m : b.log.moves) a.log.moves.push_back(std::move(m));
  for (auto& w : b.warnings) a.warnings.push_back(std::move(w));
  return a;
}

ProbeReport probe_common_neighbourhoods(const Graph& host, const VertexSet& x, const VertexSet& s, double cap,
                                        double slack, int probes, int max_tuple, std::uint64_t seed) {
  ProbeReport rep;
  const int n = host.n();
  if (n == 0) return rep;
  Rng rng(seed, 0xB5);
  for (int q = 0; q < probes; ++q) {
    int size = 1 + static_cast<int>(rng.below(std::max(1, max_tuple)));
    std::vector<int> tuple;
    for (int t = 0; t < size; ++t) tuple.push_back(static_cast<int>(rng.below(n)));
    VertexSet nb = host.common_neighbourhood(tuple);
    double excess = nb.intersection_size(s) - (cap * nb.intersection_size(x) + slack);
    ++rep.probes;
    if (excess > 0) ++rep.violations;
    rep.worst_excess = q == 0 ? excess : std::max(rep.worst_excess, excess);
  }
  return rep;
}

BalanceCerts certify_balance(const std::vector<VertexSet>& before, const std::vector<VertexSet>& after,
                             const std::vector<int>& targets, const ReducedGraph& reduced, const Graph& g,
                             const Graph& host, const BalanceParams& P, int max_tuple, int probes) {
  const BackboneIndex& idx = reduced.index;
  const int n = g.n();
  BalanceCerts c;
  c.exact = true;
  VertexSet ub(n), ua(n);
  long long total_before = 0, total_after = 0, imbalance = 0;
  for (int q = 0; q < idx.size(); ++q) {
    if (after[q].size() != targets[q]) c.exact = false;
    ub |= before[q];
    ua |= after[q];
    total_before += before[q].size();
    total_after += after[q].size();
    imbalance += std::abs(before[q].size() - targets[q]);
  }
  c.conserved = ub == ua && total_before == ub.size() && total_after == ua.size();
  const double cap = std::max(2.0 * idx.k * idx.r * P.xi * n, static_cast<double>(imbalance));
  c.max_symdiff = 0;
  VertexSet moved(n);
  for (int q = 0; q < idx.size(); ++q) {
    VertexSet diff = (before[q] - after[q]) | (after[q] - before[q]);
    c.max_symdiff = std::max(c.max_symdiff, diff.size());
    moved |= diff;
  }
  c.symdiff = c.max_symdiff <= cap + 1e-9;
  c.super_regular = true;
  for (auto [a, b] : idx.clique_edges()) {
    if (!check_super_regular(g, host, after[a], after[b], P.eps, P.d, P.p, P.mode)) {
      c.super_regular = false;
      break;
    }
  }
  const double sm_cap = std::min(1.0, 100.0 * idx.k * std::pow(idx.r, 3) * P.xi);
  c.probe = probe_common_neighbourhoods(host, ub, moved, sm_cap, std::log(std::max(2, n)), probes, max_tuple, P.seed);
  return c;
}

void write_move_log(std::ostream& os, const MoveLog& log, const BackboneIndex& index) {
  for (const Move& m : log.moves) {
    os << "move " << m.stage << ' ' << index.row(m.from) + 1 << ' ' << index.col(m.from) + 1 << ' '
       << index.row(m.to) + 1 << ' ' << index.col(m.to) + 1 << ' ' << m.moved.size();
    for (int v : m.moved) os << ' ' << v;
    os << '\n';
  }
}

}  // namespace bwt
