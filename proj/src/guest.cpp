#include "bwt/guest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bwt/errors.hpp"
#include "bwt/graph_io.hpp"
#include "bwt/rng.hpp"

namespace bwt {

bool is_proper(const Graph& h, const Colouring& col) {
  if (static_cast<int>(col.size()) != h.n()) return false;
  for (auto [u, v] : h.edges())
    if (col[u] == col[v]) return false;
  return true;
}

int block_length(int n, int k, double beta) {
  int len = static_cast<int>(std::floor(4.0 * k * beta * n + 1e-9));
  if (len < 1) throw std::invalid_argument("block length 4 k beta n is below 1");
  return len;
}

std::vector<bool> zero_blocks(const Colouring& col, const Labelling& l, int block_len) {
  const int n = l.size();
  std::vector<bool> out((n + block_len - 1) / block_len, false);
  for (int pos = 0; pos < n; ++pos)
    if (col[l.at(pos)] == 0) out[pos / block_len] = true;
  return out;
}

bool check_zero_free(const Colouring& col, const Labelling& l, double z, double beta, int k) {
  if (l.size() == 0) return true;
  std::vector<bool> zb = zero_blocks(col, l, block_length(l.size(), k, beta));
  const int window = std::max(1, static_cast<int>(std::floor(z + 1e-9)));
  int last = -1;
  for (int q = 0; q < static_cast<int>(zb.size()); ++q) {
    if (!zb[q]) continue;
    if (last >= 0 && q - last < window) return false;
    last = q;
  }
  return true;
}

int BlockStructure::section_of_block(int q) const {
  auto it = std::upper_bound(t.begin(), t.end(), q);
  return static_cast<int>(it - t.begin()) - 1;
}

Colouring switch_colours(const Graph& h, const Colouring& col, const Labelling& l, int block_len, int block_t,
                         const std::vector<int>& pi) {
  const int n = h.n();
  const int k = static_cast<int>(pi.size()) - 1;
  if (k < 1 || pi[0] != 0) throw std::invalid_argument("switch_colours: pi must fix colour 0");
  {
    std::vector<int> s(pi.begin() + 1, pi.end());
    std::sort(s.begin(), s.end());
    for (int c = 0; c < k; ++c)
      if (s[c] != c + 1) throw std::invalid_argument("switch_colours: pi is not a permutation of [k]");
  }
  const int start = block_t * block_len;
  const int end = std::min(n, start + block_len);
  if (block_t < 0 || start >= n) throw std::invalid_argument("switch_colours: block out of range");
  for (int pos = start; pos < end; ++pos)
    if (col[l.at(pos)] == 0) throw std::invalid_argument("switch_colours: block contains colour zero");

  // Transpositions on current colour values whose product is pi.
  std::vector<std::vector<int>> maps{std::vector<int>(k + 1)};
  for (int c = 0; c <= k; ++c) maps[0][c] = c;
  std::vector<std::pair<int, int>> trans;
  for (int c = 1; c <= k; ++c) {
    const std::vector<int>& cur = maps.back();
    if (cur[c] == pi[c]) continue;
    int a = cur[c], b = pi[c];
    trans.emplace_back(a, b);
    std::vector<int> next = cur;
    for (int& v : next) v = v == a ? b : v == b ? a : v;
    maps.push_back(next);
  }
  if (trans.empty()) return col;
  const int m = static_cast<int>(trans.size());
  const int bw = std::max(1, bandwidth_of_labelling(h, l));
  if (static_cast<long long>(3 * m + 1) * bw > end - start)
    throw std::invalid_argument("switch_colours: block shorter than (3m+1) times the bandwidth");

  Colouring out = col;
  for (int pos = end; pos < n; ++pos) {
    int x = l.at(pos);
    out[x] = pi[col[x]];
  }
  for (int pos = start; pos < end; ++pos) {
    int x = l.at(pos);
    int seg = (pos - start) / bw;
    if (seg == 0) continue;
    int stage = (seg - 1) / 3, phase = (seg - 1) % 3;
    if (stage >= m) {
      out[x] = pi[col[x]];
      continue;
    }
    auto [a, b] = trans[stage];
    int v = maps[stage][col[x]];
    if (phase == 0) {
      if (v == a) v = 0;
    } else if (phase == 1) {
      v = v == a ? 0 : v == b ? a : v;
    } else {
      v = maps[stage + 1][col[x]];
    }
    out[x] = v;
  }
  return out;
}

namespace {

BlockStructure build_blocks(int n, int k, double beta, const std::vector<int>& m, const BackboneIndex& idx,
                            const std::vector<bool>& zb) {
  BlockStructure bs;
  bs.n = n;
  bs.k = k;
  bs.beta = beta;
  bs.block_len = block_length(n, k, beta);
  bs.num_blocks = (n + bs.block_len - 1) / bs.block_len;
  bs.b = std::max(3, static_cast<int>(std::floor(k / std::sqrt(beta))));
  const int L = bs.block_len;
  const int r = idx.r;
  bs.t.assign(r + 1, 0);
  bs.t[r] = bs.num_blocks;
  long long target = 0;
  for (int i = 1; i < r; ++i) {
    for (int j = 0; j < k; ++j) target += m[idx.id(i - 1, j)];
    int ti = static_cast<int>(target / L);
    auto zero_free_cut = [&](int c) { return !zb[c - 1] && (c >= bs.num_blocks || !zb[c]); };
    while (ti > bs.t[i - 1] + 1 && !zero_free_cut(ti)) --ti;
    if (ti <= bs.t[i - 1] || ti >= bs.num_blocks || !zero_free_cut(ti) || target - static_cast<long long>(ti) * L >= 3LL * L)
      throw StageFailure("lemma_h", "no zero-free section boundary near position " + std::to_string(target));
    bs.t[i] = ti;
  }
  if (bs.t[r] <= bs.t[r - 1]) throw StageFailure("lemma_h", "last section is empty");
  bs.intervals.resize(r);
  bs.switch_block.resize(r);
  for (int i = 0; i < r; ++i) {
    for (int q = bs.t[i]; q < bs.t[i + 1]; q += bs.b) bs.intervals[i].emplace_back(q, std::min(q + bs.b, bs.t[i + 1]));
    const int s = static_cast<int>(bs.intervals[i].size());
    bs.switch_block[i].assign(s, -1);
    for (int ell = 1; ell + 1 < s; ++ell) {
      int q = bs.intervals[i][ell].first;
      if (zb[q]) ++q;
      if (q >= bs.intervals[i][ell].second || zb[q])
        throw StageFailure("lemma_h", "switching blocks of an interval both contain colour zero");
      bs.switch_block[i][ell] = q;
    }
  }
  return bs;
}

VertexSet closure2(const Graph& h, const VertexSet& seeds) {
  VertexSet out = seeds;
  for (int step = 0; step < 2; ++step) {
    VertexSet next = out;
    out.for_each([&](int v) { h.neighbours(v).for_each([&](int u) { next.insert(u); }); });
    out = next;
  }
  return out;
}

int failed_count(const GuestAssignment& a) {
  return !a.h1 + !a.h2 + !a.h3 + !a.h4 + !a.h5 + !a.h6;
}

}  // namespace

void certify_h(const Graph& h, const Labelling& l, const Colouring& original, const ReducedGraph& reduced, double xi,
               double beta, GuestAssignment& a) {
  const int n = h.n();
  const BackboneIndex& idx = reduced.index;
  const double slack = xi * n;
  a.part_sizes.assign(idx.size(), 0);
  for (int x = 0; x < n; ++x) ++a.part_sizes[a.f[x]];
  a.h1_deviation = 0;
  for (int c = 0; c < idx.size(); ++c)
    a.h1_deviation = std::max(a.h1_deviation, std::abs(a.part_sizes[c] - a.m_targets[c]));
  a.h1 = a.h1_deviation <= slack + 1e-9;
  a.h2 = a.special.size() <= slack + 1e-9;
  a.h3 = true;
  for (auto [x, y] : h.edges())
    if (a.f[x] == a.f[y] || !reduced.has_edge(a.f[x], a.f[y])) {
      a.h3 = false;
      break;
    }
  a.h4 = true;
  for (int x = 0; x < n && a.h4; ++x) {
    if (a.special.contains(x)) continue;
    const int row = idx.row(a.f[x]);
    h.neighbours(x).for_each([&](int y) {
      if (idx.row(a.f[y]) != row) a.h4 = false;
      h.neighbours(y).for_each([&](int z) {
        if (idx.row(a.f[z]) != row) a.h4 = false;
      });
    });
  }
  a.h5 = true;
  const int prefix = std::min(n, static_cast<int>(std::floor(std::sqrt(beta) * n)));
  for (int pos = 0; pos < prefix; ++pos) {
    int x = l.at(pos);
    if (original[x] < 1 || a.f[x] != idx.id(0, original[x] - 1)) a.h5 = false;
  }
  a.D = degeneracy_order(h).d;
  const int Dh = std::max(1, a.D);
  std::vector<int> low(idx.size(), 0);
  for (int x = 0; x < n; ++x)
    if (h.degree(x) <= 2 * Dh) ++low[a.f[x]];
  a.h6 = true;
  for (int c = 0; c < idx.size(); ++c)
    if (low[c] * 24.0 * Dh < a.part_sizes[c]) a.h6 = false;
  a.violation.clear();
  const bool flags[] = {a.h1, a.h2, a.h3, a.h4, a.h5, a.h6};
  for (int q = 0; q < 6; ++q)
    if (!flags[q]) {
      a.violation = "H" + std::to_string(q + 1);
      break;
    }
}

GuestAssignment lemma_for_h(const Graph& h, const Labelling& l, const Colouring& col, const ReducedGraph& reduced,
                            const std::vector<int>& m_targets, const LemmaHParams& P) {
  const int n = h.n();
  const int k = P.k;
  const BackboneIndex& idx = reduced.index;
  const int r = idx.r;
  if (l.size() != n || static_cast<int>(col.size()) != n) throw std::invalid_argument("lemma_for_h: size mismatch");
  if (idx.k != k) throw std::invalid_argument("lemma_for_h: reduced graph has a different k");
  for (int c : col)
    if (c < 0 || c > k) throw std::invalid_argument("lemma_for_h: colour out of range");
  if (!is_proper(h, col)) throw std::invalid_argument("lemma_for_h: colouring is not proper");
  if (!reduced.consistent()) throw std::invalid_argument("lemma_for_h: reduced graph lacks backbone or extension");
  if (static_cast<int>(m_targets.size()) != idx.size()) throw std::invalid_argument("lemma_for_h: wrong target count");
  long long total = 0;
  std::vector<std::vector<int>> rows(r);
  for (int c = 0; c < idx.size(); ++c) {
    total += m_targets[c];
    rows[idx.row(c)].push_back(m_targets[c]);
    if (m_targets[c] < n / (10.0 * k * r) - 1e-9 || m_targets[c] > 10.0 * n / (k * r) + 1e-9)
      throw std::invalid_argument("lemma_for_h: target outside [n/(10kr), 10n/(kr)]");
  }
  if (total != n || !validate_k_equitable(rows))
    throw std::invalid_argument("lemma_for_h: targets are not a k-equitable partition of n");
  if (!(P.beta > 0) || bandwidth_of_labelling(h, l) > P.beta * n + 1e-9)
    throw std::invalid_argument("lemma_for_h: bandwidth exceeds beta n");
  const double z = P.z > 0 ? P.z : 10.0 / P.xi;
  if (!check_zero_free(col, l, z, P.beta, k)) throw std::invalid_argument("lemma_for_h: colouring is not zero-free");
  const int prefix = std::min(n, static_cast<int>(std::floor(std::sqrt(P.beta) * n)));
  for (int pos = 0; pos < prefix; ++pos)
    if (col[l.at(pos)] == 0) throw std::invalid_argument("lemma_for_h: colour zero inside the first sqrt(beta) n");

  const int L = block_length(n, k, P.beta);
  const std::vector<bool> zb = zero_blocks(col, l, L);
  const BlockStructure bs = build_blocks(n, k, P.beta, m_targets, idx, zb);
  bool has_middle = false;
  for (const auto& sec : bs.switch_block)
    for (int q : sec) has_middle |= q >= 0;

  // Boundary vertices do not depend on the permutations.
  const int bn = static_cast<int>(std::floor(P.beta * n + 1e-9));
  VertexSet boundary(n);
  for (int i = 1; i < r; ++i) {
    int cut = bs.t[i] * L;
    for (int pos = std::max(0, cut - bn); pos < std::min(n, cut + bn); ++pos) boundary.insert(l.at(pos));
  }

  GuestAssignment best;
  bool have_best = false;
  const int attempts = has_middle ? std::max(1, P.retries) : 1;
  for (int att = 0; att < attempts; ++att) {
    Rng rng(P.seed, 0x4800 + att);
    GuestAssignment a;
    a.blocks = bs;
    a.m_targets = m_targets;
    a.attempts = att + 1;
    a.colouring = col;
    a.perms.resize(r);
    VertexSet seeds = boundary;
    std::vector<int> cur(k + 1);
    for (int c = 0; c <= k; ++c) cur[c] = c;
    for (int i = 0; i < r; ++i) {
      const int s = static_cast<int>(bs.intervals[i].size());
      a.perms[i].assign(s, {});
      for (int ell = 0; ell < s; ++ell) {
        const int q = bs.switch_block[i][ell];
        if (q < 0) {
          a.perms[i][ell] = cur;
          continue;
        }
        std::vector<int> pi(k + 1, 0);
        std::vector<int> p = rng.permutation(k);
        for (int c = 1; c <= k; ++c) pi[c] = p[c - 1] + 1;
        std::vector<int> rho(k + 1, 0);
        for (int c = 1; c <= k; ++c) rho[cur[c]] = pi[c];
        a.colouring = switch_colours(h, a.colouring, l, L, q, rho);
        cur = pi;
        a.perms[i][ell] = pi;
        for (int pos = q * L; pos < std::min(n, (q + 1) * L); ++pos) seeds.insert(l.at(pos));
      }
    }
    if (!is_proper(h, a.colouring)) throw std::logic_error("lemma_for_h: switched colouring is not proper");
    a.f.assign(n, 0);
    for (int pos = 0; pos < n; ++pos) {
      int x = l.at(pos);
      int i = bs.section_of_block(pos / L);
      if (a.colouring[x] == 0) {
        a.f[x] = reduced.extension[i];
        seeds.insert(x);
      } else {
        a.f[x] = idx.id(i, a.colouring[x] - 1);
      }
    }
    a.special = closure2(h, seeds);
    certify_h(h, l, col, reduced, P.xi, P.beta, a);
    bool better = !have_best || failed_count(a) < failed_count(best) ||
                  (failed_count(a) == failed_count(best) && a.h1_deviation < best.h1_deviation);
    if (better) {
      best = std::move(a);
      have_best = true;
    }
    if (best.all_hold()) break;
  }
  best.attempts = have_best ? best.attempts : 0;
  if (P.strict && !best.all_hold())
    throw StageFailure("lemma_h", best.violation + " not certified (H1 deviation " +
                                      std::to_string(best.h1_deviation) + ", |X| = " +
                                      std::to_string(best.special.size()) + ")");
  return best;
}

OrderReport check_bounded_order(const Graph& h, const Labelling& order, const RestrictionPair& restr,
                                const VertexSet& buffers, int D_tilde, double p, double m,
                                const VertexSet& exceptional) {
  const int n = h.n();
  OrderReport rep;
  std::vector<int> pi(n, 0);
  VertexSet near_buffer(n);
  buffers.for_each([&](int w) { h.neighbours(w).for_each([&](int x) { near_buffer.insert(x); }); });
  for (int x = 0; x < n; ++x) {
    int back = 0;
    h.neighbours(x).for_each([&](int y) { back += order.position(y) < order.position(x); });
    pi[x] = restr.j_size(x) + back;
  }
  int max_pi = 0;
  for (int x = 0; x < n; ++x)
    if (!exceptional.contains(x)) max_pi = std::max(max_pi, pi[x]);
  for (int x = 0; x < n; ++x) {
    const int px = order.position(x);
    std::vector<int> later, earlier;
    h.neighbours(x).for_each([&](int y) { (order.position(y) > px ? later : earlier).push_back(y); });
    bool later_edge = false;
    for (std::size_t a = 0; a < later.size() && !later_edge; ++a)
      for (std::size_t b = a + 1; b < later.size() && !later_edge; ++b) later_edge = h.adjacent(later[a], later[b]);
    const int dx = later_edge ? D_tilde - 2 : !later.empty() ? D_tilde - 1 : D_tilde;
    bool ok1 = pi[x] <= dx;
    if (near_buffer.contains(x)) ok1 = ok1 && pi[x] <= dx - 1;
    if (buffers.contains(x)) ok1 = ok1 && h.degree(x) <= D_tilde;
    if (!ok1) rep.ord1.push_back(x);

    bool ok2 = exceptional.contains(x) || pi[x] <= 0.5 * D_tilde;
    if (!ok2 && !restr.restricted(x)) {
      const double reach = std::pow(p, pi[x]) * m;
      ok2 = std::all_of(earlier.begin(), earlier.end(), [&](int y) { return px - order.position(y) <= reach; });
    }
    if (!ok2) rep.ord2.push_back(x);

    if (near_buffer.contains(x)) {
      const double reach = std::pow(p, D_tilde) * m;
      int far = 0;
      for (int y : earlier) far += px - order.position(y) > reach;
      if (far > D_tilde - 1 - max_pi) rep.ord3.push_back(x);
    }
  }
  return rep;
}

void write_guest_bundle(std::ostream& os, const GuestBundle& b) {
  write_graph(os, b.graph);
  os << "labelling";
  for (int v : b.labelling.order()) os << ' ' << v;
  os << "\ncolouring";
  for (int c : b.colouring) os << ' ' << c;
  os << '\n';
}

GuestBundle read_guest_bundle(std::istream& is) {
  GuestBundle b;
  b.graph = read_graph(is);
  const int n = b.graph.n();
  std::string line;
  bool have_l = false, have_c = false;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    std::vector<int> vals;
    for (int v; ls >> v;) vals.push_back(v);
    if (static_cast<int>(vals.size()) != n) throw std::invalid_argument("guest bundle: " + key + " has wrong length");
    if (key == "labelling") {
      b.labelling = Labelling(vals);
      have_l = true;
    } else if (key == "colouring") {
      b.colouring = vals;
      have_c = true;
    } else {
      throw std::invalid_argument("guest bundle: unknown line '" + key + "'");
    }
  }
  if (!have_l || !have_c) throw std::invalid_argument("guest bundle: missing labelling or colouring");
  return b;
}

void write_assignment(std::ostream& os, const GuestAssignment& a, const BackboneIndex& index) {
  for (int x = 0; x < static_cast<int>(a.f.size()); ++x)
    os << "assign " << x << ' ' << index.row(a.f[x]) + 1 << ' ' << index.col(a.f[x]) + 1 << '\n';
  os << "special";
  a.special.for_each([&](int v) { os << ' ' << v; });
  os << '\n';
}

}  // namespace bwt
