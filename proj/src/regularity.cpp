#include "bwt/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bwt/rng.hpp"

namespace bwt {

int subpair_threshold(double eps, int side) {
  int t = static_cast<int>(std::ceil(eps * side - 1e-9));
  return std::clamp(t, 1, std::max(side, 1));
}

namespace {

void validate_pair(const VertexSet& x, const VertexSet& y, double p) {
  if (x.empty() || y.empty()) throw std::invalid_argument("regularity check: empty side");
  if (!x.disjoint(y)) throw std::invalid_argument("regularity check: sides overlap");
  if (!(p > 0.0)) throw std::invalid_argument("regularity check: p must be positive");
}

struct Extreme {
  double density = 0.0;
  std::vector<int> x, y;
  bool set = false;
};

struct Extremes {
  Extreme lo, hi;
  bool exact = false;
};

void offer(Extreme& e, double dens, bool lower, const std::vector<int>& x, const std::vector<int>& y) {
  if (!e.set || (lower ? dens < e.density : dens > e.density)) {
    e.density = dens;
    e.x = x;
    e.y = y;
    e.set = true;
  }
}

// Exhaustive over all X' with |X'| >= tx. For fixed X' the extreme Y' of size
// >= ty is the ty vertices of smallest (largest) degree into X', since the mean
// of the s smallest values is nondecreasing in s.
Extremes exhaustive_extremes(const Graph& g, const std::vector<int>& xs, const std::vector<int>& ys, int tx,
                             int ty, double p) {
  const int a = static_cast<int>(xs.size());
  const int b = static_cast<int>(ys.size());
  std::vector<std::uint32_t> row(b, 0);
  for (int j = 0; j < b; ++j)
    for (int i = 0; i < a; ++i)
      if (g.adjacent(ys[j], xs[i])) row[j] |= 1u << i;
  Extremes out;
  out.exact = true;
  double best_lo = 1e300, best_hi = -1.0;
  std::uint32_t lo_mask = 0, hi_mask = 0;
  std::vector<std::pair<int, int>> deg(b);
  std::vector<int> lo_y, hi_y;
  for (std::uint32_t mask = 1; mask < (1u << a); ++mask) {
    int sx = std::popcount(mask);
    if (sx < tx) continue;
    for (int j = 0; j < b; ++j) deg[j] = {std::popcount(row[j] & mask), j};
    std::sort(deg.begin(), deg.end());
    long long lo = 0, hi = 0;
    for (int q = 0; q < ty; ++q) {
      lo += deg[q].first;
      hi += deg[b - 1 - q].first;
    }
    double norm = p * sx * static_cast<double>(ty);
    double dlo = lo / norm, dhi = hi / norm;
    if (dlo < best_lo) {
      best_lo = dlo;
      lo_mask = mask;
      lo_y.clear();
      for (int q = 0; q < ty; ++q) lo_y.push_back(ys[deg[q].second]);
    }
    if (dhi > best_hi) {
      best_hi = dhi;
      hi_mask = mask;
      hi_y.clear();
      for (int q = 0; q < ty; ++q) hi_y.push_back(ys[deg[b - 1 - q].second]);
    }
  }
  auto expand = [&](std::uint32_t m) {
    std::vector<int> v;
    for (int i = 0; i < a; ++i)
      if (m & (1u << i)) v.push_back(xs[i]);
    return v;
  };
  std::sort(lo_y.begin(), lo_y.end());
  std::sort(hi_y.begin(), hi_y.end());
  offer(out.lo, best_lo, true, expand(lo_mask), lo_y);
  offer(out.hi, best_hi, false, expand(hi_mask), hi_y);
  return out;
}

// Works on local indices: bit q of xadj_[i] says xs[i] ~ ys[q], and vice versa.
class SampledSearch {
 public:
  SampledSearch(const Graph& g, std::vector<int> xs, std::vector<int> ys, int tx, int ty, double p)
      : xs_(std::move(xs)), ys_(std::move(ys)), tx_(tx), ty_(ty), p_(p) {
    xw_ = (static_cast<int>(ys_.size()) + 63) / 64;
    yw_ = (static_cast<int>(xs_.size()) + 63) / 64;
    xadj_.assign(xs_.size() * xw_, 0);
    yadj_.assign(ys_.size() * yw_, 0);
    for (std::size_t i = 0; i < xs_.size(); ++i)
      for (std::size_t q = 0; q < ys_.size(); ++q)
        if (g.adjacent(xs_[i], ys_[q])) {
          xadj_[i * xw_ + q / 64] |= 1ULL << (q % 64);
          yadj_[q * yw_ + i / 64] |= 1ULL << (i % 64);
        }
  }

  // The t members of one side with the lowest (or highest) degree into the
  // given local subset of the other side; ties by vertex id.
  std::vector<int> respond(bool x_side, const std::vector<int>& other, int t, bool lowest, long long* sum) const {
    const int words = x_side ? xw_ : yw_;
    const std::vector<std::uint64_t>& adj = x_side ? xadj_ : yadj_;
    const int size = static_cast<int>(x_side ? xs_.size() : ys_.size());
    mask_.assign(words, 0);
    for (int q : other) mask_[q / 64] |= 1ULL << (q % 64);
    deg_.clear();
    for (int i = 0; i < size; ++i) {
      int d = 0;
      for (int w = 0; w < words; ++w) d += std::popcount(adj[static_cast<std::size_t>(i) * words + w] & mask_[w]);
      deg_.emplace_back(lowest ? d : -d, i);
    }
    std::nth_element(deg_.begin(), deg_.begin() + (t - 1), deg_.end());
    std::vector<int> out;
    long long s = 0;
    for (int q = 0; q < t; ++q) {
      out.push_back(deg_[q].second);
      s += lowest ? deg_[q].first : -deg_[q].first;
    }
    std::sort(out.begin(), out.end());
    if (sum) *sum = s;
    return out;
  }

  // Alternate best responses starting from X'.
  void climb(std::vector<int> xp, bool lowest, Extreme& e) const {
    for (int round = 0; round < 2; ++round) {
      long long s = 0;
      std::vector<int> yp = respond(false, xp, ty_, lowest, &s);
      offer_local(e, s, lowest, xp, yp);
      xp = respond(true, yp, tx_, lowest, &s);
      offer_local(e, s, lowest, xp, yp);
    }
  }

  // Prefix cut on X by degree into Y, then climb; symmetric cut from Y.
  void prefix_cuts(bool lowest, Extreme& e) const {
    std::vector<int> all_x(xs_.size()), all_y(ys_.size());
    for (std::size_t i = 0; i < all_x.size(); ++i) all_x[i] = static_cast<int>(i);
    for (std::size_t i = 0; i < all_y.size(); ++i) all_y[i] = static_cast<int>(i);
    climb(respond(true, all_y, tx_, lowest, nullptr), lowest, e);
    std::vector<int> yp = respond(false, all_x, ty_, lowest, nullptr);
    long long s = 0;
    std::vector<int> xp = respond(true, yp, tx_, lowest, &s);
    offer_local(e, s, lowest, xp, yp);
    climb(xp, lowest, e);
  }

  std::vector<int> random_x(Rng& rng) const { return rng.sample(static_cast<int>(xs_.size()), tx_); }

 private:
  std::vector<int> xs_, ys_;
  int tx_, ty_;
  double p_;
  int xw_ = 0, yw_ = 0;
  std::vector<std::uint64_t> xadj_, yadj_;
  mutable std::vector<std::uint64_t> mask_;
  mutable std::vector<std::pair<int, int>> deg_;

  void offer_local(Extreme& e, long long s, bool lowest, const std::vector<int>& xp, const std::vector<int>& yp) const {
    const double dens = s / (p_ * tx_ * static_cast<double>(ty_));
    if (e.set && !(lowest ? dens < e.density : dens > e.density)) return;
    std::vector<int> gx, gy;
    for (int i : xp) gx.push_back(xs_[i]);
    for (int i : yp) gy.push_back(ys_[i]);
    offer(e, dens, lowest, gx, gy);
  }
};

Extremes find_extremes(const Graph& g, const VertexSet& x, const VertexSet& y, double eps, double p,
                       const CheckMode& mode, bool want_upper) {
  std::vector<int> xs = x.to_vector(), ys = y.to_vector();
  int tx = subpair_threshold(eps, x.size());
  int ty = subpair_threshold(eps, y.size());
  if (mode.exact) {
    if (x.size() > kExactSideLimit || y.size() > kExactSideLimit)
      throw std::invalid_argument("exact regularity check limited to sides of size <= 20");
    return exhaustive_extremes(g, xs, ys, tx, ty, p);
  }
  if (mode.fallback && x.size() <= kFallbackSideLimit && y.size() <= kFallbackSideLimit)
    return exhaustive_extremes(g, xs, ys, tx, ty, p);
  Extremes out;
  SampledSearch s(g, xs, ys, tx, ty, p);
  s.prefix_cuts(true, out.lo);
  if (want_upper) s.prefix_cuts(false, out.hi);
  Rng rng(mode.seed, 0x5EC);
  for (int it = 0; it < mode.samples; ++it) {
    std::vector<int> xp = s.random_x(rng);
    s.climb(xp, true, out.lo);
    if (want_upper) s.climb(xp, false, out.hi);
  }
  return out;
}

// Lowest-degree prefixes of both sides at the threshold sizes, ties by id.
SubpairWitness prefix_pair(const Graph& g, const VertexSet& x, const VertexSet& y, double eps, double p) {
  auto prefix = [&](const VertexSet& side, const VertexSet& other, int t) {
    std::vector<std::pair<int, int>> deg;
    side.for_each([&](int v) { deg.emplace_back(g.degree_into(v, other), v); });
    std::sort(deg.begin(), deg.end());
    std::vector<int> out;
    for (int q = 0; q < t; ++q) out.push_back(deg[q].second);
    std::sort(out.begin(), out.end());
    return out;
  };
  SubpairWitness w;
  w.x = prefix(x, y, subpair_threshold(eps, x.size()));
  w.y = prefix(y, x, subpair_threshold(eps, y.size()));
  w.density = p_density(g, VertexSet(g.n(), w.x), VertexSet(g.n(), w.y), p);
  return w;
}

}  // namespace

PairVerdict check_lower_regular(const Graph& g, const VertexSet& x, const VertexSet& y, double eps, double d,
                                double p, const CheckMode& mode) {
  validate_pair(x, y, p);
  if (mode.exact && (x.size() > kExactSideLimit || y.size() > kExactSideLimit))
    throw std::invalid_argument("exact regularity check limited to sides of size <= 20");
  PairVerdict v;
  v.d_observed = p_density(g, x, y, p);
  if (d - eps <= 0.0) {
    // Densities are nonnegative, so the bound holds for every subpair.
    v.kind = PairKind::lower_regular;
    v.exact = true;
    v.min_density = 0.0;
    return v;
  }
  Extremes ex = find_extremes(g, x, y, eps, p, mode, false);
  v.exact = ex.exact;
  v.min_density = ex.lo.density;
  if (ex.lo.density < d - eps) {
    v.kind = PairKind::irregular;
    v.witness = SubpairWitness{ex.lo.x, ex.lo.y, ex.lo.density};
    // The degree-ordered prefix pair is reported when it already violates.
    SubpairWitness pre = prefix_pair(g, x, y, eps, p);
    if (pre.density < d - eps) v.witness = pre;
  } else {
    v.kind = PairKind::lower_regular;
  }
  return v;
}

PairVerdict check_regular(const Graph& g, const VertexSet& x, const VertexSet& y, double eps, double d, double p,
                          const CheckMode& mode) {
  validate_pair(x, y, p);
  PairVerdict v;
  v.d_observed = p_density(g, x, y, p);
  Extremes ex = find_extremes(g, x, y, eps, p, mode, true);
  v.exact = ex.exact;
  v.min_density = ex.lo.density;
  v.max_density = ex.hi.density;
  const double lo = ex.lo.density, hi = ex.hi.density;
  // Some d' >= d with [lo, hi] inside [d' - eps, d' + eps].
  bool regular = hi - lo <= 2 * eps + 1e-12 && lo + eps >= d - 1e-12;
  if (regular) {
    v.kind = PairKind::regular;
  } else if (lo >= d - eps) {
    v.kind = PairKind::lower_regular;
  } else {
    v.kind = PairKind::irregular;
  }
  if (!regular) {
    bool use_lo = (v.d_observed - lo) >= (hi - v.d_observed) || lo < d - eps;
    const Extreme& w = use_lo ? ex.lo : ex.hi;
    v.witness = SubpairWitness{w.x, w.y, w.density};
  }
  return v;
}

int count_low_degree(const Graph& g, const VertexSet& x, const VertexSet& y, double eps, double d, double p) {
  const double floor_deg = (d - eps) * p * y.size();
  int c = 0;
  x.for_each([&](int v) {
    if (g.degree_into(v, y) < floor_deg) ++c;
  });
  return c;
}

bool check_super_regular(const Graph& g, const Graph& host, const VertexSet& x, const VertexSet& y, double eps,
                         double d, double p, const CheckMode& mode) {
  if (!check_lower_regular(g, x, y, eps, d, p, mode).lower_ok()) return false;
  auto side_ok = [&](const VertexSet& a, const VertexSet& b) {
    bool ok = true;
    a.for_each([&](int v) {
      if (!ok) return;
      double need = (d - eps) * std::max(p * b.size(), host.degree_into(v, b) / 2.0);
      if (g.degree_into(v, b) < need) ok = false;
    });
    return ok;
  };
  return side_ok(x, y) && side_ok(y, x);
}

int count_inheritance_failures(const Graph& g, const Graph& host, const VertexSet& x, const VertexSet& y,
                               const VertexSet& candidates, double eps_out, double d, double p, bool two_sided,
                               const CheckMode& mode) {
  int failures = 0;
  candidates.for_each([&](int z) {
    VertexSet nx = host.neighbourhood(z) & x;
    VertexSet ny = two_sided ? (host.neighbourhood(z) & y) : y;
    if (nx.empty() || ny.empty()) {
      ++failures;
      return;
    }
    if (!check_lower_regular(g, nx, ny, eps_out, d, p, mode).lower_ok()) ++failures;
  });
  return failures;
}

// ---- energy ----

double pair_energy(double density, double L) {
  return density <= L ? density * density : 2.0 * L * density - L * L;
}

double energy_cap(double L, int s) { return L * L + 16.0 * L * s * s; }

double partition_energy(const Graph& g, const std::vector<std::vector<VertexSet>>& parts,
                        const std::vector<int>& initial_sizes, double p, double L) {
  struct Part {
    const VertexSet* set;
    int owner;
  };
  std::vector<Part> flat;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (const auto& s : parts[i])
      if (!s.empty()) flat.push_back({&s, static_cast<int>(i)});
  double e = 0.0;
  for (std::size_t a = 0; a < flat.size(); ++a)
    for (std::size_t b = a + 1; b < flat.size(); ++b) {
      const VertexSet& P = *flat[a].set;
      const VertexSet& Q = *flat[b].set;
      double dens = static_cast<double>(g.edges_between(P, Q)) / (p * P.size() * static_cast<double>(Q.size()));
      double w = static_cast<double>(P.size()) * Q.size() /
                 (static_cast<double>(initial_sizes[flat[a].owner]) * initial_sizes[flat[b].owner]);
      e += w * pair_energy(dens, L);
    }
  return e;
}

EnergyResult energy_partition(const Graph& g, const std::vector<VertexSet>& initial, double eps, double p,
                              const EnergyOptions& opt) {
  const int s = static_cast<int>(initial.size());
  EnergyResult res;
  res.state.L = opt.L > 0 ? opt.L : 100.0 * s * s / eps;
  const double L = res.state.L;
  std::vector<int> sizes(s);
  for (int i = 0; i < s; ++i) {
    sizes[i] = std::max(initial[i].size(), 1);
    for (int j = 0; j < i; ++j)
      if (!initial[i].disjoint(initial[j])) throw std::invalid_argument("energy_partition: initial parts overlap");
  }
  for (int i = 0; i < s; ++i) {
    double vi = initial[i].size();
    if (g.edges_inside(initial[i]) > 3.0 * p * vi * vi)
      res.warnings.push_back("part " + std::to_string(i) + " violates e(V_i) <= 3p|V_i|^2");
    for (int j = i + 1; j < s; ++j)
      if (g.edges_between(initial[i], initial[j]) > 2.0 * p * vi * initial[j].size())
        res.warnings.push_back("pair " + std::to_string(i) + "," + std::to_string(j) + " violates e <= 2p|V_i||V_j|");
  }
  auto& parts = res.state.partition;
  parts.assign(s, {});
  for (int i = 0; i < s; ++i)
    if (!initial[i].empty()) parts[i].push_back(initial[i]);
  res.residues.assign(s, VertexSet(g.n()));

  while (true) {
    struct Ref {
      int owner, idx;
    };
    std::vector<Ref> flat;
    for (int i = 0; i < s; ++i)
      for (int q = 0; q < static_cast<int>(parts[i].size()); ++q) flat.push_back({i, q});
    const int np = static_cast<int>(flat.size());
    // witnesses[part] = list of (deviation, subset)
    std::vector<std::vector<std::pair<double, std::vector<int>>>> wit(np);
    int irregular = 0;
    for (int a = 0; a < np; ++a)
      for (int b = a + 1; b < np; ++b) {
        const VertexSet& P = parts[flat[a].owner][flat[a].idx];
        const VertexSet& Q = parts[flat[b].owner][flat[b].idx];
        CheckMode m = opt.mode;
        m.seed = opt.mode.seed ^ (static_cast<std::uint64_t>(a) << 32 | static_cast<std::uint64_t>(b));
        PairVerdict v = check_regular(g, P, Q, eps / 2, 0.0, p, m);
        if (v.kind == PairKind::regular) continue;
        ++irregular;
        double dev = std::abs(v.witness->density - v.d_observed);
        wit[a].emplace_back(dev, v.witness->x);
        wit[b].emplace_back(dev, v.witness->y);
      }
    res.irregular_pairs = irregular;
    double energy = partition_energy(g, parts, sizes, p, L);
    res.state.energy = energy;
    if (irregular <= eps / 2 * np * static_cast<double>(np)) {
      res.regular = true;
      res.stop_reason = "regular";
      break;
    }
    if (static_cast<int>(res.rounds.size()) >= opt.max_rounds) {
      res.stop_reason = "round budget";
      break;
    }
    int smallest = g.n();
    for (auto& r : flat) smallest = std::min(smallest, parts[r.owner][r.idx].size());
    if (smallest / std::max(opt.split, 2) < opt.min_part_size) {
      res.stop_reason = "part size floor";
      break;
    }
    // Refine: order each part by its witness-set signature (the Venn atoms),
    // then cut into `split` pieces of equal size.
    std::vector<std::vector<VertexSet>> next(s);
    for (int a = 0; a < np; ++a) {
      const VertexSet& P = parts[flat[a].owner][flat[a].idx];
      auto& w = wit[a];
      std::stable_sort(w.begin(), w.end(), [](auto& l, auto& r) { return l.first > r.first; });
      if (static_cast<int>(w.size()) > opt.witnesses_per_part) w.resize(opt.witnesses_per_part);
      std::vector<VertexSet> sets;
      for (auto& [dev, members] : w) sets.emplace_back(g.n(), members);
      std::vector<std::pair<unsigned, int>> keyed;
      P.for_each([&](int v) {
        unsigned sig = 0;
        for (std::size_t q = 0; q < sets.size(); ++q)
          if (sets[q].contains(v)) sig |= 1u << (sets.size() - 1 - q);
        keyed.emplace_back(~sig, v);
      });
      std::sort(keyed.begin(), keyed.end());
      const int k = std::max(opt.split, 2);
      const int sz = static_cast<int>(keyed.size());
      int pos = 0;
      for (int piece = 0; piece < k; ++piece) {
        int len = sz / k + (piece < sz % k ? 1 : 0);
        VertexSet part(g.n());
        for (int q = 0; q < len; ++q) part.insert(keyed[pos++].second);
        if (!part.empty()) next[flat[a].owner].push_back(std::move(part));
      }
    }
    parts = std::move(next);
    double after = partition_energy(g, parts, sizes, p, L);
    res.rounds.push_back({np, irregular, energy, after, true});
  }
  return res;
}

// ---- minimum degree partition ----

RegularPartitionResult min_degree_regular_partition(const Graph& g, double eps, double d, double p, int r0,
                                                    const RegularPartitionOptions& opt) {
  const int n = g.n();
  if (r0 < 1 || r0 > n) throw std::invalid_argument("min_degree_regular_partition: need 1 <= r0 <= n");
  const double alpha = g.min_degree() / (p * n);
  std::string last_failure;
  for (int attempt = 0; attempt <= opt.retries; ++attempt) {
    Rng rng(opt.seed, 0xA000 + attempt);
    std::vector<int> perm = rng.permutation(n);
    std::vector<VertexSet> initial;
    for (int i = 0; i < r0; ++i) {
      VertexSet part(n);
      for (int q = i * n / r0; q < (i + 1) * n / r0; ++q) part.insert(perm[q]);
      initial.push_back(std::move(part));
    }
    EnergyOptions eo = opt.energy;
    eo.mode.seed ^= rng.next();
    EnergyResult en = energy_partition(g, initial, eps, p, eo);
    RegularPartitionResult out;
    out.epsilon = eps;
    out.d = d;
    out.p = p;
    out.alpha = alpha;
    out.energy_rounds = static_cast<int>(en.rounds.size());
    out.exceptional = VertexSet(n);
    for (auto& r : en.residues) out.exceptional |= r;
    std::vector<VertexSet> parts;
    for (auto& group : en.state.partition)
      for (auto& part : group) parts.push_back(part);

    auto verdicts = [&](const std::vector<VertexSet>& cl, std::vector<std::pair<int, int>>& regular,
                        std::vector<std::pair<int, int>>& reduced) {
      regular.clear();
      reduced.clear();
      const int t = static_cast<int>(cl.size());
      for (int a = 0; a < t; ++a)
        for (int b = a + 1; b < t; ++b) {
          CheckMode m = opt.mode;
          m.seed = opt.mode.seed ^ rng.fork(static_cast<std::uint64_t>(a) * 1009 + b).next();
          PairVerdict v = check_lower_regular(g, cl[a], cl[b], eps, d, p, m);
          if (!v.lower_ok()) continue;
          regular.emplace_back(a, b);
          if (v.d_observed >= d) reduced.emplace_back(a, b);
        }
    };

    std::vector<std::pair<int, int>> regular, reduced;
    verdicts(parts, regular, reduced);
    const int t = static_cast<int>(parts.size());
    std::vector<int> irregular_count(t, t - 1);
    for (auto [a, b] : regular) {
      --irregular_count[a];
      --irregular_count[b];
    }
    std::vector<VertexSet> kept;
    for (int a = 0; a < t; ++a) {
      if (irregular_count[a] > eps * t / 4.0)
        out.exceptional |= parts[a];
      else
        kept.push_back(parts[a]);
    }
    if (kept.empty()) {
      last_failure = "every part lies in too many irregular pairs";
      continue;
    }
    int smallest = n;
    for (auto& c : kept) smallest = std::min(smallest, c.size());
    for (auto& c : kept) {
      std::vector<int> members = c.to_vector();
      for (int q = 0; q < c.size() - smallest - 1 && q < static_cast<int>(members.size()); ++q) {
        c.erase(members[q]);
        out.exceptional.insert(members[q]);
      }
    }
    if (out.exceptional.size() > eps * n) {
      last_failure = "exceptional set " + std::to_string(out.exceptional.size()) + " exceeds eps n";
      continue;
    }
    out.clusters = std::move(kept);
    verdicts(out.clusters, out.regular_pairs, out.reduced_edges);
    const int r = static_cast<int>(out.clusters.size());
    std::vector<int> deg(r, 0);
    for (auto [a, b] : out.reduced_edges) {
      ++deg[a];
      ++deg[b];
    }
    out.reduced_min_degree = r ? *std::min_element(deg.begin(), deg.end()) : 0;
    double bound = (alpha - d - eps) * r;
    if (out.reduced_min_degree + 1e-9 >= bound) {
      out.certified = true;
      return out;
    }
    std::ostringstream msg;
    msg << "reduced min degree " << out.reduced_min_degree << " below (alpha - d - eps) r = " << bound;
    last_failure = msg.str();
  }
  throw std::runtime_error("min_degree_regular_partition: " + last_failure);
}

void write_partition(std::ostream& os, const RegularPartitionResult& r) {
  os << "partition " << r.clusters.size() << " 1\n";
  for (std::size_t i = 0; i < r.clusters.size(); ++i) {
    os << "cluster " << i + 1 << " 1 " << r.clusters[i].size();
    r.clusters[i].for_each([&](int v) { os << ' ' << v; });
    os << '\n';
  }
  os << "exceptional " << r.exceptional.size();
  r.exceptional.for_each([&](int v) { os << ' ' << v; });
  os << '\n';
}

}  // namespace bwt
