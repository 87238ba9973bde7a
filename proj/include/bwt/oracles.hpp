#pragma once

#include <cstdint>
#include <vector>

#include "bwt/graph.hpp"

namespace bwt {

// Minimum bandwidth over all labellings. Exhaustive for n <= 16; paths,
// cycles and disjoint unions of paths are answered directly at any size.
int exact_bandwidth(const Graph& g);
// Same search, also returning an optimal labelling (n <= 16 only).
std::pair<int, Labelling> exact_bandwidth_labelling(const Graph& g);

// True iff guest embeds injectively and edge-preservingly into host.
// Requires guest.n() <= 10.
bool exhaustive_subgraph_check(const Graph& host, const Graph& guest);

struct BijumbledMode {
  bool exhaustive = true;
  int samples = 5000;
  std::uint64_t seed = 0;
  bool fallback = true;  // sampled mode runs the exhaustive search when n <= 14
};

struct BijumbledResult {
  bool holds = false;
  double worst_ratio = 0.0;  // max |e(X,Y) - p|X||Y|| / sqrt(|X||Y|) found
  std::vector<int> worst_x, worst_y;
  bool exact = false;
};

BijumbledResult bijumbled_check(const Graph& g, double p, double nu, const BijumbledMode& mode);

// False exactly in the regime where no (p, nu)-bijumbled n-vertex graph exists.
bool bijumbled_feasible(double p, double nu, int n);

enum class TailFamily { binomial_chernoff, hypergeometric, mcdiarmid };

struct TailBoundQuery {
  TailFamily family = TailFamily::binomial_chernoff;
  double eps = 0.0;
  double mean = 0.0;      // chernoff: E[X]
  double t = 0.0;         // hypergeometric: deviation t >= eps * E[X]
  std::vector<double> c;  // mcdiarmid: bounded differences
};

// chernoff:       P(|X - EX| > eps EX) < 2 exp(-eps^2 EX / 3), eps <= 3/2
// hypergeometric: P(|X - EX| > t)      < 2 exp(-eps^2 t / 3)
// mcdiarmid:      P(|X - EX| >= eps)   <= 2 exp(-2 eps^2 / sum c_i^2)
double tail_bound(const TailBoundQuery& q);

}  // namespace bwt
