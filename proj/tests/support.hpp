#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bwt/harness.hpp"

namespace bwt::fixtures {

// ---- tail-bound Monte Carlo ----

struct TailTrial {
  double eps = 0.0;
  double expectation = 0.0;
  double t = 0.0;      // deviation threshold
  double bound = 0.0;  // tail_bound at the same parameters
  double freq = 0.0;   // observed P(|X - EX| > t)
};

// X ~ Bin(trials, mean / trials), threshold eps * mean.
TailTrial chernoff_trial(double eps, double mean, int trials, int reps, std::uint64_t seed);

// X = red balls among s draws without replacement from N balls, m red.
TailTrial hypergeometric_trial(double eps, int N, int m, int s, double t, int reps, std::uint64_t seed);

// ---- pipeline fixtures ----

// Host, adversary, guest and Lemma G of the pipeline for cfg.
struct GInstance {
  ExperimentConfig cfg;
  Graph host, g;
  GuestInstance guest;
  double beta = 0.0;
  LemmaGResult lg;
};

GInstance g_instance(const ExperimentConfig& cfg);

// A Lemma G instance whose exceptional set is enlarged to v0_size by moving
// seeded random vertices of largest clusters into it, followed by Lemma H on the new
// targets, the reserve set and pre-embedding.
struct PreInstance {
  GInstance base;
  VertexSet V0;
  std::vector<VertexSet> clusters;
  GuestAssignment assignment;
  VertexSet S;
  PreEmbedResult pre;
};

PreInstance pre_instance(const ExperimentConfig& cfg, int v0_size, std::uint64_t seed);

// Reduced graph on [r] x [k]: backbone edges, z_i = (i+1, 0) (row r uses
// row r-1) with the vertical edge added, plus extra random edges.
ReducedGraph synthetic_reduced(int r, int k, double extra, std::uint64_t seed);

// Equal split of n over r k cells, remainders to the first cells.
std::vector<int> equal_targets(int n, int cells);

// Targets within max_shift of the current sizes with the same total.
std::vector<int> perturbed_targets(const std::vector<VertexSet>& clusters, int max_shift, std::uint64_t seed);

}  // namespace bwt::fixtures
