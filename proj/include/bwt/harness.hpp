#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "bwt/balancing.hpp"
#include "bwt/embedder.hpp"
#include "bwt/graph.hpp"
#include "bwt/guest.hpp"
#include "bwt/pre_embedding.hpp"
#include "bwt/reduced_graph.hpp"

namespace bwt {

// ---- guest families ----

struct GuestInstance {
  std::string family;  // as requested, e.g. "power_cycle:2"
  Graph graph;
  Labelling labelling;
  Colouring colouring;
  int colours_needed = 0;         // largest colour used
  int bandwidth = 0;              // of the returned labelling
  std::vector<int> zero_vertices;
  int triangle_free_prefix = 0;   // leading positions whose vertex lies in no triangle
  int degeneracy = 0;
};

// family[:param] with family in hamilton_cycle, power_cycle:c, power_path:c,
// bounded_tree:Delta, f_factor:F (F one of K2..K5, C3..C5, P2..P5).
// Zero-coloured vertices are packed into one block of length block_len,
// outside the first sqrt(beta) n positions. Throws std::invalid_argument
// on bad parameters or when the family needs more than k colours.
GuestInstance make_guest(const std::string& spec, int n, int k, double beta, std::uint64_t seed);

int triangle_free_prefix(const Graph& h, const Labelling& l);

// ---- adversaries ----

enum class Adversary { none, random, triangle_killer, bipartite_push };

Adversary parse_adversary(const std::string& name);  // throws std::invalid_argument
std::string adversary_name(Adversary a);

struct AdversaryParams {
  Adversary strategy = Adversary::random;
  double gamma = 0.2;
  int k = 2;
  double p = 1.0;
  double budget = 1.0;  // at most budget * deg(v) deletions at v
  int target = 0;       // triangle_killer
  std::uint64_t seed = 0;
};

// ceil(((k-1)/k + gamma) p n)
int degree_floor(int n, int k, double gamma, double p);

// Deletes edges while keeping delta >= degree_floor. Throws
// std::invalid_argument when delta(g) is already below the floor.
Graph adversary_delete(const Graph& g, const AdversaryParams& params);

int triangles_at(const Graph& g, int v);

// ---- pipeline ----

struct ExperimentConfig {
  int n = 1000;
  double p = 0.4;
  int k = 2;
  double gamma = 0.2;
  int Delta = 2;
  int D = 2;
  double eps = 0.2;
  double d = 0.1;
  double xi = 0.01;
  double beta = 0.0;  // 0 selects the smallest beta with 4 k beta n >= 32 that fits the guest bandwidth
  double mu = 0.05;
  double rho = 0.1;
  double zeta = 0.1;
  double vartheta = 0.2;
  double z = 0.0;     // 0 selects 10 / xi
  double nu = 0.0;    // bijumbled mode: 0 measures it
  double budget = 1.0;
  int embed_restarts = 10;
  int runs = 1;       // consecutive seeds from seed
  std::uint64_t seed = 1;
  std::string guest = "hamilton_cycle";
  std::string adversary = "random";
  std::string mode = "random";  // random | bijumbled | degenerate
  std::string graph_file;       // bijumbled host, instead of paley
  int paley_q = 0;              // bijumbled host paley(q); 0 uses n

  // Throws std::invalid_argument naming the offending key.
  void validate() const;
};

// Applies "key = value" pairs ('#' comments). Throws std::invalid_argument.
void apply_config_text(ExperimentConfig& cfg, std::istream& is);
void apply_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

struct RunRecord {
  ExperimentConfig config;
  bool success = false;
  std::string failure_stage;
  std::string failure_message;
  int r = 0;
  int v0_size = 0;
  int moved = 0;
  int embed_retries = 0;
  double runtime_ms = 0.0;
  std::map<std::string, double> stage_ms;
  std::vector<std::string> warnings;
  double nu_measured = 0.0;    // bijumbled mode
  bool nu_feasible = true;
};

// Intermediate results of a run, for inspection in tests.
struct PipelineArtifacts {
  Graph host, g;
  GuestInstance guest;
  LemmaGResult lemma_g;
  GuestAssignment assignment;
  PreEmbedResult pre;
  BalanceOutcome balanced;
  BufferPlan buffers;
  EmbedResult embedding;
};

// Host, adversary, Lemma G, Lemma H, reserve, pre-embedding, balancing,
// embedding, verification. Stage failures are recorded, not thrown.
RunRecord run_pipeline(const ExperimentConfig& cfg, PipelineArtifacts* artifacts = nullptr);

// m_c = |V_c| plus an even share of |V0|, remainders to the smallest clusters.
std::vector<int> cluster_targets(const std::vector<VertexSet>& clusters, int v0_size);

double resolved_beta(const ExperimentConfig& cfg, int guest_bandwidth);

std::string csv_header();
std::string csv_row(const RunRecord& rec, bool with_runtime = true);

}  // namespace bwt
