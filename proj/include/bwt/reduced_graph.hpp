#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bwt/graph.hpp"
#include "bwt/regularity.hpp"

namespace bwt {

// Vertex set [r] x [k], stored 0-based with id = i * k + j.
struct BackboneIndex {
  int r = 0, k = 0;

  int size() const { return r * k; }
  int id(int i, int j) const { return i * k + j; }
  int row(int c) const { return c / k; }
  int col(int c) const { return c % k; }
  // B^k_r: distinct columns in the same or adjacent rows.
  bool backbone_edge(int a, int b) const;
  // K^k_r: distinct columns in the same row.
  bool clique_edge(int a, int b) const;
  std::vector<Edge> backbone_edges() const;
  std::vector<Edge> clique_edges() const;
};

long long backbone_edge_count(int r, int k);  // r k(k-1)/2 + (r-1) k(k-1)

struct ReducedGraph {
  BackboneIndex index;
  Graph edges;                 // on index.size() vertices
  std::vector<int> extension;  // z_i as a cell id, one per row

  bool has_edge(int a, int b) const { return edges.adjacent(a, b); }
  // Backbone edges present, extension valid and each z_i outside row i.
  bool consistent() const;
};

struct BackboneSearch {
  bool found = false;
  std::vector<int> embedding;  // cell id -> reduced vertex
  std::vector<int> extension;  // row -> cell id of z_i
  long long steps = 0;
  int depth = 0;               // deepest number of cells placed
  bool precondition = false;   // min degree >= ((k-1)/k + gamma/2) k r
  std::string message;
};

BackboneSearch find_backbone(const Graph& reduced, int r, int k, double gamma, long long budget = 1000000,
                             std::uint64_t seed = 0);

struct LemmaGParams {
  double p = 1.0;
  double gamma = 0.2;
  int k = 2;
  double eps = 0.2;
  double d = 0.1;
  int r0 = 4;              // initial parts of the regular partition
  std::uint64_t seed = 0;
  double eps_star = 0.0;   // 0 selects eps / 10
  double degree_tol = 0.0; // Gamma-degree window for Z1 and G4; 0 selects max(eps, 4 sd / mean)
  double z2_c = 0.1;
  bool two_sided = true;   // false gives the G3' variant
  int samples = 100;       // sampled regularity budget
  int g3_probes = 64;      // vertices probed for G3 when the check is not vacuous
  long long backbone_budget = 1000000;
  int retries = 2;
  RegularPartitionOptions partition;
};

struct LemmaGCerts {
  bool g1 = false, g2 = false, g3 = false, g4 = false;
  int g3_probed = 0;
  int sample_budget = 0;
};

struct LemmaGResult {
  int n = 0;
  BackboneIndex index;
  VertexSet V0;
  std::vector<VertexSet> clusters;  // by cell id
  ReducedGraph reduced;
  LemmaGCerts certs;
  std::vector<int> source_cluster;  // cell id -> regular-partition cluster
  int z1 = 0, z2 = 0, w = 0, g4_fix = 0;
  double g4_tol = 0.0;  // relative Gamma-degree window actually used

  const VertexSet& cluster(int i, int j) const { return clusters[index.id(i, j)]; }
};

// Throws std::invalid_argument if delta(g) < ((k-1)/k + gamma) p n and
// StageFailure when a stage cannot be certified.
LemmaGResult lemma_for_g(const Graph& g, const Graph& host, const LemmaGParams& params);

bool validate_k_equitable(const std::vector<std::vector<int>>& row_sizes);
bool validate_k_equitable(const std::vector<VertexSet>& clusters, const BackboneIndex& index);

// Partition dump with reduced-edge, backbone and extension lines.
void write_lemma_g(std::ostream& os, const LemmaGResult& res);

}  // namespace bwt
