#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <tuple>
#include <vector>

#include "bwt/graph.hpp"
#include "bwt/reduced_graph.hpp"
#include "bwt/regularity.hpp"
#include "bwt/restriction.hpp"

namespace bwt {

struct ReserveParams {
  double mu = 0.05;
  double eps = 0.2;
  double p = 1.0;
  int max_tuple = 2;    // common neighbourhoods of up to this many vertices
  int probes = 100;
  double slack = 3.0;   // multiplier on the (intS) error terms, floored at one standard deviation
  int retries = 20;
  std::uint64_t seed = 0;
};

struct ReserveResult {
  VertexSet S;
  int attempts = 0;
  int probe_failures = 0;  // in the accepted attempt
};

// Uniform floor(mu n)-subset of V(g), certified on probe common
// neighbourhoods and on every cluster (|S & V_c| <= 2 mu |V_c| times slack).
ReserveResult reserve_set(const Graph& g, const Graph& host, const std::vector<VertexSet>& clusters,
                          const ReserveParams& params);

struct PreEmbedParams {
  double eps = 0.2;         // inner level: sampled regularity
  double window_eps = 0.5;  // outer level: Gamma-size windows
  double d = 0.1;
  double p = 1.0;
  double mu = 0.05;
  double zeta = 0.1;
  int anchor_sep = -1;      // -1 selects 2r + 20
  bool c4_free = false;     // degenerate mode: anchors outside four-cycles too
  CheckMode mode = CheckMode::sampled(100);
  std::uint64_t seed = 0;
};

struct PreEmbedState {
  std::vector<int> phi;  // guest -> host, -1 when unmapped
  VertexSet S;
  int t = 0;
  std::vector<std::pair<int, int>> anchors;      // (x_t, v_t)
  std::vector<int> rows;                         // i_t per step
  std::vector<std::tuple<int, int, int>> leaves;  // (t, y, w)
  std::vector<int> available;                    // never-stuck guard value per step

  VertexSet domain(int guest_n) const;
  VertexSet image(int host_n) const;
};

struct PreEmbedResult {
  PreEmbedState state;
  std::vector<int> fstar;  // guest -> cell id, -1 on dom(phi)
  std::vector<std::pair<int, int>> reroutes;  // (z, cell) where fstar differs from f
  RestrictionPair restr;
  std::vector<VertexSet> clusters;  // V'_c = V_c minus im(phi)
};

// Algorithm 3. Throws StageFailure("pre_embedding", ...) naming the step and
// the failed condition.
PreEmbedResult pre_embed(const Graph& g, const Graph& host, const VertexSet& V0, const std::vector<VertexSet>& clusters,
                         const ReducedGraph& reduced, const Graph& guest, const Labelling& l,
                         const std::vector<int>& f, const VertexSet& S, const PreEmbedParams& params);

// I_x = V_{f*(x)} & N_G(J_x) for restricted x; R rebuilt per cluster.
void assemble_images(RestrictionPair& restr, const std::vector<int>& fstar, const std::vector<VertexSet>& clusters,
                     const Graph& g);

struct RestrictionParams {
  double rho = 0.1;
  double zeta = 0.1;
  int Delta = 2;
  int DeltaJ = 2;
  double eps = 0.5;        // RP5 window
  double inner_eps = 0.2;  // RP6 regularity
  double d = 0.1;
  double p = 1.0;
  CheckMode mode = CheckMode::sampled(100);
};

struct RestrictionReport {
  std::array<bool, 6> rp{true, true, true, true, true, true};
  std::array<std::vector<int>, 6> violators;
  bool ok() const {
    for (bool b : rp)
      if (!b) return false;
    return true;
  }
};

// removed: dom(phi); degrees are taken in guest - removed.
RestrictionReport validate_restriction_pair(const RestrictionPair& restr, const Graph& guest, const VertexSet& removed,
                                            const std::vector<int>& fstar, const std::vector<VertexSet>& clusters,
                                            const Graph& g, const Graph& host, const RestrictionParams& params);

// Count of guest edges outside dom(phi) whose f* images are not reduced edges.
int homomorphism_violations(const Graph& guest, const std::vector<int>& fstar, const ReducedGraph& reduced);

// "anchor <t> <x> <v>", "leaf <t> <y> <w>", "reroute <z> <i j>".
void write_transcript(std::ostream& os, const PreEmbedResult& res, const BackboneIndex& index);

}  // namespace bwt
