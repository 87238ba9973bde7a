#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bwt/graph.hpp"
#include "bwt/restriction.hpp"

namespace bwt {

struct BufferPlan {
  std::vector<std::vector<int>> buffers;  // guest vertices per cell

  VertexSet all(int guest_n) const;
};

// Greedy per cell in label order: unrestricted, non-special vertices at
// pairwise distance >= 3 whose neighbours map into the same row (K-edges),
// up to vartheta |W_c| each.
BufferPlan choose_buffers(const Graph& guest, const std::vector<int>& fstar, const Labelling& order,
                          const RestrictionPair& restr, const VertexSet& special, int k, double vartheta);

struct EmbedParams {
  int max_undo = 3;
  int restarts = 10;
  int candidate_cap = 64;  // candidates scored per placement
  std::uint64_t seed = 0;
};

struct EmbedResult {
  bool success = false;
  std::vector<int> phi;  // guest -> host
  int restarts_used = 0;
  int undos = 0;
  int swaps = 0;  // placements rescued by moving earlier images
  int stuck_vertex = -1;
  std::string failure;
  std::vector<std::string> trace;  // candidate-depletion notes per failed attempt
};

// clusters: V''_c per cell; fstar: cell per guest vertex (-1 on pre-embedded);
// initial: pre-embedded part of phi (-1 elsewhere), kept fixed.
EmbedResult embed(const Graph& g, const std::vector<VertexSet>& clusters, const Graph& guest,
                  const std::vector<int>& fstar, const RestrictionPair& restr, const BufferPlan& buffers,
                  const Labelling& order, const std::vector<int>& initial, const EmbedParams& params);

// Injective, total, edge-preserving and inside I_x wherever I_x is set.
bool verify_embedding(const Graph& g, const Graph& guest, const std::vector<int>& phi, const RestrictionPair& restr,
                      std::string* report = nullptr);

// "embed <guest-v> <host-v>" lines.
void write_embedding(std::ostream& os, const std::vector<int>& phi);

}  // namespace bwt
