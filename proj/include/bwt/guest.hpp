#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bwt/graph.hpp"
#include "bwt/reduced_graph.hpp"
#include "bwt/restriction.hpp"

namespace bwt {

using Colouring = std::vector<int>;  // colour per vertex in {0,...,k}

bool is_proper(const Graph& h, const Colouring& col);

// floor(4 k beta n); throws std::invalid_argument when it is below 1.
int block_length(int n, int k, double beta);

// Blocks (0-based) that contain a zero-coloured vertex.
std::vector<bool> zero_blocks(const Colouring& col, const Labelling& l, int block_len);

// Every window of z consecutive blocks has at most one block with colour zero.
bool check_zero_free(const Colouring& col, const Labelling& l, double z, double beta, int k);

// Colours before block t are kept, colours after it become pi(col) with 0
// fixed. pi has k+1 entries, pi[0] == 0. Inside the block the change is made
// one transposition at a time, using colour 0 on a band of width bw.
// Throws std::invalid_argument if block t contains colour zero or is too
// short for the bandwidth of l.
Colouring switch_colours(const Graph& h, const Colouring& col, const Labelling& l, int block_len, int block_t,
                         const std::vector<int>& pi);

struct BlockStructure {
  int n = 0, k = 0;
  double beta = 0.0;
  int block_len = 0;
  int num_blocks = 0;
  int b = 0;                    // blocks per interval
  std::vector<int> t;           // section ends in blocks: t[0] = 0, t[r] = num_blocks
  std::vector<std::vector<std::pair<int, int>>> intervals;  // per section, [first, last) blocks
  std::vector<std::vector<int>> switch_block;               // per interval, block used or -1

  int sections() const { return static_cast<int>(t.size()) - 1; }
  int block_of(int pos) const { return pos / block_len; }
  int section_of_block(int q) const;
};

struct LemmaHParams {
  int k = 2;
  double xi = 0.01;
  double beta = 0.0;
  double z = 0.0;  // zero-freeness window; 0 selects 10 / xi
  std::uint64_t seed = 0;
  int retries = 200;
  bool strict = true;  // false returns the best attempt with its flags instead of failing
};

struct GuestAssignment {
  std::vector<int> f;  // guest vertex -> cell id
  VertexSet special;
  BlockStructure blocks;
  Colouring colouring;  // sigma'
  std::vector<std::vector<std::vector<int>>> perms;  // per section, per interval
  std::vector<int> m_targets;
  std::vector<int> part_sizes;  // |f^-1(c)|
  int D = 0;
  int attempts = 0;
  int h1_deviation = 0;
  bool h1 = false, h2 = false, h3 = false, h4 = false, h5 = false, h6 = false;
  std::string violation;  // first failed property id, empty when all hold

  bool all_hold() const { return h1 && h2 && h3 && h4 && h5 && h6; }
};

// Builds f and the special set X, then certifies H1-H6 by direct scans.
// Throws std::invalid_argument on violated preconditions and StageFailure
// when strict and the retry budget runs out.
GuestAssignment lemma_for_h(const Graph& h, const Labelling& l, const Colouring& col, const ReducedGraph& reduced,
                            const std::vector<int>& m_targets, const LemmaHParams& params);

// Recomputes H1-H6 for an assignment (xi and beta as used to build it).
void certify_h(const Graph& h, const Labelling& l, const Colouring& original, const ReducedGraph& reduced,
               double xi, double beta, GuestAssignment& a);

struct OrderReport {
  std::vector<int> ord1, ord2, ord3;
  bool ok() const { return ord1.empty() && ord2.empty() && ord3.empty(); }
};

OrderReport check_bounded_order(const Graph& h, const Labelling& order, const RestrictionPair& restr,
                                const VertexSet& buffers, int D_tilde, double p, double m,
                                const VertexSet& exceptional);

struct GuestBundle {
  Graph graph;
  Labelling labelling;
  Colouring colouring;
};

void write_guest_bundle(std::ostream& os, const GuestBundle& b);
GuestBundle read_guest_bundle(std::istream& is);

// "assign <v> <i> <j>" (1-based cells) and "special <v...>".
void write_assignment(std::ostream& os, const GuestAssignment& a, const BackboneIndex& index);

}  // namespace bwt
