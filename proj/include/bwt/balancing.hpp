#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bwt/graph.hpp"
#include "bwt/reduced_graph.hpp"
#include "bwt/regularity.hpp"

namespace bwt {

struct Move {
  int from = 0, to = 0;  // cell ids
  std::vector<int> moved;
  std::string stage;     // "global" or "local"
};

struct MoveLog {
  std::vector<Move> moves;

  int touches(int cell) const;  // moves with the cell as source or destination
  int moved_total() const;
};

struct BalanceParams {
  double eps = 0.2;
  double d = 0.1;
  double p = 1.0;
  double xi = 0.01;
  CheckMode mode = CheckMode::sampled(100);
  bool check_pairs = true;  // sampled lower-regularity (at eps) when choosing i'
  double gamma = 0.2;       // only for the flag-saturation warning
  std::uint64_t seed = 0;
};

struct BalanceOutcome {
  std::vector<VertexSet> clusters;
  MoveLog log;
  std::vector<std::string> warnings;
};

// SM1-eligible vertices of x (degree >= (d - eps) p |z| into every z), then a
// seeded uniform m-subset. Throws StageFailure when fewer than m are eligible.
VertexSet small_move_select(const Graph& g, const Graph& host, const VertexSet& x,
                            const std::vector<VertexSet>& z_list, int m, double eps, double d, double p,
                            std::uint64_t seed);

// Algorithm 1: equalise column sums by moving from row 1 into the first
// unflagged row i' whose clusters are all R-neighbours of the donor.
BalanceOutcome global_balance(const std::vector<VertexSet>& clusters, const std::vector<int>& targets,
                              const ReducedGraph& reduced, const Graph& g, const Graph& host,
                              const BalanceParams& params);

// Algorithm 2: fix rows 1..r-1 against the next row; row r follows.
BalanceOutcome local_balance(const std::vector<VertexSet>& clusters, const std::vector<int>& targets,
                             const ReducedGraph& reduced, const Graph& g, const Graph& host,
                             const BalanceParams& params);

// Both stages, logs concatenated.
BalanceOutcome balance(const std::vector<VertexSet>& clusters, const std::vector<int>& targets,
                       const ReducedGraph& reduced, const Graph& g, const Graph& host, const BalanceParams& params);

struct ProbeReport {
  int probes = 0;
  int violations = 0;
  double worst_excess = 0.0;  // max of |N & S| - (cap |N & X| + slack)
};

// Host common neighbourhoods of random tuples of 1..max_tuple vertices:
// |N & S| <= cap |N & X| + slack.
ProbeReport probe_common_neighbourhoods(const Graph& host, const VertexSet& x, const VertexSet& s, double cap,
                                        double slack, int probes, int max_tuple, std::uint64_t seed);

struct BalanceCerts {
  bool exact = false;         // B'1
  bool conserved = false;     // same multiset of vertices
  bool symdiff = false;       // B'2 against the cap
  bool super_regular = false; // B'3 on K-edges (sampled)
  ProbeReport probe;          // B'5
  int max_symdiff = 0;
};

BalanceCerts certify_balance(const std::vector<VertexSet>& before, const std::vector<VertexSet>& after,
                             const std::vector<int>& targets, const ReducedGraph& reduced, const Graph& g,
                             const Graph& host, const BalanceParams& params, int max_tuple = 2, int probes = 100);

// "move <stage> <i j> <i' j'> <count> <v...>", cells 1-based.
void write_move_log(std::ostream& os, const MoveLog& log, const BackboneIndex& index);

}  // namespace bwt
