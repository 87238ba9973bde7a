#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bwt/graph.hpp"

namespace bwt {

enum class PairKind { lower_regular, regular, irregular };

struct SubpairWitness {
  std::vector<int> x, y;
  double density = 0.0;  // p-density of the subpair
};

struct PairVerdict {
  PairKind kind = PairKind::irregular;
  double d_observed = 0.0;  // p-density of the whole pair
  std::optional<SubpairWitness> witness;
  bool exact = false;
  double min_density = 0.0;  // smallest subpair p-density found
  double max_density = 0.0;  // largest, only when the upper side was examined

  bool lower_ok() const { return kind != PairKind::irregular; }
};

struct CheckMode {
  bool exact = false;
  int samples = 2000;
  std::uint64_t seed = 0;
  bool fallback = true;  // sampled mode enumerates exhaustively when both sides <= 14

  static CheckMode exhaustive() { return CheckMode{true, 0, 0, true}; }
  static CheckMode sampled(int k, std::uint64_t seed = 0) { return CheckMode{false, k, seed, true}; }
};

inline constexpr int kExactSideLimit = 20;
inline constexpr int kFallbackSideLimit = 14;

// Smallest admissible subpair side: ceil(eps * |side|), at least 1.
int subpair_threshold(double eps, int side);

// Def. 2.1 lower-regularity: every subpair with |X'| >= eps|X|, |Y'| >= eps|Y|
// has p-density >= d - eps. Kind is lower_regular or irregular.
PairVerdict check_lower_regular(const Graph& g, const VertexSet& x, const VertexSet& y, double eps,
                                double d, double p, const CheckMode& mode);

// Two-sided variant: regular iff some d' >= d has every admissible subpair
// density within d' +- eps; falls back to lower_regular / irregular.
PairVerdict check_regular(const Graph& g, const VertexSet& x, const VertexSet& y, double eps, double d,
                          double p, const CheckMode& mode);

bool check_super_regular(const Graph& g, const Graph& host, const VertexSet& x, const VertexSet& y,
                         double eps, double d, double p, const CheckMode& mode = CheckMode::sampled(2000));

// Vertices of x below the degree floor (d - eps) p |y| into y.
int count_low_degree(const Graph& g, const VertexSet& x, const VertexSet& y, double eps, double d, double p);

// Number of candidates z whose host neighbourhood breaks lower-regularity
// (one-sided: (N(z) & x, y); two-sided: (N(z) & x, N(z) & y)).
// An empty intersected side counts as a failure.
int count_inheritance_failures(const Graph& g, const Graph& host, const VertexSet& x, const VertexSet& y,
                               const VertexSet& candidates, double eps_out, double d, double p,
                               bool two_sided, const CheckMode& mode = CheckMode::sampled(200));

// ---- energy increment ----

struct EnergyOptions {
  int max_rounds = 8;
  int min_part_size = 16;   // no split below this size
  int split = 2;            // pieces per part per round
  int witnesses_per_part = 2;
  double L = 0.0;           // 0 selects 100 s^2 / eps
  CheckMode mode = CheckMode::sampled(2000);
};

struct EnergyRound {
  int parts = 0;
  int irregular_pairs = 0;
  double energy_before = 0.0;
  double energy_after = 0.0;
  bool triggered = false;  // refinement caused by too many irregular pairs
};

struct EnergyState {
  std::vector<std::vector<VertexSet>> partition;  // parts per initial part
  double energy = 0.0;
  double L = 0.0;
};

struct EnergyResult {
  EnergyState state;
  std::vector<VertexSet> residues;  // V_{i,0}
  std::vector<EnergyRound> rounds;
  int irregular_pairs = 0;
  bool regular = false;  // final partition is (eps/2, p)-regular under the checker
  std::string stop_reason;
  std::vector<std::string> warnings;
};

double pair_energy(double density, double L);  // convex: d^2 up to L, linear beyond
double partition_energy(const Graph& g, const std::vector<std::vector<VertexSet>>& parts,
                        const std::vector<int>& initial_sizes, double p, double L);
double energy_cap(double L, int s);  // L^2 + 16 L s^2

EnergyResult energy_partition(const Graph& g, const std::vector<VertexSet>& initial, double eps, double p,
                              const EnergyOptions& opt = {});

// ---- minimum-degree regular partition ----

struct RegularPartitionOptions {
  std::uint64_t seed = 0;
  int retries = 3;
  EnergyOptions energy{0, 16, 2, 2, 0.0, CheckMode::sampled(200)};
  CheckMode mode = CheckMode::sampled(200);
};

struct RegularPartitionResult {
  std::vector<VertexSet> clusters;
  VertexSet exceptional;
  double epsilon = 0, d = 0, p = 0;
  double alpha = 0;                               // delta(G) / (p n)
  std::vector<std::pair<int, int>> regular_pairs;  // lower-regular cluster pairs, i < j
  std::vector<std::pair<int, int>> reduced_edges;  // regular and d_p >= d
  int reduced_min_degree = 0;
  bool certified = false;
  int energy_rounds = 0;
};

// Throws std::runtime_error when the reduced min-degree bound
// (alpha - d - eps) r cannot be certified within the retry budget.
RegularPartitionResult min_degree_regular_partition(const Graph& g, double eps, double d, double p, int r0,
                                                    const RegularPartitionOptions& opt = {});

// "partition <r> 1", "cluster <i> 1 <size> <v...>", "exceptional <size> <v...>".
void write_partition(std::ostream& os, const RegularPartitionResult& r);

}  // namespace bwt
