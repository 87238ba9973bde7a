#pragma once

#include <map>
#include <vector>

#include "bwt/graph.hpp"

namespace bwt {

// Image restrictions for guest vertices: I_x are allowed host images,
// J_x the host vertices that caused the restriction.
struct RestrictionPair {
  std::map<int, VertexSet> I;
  std::map<int, std::vector<int>> J;
  std::vector<std::vector<int>> R;  // restricted guest vertices per cluster

  bool empty() const { return I.empty() && J.empty(); }
  bool restricted(int x) const { return I.count(x) != 0; }
  int j_size(int x) const {
    auto it = J.find(x);
    return it == J.end() ? 0 : static_cast<int>(it->second.size());
  }
};

}  // namespace bwt
