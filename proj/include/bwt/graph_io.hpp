#pragma once

#include <iosfwd>
#include <string>

#include "bwt/graph.hpp"

namespace bwt {

// Text format: "graph <n> <m>" followed by m lines "<u> <v>", u < v, 0-indexed.
void write_graph(std::ostream& os, const Graph& g);
Graph read_graph(std::istream& is);  // throws std::invalid_argument on malformed input

void save_graph(const std::string& path, const Graph& g);
Graph load_graph(const std::string& path);

}  // namespace bwt
