#include "bwt/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace bwt {

void write_graph(std::ostream& os, const Graph& g) {
  os << "graph " << g.n() << ' ' << g.m() << '\n';
  for (auto [u, v] : g.edges()) os << u << ' ' << v << '\n';
}

Graph read_graph(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("graph file: missing header");
  std::istringstream head(line);
  std::string tag;
  long long n = -1, m = -1;
  if (!(head >> tag >> n >> m) || tag != "graph" || n < 0 || m < 0)
    throw std::invalid_argument("graph file: bad header '" + line + "'");
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    if (!std::getline(is, line)) throw std::invalid_argument("graph file: expected " + std::to_string(m) + " edges");
    std::istringstream ls(line);
    long long u, v;
    if (!(ls >> u >> v)) throw std::invalid_argument("graph file: bad edge line '" + line + "'");
    if (u >= v) throw std::invalid_argument("graph file: edge must satisfy u < v: '" + line + "'");
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  return Graph::from_edges(static_cast<int>(n), edges);
}

void save_graph(const std::string& path, const Graph& g) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_graph(os, g);
}

Graph load_graph(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_graph(is);
}

}  // namespace bwt
