#ifndef TRADENET_CENTRALITY_HPP
#define TRADENET_CENTRALITY_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "tradenet/netgraph.hpp"

namespace tradenet {

// Every simple S-D path of a graph, as node sequences S..D. Enumeration is
// exponential in general; `cap` bounds the count before aborting.
struct PathInventory {
  std::vector<std::vector<NodeId>> paths;
  std::size_t cap = 0;
};

// Exhaustive DFS over simple S-D paths. Throws PathExplosion(cap) when the
// graph is too large for enumeration-based measures.
PathInventory enumerate_paths(const Graph& g, std::size_t cap = 1000000);

// Fraction of all simple S-D paths containing v. 1 iff v is critical.
// Throws NotIntermediary when v is S or D.
double sd_criticality(const Graph& g, NodeId v, const PathInventory& inventory);

// Length-weighted criticality: paths weighted by l(p)^-alpha, where l(p) is
// the hop count. alpha = 0 reduces to sd_criticality exactly; alpha -> inf
// converges to sd_betweenness. Weights are computed relative to the shortest
// enumerated path so large alpha stays finite.
double sd_alpha(const Graph& g, NodeId v, double alpha,
                const PathInventory& inventory);

// Fraction of shortest S-D paths through v, via BFS path counting
// (sigma_Sv * sigma_vD / sigma_SD when v sits on a shortest path, else 0).
// Polynomial; never enumerates. Throws NotIntermediary or Disconnected.
double sd_betweenness(const Graph& g, NodeId v);

// Per-node measures table: columns node, sd0, sd_alpha(alpha=<a>), sd_inf.
std::string centrality_csv(const Graph& g, double alpha,
                           const PathInventory& inventory);

}  // namespace tradenet

#endif  // TRADENET_CENTRALITY_HPP
