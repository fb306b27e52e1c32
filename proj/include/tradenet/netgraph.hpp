#ifndef TRADENET_NETGRAPH_HPP
#define TRADENET_NETGRAPH_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "tradenet/errors.hpp"
#include "tradenet/rng.hpp"

namespace tradenet {

using NodeId = int;

// Undirected simple graph with a designated source S and destination D.
// Nodes are 0-based; every node other than S and D is an intermediary.
// Immutable once built (the mutating calls are construction helpers), so a
// Graph can be shared freely across threads.
class Graph {
 public:
  explicit Graph(int node_count, NodeId source = 0, NodeId destination = -1);

  int node_count() const { return static_cast<int>(adj_.size()); }
  int edge_count() const { return edge_count_; }
  NodeId source() const { return source_; }
  NodeId destination() const { return destination_; }
  bool is_terminal(NodeId v) const { return v == source_ || v == destination_; }

  // Adds an undirected edge; self-loops and duplicates are rejected.
  void add_edge(NodeId u, NodeId v);
  bool has_edge(NodeId u, NodeId v) const;
  void set_endpoints(NodeId source, NodeId destination);

  const std::vector<NodeId>& neighbors(NodeId v) const { return adj_[v]; }
  int degree(NodeId v) const { return static_cast<int>(adj_[v].size()); }

  // Edges as (u, v) with u < v, sorted; canonical order for hashing and files.
  std::vector<std::pair<NodeId, NodeId>> edges() const;

  // Hop distances from `from` to every node; -1 where unreachable.
  std::vector<int> bfs_distances(NodeId from) const;
  bool is_connected() const;
  bool st_connected() const;

  // FNV-1a over (n, S, D, canonical edge list); identifies an instance in logs.
  std::uint64_t structural_hash() const;

 private:
  void check_node(NodeId v) const;

  std::vector<std::vector<NodeId>> adj_;
  int edge_count_ = 0;
  NodeId source_ = 0;
  NodeId destination_ = 0;
};

// Parameters of the Watts-Strogatz ensemble: ring lattice of mean degree k
// rewired with probability p. k may be odd when n is even (see generate_ws).
struct NetworkSpec {
  int n = 0;
  int k = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
};

// Builds a connected Watts-Strogatz graph with exactly n*k/2 edges.
//
// Even k: classic ring lattice with k/2 neighbors per side. Odd k (requires
// even n): ring with (k-1)/2 neighbors per side plus the diametric chord
// i <-> i+n/2, which makes the lattice exactly k-regular. Every lattice edge
// is then independently rewired with probability p by moving its far endpoint
// to a uniformly random non-self, non-duplicate target. Disconnected results
// are regenerated with an incremented seed, up to 100 attempts.
//
// Throws DegenerateSpec (k < 2, k >= n, p outside [0,1], odd k with odd n)
// or GenerationFailed (no connected graph within the retry budget).
// S/D default to 0 and n-1; callers place them (see expt::choose_sd_pair).
Graph generate_ws(const NetworkSpec& spec);

// Canonical instance with exactly M internally node-disjoint S-D paths, each
// of `hops` edges (hops-1 intermediaries), sharing only S and D.
Graph make_parallel_paths(int num_paths, int hops);

// Mean shortest-path hop distance over all unordered node pairs.
// Throws Disconnected.
double average_path_length(const Graph& g);

// Average local clustering; nodes of degree < 2 contribute 0.
double clustering_coefficient(const Graph& g);

// Maximum shortest-path hop distance over all pairs. Throws Disconnected.
int diameter(const Graph& g);

// Maximum number of internally node-disjoint S-D paths (Menger's M), via
// max-flow on the vertex-split transform: each intermediary v becomes
// v_in -> v_out with unit capacity, S and D stay whole, each undirected edge
// becomes two unit-capacity arcs. Returns 0 when S and D are disconnected.
int node_disjoint_paths(const Graph& g);

// Plain-text graph file: "n <count> s <S> d <D>" then one "u v" line per
// edge (u < v, sorted). store(load(f)) reproduces f byte for byte.
void store_graph(const Graph& g, const std::string& path);
Graph load_graph(const std::string& path);
std::string graph_to_string(const Graph& g);
Graph graph_from_string(const std::string& text);

}  // namespace tradenet

#endif  // TRADENET_NETGRAPH_HPP
