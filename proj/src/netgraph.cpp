#include "tradenet/netgraph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <queue>
#include <sstream>

namespace tradenet {

Graph::Graph(int node_count, NodeId source, NodeId destination)
    : adj_(node_count) {
  if (node_count < 2) throw DegenerateSpec("graph needs at least 2 nodes");
  if (destination < 0) destination = node_count - 1;
  set_endpoints(source, destination);
}

void Graph::check_node(NodeId v) const {
  if (v < 0 || v >= node_count())
    throw Error("node id " + std::to_string(v) + " out of range");
}

void Graph::set_endpoints(NodeId source, NodeId destination) {
  check_node(source);
  check_node(destination);
  if (source == destination)
    throw Error("source and destination must be distinct");
  source_ = source;
  destination_ = destination;
}

void Graph::add_edge(NodeId u, NodeId v) {
  check_node(u);
  check_node(v);
  if (u == v) throw Error("self-loop rejected");
  if (has_edge(u, v)) throw Error("duplicate edge rejected");
  adj_[u].push_back(v);
  adj_[v].push_back(u);
  ++edge_count_;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  check_node(u);
  check_node(v);
  const auto& nb = adj_[u].size() <= adj_[v].size() ? adj_[u] : adj_[v];
  const NodeId other = adj_[u].size() <= adj_[v].size() ? v : u;
  return std::find(nb.begin(), nb.end(), other) != nb.end();
}

std::vector<std::pair<NodeId, NodeId>> Graph::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edge_count_);
  for (NodeId u = 0; u < node_count(); ++u)
    for (NodeId v : adj_[u])
      if (u < v) out.emplace_back(u, v);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<int> Graph::bfs_distances(NodeId from) const {
  check_node(from);
  std::vector<int> dist(node_count(), -1);
  std::deque<NodeId> queue{from};
  dist[from] = 0;
  while (!queue.empty()) {
    NodeId u = queue.front();
    queue.pop_front();
    for (NodeId v : adj_[u])
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
  }
  return dist;
}

bool Graph::is_connected() const {
  const auto dist = bfs_distances(0);
  return std::find(dist.begin(), dist.end(), -1) == dist.end();
}

bool Graph::st_connected() const {
  return bfs_distances(source_)[destination_] >= 0;
}

std::uint64_t Graph::structural_hash() const {
  const std::uint64_t prime = 0x100000001b3ULL;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xff;
      h *= prime;
    }
  };
  mix(static_cast<std::uint64_t>(node_count()));
  mix(static_cast<std::uint64_t>(source_));
  mix(static_cast<std::uint64_t>(destination_));
  for (const auto& [u, v] : edges()) {
    mix(static_cast<std::uint64_t>(u));
    mix(static_cast<std::uint64_t>(v));
  }
  return h;
}

namespace {

// One rewiring pass over the lattice edges, original Watts-Strogatz style:
// each edge (u, far) owned by u is moved to (u, w) with probability p, where
// w is uniform over valid targets. Edges stay put if u is already adjacent
// to every other node.
Graph build_ws_attempt(const NetworkSpec& spec, std::uint64_t seed) {
  const int n = spec.n;
  const int half = spec.k / 2;
  std::vector<std::pair<NodeId, NodeId>> lattice;
  for (NodeId u = 0; u < n; ++u)
    for (int j = 1; j <= half; ++j) lattice.emplace_back(u, (u + j) % n);
  if (spec.k % 2 == 1)
    for (NodeId u = 0; u < n / 2; ++u) lattice.emplace_back(u, u + n / 2);

  std::vector<std::vector<NodeId>> adj(n);
  for (const auto& [u, v] : lattice) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  auto connected = [&](NodeId a, NodeId b) {
    return std::find(adj[a].begin(), adj[a].end(), b) != adj[a].end();
  };
  auto detach = [&](NodeId a, NodeId b) {
    adj[a].erase(std::find(adj[a].begin(), adj[a].end(), b));
    adj[b].erase(std::find(adj[b].begin(), adj[b].end(), a));
  };

  Rng rng(seed);
  for (const auto& [u, far] : lattice) {
    if (uniform_real01(rng) >= spec.p) continue;
    if (static_cast<int>(adj[u].size()) >= n - 1) continue;  // u saturated
    NodeId w;
    do {
      w = static_cast<NodeId>(uniform_below(rng, n));
    } while (w == u || connected(u, w));
    detach(u, far);
    adj[u].push_back(w);
    adj[w].push_back(u);
  }

  // Graph::add_edge re-checks simplicity on the way in.
  Graph g(n, 0, n - 1);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : adj[u])
      if (u < v) g.add_edge(u, v);
  return g;
}

}  // namespace

Graph generate_ws(const NetworkSpec& spec) {
  if (spec.k < 2) throw DegenerateSpec("mean degree k must be >= 2");
  if (spec.k >= spec.n) throw DegenerateSpec("mean degree k must be < n");
  if (spec.p < 0.0 || spec.p > 1.0)
    throw DegenerateSpec("rewiring probability p must be in [0, 1]");
  if (spec.k % 2 == 1 && spec.n % 2 == 1)
    throw DegenerateSpec("odd mean degree requires an even node count");

  const int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Graph g = build_ws_attempt(spec, spec.seed + attempt);
    if (g.is_connected()) return g;
  }
  throw GenerationFailed("no connected Watts-Strogatz graph in " +
                         std::to_string(kMaxAttempts) + " attempts");
}

Graph make_parallel_paths(int num_paths, int hops) {
  if (num_paths < 1) throw DegenerateSpec("need at least one path");
  if (hops < 2) throw DegenerateSpec("paths need at least 2 hops");
  const int inner = hops - 1;
  const NodeId src = 0;
  const NodeId dst = 1 + num_paths * inner;
  Graph g(dst + 1, src, dst);
  for (int path = 0; path < num_paths; ++path) {
    NodeId prev = src;
    for (int step = 0; step < inner; ++step) {
      NodeId v = 1 + path * inner + step;
      g.add_edge(prev, v);
      prev = v;
    }
    g.add_edge(prev, dst);
  }
  return g;
}

double average_path_length(const Graph& g) {
  const int n = g.node_count();
  long long total = 0;
  for (NodeId u = 0; u < n; ++u) {
    const auto dist = g.bfs_distances(u);
    for (NodeId v = u + 1; v < n; ++v) {
      if (dist[v] < 0) throw Disconnected("graph is not connected");
      total += dist[v];
    }
  }
  return static_cast<double>(total) /
         (static_cast<double>(n) * (n - 1) / 2.0);
}

double clustering_coefficient(const Graph& g) {
  const int n = g.node_count();
  double sum = 0.0;
  for (NodeId v = 0; v < n; ++v) {
    const auto& nb = g.neighbors(v);
    const int d = static_cast<int>(nb.size());
    if (d < 2) continue;
    int closed = 0;
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j)
        if (g.has_edge(nb[i], nb[j])) ++closed;
    sum += 2.0 * closed / (static_cast<double>(d) * (d - 1));
  }
  return sum / n;
}

int diameter(const Graph& g) {
  const int n = g.node_count();
  int best = 0;
  for (NodeId u = 0; u < n; ++u) {
    const auto dist = g.bfs_distances(u);
    for (NodeId v = 0; v < n; ++v) {
      if (dist[v] < 0) throw Disconnected("graph is not connected");
      best = std::max(best, dist[v]);
    }
  }
  return best;
}

int node_disjoint_paths(const Graph& g) {
  // Vertex-split flow network: node v maps to v_in = 2v, v_out = 2v+1 with a
  // unit arc between them; S and D collapse (out = in). Edge {u, v} becomes
  // u_out -> v_in and v_out -> u_in, unit capacity each. Max S-D flow equals
  // the number of internally node-disjoint paths.
  const int n = g.node_count();
  const int num_vertices = 2 * n;
  struct Arc {
    int to;
    int cap;
    int rev;
  };
  std::vector<std::vector<Arc>> net(num_vertices);
  auto add_arc = [&](int from, int to, int cap) {
    net[from].push_back({to, cap, static_cast<int>(net[to].size())});
    net[to].push_back({from, 0, static_cast<int>(net[from].size()) - 1});
  };
  auto in_of = [&](NodeId v) { return 2 * v; };
  auto out_of = [&](NodeId v) {
    return g.is_terminal(v) ? 2 * v : 2 * v + 1;
  };
  for (NodeId v = 0; v < n; ++v)
    if (!g.is_terminal(v)) add_arc(in_of(v), 2 * v + 1, 1);
  for (const auto& [u, v] : g.edges()) {
    add_arc(out_of(u), in_of(v), 1);
    add_arc(out_of(v), in_of(u), 1);
  }

  const int source = out_of(g.source());
  const int sink = in_of(g.destination());
  int flow = 0;
  while (true) {
    // BFS for an augmenting path (all capacities are unit).
    std::vector<std::pair<int, int>> parent(num_vertices, {-1, -1});
    std::deque<int> queue{source};
    parent[source] = {source, 0};
    while (!queue.empty() && parent[sink].first < 0) {
      int u = queue.front();
      queue.pop_front();
      for (int i = 0; i < static_cast<int>(net[u].size()); ++i) {
        const Arc& a = net[u][i];
        if (a.cap > 0 && parent[a.to].first < 0) {
          parent[a.to] = {u, i};
          queue.push_back(a.to);
        }
      }
    }
    if (parent[sink].first < 0) break;
    for (int v = sink; v != source;) {
      auto [u, i] = parent[v];
      net[u][i].cap -= 1;
      net[net[u][i].to][net[u][i].rev].cap += 1;
      v = u;
    }
    ++flow;
  }
  return flow;
}

std::string graph_to_string(const Graph& g) {
  std::ostringstream out;
  out << "n " << g.node_count() << " s " << g.source() << " d "
      << g.destination() << "\n";
  for (const auto& [u, v] : g.edges()) out << u << " " << v << "\n";
  return out.str();
}

Graph graph_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string tag_n, tag_s, tag_d;
  int n = 0, s = 0, d = 0;
  if (!(in >> tag_n >> n >> tag_s >> s >> tag_d >> d) || tag_n != "n" ||
      tag_s != "s" || tag_d != "d")
    throw IoError("malformed graph header (expected 'n <count> s <S> d <D>')");
  Graph g(n, s, d);
  int u, v;
  while (in >> u >> v) g.add_edge(u, v);
  if (!in.eof() && in.fail()) throw IoError("malformed edge line");
  return g;
}

void store_graph(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << graph_to_string(g);
  if (!out) throw IoError("write failed: " + path);
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return graph_from_string(buf.str());
}

}  // namespace tradenet
