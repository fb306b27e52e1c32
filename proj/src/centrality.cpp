#include "tradenet/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace tradenet {

namespace {

void require_intermediary(const Graph& g, NodeId v) {
  if (g.is_terminal(v))
    throw NotIntermediary("node " + std::to_string(v) +
                          " is the source or destination");
}

}  // namespace

PathInventory enumerate_paths(const Graph& g, std::size_t cap) {
  if (!g.st_connected())
    throw Disconnected("no path between source and destination");
  PathInventory inv;
  inv.cap = cap;
  std::vector<char> on_path(g.node_count(), 0);
  std::vector<NodeId> current{g.source()};
  on_path[g.source()] = 1;

  // Iterative DFS with an explicit index stack keeps deep graphs safe.
  std::vector<std::size_t> next_index{0};
  while (!current.empty()) {
    const NodeId u = current.back();
    if (u == g.destination()) {
      if (inv.paths.size() >= cap) throw PathExplosion(cap);
      inv.paths.push_back(current);
      on_path[u] = 0;
      current.pop_back();
      next_index.pop_back();
      continue;
    }
    const auto& nb = g.neighbors(u);
    NodeId advance_to = -1;
    while (next_index.back() < nb.size()) {
      const NodeId v = nb[next_index.back()++];
      if (!on_path[v]) {
        advance_to = v;
        break;
      }
    }
    if (advance_to >= 0) {
      current.push_back(advance_to);
      on_path[advance_to] = 1;
      next_index.push_back(0);
    } else {
      on_path[u] = 0;
      current.pop_back();
      next_index.pop_back();
    }
  }
  return inv;
}

double sd_criticality(const Graph& g, NodeId v,
                      const PathInventory& inventory) {
  require_intermediary(g, v);
  std::size_t through = 0;
  for (const auto& p : inventory.paths)
    if (std::find(p.begin(), p.end(), v) != p.end()) ++through;
  return static_cast<double>(through) /
         static_cast<double>(inventory.paths.size());
}

double sd_alpha(const Graph& g, NodeId v, double alpha,
                const PathInventory& inventory) {
  require_intermediary(g, v);
  // l(p)^-alpha normalized by the shortest length: (l_min / l)^alpha lies in
  // (0, 1], so arbitrarily large alpha underflows gracefully toward the
  // shortest-path-only ratio instead of producing 0/0.
  std::size_t min_len = std::numeric_limits<std::size_t>::max();
  for (const auto& p : inventory.paths)
    min_len = std::min(min_len, p.size() - 1);
  double num = 0.0, den = 0.0;
  for (const auto& p : inventory.paths) {
    const double len = static_cast<double>(p.size() - 1);
    const double w =
        std::pow(static_cast<double>(min_len) / len, alpha);
    den += w;
    if (std::find(p.begin(), p.end(), v) != p.end()) num += w;
  }
  return num / den;
}

double sd_betweenness(const Graph& g, NodeId v) {
  require_intermediary(g, v);
  const auto dist_s = g.bfs_distances(g.source());
  const auto dist_d = g.bfs_distances(g.destination());
  const int d_sd = dist_s[g.destination()];
  if (d_sd < 0) throw Disconnected("no path between source and destination");
  if (dist_s[v] < 0 || dist_d[v] < 0 || dist_s[v] + dist_d[v] != d_sd)
    return 0.0;

  // Shortest-path counts from one endpoint, in BFS layer order. Counts are
  // doubles as in standard betweenness implementations; exact for the graph
  // sizes where values are asserted exactly.
  auto count_from = [&](NodeId root, const std::vector<int>& dist) {
    std::vector<double> sigma(g.node_count(), 0.0);
    sigma[root] = 1.0;
    std::vector<NodeId> order(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) order[u] = u;
    std::sort(order.begin(), order.end(),
              [&](NodeId a, NodeId b) { return dist[a] < dist[b]; });
    for (NodeId u : order) {
      if (dist[u] < 0 || u == root) continue;
      for (NodeId w : g.neighbors(u))
        if (dist[w] == dist[u] - 1) sigma[u] += sigma[w];
    }
    return sigma;
  };
  const auto sigma_s = count_from(g.source(), dist_s);
  const auto sigma_d = count_from(g.destination(), dist_d);
  return sigma_s[v] * sigma_d[v] / sigma_s[g.destination()];
}

std::string centrality_csv(const Graph& g, double alpha,
                           const PathInventory& inventory) {
  std::ostringstream out;
  out << "node,sd0,sd_alpha(alpha=" << alpha << "),sd_inf\n";
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.is_terminal(v)) continue;
    out << v << "," << sd_criticality(g, v, inventory) << ","
        << sd_alpha(g, v, alpha, inventory) << "," << sd_betweenness(g, v)
        << "\n";
  }
  return out.str();
}

}  // namespace tradenet
