#include "tradenet/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace tradenet {

Micro to_micro(double tokens) {
  if (!std::isfinite(tokens) || tokens < 0.0)
    throw Error("price must be a finite nonnegative token amount");
  return static_cast<Micro>(std::llround(tokens * kMicroPerToken));
}

double to_tokens(Micro m) {
  return static_cast<double>(m) / kMicroPerToken;
}

PriceAssignment::PriceAssignment(const Graph& g, double initial)
    : micro_(g.node_count(), 0), terminal_(g.node_count(), 0) {
  terminal_[g.source()] = 1;
  terminal_[g.destination()] = 1;
  const Micro m = to_micro(initial);
  for (NodeId v = 0; v < size(); ++v)
    if (!terminal_[v]) micro_[v] = m;
}

void PriceAssignment::set_token(NodeId v, double tokens) {
  set_micro(v, to_micro(tokens));
}

void PriceAssignment::set_micro(NodeId v, Micro m) {
  if (terminal_[v])
    throw Error("source and destination do not post prices");
  if (m < 0) throw Error("price must be nonnegative");
  micro_[v] = m;
}

namespace {

struct Label {
  Micro cost;
  int hops;
};

constexpr Micro kUnreached = std::numeric_limits<Micro>::max();

bool lex_less(const Label& a, const Label& b) {
  return a.cost != b.cost ? a.cost < b.cost : a.hops < b.hops;
}

// Dijkstra on (cost, hops). Entering intermediary v costs (price(v), 1);
// entering D costs (0, 1); S is never re-entered.
std::vector<Label> shortest_labels(const Graph& g,
                                   const PriceAssignment& prices) {
  std::vector<Label> dist(g.node_count(), {kUnreached, 0});
  using Item = std::tuple<Micro, int, NodeId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
  dist[g.source()] = {0, 0};
  heap.emplace(0, 0, g.source());
  while (!heap.empty()) {
    auto [cost, hops, u] = heap.top();
    heap.pop();
    if (cost != dist[u].cost || hops != dist[u].hops) continue;  // stale
    for (NodeId v : g.neighbors(u)) {
      if (v == g.source()) continue;
      const Micro enter = v == g.destination() ? 0 : prices.micro(v);
      const Label cand{cost + enter, hops + 1};
      if (lex_less(cand, dist[v])) {
        dist[v] = cand;
        heap.emplace(cand.cost, cand.hops, v);
      }
    }
  }
  if (dist[g.destination()].cost == kUnreached)
    throw Disconnected("no path between source and destination");
  return dist;
}

using Count = unsigned __int128;

Count checked_add(Count a, Count b) {
  const Count s = a + b;
  if (s < a)
    throw CountOverflow("optimal path count exceeds 128-bit range");
  return s;
}

// Uniform value in [0, n), n >= 1, from two 64-bit draws with rejection.
Count uniform_count_below(Rng& rng, Count n) {
  const Count max = ~Count{0};
  const Count limit = max - (max % n);
  Count x;
  do {
    x = (Count{rng()} << 64) | Count{rng()};
  } while (x >= limit && limit != 0);
  return x % n;
}

}  // namespace

PathCost min_cost(const Graph& g, const PriceAssignment& prices) {
  const auto dist = shortest_labels(g, prices);
  const Label& at_d = dist[g.destination()];
  return {to_tokens(at_d.cost), at_d.hops};
}

std::vector<NodeId> select_cheapest_path(const Graph& g,
                                         const PriceAssignment& prices,
                                         Rng& rng) {
  const auto dist = shortest_labels(g, prices);

  // Tight edge u -> v: extending an optimal S-u prefix by v reproduces v's
  // optimal label. Hops strictly increase along tight edges, so the tight
  // graph is a DAG and ordering nodes by hops is topological.
  auto enter_cost = [&](NodeId v) -> Micro {
    return v == g.destination() ? 0 : prices.micro(v);
  };
  auto tight = [&](NodeId u, NodeId v) {
    if (v == g.source()) return false;
    if (dist[u].cost == kUnreached || dist[v].cost == kUnreached)
      return false;
    return dist[v].cost == dist[u].cost + enter_cost(v) &&
           dist[v].hops == dist[u].hops + 1;
  };

  // Only nodes on some optimal S-D path matter; backward reachability from D
  // over tight edges confines the counting (and any overflow report) to them.
  std::vector<char> relevant(g.node_count(), 0);
  relevant[g.destination()] = 1;
  std::vector<NodeId> stack{g.destination()};
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId u : g.neighbors(v))
      if (!relevant[u] && tight(u, v)) {
        relevant[u] = 1;
        stack.push_back(u);
      }
  }

  std::vector<NodeId> order;
  order.reserve(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (relevant[v]) order.push_back(v);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    return dist[a].hops != dist[b].hops ? dist[a].hops < dist[b].hops : a < b;
  });

  std::vector<Count> count(g.node_count(), 0);
  count[g.source()] = 1;
  for (NodeId v : order) {
    if (v == g.source()) continue;
    for (NodeId u : g.neighbors(v))
      if (relevant[u] && tight(u, v)) count[v] = checked_add(count[v], count[u]);
  }

  // Walk back from D, picking each predecessor with weight = its optimal
  // prefix count; this is uniform over the optimal path set.
  std::vector<NodeId> path{g.destination()};
  NodeId at = g.destination();
  while (at != g.source()) {
    std::vector<NodeId> preds;
    for (NodeId u : g.neighbors(at))
      if (tight(u, at)) preds.push_back(u);
    std::sort(preds.begin(), preds.end());
    NodeId chosen = preds.front();
    if (preds.size() > 1) {
      Count r = uniform_count_below(rng, count[at]);
      for (NodeId u : preds) {
        if (r < count[u]) {
          chosen = u;
          break;
        }
        r -= count[u];
      }
    }
    path.push_back(chosen);
    at = chosen;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

RoundOutcome play_round(const Graph& g, const PriceAssignment& prices,
                        double threshold, Rng& rng) {
  if (!(threshold > 0.0))
    throw Error("threshold must be positive");
  RoundOutcome out;
  out.threshold = threshold;
  out.selected_path = select_cheapest_path(g, prices, rng);
  Micro cost = 0;
  for (NodeId v : out.selected_path)
    if (!g.is_terminal(v)) cost += prices.micro(v);
  out.cost = to_tokens(cost);
  out.hops = static_cast<int>(out.selected_path.size()) - 1;
  const bool unbounded = std::isinf(threshold);
  out.feasible = unbounded || cost <= to_micro(threshold);
  out.payoffs.assign(g.node_count(), 0.0);
  if (out.feasible) {
    for (NodeId v : out.selected_path)
      if (!g.is_terminal(v)) out.payoffs[v] = prices.token(v);
    if (!unbounded) {
      const double surplus_share = (threshold - out.cost) / 2.0;
      out.payoffs[g.source()] = surplus_share;
      out.payoffs[g.destination()] = surplus_share;
    }
  }
  return out;
}

}  // namespace tradenet
