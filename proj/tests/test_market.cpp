#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <numeric>

#include "oracles.hpp"
#include "tradenet/market.hpp"

using namespace tradenet;

namespace {

// S=0, D=3, intermediaries a=1, b=2 on parallel 2-hop routes.
Graph diamond() { return make_parallel_paths(2, 2); }

// S=0, a=1, b=2, D=3.
Graph chain4() { return make_parallel_paths(1, 3); }

}  // namespace

TEST_CASE("price assignment quantizes and validates") {
  const Graph g = diamond();
  PriceAssignment prices(g, 2.5);
  CHECK(prices.token(1) == 2.5);
  CHECK(prices.micro(1) == 2500000);
  CHECK(prices.token(g.source()) == 0.0);
  CHECK_THROWS_AS(prices.set_token(g.source(), 1.0), Error);
  CHECK_THROWS_AS(prices.set_token(1, -0.5), Error);
  CHECK_THROWS_AS(PriceAssignment(g, -1.0), Error);
  prices.set_token(2, 0.1);
  CHECK(prices.micro(2) == 100000);
}

TEST_CASE("min cost: two-path comparison and length tie-break") {
  const Graph g = diamond();
  PriceAssignment prices(g);
  prices.set_token(1, 30.0);
  prices.set_token(2, 40.0);
  const PathCost mc = min_cost(g, prices);
  CHECK(mc.cost == 30.0);
  CHECK(mc.hops == 2);

  PriceAssignment zero(g);
  const PathCost z = min_cost(g, zero);
  CHECK(z.cost == 0.0);
  CHECK(z.hops == 2);
}

TEST_CASE("min cost on a chain sums the intermediaries") {
  const Graph g = chain4();
  PriceAssignment prices(g);
  prices.set_token(1, 10.0);
  prices.set_token(2, 15.0);
  const PathCost mc = min_cost(g, prices);
  CHECK(mc.cost == 25.0);
  CHECK(mc.hops == 3);
}

TEST_CASE("min cost throws when S and D are separated") {
  Graph g(4, 0, 3);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  PriceAssignment prices(g);
  Rng rng(1);
  CHECK_THROWS_AS(min_cost(g, prices), Disconnected);
  CHECK_THROWS_AS(select_cheapest_path(g, prices, rng), Disconnected);
}

TEST_CASE("all-zero prices pick a shortest path, not any path") {
  // 2-hop route vs 3-hop route, all prices 0: the tie-break selects 2 hops.
  Graph g(5, 0, 4);
  g.add_edge(0, 1);
  g.add_edge(1, 4);
  g.add_edge(0, 2);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  PriceAssignment zero(g);
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto path = select_cheapest_path(g, zero, rng);
    CHECK(path == std::vector<NodeId>{0, 1, 4});
  }
}

TEST_CASE("unique cheapest path is returned with probability 1") {
  const Graph g = diamond();
  PriceAssignment prices(g);
  prices.set_token(1, 1.0);
  prices.set_token(2, 1.000001);  // one micro-token more
  Rng rng(2);
  for (int i = 0; i < 50; ++i)
    CHECK(select_cheapest_path(g, prices, rng) ==
          std::vector<NodeId>{0, 1, 3});
}

TEST_CASE("tie sampling is uniform on the diamond") {
  const Graph g = diamond();
  PriceAssignment prices(g, 7.0);
  Rng rng(11);
  int first = 0;
  const int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i)
    if (select_cheapest_path(g, prices, rng)[1] == 1) ++first;
  CHECK(std::abs(first / static_cast<double>(kDraws) - 0.5) < 0.02);
}

TEST_CASE("tie sampling is uniform over three parallel routes") {
  const Graph g = make_parallel_paths(3, 2);
  PriceAssignment prices(g, 0.0);
  Rng rng(13);
  std::map<NodeId, int> hits;
  const int kDraws = 10000;
  for (int i = 0; i < kDraws; ++i)
    ++hits[select_cheapest_path(g, prices, rng)[1]];
  for (const auto& [node, count] : hits)
    CHECK(std::abs(count / static_cast<double>(kDraws) - 1.0 / 3.0) < 0.02);
}

TEST_CASE("sampled path always attains the min_cost label") {
  Rng rng(17);
  Rng price_rng(18);
  for (int i = 0; i < 40; ++i) {
    const Graph g = oracle::random_connected_graph(rng, 10);
    PriceAssignment prices(g);
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (!g.is_terminal(v))
        prices.set_micro(v, static_cast<Micro>(uniform_below(price_rng, 50)) *
                                 250000);
    const PathCost mc = min_cost(g, prices);
    const auto path = select_cheapest_path(g, prices, rng);
    Micro cost = 0;
    for (NodeId v : path)
      if (!g.is_terminal(v)) cost += prices.micro(v);
    CHECK(to_tokens(cost) == mc.cost);
    CHECK(static_cast<int>(path.size()) - 1 == mc.hops);
    CHECK(path.front() == g.source());
    CHECK(path.back() == g.destination());
  }
}

TEST_CASE("sampler matches the brute-force optimal set distribution") {
  Rng graph_rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const Graph g = oracle::random_connected_graph(graph_rng, 10, 0.45);
    // quarter-token prices from a tiny alphabet to force plenty of ties
    PriceAssignment prices(g);
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (!g.is_terminal(v))
        prices.set_micro(v, static_cast<Micro>(uniform_below(graph_rng, 3)) *
                                 250000);
    const auto optimal = oracle::optimal_paths(g, prices);
    std::map<std::vector<NodeId>, int> hits;
    Rng rng(100 + trial);
    const int kDraws = 10000;
    for (int i = 0; i < kDraws; ++i)
      ++hits[select_cheapest_path(g, prices, rng)];

    CHECK(hits.size() == optimal.size());
    double tv = 0.0;
    const double uniform = 1.0 / static_cast<double>(optimal.size());
    for (const auto& p : optimal) {
      const double emp = hits.count(p)
                             ? hits.at(p) / static_cast<double>(kDraws)
                             : 0.0;
      tv += std::abs(emp - uniform);
    }
    tv /= 2.0;
    CHECK(tv < 0.02);
  }
}

TEST_CASE("128-bit path counting overflows loudly") {
  // A chain of 130 diamonds has 2^130 tied shortest paths.
  const int kDiamonds = 130;
  Graph g(2 + 3 * kDiamonds, 0, 3 * kDiamonds + 1);
  NodeId prev = 0;
  for (int i = 0; i < kDiamonds; ++i) {
    const NodeId a = 3 * i + 1, b = 3 * i + 2, join = 3 * i + 3;
    g.add_edge(prev, a);
    g.add_edge(prev, b);
    g.add_edge(a, join);
    g.add_edge(b, join);
    prev = join;
  }
  g.add_edge(prev, 3 * kDiamonds + 1);
  PriceAssignment zero(g);
  Rng rng(3);
  CHECK_THROWS_AS(select_cheapest_path(g, zero, rng), CountOverflow);
  CHECK(min_cost(g, zero).cost == 0.0);  // the label search itself is fine
}

TEST_CASE("tie structure beyond D does not trip the overflow guard") {
  // direct S-D edge plus a huge diamond chain hanging off D; only the S-D
  // portion of the tight DAG may be counted
  const int kDiamonds = 130;
  Graph g(2 + 3 * kDiamonds, 0, 1);
  g.add_edge(0, 1);
  NodeId prev = 1;
  for (int i = 0; i < kDiamonds; ++i) {
    const NodeId a = 3 * i + 2, b = 3 * i + 3, join = 3 * i + 4;
    g.add_edge(prev, a);
    g.add_edge(prev, b);
    g.add_edge(a, join);
    g.add_edge(b, join);
    prev = join;
  }
  PriceAssignment zero(g);
  Rng rng(4);
  CHECK(select_cheapest_path(g, zero, rng) == std::vector<NodeId>{0, 1});
}

TEST_CASE("play_round: feasible diamond splits the surplus") {
  const Graph g = diamond();
  PriceAssignment prices(g);
  prices.set_token(1, 30.0);
  prices.set_token(2, 40.0);
  Rng rng(7);
  const RoundOutcome out = play_round(g, prices, 100.0, rng);
  CHECK(out.feasible);
  CHECK(out.cost == 30.0);
  CHECK(out.hops == 2);
  CHECK(out.selected_path == std::vector<NodeId>{0, 1, 3});
  CHECK(out.payoffs[1] == 30.0);
  CHECK(out.payoffs[2] == 0.0);
  CHECK(out.payoffs[0] == 35.0);
  CHECK(out.payoffs[3] == 35.0);
}

TEST_CASE("play_round: infeasible round still selects a path, pays nobody") {
  const Graph g = chain4();
  PriceAssignment prices(g);
  prices.set_token(1, 60.0);
  prices.set_token(2, 60.0);
  Rng rng(7);
  const RoundOutcome out = play_round(g, prices, 100.0, rng);
  CHECK_FALSE(out.feasible);
  CHECK(out.cost == 120.0);
  CHECK(out.selected_path.size() == 4);
  for (double p : out.payoffs) CHECK(p == 0.0);
}

TEST_CASE("feasible payoffs sum to the threshold") {
  Rng rng(31);
  for (int i = 0; i < 30; ++i) {
    const Graph g = oracle::random_connected_graph(rng, 10);
    PriceAssignment prices(g);
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (!g.is_terminal(v))
        prices.set_token(v, static_cast<double>(uniform_below(rng, 20)));
    const RoundOutcome out = play_round(g, prices, 100.0, rng);
    const double total =
        std::accumulate(out.payoffs.begin(), out.payoffs.end(), 0.0);
    if (out.feasible)
      CHECK(total == doctest::Approx(100.0).epsilon(1e-12));
    else
      CHECK(total == 0.0);
  }
}

TEST_CASE("min cost ignores off-path price shuffles that stay expensive") {
  // Off-path prices can be permuted freely as long as each stays >= the
  // selected cost; the minimum is unchanged.
  Graph g(6, 0, 5);
  g.add_edge(0, 1);
  g.add_edge(1, 5);
  g.add_edge(0, 2);
  g.add_edge(2, 3);
  g.add_edge(3, 4);
  g.add_edge(4, 5);
  PriceAssignment prices(g);
  prices.set_token(1, 9.0);
  prices.set_token(2, 20.0);
  prices.set_token(3, 30.0);
  prices.set_token(4, 40.0);
  const PathCost base = min_cost(g, prices);
  CHECK(base.cost == 9.0);
  prices.set_token(2, 40.0);
  prices.set_token(3, 20.0);
  prices.set_token(4, 30.0);
  const PathCost shuffled = min_cost(g, prices);
  CHECK(shuffled.cost == base.cost);
  CHECK(shuffled.hops == base.hops);
}

TEST_CASE("threshold-free rounds are always feasible with zero S/D payoff") {
  const Graph g = chain4();
  PriceAssignment prices(g, 80.0);
  Rng rng(9);
  const double inf = std::numeric_limits<double>::infinity();
  const RoundOutcome out = play_round(g, prices, inf, rng);
  CHECK(out.feasible);
  CHECK(out.cost == 160.0);
  CHECK(out.payoffs[0] == 0.0);
  CHECK(out.payoffs[3] == 0.0);
  CHECK(out.payoffs[1] == 80.0);
}
