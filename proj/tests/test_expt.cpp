#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "tradenet/expt.hpp"

using namespace tradenet;

namespace {

Graph cycle_graph(int n) {
  Graph g(n, 0, 1);
  for (NodeId v = 0; v < n; ++v) g.add_edge(v, (v + 1) % n);
  return g;
}

Graph path_graph(int n) {
  Graph g(n, 0, n - 1);
  for (NodeId v = 0; v + 1 < n; ++v) g.add_edge(v, v + 1);
  return g;
}

ExperimentConfig small_batch_config() {
  ExperimentConfig config;
  config.network = NetworkSpec{26, 3, 1.0, 5};
  config.rounds = 8;
  config.replications = 6;
  config.threshold = 100.0;
  config.agent_params = {2.6, 1.2, std::nullopt};
  config.initializer = PriceInitializer::Constant(10.0);
  config.seed = 99;
  return config;
}

}  // namespace

TEST_CASE("choose_sd_pair: cycle antipodes and path endpoints at offset 0") {
  Rng rng(1);
  const Graph cyc = cycle_graph(26);
  for (int i = 0; i < 20; ++i) {
    const auto [s, d] = choose_sd_pair(cyc, 0, rng);
    CHECK(cyc.bfs_distances(s)[d] == 13);
  }
  const Graph path = path_graph(7);
  const auto [s, d] = choose_sd_pair(path, 0, rng);
  CHECK(s == 0);
  CHECK(d == 6);
}

TEST_CASE("choose_sd_pair honors the diameter offset on ws graphs") {
  const Graph g = generate_ws({26, 3, 1.0, 12});
  const int diam = diameter(g);
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto [s, d] = choose_sd_pair(g, 2, rng);
    CHECK(g.bfs_distances(s)[d] >= diam - 2);
  }
  CHECK_THROWS_AS(choose_sd_pair(g, -diam - 1, rng), NoEligiblePair);
}

TEST_CASE("run_series on the diamond: three hand-simulated rounds") {
  const Graph g = make_parallel_paths(2, 2);
  SeriesSettings settings;
  settings.rounds = 3;
  settings.threshold = 100.0;
  settings.agent_params = {2.6, 1.2, std::nullopt};
  settings.initializer = PriceInitializer::Constant(0.0);
  settings.seed = 4;
  const SeriesLog log = run_series(g, settings);

  // Round 1: both intermediaries at 0, one of the 2-hop paths wins the tie.
  CHECK(log.outcomes[0].cost == 0.0);
  const NodeId first = log.outcomes[0].selected_path[1];
  const NodeId other = first == 1 ? 2 : 1;
  CHECK(log.prices_by_round[1].token(first) == 2.6);
  CHECK(log.prices_by_round[1].token(other) == 0.0);

  // Round 2: the other path is now strictly cheaper (0 vs 2.6).
  CHECK(log.outcomes[1].selected_path[1] == other);
  CHECK(log.outcomes[1].cost == 0.0);
  CHECK(log.prices_by_round[2].token(other) == 2.6);
  CHECK(log.prices_by_round[2].token(first) == doctest::Approx(1.4));

  // Round 3: they alternate again.
  CHECK(log.outcomes[2].selected_path[1] == first);
  CHECK(log.outcomes[2].cost == doctest::Approx(1.4));
}

TEST_CASE("run_series on a chain grows cost linearly below the threshold") {
  const Graph g = make_parallel_paths(1, 3);  // two intermediaries
  SeriesSettings settings;
  settings.rounds = 10;
  settings.threshold = 1000.0;
  settings.agent_params = {2.6, 1.2, std::nullopt};
  settings.initializer = PriceInitializer::Constant(0.0);
  settings.seed = 5;
  const SeriesLog log = run_series(g, settings);
  for (int t = 0; t < 10; ++t)
    CHECK(log.outcomes[t].cost == doctest::Approx(2 * 2.6 * t).epsilon(1e-12));
}

TEST_CASE("sigma = rho = 0 freezes prices across all rounds") {
  const Graph g = generate_ws({12, 4, 0.5, 9});
  SeriesSettings settings;
  settings.rounds = 8;
  settings.threshold = 100.0;
  settings.agent_params = {0.0, 0.0, std::nullopt};
  settings.initializer = PriceInitializer::Constant(7.0);
  settings.seed = 11;
  const SeriesLog log = run_series(g, settings);
  for (const auto& prices : log.prices_by_round)
    for (NodeId v = 0; v < g.node_count(); ++v)
      if (!prices.is_terminal(v)) CHECK(prices.token(v) == 7.0);
  const ConditionalDeltas d =
      conditional_deltas(g, log.prices_by_round, log.selected_paths());
  CHECK(d.mean_delta_on == 0.0);
  CHECK(d.mean_delta_off == 0.0);
  CHECK(d.p_increase_on == 0.0);
  CHECK(d.p_decrease_off == 0.0);
}

TEST_CASE("identical seeds give identical series") {
  const Graph g = generate_ws({26, 3, 1.0, 5});
  SeriesSettings settings;
  settings.rounds = 15;
  settings.threshold = 100.0;
  settings.agent_params = {2.6, 1.2, std::nullopt};
  settings.initializer = PriceInitializer::UniformInt();
  settings.seed = 123;
  const SeriesLog a = run_series(g, settings);
  const SeriesLog b = run_series(g, settings);
  REQUIRE(a.outcomes.size() == b.outcomes.size());
  for (std::size_t t = 0; t < a.outcomes.size(); ++t) {
    CHECK(a.outcomes[t].selected_path == b.outcomes[t].selected_path);
    CHECK(a.outcomes[t].cost == b.outcomes[t].cost);
    CHECK(a.prices_by_round[t] == b.prices_by_round[t]);
  }
}

TEST_CASE("summarize: single feasible round on the diamond") {
  const Graph g = make_parallel_paths(2, 2);
  SeriesSettings settings;
  settings.rounds = 1;
  settings.threshold = 100.0;
  settings.agent_params = {2.6, 1.2, std::nullopt};
  settings.initializer = PriceInitializer::Constant(30.0);
  settings.seed = 6;
  const SeriesLog log = run_series(g, settings);
  const SummaryStats stats = summarize({log}, /*exclude_first_round=*/false);
  CHECK(stats.rounds_used == 1);
  CHECK(stats.efficiency == 1.0);
  CHECK(stats.mean_cost == 30.0);
  CHECK(stats.mean_length == 2.0);
  CHECK(stats.mean_price == 30.0);
  CHECK(stats.mean_price_in_cp == 30.0);
  // one of two intermediaries earned 30
  CHECK(stats.mean_profit == 15.0);
}

TEST_CASE("summarize: all-infeasible log") {
  const Graph g = make_parallel_paths(1, 4);
  SeriesSettings settings;
  settings.rounds = 4;
  settings.threshold = 10.0;
  settings.agent_params = {2.6, 1.2, std::nullopt};
  settings.initializer = PriceInitializer::Constant(50.0);
  settings.seed = 7;
  const SeriesLog log = run_series(g, settings);
  const SummaryStats stats = summarize({log}, false);
  CHECK(stats.efficiency == 0.0);
  CHECK(stats.mean_profit == 0.0);
  CHECK(stats.mean_cost > 10.0);
}

TEST_CASE("summarize: hand-built two-round check, first round excluded") {
  const Graph g = make_parallel_paths(1, 3);  // chain S-1-2-D
  SeriesSettings settings;
  settings.rounds = 2;
  settings.threshold = 100.0;
  settings.agent_params = {2.0, 1.0, std::nullopt};
  settings.initializer = PriceInitializer::Constant(10.0);
  settings.seed = 8;
  const SeriesLog log = run_series(g, settings);
  // round 2 prices are 12 each, cost 24, profit = price for both intermediaries
  const SummaryStats stats = summarize({log}, true);
  CHECK(stats.rounds_used == 1);
  CHECK(stats.mean_cost == 24.0);
  CHECK(stats.mean_price == 12.0);
  CHECK(stats.mean_price_in_cp == 12.0);
  CHECK(stats.mean_profit == 12.0);
  CHECK(stats.mean_length == 3.0);
  CHECK(stats.efficiency == 1.0);

  const SummaryStats both = summarize({log}, false);
  CHECK(both.rounds_used == 2);
  CHECK(both.mean_cost == doctest::Approx((20.0 + 24.0) / 2));
}

TEST_CASE("summarize rejects an empty log set and flags zero usable rounds") {
  CHECK_THROWS_AS(summarize({}, true), EmptyLog);
  const Graph g = make_parallel_paths(2, 2);
  SeriesSettings settings;
  settings.rounds = 1;
  settings.threshold = 100.0;
  settings.agent_params = {2.6, 1.2, std::nullopt};
  settings.initializer = PriceInitializer::Constant(0.0);
  settings.seed = 9;
  const SeriesLog log = run_series(g, settings);
  const SummaryStats stats = summarize({log}, true);  // round 1 excluded
  CHECK(stats.rounds_used == 0);
  CHECK(std::isnan(stats.efficiency));
}

TEST_CASE("run_batch: per-replication rows plus a pooled row") {
  const ExperimentConfig config = small_batch_config();
  const BatchResult result = run_batch(config, 2);
  CHECK(result.per_replication.size() == 6);
  for (const auto& stats : result.per_replication)
    CHECK(stats.rounds_used == 7);  // 8 rounds minus the excluded first
  CHECK(result.pooled.rounds_used == 42);
}

TEST_CASE("run_batch is deterministic and independent of jobs") {
  const ExperimentConfig config = small_batch_config();
  const BatchResult serial = run_batch(config, 1);
  const BatchResult threaded = run_batch(config, 4);
  CHECK(batch_csv(serial) == batch_csv(threaded));
  const BatchResult again = run_batch(config, 2);
  CHECK(batch_csv(serial) == batch_csv(again));
}

TEST_CASE("run_batch draws a fresh network and pair per replication") {
  const ExperimentConfig config = small_batch_config();
  const auto logs = run_batch_series(config, 1);
  std::set<std::uint64_t> hashes;
  for (const auto& log : logs) hashes.insert(log.graph_hash);
  CHECK(hashes.size() > 1);
}

TEST_CASE("run_batch honors file-supplied endpoints verbatim") {
  Graph g = generate_ws({26, 3, 1.0, 5});
  g.set_endpoints(3, 17);
  const std::string path = "fixed_graph_test.txt";
  store_graph(g, path);
  ExperimentConfig config = small_batch_config();
  config.network = path;
  config.replications = 3;
  const auto logs = run_batch_series(config, 1);
  for (const auto& log : logs) {
    CHECK(log.source == 3);
    CHECK(log.destination == 17);
    CHECK(log.graph_hash == g.structural_hash());
  }
  std::remove(path.c_str());
}

TEST_CASE("config JSON parsing round-trips the documented schema") {
  const std::string text = R"({
    "network": {"n": 26, "k": 3, "p": 0.1, "seed": 11},
    "sd_rule": 2,
    "rounds": 15,
    "replications": 4,
    "threshold": 100.0,
    "agent_params": {"sigma": 2.6, "rho": 1.2},
    "initializer": {"mode": "bootstrap", "sample": [10, 20, 30]},
    "seed": 42
  })";
  const ExperimentConfig config = ExperimentConfig::from_json_text(text);
  const auto& spec = std::get<NetworkSpec>(config.network);
  CHECK(spec.n == 26);
  CHECK(spec.p == 0.1);
  CHECK(config.sd_rule == 2);
  CHECK(config.threshold == 100.0);
  CHECK(config.initializer.sample.size() == 3);
  CHECK(config.exclude_first_round);

  CHECK_THROWS_AS(ExperimentConfig::from_json_text("{nope"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"network": {"n": 26,
    "k": 3, "p": 0.1}, "bogus_key": 1})"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"network": {"n": 26,
    "k": 3, "p": 0.1}, "rounds": 0})"),
                  ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json_text(R"({"network": {"n": 26,
    "k": 3, "p": 0.1}, "threshold": -5})"),
                  ConfigError);
}

TEST_CASE("threshold-free config means an unbounded long run") {
  const std::string text = R"({
    "network": {"n": 26, "k": 4, "p": 1.0, "seed": 3},
    "rounds": 5,
    "agent_params": {"sigma": 2.4, "rho": 1.0},
    "initializer": {"mode": "constant", "value": 0},
    "seed": 1
  })";
  const ExperimentConfig config = ExperimentConfig::from_json_text(text);
  CHECK_FALSE(config.threshold.has_value());
  const auto logs = run_batch_series(config, 1);
  for (const auto& outcome : logs[0].outcomes) CHECK(outcome.feasible);
}

TEST_CASE("long run: single chain accumulates 2*sigma*rounds") {
  const Graph g = make_parallel_paths(1, 3);
  const double final_cost = run_longrun(g, {2.4, 1.0, std::nullopt}, 10000, 1);
  CHECK(final_cost == 2 * 2.4 * 10000);
}

TEST_CASE("long run: M=4 absorbs to zero, M=2 diverges at ratio 2.4") {
  const Graph absorbed = make_parallel_paths(4, 3);
  CHECK(run_longrun(absorbed, {2.4, 1.0, std::nullopt}, 2000, 2) == 0.0);

  const Graph diverging = make_parallel_paths(2, 2);
  const double mid = run_longrun(diverging, {2.4, 1.0, std::nullopt}, 500, 3);
  const double end = run_longrun(diverging, {2.4, 1.0, std::nullopt}, 1000, 3);
  CHECK(end > mid);
  CHECK(mid > 0.0);
}

TEST_CASE("lemma divergence check on spot cells") {
  const auto diverging = lemma_divergence_check(3, 3, 2.4, 1.0);
  CHECK(diverging.predicted);
  CHECK(diverging.diverges);

  const auto absorbed = lemma_divergence_check(4, 3, 2.4, 1.0);
  CHECK_FALSE(absorbed.predicted);
  CHECK_FALSE(absorbed.diverges);
  CHECK(absorbed.cost_end == 0.0);

  const auto single = lemma_divergence_check(1, 2, 0.7, 1.4);
  CHECK(single.predicted);  // sigma/rho = 0.5 > 0 = M-1
  CHECK(single.diverges);
}

TEST_CASE("canonical rotation drift: sigma - (M-1)rho per M rounds") {
  // On the M-parallel instance the per-node price gains exactly
  // sigma - (M-1)*rho over each full rotation once the rotation locks in.
  const int m = 3;
  const Graph g = make_parallel_paths(m, 2);
  SeriesSettings settings;
  settings.rounds = 40;
  settings.threshold = std::nullopt;
  settings.agent_params = {2.4, 1.0, std::nullopt};
  settings.initializer = PriceInitializer::Constant(0.0);
  settings.seed = 10;
  const SeriesLog log = run_series(g, settings);
  const double drift = 2.4 - (m - 1) * 1.0;
  for (int t = 10; t + m < 40; ++t) {
    const double now = log.outcomes[t].cost;
    const double later = log.outcomes[t + m].cost;
    CHECK(later - now == doctest::Approx(drift).epsilon(1e-9));
  }
}

TEST_CASE("cost survey rows carry consistent metrics") {
  SurveySettings settings;
  settings.sizes = {26};
  settings.rewiring_ps = {1.0};
  settings.degree_min = 3;
  settings.degree_max = 4;
  settings.networks_per_config = 5;
  settings.rounds = 50;
  settings.seed = 12;
  const auto rows = run_cost_survey(settings, 2);
  CHECK(rows.size() == 10);
  for (const auto& row : rows) {
    CHECK(row.n == 26);
    CHECK(row.disjoint_paths >= 1);
    CHECK(row.apl > 1.0);
    CHECK(row.final_cost >= 0.0);
  }
  // deterministic under different job counts
  const auto again = run_cost_survey(settings, 1);
  CHECK(survey_csv(rows) == survey_csv(again));
}

TEST_CASE("mean_price_in_cp never exceeds mean_cost") {
  Rng seed_rng(13);
  for (int i = 0; i < 10; ++i) {
    ExperimentConfig config = small_batch_config();
    config.seed = seed_rng();
    config.initializer = PriceInitializer::UniformInt();
    const BatchResult result = run_batch(config, 1);
    for (const auto& stats : result.per_replication)
      CHECK(stats.mean_price_in_cp <= stats.mean_cost + 1e-12);
  }
}
