#ifndef TRADENET_EXPT_HPP
#define TRADENET_EXPT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "tradenet/agents.hpp"
#include "tradenet/market.hpp"
#include "tradenet/netgraph.hpp"

namespace tradenet {

// Full declarative description of a batch. Loadable from a JSON file whose
// keys mirror the field names (see README for the schema).
struct ExperimentConfig {
  std::variant<NetworkSpec, std::string> network;  // ensemble spec or file
  std::optional<int> sd_rule;  // min S-D distance >= diameter - sd_rule;
                               // default 2 for n <= 26, 1 above
  int rounds = 15;
  int replications = 1;
  std::optional<double> threshold;  // absent = threshold-free long run
  AgentParams agent_params;
  PriceInitializer initializer;
  std::uint64_t seed = 0;
  bool exclude_first_round = true;

  void validate() const;
  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text);
};

int default_sd_rule(int node_count);

// Everything one series produced: per-round outcomes, the assignment posted
// each round (plus the post-final-update assignment at the back, so
// prices_by_round.size() == outcomes.size() + 1), and provenance metadata.
struct SeriesLog {
  std::vector<RoundOutcome> outcomes;
  std::vector<PriceAssignment> prices_by_round;
  std::uint64_t seed = 0;
  NodeId source = 0;
  NodeId destination = 0;
  std::uint64_t graph_hash = 0;

  std::vector<std::vector<NodeId>> selected_paths() const;
};

// One summary row: efficiency, mean posted price, mean price of selected-path
// intermediaries (pooled over (round, node) observations), mean cost, mean
// per-intermediary payoff, mean selected-path hop count. rounds_used = 0
// (with NaN stats) marks a summary emptied by first-round exclusion.
struct SummaryStats {
  double efficiency = 0.0;
  double mean_price = 0.0;
  double mean_price_in_cp = 0.0;
  double mean_cost = 0.0;
  double mean_profit = 0.0;
  double mean_length = 0.0;
  long long rounds_used = 0;
};

struct SeriesSettings {
  int rounds = 15;
  std::optional<double> threshold;
  AgentParams agent_params;
  PriceInitializer initializer;
  std::uint64_t seed = 0;
};

struct BatchResult {
  std::vector<SummaryStats> per_replication;
  SummaryStats pooled;
};

// Uniformly random node pair at distance >= diameter - offset.
// Throws Disconnected or NoEligiblePair.
std::pair<NodeId, NodeId> choose_sd_pair(const Graph& g, int offset, Rng& rng);

// init_prices, then `rounds` iterations of play_round + update_prices.
// Deterministic per seed.
SeriesLog run_series(const Graph& g, const SeriesSettings& settings);

// `replications` independent series. With a NetworkSpec, each replication
// draws a fresh network (seed derived from the spec seed and the replication
// index) and a fresh S-D pair; with a graph file, the stored graph and
// endpoints are reused. Summaries exclude round 1 when configured (default).
// `jobs` parallelizes replications; results are independent of jobs.
BatchResult run_batch(const ExperimentConfig& config, int jobs = 1);

// Per-replication series logs for the same schedule as run_batch; used by
// the CLI to emit round logs.
std::vector<SeriesLog> run_batch_series(const ExperimentConfig& config,
                                        int jobs = 1);

// Threshold-free dynamics from all-zero prices; returns the cheapest-path
// cost after the final update.
double run_longrun(const Graph& g, const AgentParams& params, int rounds,
                   std::uint64_t seed);

// Empirical vs predicted divergence on the canonical M-parallel-paths
// instance with identical (zero) initial prices. `predicted` is
// sigma/rho > M - 1; `diverges` compares the cheapest-path cost at
// probe_rounds/2 and probe_rounds (strict growth vs absorbed).
struct DivergenceCheck {
  bool diverges = false;
  bool predicted = false;
  double cost_mid = 0.0;
  double cost_end = 0.0;
};
DivergenceCheck lemma_divergence_check(int num_paths, int hops, double sigma,
                                       double rho, int probe_rounds = 1000,
                                       std::uint64_t seed = 0);

// Pools one or more series logs into a SummaryStats row.
// Throws EmptyLog when `logs` is empty.
SummaryStats summarize(const std::vector<SeriesLog>& logs,
                       bool exclude_first_round = true);

// --- threshold-free cost survey over WS ensembles (the long-run protocol) ---

struct SurveyRow {
  int n = 0;
  int k = 0;
  double p = 0.0;
  std::uint64_t network_seed = 0;
  int disjoint_paths = 0;
  double apl = 0.0;
  double clustering = 0.0;
  double final_cost = 0.0;
};

struct SurveySettings {
  std::vector<int> sizes{26, 50};
  std::vector<double> rewiring_ps{0.1, 1.0};
  int degree_min = 2;
  int degree_max = 10;
  int networks_per_config = 200;
  int rounds = 1000;
  AgentParams agent_params{2.4, 1.0, std::nullopt};
  std::uint64_t seed = 0;
};

// For every (n, p, degree) cell: generate networks, place S-D by the distance
// rule, run the threshold-free dynamics, and record final cost next to the
// structural metrics. Row order is independent of `jobs`.
std::vector<SurveyRow> run_cost_survey(const SurveySettings& settings,
                                       int jobs = 1);

// --- CSV serialization (schemas documented in README) ---

std::string batch_csv(const BatchResult& result);
std::string series_rounds_csv(const std::vector<SeriesLog>& logs);
std::string series_nodes_csv(const std::vector<SeriesLog>& logs);
std::string survey_csv(const std::vector<SurveyRow>& rows);

}  // namespace tradenet

#endif  // TRADENET_EXPT_HPP
