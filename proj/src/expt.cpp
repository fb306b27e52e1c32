#include "tradenet/expt.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "tradenet/format.hpp"

namespace tradenet {

namespace {

using nlohmann::json;

// Substream tags for derive_seed; one per purpose so streams never collide.
enum : std::uint64_t {
  kTagNetwork = 0x6e657477,
  kTagSdPair = 0x73647072,
  kTagSeries = 0x73657269,
  kTagSurvey = 0x73757276,
};

void reject_unknown_keys(const json& obj, const char* where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed)
      if (key == a) known = true;
    if (!known)
      throw ConfigError(std::string("unknown key '") + key + "' in " + where);
  }
}

// Runs fn(0..total-1) on up to `jobs` threads. Tasks write into preallocated
// slots, so results do not depend on scheduling. The first exception wins.
void parallel_for(int total, int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 1 || total <= 1) {
    for (int i = 0; i < total; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const int i = next.fetch_add(1);
      if (i >= total) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::min(jobs, total);
  pool.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

AgentParams agent_params_from_json(const json& obj) {
  reject_unknown_keys(obj, "agent_params", {"sigma", "rho", "cap"});
  AgentParams params;
  params.sigma = obj.at("sigma").get<double>();
  params.rho = obj.at("rho").get<double>();
  if (obj.contains("cap") && !obj.at("cap").is_null())
    params.cap = obj.at("cap").get<double>();
  return params;
}

PriceInitializer initializer_from_json(const json& obj) {
  reject_unknown_keys(obj, "initializer",
                      {"mode", "value", "sample", "sample_file"});
  const std::string mode = obj.at("mode").get<std::string>();
  if (mode == "constant")
    return PriceInitializer::Constant(obj.value("value", 0.0));
  if (mode == "uniform") return PriceInitializer::UniformInt();
  if (mode == "bootstrap") {
    std::vector<double> sample;
    if (obj.contains("sample"))
      sample = obj.at("sample").get<std::vector<double>>();
    else if (obj.contains("sample_file"))
      sample = load_price_sample(obj.at("sample_file").get<std::string>());
    else
      throw ConfigError("bootstrap initializer needs 'sample' or 'sample_file'");
    return PriceInitializer::Bootstrap(std::move(sample));
  }
  throw ConfigError("initializer mode must be constant, bootstrap or uniform");
}

}  // namespace

int default_sd_rule(int node_count) { return node_count <= 26 ? 2 : 1; }

void ExperimentConfig::validate() const {
  if (rounds < 1) throw ConfigError("rounds must be >= 1");
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (threshold && !(*threshold > 0.0))
    throw ConfigError("threshold must be positive when present");
  agent_params.validate();
  initializer.validate();
  if (const auto* spec = std::get_if<NetworkSpec>(&network)) {
    if (spec->n < 2) throw ConfigError("network.n must be >= 2");
  } else if (std::get<std::string>(network).empty()) {
    throw ConfigError("network file path is empty");
  }
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  try {
    reject_unknown_keys(root, "config",
                        {"network", "sd_rule", "rounds", "replications",
                         "threshold", "agent_params", "initializer", "seed",
                         "exclude_first_round"});
    ExperimentConfig config;
    const json& net = root.at("network");
    if (net.is_string()) {
      config.network = net.get<std::string>();
    } else {
      reject_unknown_keys(net, "network", {"n", "k", "p", "seed"});
      NetworkSpec spec;
      spec.n = net.at("n").get<int>();
      spec.k = net.at("k").get<int>();
      spec.p = net.at("p").get<double>();
      spec.seed = net.value("seed", std::uint64_t{0});
      config.network = spec;
    }
    if (root.contains("sd_rule") && !root.at("sd_rule").is_null())
      config.sd_rule = root.at("sd_rule").get<int>();
    config.rounds = root.value("rounds", 15);
    config.replications = root.value("replications", 1);
    if (root.contains("threshold") && !root.at("threshold").is_null())
      config.threshold = root.at("threshold").get<double>();
    if (root.contains("agent_params"))
      config.agent_params = agent_params_from_json(root.at("agent_params"));
    if (root.contains("initializer"))
      config.initializer = initializer_from_json(root.at("initializer"));
    config.seed = root.value("seed", std::uint64_t{0});
    config.exclude_first_round = root.value("exclude_first_round", true);
    config.validate();
    return config;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config: ") + e.what());
  }
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_json_text(buf.str());
}

std::vector<std::vector<NodeId>> SeriesLog::selected_paths() const {
  std::vector<std::vector<NodeId>> paths;
  paths.reserve(outcomes.size());
  for (const auto& outcome : outcomes) paths.push_back(outcome.selected_path);
  return paths;
}

std::pair<NodeId, NodeId> choose_sd_pair(const Graph& g, int offset,
                                         Rng& rng) {
  const int n = g.node_count();
  std::vector<std::vector<int>> dist(n);
  int diam = 0;
  for (NodeId u = 0; u < n; ++u) {
    dist[u] = g.bfs_distances(u);
    for (int d : dist[u]) {
      if (d < 0) throw Disconnected("graph is not connected");
      diam = std::max(diam, d);
    }
  }
  std::vector<std::pair<NodeId, NodeId>> eligible;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v)
      if (dist[u][v] >= diam - offset) eligible.emplace_back(u, v);
  if (eligible.empty())
    throw NoEligiblePair("no pair at distance >= diameter - " +
                         std::to_string(offset));
  return eligible[uniform_below(rng, eligible.size())];
}

SeriesLog run_series(const Graph& g, const SeriesSettings& settings) {
  if (settings.rounds < 1) throw Error("series needs at least 1 round");
  settings.agent_params.validate();
  const double threshold =
      settings.threshold.value_or(std::numeric_limits<double>::infinity());

  SeriesLog log;
  log.seed = settings.seed;
  log.source = g.source();
  log.destination = g.destination();
  log.graph_hash = g.structural_hash();
  log.outcomes.reserve(settings.rounds);
  log.prices_by_round.reserve(settings.rounds + 1);

  Rng rng(settings.seed);
  PriceAssignment prices = init_prices(g, settings.initializer, rng);
  for (int round = 0; round < settings.rounds; ++round) {
    RoundOutcome outcome = play_round(g, prices, threshold, rng);
    log.prices_by_round.push_back(prices);
    prices = update_prices(g, prices, outcome.selected_path,
                           settings.agent_params);
    log.outcomes.push_back(std::move(outcome));
  }
  log.prices_by_round.push_back(std::move(prices));
  return log;
}

std::vector<SeriesLog> run_batch_series(const ExperimentConfig& config,
                                        int jobs) {
  config.validate();
  std::vector<SeriesLog> logs(config.replications);

  const bool from_file = std::holds_alternative<std::string>(config.network);
  Graph file_graph(2);
  if (from_file)
    file_graph = load_graph(std::get<std::string>(config.network));

  parallel_for(config.replications, jobs, [&](int rep) {
    SeriesSettings settings;
    settings.rounds = config.rounds;
    settings.threshold = config.threshold;
    settings.agent_params = config.agent_params;
    settings.initializer = config.initializer;
    settings.seed = derive_seed(config.seed, kTagSeries, rep);
    if (from_file) {
      logs[rep] = run_series(file_graph, settings);
    } else {
      NetworkSpec spec = std::get<NetworkSpec>(config.network);
      spec.seed = derive_seed(spec.seed, kTagNetwork, rep);
      Graph g = generate_ws(spec);
      Rng sd_rng(derive_seed(config.seed, kTagSdPair, rep));
      const int offset = config.sd_rule.value_or(default_sd_rule(spec.n));
      const auto [s, d] = choose_sd_pair(g, offset, sd_rng);
      g.set_endpoints(s, d);
      logs[rep] = run_series(g, settings);
    }
  });
  return logs;
}

BatchResult run_batch(const ExperimentConfig& config, int jobs) {
  const auto logs = run_batch_series(config, jobs);
  BatchResult result;
  result.per_replication.reserve(logs.size());
  for (const auto& log : logs)
    result.per_replication.push_back(
        summarize({log}, config.exclude_first_round));
  result.pooled = summarize(logs, config.exclude_first_round);
  return result;
}

double run_longrun(const Graph& g, const AgentParams& params, int rounds,
                   std::uint64_t seed) {
  // Same loop as run_series minus the log; long runs only need the final
  // assignment.
  if (rounds < 1) throw Error("long run needs at least 1 round");
  params.validate();
  Rng rng(seed);
  PriceAssignment prices(g, 0.0);
  const double unbounded = std::numeric_limits<double>::infinity();
  for (int round = 0; round < rounds; ++round) {
    RoundOutcome outcome = play_round(g, prices, unbounded, rng);
    prices = update_prices(g, prices, outcome.selected_path, params);
  }
  return min_cost(g, prices).cost;
}

DivergenceCheck lemma_divergence_check(int num_paths, int hops, double sigma,
                                       double rho, int probe_rounds,
                                       std::uint64_t seed) {
  if (probe_rounds < 2) throw Error("probe_rounds must be >= 2");
  const Graph g = make_parallel_paths(num_paths, hops);
  AgentParams params{sigma, rho, std::nullopt};
  params.validate();

  DivergenceCheck check;
  check.predicted = sigma / rho > static_cast<double>(num_paths - 1);

  Rng rng(seed);
  PriceAssignment prices(g, 0.0);
  const double unbounded = std::numeric_limits<double>::infinity();
  const int mid = probe_rounds / 2;
  for (int round = 0; round < probe_rounds; ++round) {
    RoundOutcome outcome = play_round(g, prices, unbounded, rng);
    prices = update_prices(g, prices, outcome.selected_path, params);
    if (round + 1 == mid) check.cost_mid = min_cost(g, prices).cost;
  }
  check.cost_end = min_cost(g, prices).cost;
  check.diverges = check.cost_end > check.cost_mid && check.cost_end > 0.0;
  return check;
}

SummaryStats summarize(const std::vector<SeriesLog>& logs,
                       bool exclude_first_round) {
  if (logs.empty()) throw EmptyLog("no series logs to summarize");

  long long rounds_used = 0, feasible = 0;
  long long price_obs = 0, cp_obs = 0;
  double sum_price = 0.0, sum_cp_price = 0.0, sum_cost = 0.0;
  double sum_payoff = 0.0;
  long long sum_hops = 0;
  for (const auto& log : logs) {
    const std::size_t first = exclude_first_round ? 1 : 0;
    for (std::size_t t = first; t < log.outcomes.size(); ++t) {
      const RoundOutcome& outcome = log.outcomes[t];
      const PriceAssignment& prices = log.prices_by_round[t];
      ++rounds_used;
      if (outcome.feasible) ++feasible;
      sum_cost += outcome.cost;
      sum_hops += outcome.hops;
      for (NodeId v = 0; v < prices.size(); ++v) {
        if (prices.is_terminal(v)) continue;
        sum_price += prices.token(v);
        ++price_obs;
        sum_payoff += outcome.payoffs[v];
      }
      for (NodeId v : outcome.selected_path) {
        if (prices.is_terminal(v)) continue;
        sum_cp_price += prices.token(v);
        ++cp_obs;
      }
    }
  }
  SummaryStats stats;
  stats.rounds_used = rounds_used;
  if (rounds_used == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    stats.efficiency = stats.mean_price = stats.mean_price_in_cp = nan;
    stats.mean_cost = stats.mean_profit = stats.mean_length = nan;
    return stats;
  }
  stats.efficiency = static_cast<double>(feasible) / rounds_used;
  stats.mean_price = price_obs ? sum_price / price_obs : 0.0;
  stats.mean_price_in_cp = cp_obs ? sum_cp_price / cp_obs : 0.0;
  stats.mean_cost = sum_cost / rounds_used;
  stats.mean_profit = price_obs ? sum_payoff / price_obs : 0.0;
  stats.mean_length = static_cast<double>(sum_hops) / rounds_used;
  return stats;
}

std::vector<SurveyRow> run_cost_survey(const SurveySettings& settings,
                                       int jobs) {
  settings.agent_params.validate();
  if (settings.networks_per_config < 1 || settings.rounds < 1 ||
      settings.degree_min < 2 || settings.degree_max < settings.degree_min)
    throw ConfigError("bad survey settings");

  struct Cell {
    int n;
    double p;
    int k;
    int index;
  };
  std::vector<Cell> cells;
  for (int n : settings.sizes)
    for (double p : settings.rewiring_ps)
      for (int k = settings.degree_min; k <= settings.degree_max; ++k)
        for (int i = 0; i < settings.networks_per_config; ++i)
          cells.push_back({n, p, k, i});

  std::vector<SurveyRow> rows(cells.size());
  parallel_for(static_cast<int>(cells.size()), jobs, [&](int idx) {
    const Cell& cell = cells[idx];
    const std::uint64_t cell_tag =
        derive_seed(kTagSurvey,
                    (static_cast<std::uint64_t>(cell.n) << 32) ^
                        (static_cast<std::uint64_t>(cell.k) << 16) ^
                        static_cast<std::uint64_t>(cell.p * 1000.0));
    NetworkSpec spec;
    spec.n = cell.n;
    spec.k = cell.k;
    spec.p = cell.p;
    spec.seed = derive_seed(settings.seed, cell_tag, cell.index);
    Graph g = generate_ws(spec);
    Rng sd_rng(derive_seed(settings.seed, cell_tag ^ kTagSdPair, cell.index));
    const auto [s, d] =
        choose_sd_pair(g, default_sd_rule(cell.n), sd_rng);
    g.set_endpoints(s, d);

    SurveyRow row;
    row.n = cell.n;
    row.k = cell.k;
    row.p = cell.p;
    row.network_seed = spec.seed;
    row.disjoint_paths = node_disjoint_paths(g);
    row.apl = average_path_length(g);
    row.clustering = clustering_coefficient(g);
    row.final_cost = run_longrun(
        g, settings.agent_params, settings.rounds,
        derive_seed(settings.seed, cell_tag ^ kTagSeries, cell.index));
    rows[idx] = row;
  });
  return rows;
}

std::string batch_csv(const BatchResult& result) {
  std::ostringstream out;
  out << "replication,pooled,efficiency,mean_price,mean_price_in_cp,"
         "mean_cost,mean_profit,mean_length,rounds_used\n";
  auto row = [&](long long rep, int pooled, const SummaryStats& s) {
    out << rep << "," << pooled << "," << fmt_double(s.efficiency) << ","
        << fmt_double(s.mean_price) << "," << fmt_double(s.mean_price_in_cp)
        << "," << fmt_double(s.mean_cost) << "," << fmt_double(s.mean_profit)
        << "," << fmt_double(s.mean_length) << "," << s.rounds_used << "\n";
  };
  for (std::size_t i = 0; i < result.per_replication.size(); ++i)
    row(static_cast<long long>(i), 0, result.per_replication[i]);
  row(-1, 1, result.pooled);
  return out.str();
}

std::string series_rounds_csv(const std::vector<SeriesLog>& logs) {
  std::ostringstream out;
  out << "series,round,cost,hops,feasible,path\n";
  for (std::size_t s = 0; s < logs.size(); ++s) {
    for (std::size_t t = 0; t < logs[s].outcomes.size(); ++t) {
      const RoundOutcome& o = logs[s].outcomes[t];
      out << s << "," << (t + 1) << "," << fmt_double(o.cost) << "," << o.hops
          << "," << (o.feasible ? 1 : 0) << ",";
      for (std::size_t i = 0; i < o.selected_path.size(); ++i) {
        if (i) out << ";";
        out << o.selected_path[i];
      }
      out << "\n";
    }
  }
  return out.str();
}

std::string series_nodes_csv(const std::vector<SeriesLog>& logs) {
  std::ostringstream out;
  out << "series,round,node,price,payoff,on_path\n";
  for (std::size_t s = 0; s < logs.size(); ++s) {
    for (std::size_t t = 0; t < logs[s].outcomes.size(); ++t) {
      const RoundOutcome& o = logs[s].outcomes[t];
      const PriceAssignment& prices = logs[s].prices_by_round[t];
      std::vector<char> on_path(prices.size(), 0);
      for (NodeId v : o.selected_path) on_path[v] = 1;
      for (NodeId v = 0; v < prices.size(); ++v) {
        out << s << "," << (t + 1) << "," << v << ","
            << fmt_double(prices.token(v)) << "," << fmt_double(o.payoffs[v])
            << "," << static_cast<int>(on_path[v]) << "\n";
      }
    }
  }
  return out.str();
}

std::string survey_csv(const std::vector<SurveyRow>& rows) {
  std::ostringstream out;
  out << "n,k,p,network_seed,disjoint_paths,apl,clustering,final_cost\n";
  for (const SurveyRow& r : rows) {
    out << r.n << "," << r.k << "," << fmt_double(r.p) << "," << r.network_seed
        << "," << r.disjoint_paths << "," << fmt_double(r.apl) << ","
        << fmt_double(r.clustering) << "," << fmt_double(r.final_cost) << "\n";
  }
  return out.str();
}

}  // namespace tradenet
