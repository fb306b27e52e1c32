// tradenet: generate networks, run the intermediation-pricing dynamics, and
// reproduce the shipped analysis protocols from the command line.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tradenet/analysis.hpp"
#include "tradenet/expt.hpp"
#include "tradenet/format.hpp"
#include "tradenet/repro.hpp"

namespace fs = std::filesystem;
using namespace tradenet;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitCheckFailed = 4;

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string metrics_line(const Graph& g) {
  std::ostringstream out;
  out << "n=" << g.node_count() << " edges=" << g.edge_count()
      << " s=" << g.source() << " d=" << g.destination()
      << " apl=" << fmt_double(average_path_length(g))
      << " clustering=" << fmt_double(clustering_coefficient(g))
      << " diameter=" << diameter(g)
      << " disjoint_paths=" << node_disjoint_paths(g);
  return out.str();
}

fs::path default_out_dir() {
  if (const char* env = std::getenv("TRADENET_OUT_DIR")) return env;
  return ".";
}

struct GenerateOptions {
  NetworkSpec spec;
  std::optional<int> sd_rule;
  std::string out;
};

int cmd_generate(const GenerateOptions& opt) {
  Graph g = generate_ws(opt.spec);
  Rng sd_rng(derive_seed(opt.spec.seed, 0x67656e, 0));
  const int rule = opt.sd_rule.value_or(default_sd_rule(opt.spec.n));
  const auto [s, d] = choose_sd_pair(g, rule, sd_rng);
  g.set_endpoints(s, d);
  store_graph(g, opt.out);
  std::cout << metrics_line(g) << "\n";
  std::cout << "wrote " << opt.out << "\n";
  return kExitOk;
}

struct MetricsOptions {
  std::string graph_path;
  double alpha = 12.0;
  std::string csv_out;
  std::size_t cap = 1000000;
};

int cmd_metrics(const MetricsOptions& opt) {
  const Graph g = load_graph(opt.graph_path);
  std::cout << metrics_line(g) << "\n";
  if (!opt.csv_out.empty()) {
    const PathInventory inventory = enumerate_paths(g, opt.cap);
    write_file(opt.csv_out, centrality_csv(g, opt.alpha, inventory));
    std::cout << "wrote " << opt.csv_out << " (" << inventory.paths.size()
              << " simple paths)\n";
  }
  return kExitOk;
}

struct SimulateOptions {
  std::string config_path;
  std::string out_dir;
  int jobs = 1;
};

int cmd_simulate(const SimulateOptions& opt) {
  const ExperimentConfig config =
      ExperimentConfig::from_json_file(opt.config_path);
  const auto logs = run_batch_series(config, opt.jobs);
  BatchResult result;
  result.per_replication.reserve(logs.size());
  for (const auto& log : logs)
    result.per_replication.push_back(
        summarize({log}, config.exclude_first_round));
  result.pooled = summarize(logs, config.exclude_first_round);

  const fs::path dir =
      opt.out_dir.empty() ? default_out_dir() : fs::path(opt.out_dir);
  write_file(dir / "summary.csv", batch_csv(result));
  write_file(dir / "rounds.csv", series_rounds_csv(logs));
  write_file(dir / "nodes.csv", series_nodes_csv(logs));
  std::cout << "wrote " << (dir / "summary.csv").string() << ", "
            << (dir / "rounds.csv").string() << ", "
            << (dir / "nodes.csv").string() << "\n";
  if (result.pooled.rounds_used == 0)
    std::cerr << "warning: no rounds left after first-round exclusion; "
                 "summary row is empty (rounds_used=0)\n";
  return kExitOk;
}

struct LongrunOptions {
  std::string graph_path;
  NetworkSpec spec;
  bool have_spec = false;
  int rounds = 10000;
  double sigma = 2.4;
  double rho = 1.0;
  std::uint64_t run_seed = 0;
};

int cmd_longrun(const LongrunOptions& opt) {
  Graph g(2);
  if (!opt.graph_path.empty()) {
    g = load_graph(opt.graph_path);
  } else if (opt.have_spec) {
    g = generate_ws(opt.spec);
    Rng sd_rng(derive_seed(opt.spec.seed, 0x6c6f6e67, 0));
    const auto [s, d] = choose_sd_pair(g, default_sd_rule(opt.spec.n), sd_rng);
    g.set_endpoints(s, d);
  } else {
    throw ConfigError("longrun needs --graph or --n/--k/--p");
  }
  const double final_cost =
      run_longrun(g, {opt.sigma, opt.rho, std::nullopt}, opt.rounds,
                  opt.run_seed);
  std::cout << "final_cost=" << fmt_double(final_cost)
            << " rounds=" << opt.rounds
            << " disjoint_paths=" << node_disjoint_paths(g) << "\n";
  return kExitOk;
}

struct LemmaOptions {
  int paths = 2;
  int hops = 2;
  double sigma = 2.4;
  double rho = 1.0;
  int rounds = 1000;
};

int cmd_lemma(const LemmaOptions& opt) {
  const auto check =
      lemma_divergence_check(opt.paths, opt.hops, opt.sigma, opt.rho,
                             opt.rounds);
  std::cout << "predicted=" << (check.predicted ? "diverges" : "bounded")
            << " measured=" << (check.diverges ? "diverges" : "bounded")
            << " cost_mid=" << fmt_double(check.cost_mid)
            << " cost_end=" << fmt_double(check.cost_end) << "\n";
  return kExitOk;
}

struct AnalyzeOptions {
  std::string data_path;
  std::string report_out;
  std::string csv_out;
};

std::vector<SurveyRow> load_survey_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  std::string header;
  if (!std::getline(in, header) ||
      header != "n,k,p,network_seed,disjoint_paths,apl,clustering,final_cost")
    throw IoError("unexpected survey CSV header in " + path);
  std::vector<SurveyRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    SurveyRow row;
    std::istringstream fields(line);
    if (!(fields >> row.n >> row.k >> row.p >> row.network_seed >>
          row.disjoint_paths >> row.apl >> row.clustering >> row.final_cost))
      throw IoError("malformed survey CSV line: " + line);
    rows.push_back(row);
  }
  if (rows.empty()) throw IoError("survey CSV has no data rows: " + path);
  return rows;
}

int cmd_analyze(const AnalyzeOptions& opt) {
  const auto rows = load_survey_csv(opt.data_path);
  std::vector<CostObservation> dataset;
  std::size_t dropped = 0;
  for (const SurveyRow& r : rows) {
    if (r.disjoint_paths >= 1 && r.disjoint_paths <= 3)
      dataset.push_back({r.final_cost, r.clustering, r.apl, r.disjoint_paths});
    else
      ++dropped;
  }
  if (dataset.empty())
    throw ConfigError("no rows with M in {1,2,3} in " + opt.data_path);
  const auto cc = cost_regression(dataset, CostPredictor::kClustering);
  const auto apl = cost_regression(dataset, CostPredictor::kAveragePathLength);
  const std::string report = cost_regression_report(cc, apl);
  std::cout << report;
  std::cout << "(" << dataset.size() << " rows used, " << dropped
            << " rows with M > 3 dropped)\n";
  if (!opt.report_out.empty()) write_file(opt.report_out, report);
  if (!opt.csv_out.empty())
    write_file(opt.csv_out, cost_regression_csv(cc, apl));
  return kExitOk;
}

struct ReproduceOptions {
  std::string target;
  int reps = 0;       // 0 = target default
  int rounds = 0;     // 0 = target default
  int jobs = 1;
  std::uint64_t seed = 2024;
  std::string sample_path = "data/first_round_prices.txt";
  std::string out_dir;
};

int cmd_reproduce(const ReproduceOptions& opt) {
  std::vector<repro::CheckResult> checks;
  if (opt.target == "lemma") {
    checks = repro::check_divergence_grid(opt.rounds > 0 ? opt.rounds : 1000);
  } else if (opt.target == "fig6") {
    SurveySettings settings;
    settings.networks_per_config = opt.reps > 0 ? opt.reps : 200;
    settings.rounds = opt.rounds > 0 ? opt.rounds : 1000;
    settings.seed = opt.seed;
    const auto rows = run_cost_survey(settings, opt.jobs);
    if (!opt.out_dir.empty())
      write_file(fs::path(opt.out_dir) / "survey.csv", survey_csv(rows));
    checks = repro::check_cost_survey(rows);
  } else if (opt.target == "table2" || opt.target == "table3") {
    const auto sample = load_price_sample(opt.sample_path);
    const int reps = opt.reps > 0 ? opt.reps : 100;
    if (opt.target == "table2") {
      checks = repro::check_threshold_batch(26, 3, reps, sample, opt.seed,
                                            opt.jobs);
    } else {
      checks = repro::check_threshold_batch(50, 4, reps, sample, opt.seed,
                                            opt.jobs);
      const auto big = repro::check_threshold_batch(100, 4, reps, sample,
                                                    opt.seed, opt.jobs);
      checks.insert(checks.end(), big.begin(), big.end());
    }
  } else {
    throw ConfigError("unknown reproduce target '" + opt.target +
                      "' (expected table2, table3, fig6 or lemma)");
  }
  repro::print_report(checks);
  return repro::all_passed(checks) ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Intermediation-pricing game on complex networks: generators, "
               "metrics, agent-based dynamics, and reproduction protocols"};
  app.require_subcommand(1);

  GenerateOptions gen;
  auto* generate = app.add_subcommand(
      "generate", "Generate a connected Watts-Strogatz network file");
  generate->add_option("--n", gen.spec.n, "node count")->required();
  generate->add_option("--k", gen.spec.k, "mean degree")->required();
  generate->add_option("--p", gen.spec.p, "rewiring probability")->required();
  generate->add_option("--seed", gen.spec.seed, "generator seed");
  generate->add_option("--sd-rule", gen.sd_rule,
                       "S-D distance >= diameter - sd_rule");
  generate->add_option("--out", gen.out, "output graph file")->required();

  MetricsOptions met;
  auto* metrics = app.add_subcommand(
      "metrics", "Structural metrics (and optional per-node measures)");
  metrics->add_option("--graph", met.graph_path, "graph file")->required();
  metrics->add_option("--alpha", met.alpha,
                      "alpha for the length-weighted measure column");
  metrics->add_option("--csv", met.csv_out, "write per-node measures here");
  metrics->add_option("--cap", met.cap, "path enumeration cap");

  SimulateOptions sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Run a configured batch; write summary/rounds/nodes CSVs");
  simulate->add_option("--config", sim.config_path, "JSON config file")
      ->required();
  simulate->add_option("--out-dir", sim.out_dir,
                       "output directory (default $TRADENET_OUT_DIR or .)");
  simulate->add_option("--jobs", sim.jobs, "parallel replications");

  LongrunOptions lng;
  auto* longrun = app.add_subcommand(
      "longrun", "Threshold-free run from zero prices; print the final cost");
  longrun->add_option("--graph", lng.graph_path, "graph file");
  auto* lr_n = longrun->add_option("--n", lng.spec.n, "node count");
  longrun->add_option("--k", lng.spec.k, "mean degree");
  longrun->add_option("--p", lng.spec.p, "rewiring probability");
  longrun->add_option("--seed", lng.spec.seed, "network seed");
  longrun->add_option("--rounds", lng.rounds, "rounds (default 10000)");
  longrun->add_option("--sigma", lng.sigma, "on-path increment");
  longrun->add_option("--rho", lng.rho, "off-path decrement");
  longrun->add_option("--run-seed", lng.run_seed, "dynamics seed");

  LemmaOptions lem;
  auto* lemma = app.add_subcommand(
      "lemma", "Divergence check on the canonical M-parallel-paths instance");
  lemma->add_option("--paths", lem.paths, "number of disjoint paths (M)")
      ->required();
  lemma->add_option("--hops", lem.hops, "path length in hops")->required();
  lemma->add_option("--sigma", lem.sigma, "on-path increment");
  lemma->add_option("--rho", lem.rho, "off-path decrement");
  lemma->add_option("--rounds", lem.rounds, "probe rounds");

  AnalyzeOptions ana;
  auto* analyze = app.add_subcommand(
      "analyze", "Fit the competing cost models on a survey CSV");
  analyze->add_option("--data", ana.data_path, "survey CSV")->required();
  analyze->add_option("--report", ana.report_out, "write the text report");
  analyze->add_option("--csv", ana.csv_out, "write machine-readable results");

  ReproduceOptions rep;
  auto* reproduce = app.add_subcommand(
      "reproduce",
      "Run a named protocol (table2, table3, fig6, lemma) and report "
      "pass/fail checks");
  reproduce->add_option("target", rep.target, "protocol name")->required();
  reproduce->add_option("--reps", rep.reps, "replications / networks per cell");
  reproduce->add_option("--rounds", rep.rounds, "rounds per run");
  reproduce->add_option("--jobs", rep.jobs, "worker threads");
  reproduce->add_option("--seed", rep.seed, "base seed");
  reproduce->add_option("--sample", rep.sample_path,
                        "bootstrap sample file for the batch protocols");
  reproduce->add_option("--out", rep.out_dir, "also write datasets here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (generate->parsed()) return cmd_generate(gen);
    if (metrics->parsed()) return cmd_metrics(met);
    if (simulate->parsed()) return cmd_simulate(sim);
    if (longrun->parsed()) {
      lng.have_spec = lr_n->count() > 0;
      return cmd_longrun(lng);
    }
    if (lemma->parsed()) return cmd_lemma(lem);
    if (analyze->parsed()) return cmd_analyze(ana);
    if (reproduce->parsed()) return cmd_reproduce(rep);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DegenerateSpec& e) {
    std::cerr << "invalid spec: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}
