#include "tradenet/repro.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <map>
#include <sstream>

#include "tradenet/format.hpp"

namespace tradenet::repro {

bool all_passed(const std::vector<CheckResult>& checks) {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

void print_report(const std::vector<CheckResult>& checks) {
  for (const CheckResult& c : checks)
    std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name
              << (c.detail.empty() ? "" : "  (" + c.detail + ")") << "\n";
}

std::vector<CheckResult> check_divergence_grid(int probe_rounds) {
  const double ratios[] = {0.5, 1.5, 2.4, 3.5, 4.5};
  int cells = 0, agree = 0;
  std::string first_failure;
  for (int m = 1; m <= 5; ++m) {
    for (int hops = 2; hops <= 4; ++hops) {
      for (double ratio : ratios) {
        if (ratio == static_cast<double>(m - 1)) continue;  // strict lemma
        const auto check =
            lemma_divergence_check(m, hops, ratio, 1.0, probe_rounds);
        ++cells;
        if (check.diverges == check.predicted) {
          ++agree;
        } else if (first_failure.empty()) {
          std::ostringstream oss;
          oss << "M=" << m << " hops=" << hops << " ratio=" << ratio
              << " predicted=" << check.predicted
              << " measured=" << check.diverges;
          first_failure = oss.str();
        }
      }
    }
  }
  CheckResult result;
  result.name = "divergence grid: measured == (sigma/rho > M-1)";
  result.passed = agree == cells;
  result.detail = std::to_string(agree) + "/" + std::to_string(cells) +
                  " cells" +
                  (first_failure.empty() ? "" : "; first failure " + first_failure);
  return {result};
}

namespace {

double mean_of(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

}  // namespace

std::vector<CheckResult> check_survey_absorption(
    const std::vector<SurveyRow>& rows) {
  std::vector<CheckResult> checks;

  // Exact absorption for M >= 4.
  {
    long long high_m = 0, nonzero = 0;
    for (const SurveyRow& r : rows)
      if (r.disjoint_paths >= 4) {
        ++high_m;
        if (r.final_cost != 0.0) ++nonzero;
      }
    CheckResult c;
    c.name = "M >= 4: final cost exactly 0";
    c.passed = high_m > 0 && nonzero == 0;
    c.detail = std::to_string(high_m) + " instances, " +
               std::to_string(nonzero) + " nonzero";
    checks.push_back(c);
  }

  // Strictly decreasing mean cost over M = 1, 2, 3.
  std::map<int, std::vector<double>> cost_by_m;
  for (const SurveyRow& r : rows)
    if (r.disjoint_paths >= 1 && r.disjoint_paths <= 3)
      cost_by_m[r.disjoint_paths].push_back(r.final_cost);
  {
    CheckResult c;
    c.name = "mean final cost strictly decreasing over M = 1, 2, 3";
    const bool populated = cost_by_m.count(1) && cost_by_m.count(2) &&
                           cost_by_m.count(3);
    double m1 = 0, m2 = 0, m3 = 0;
    if (populated) {
      m1 = mean_of(cost_by_m[1]);
      m2 = mean_of(cost_by_m[2]);
      m3 = mean_of(cost_by_m[3]);
    }
    c.passed = populated && m1 > m2 && m2 > m3;
    c.detail = "means " + fmt_double(m1) + " > " + fmt_double(m2) + " > " +
               fmt_double(m3);
    checks.push_back(c);
  }
  return checks;
}

std::vector<CheckResult> check_survey_apl_effect(
    const std::vector<SurveyRow>& rows) {
  std::vector<CheckResult> checks;

  // Cost tracks average path length within each M.
  for (int m = 1; m <= 3; ++m) {
    std::vector<double> costs, apls;
    for (const SurveyRow& r : rows)
      if (r.disjoint_paths == m) {
        costs.push_back(r.final_cost);
        apls.push_back(r.apl);
      }
    CheckResult c;
    c.name = "corr(final cost, APL) >= 0.5 within M=" + std::to_string(m);
    if (costs.size() < 3) {
      c.passed = false;
      c.detail = "only " + std::to_string(costs.size()) + " instances";
    } else {
      const double corr = pearson_correlation(costs, apls);
      c.passed = corr >= 0.5;
      c.detail = "corr = " + fmt_double(corr) + " over " +
                 std::to_string(costs.size()) + " instances";
    }
    checks.push_back(c);
  }

  // Small-world instances cost more than random ones, size by size, with
  // degree-matched composition on both sides.
  std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_size;
  for (const SurveyRow& r : rows) {
    auto& [sw, rnd] = by_size[r.n];
    (r.p == 1.0 ? rnd : sw).push_back(r.final_cost);
  }
  for (const auto& [n, samples] : by_size) {
    const auto& [sw, rnd] = samples;
    CheckResult c;
    c.name = "n=" + std::to_string(n) +
             ": p=0.1 mean cost > p=1 mean cost, |Welch t| > 2.6";
    const WelchResult w = welch_t(sw, rnd);
    c.passed = mean_of(sw) > mean_of(rnd) && std::abs(w.t) > 2.6;
    c.detail = "means " + fmt_double(mean_of(sw)) + " vs " +
               fmt_double(mean_of(rnd)) + ", t = " + fmt_double(w.t);
    checks.push_back(c);
  }

  return checks;
}

std::vector<CheckResult> check_survey_regression(
    const std::vector<SurveyRow>& rows) {
  // Competing cost models on the M <= 3 subset.
  std::vector<CostObservation> dataset;
  for (const SurveyRow& r : rows)
    if (r.disjoint_paths >= 1 && r.disjoint_paths <= 3)
      dataset.push_back({r.final_cost, r.clustering, r.apl, r.disjoint_paths});
  const double r2_apl =
      cost_regression(dataset, CostPredictor::kAveragePathLength).r_squared;
  const double r2_cc =
      cost_regression(dataset, CostPredictor::kClustering).r_squared;
  CheckResult c;
  c.name = "R^2(APL model) >= R^2(clustering model) + 0.05";
  c.passed = r2_apl - r2_cc >= 0.05;
  c.detail = "R^2 " + fmt_double(r2_apl) + " vs " + fmt_double(r2_cc);
  return {c};
}

std::vector<CheckResult> check_cost_survey(const std::vector<SurveyRow>& rows) {
  std::vector<CheckResult> checks = check_survey_absorption(rows);
  const auto apl = check_survey_apl_effect(rows);
  checks.insert(checks.end(), apl.begin(), apl.end());
  const auto regression = check_survey_regression(rows);
  checks.insert(checks.end(), regression.begin(), regression.end());
  return checks;
}

std::vector<CheckResult> check_threshold_batch(
    int n, int k, int replications, const std::vector<double>& bootstrap,
    std::uint64_t seed, int jobs) {
  // Welch comparisons pool per-round observations across replications
  // (a feasibility indicator and the selected-path cost per round, first
  // round excluded), the same unit the round-level tests report.
  struct Condition {
    std::vector<double> feasible;
    std::vector<double> cost;
  };
  auto run_condition = [&](double p) {
    ExperimentConfig config;
    config.network = NetworkSpec{n, k, p, seed};
    config.rounds = 15;
    config.replications = replications;
    config.threshold = 100.0;
    config.agent_params = {2.6, 1.2, std::nullopt};
    config.initializer = PriceInitializer::Bootstrap(bootstrap);
    config.seed = seed + static_cast<std::uint64_t>(p * 1000.0);
    Condition condition;
    for (const SeriesLog& log : run_batch_series(config, jobs)) {
      for (std::size_t t = 1; t < log.outcomes.size(); ++t) {
        condition.feasible.push_back(log.outcomes[t].feasible ? 1.0 : 0.0);
        condition.cost.push_back(log.outcomes[t].cost);
      }
    }
    return condition;
  };
  const Condition sw = run_condition(0.1);
  const Condition rnd = run_condition(1.0);

  const auto& eff_sw = sw.feasible;
  const auto& eff_rnd = rnd.feasible;
  const auto& cost_sw = sw.cost;
  const auto& cost_rnd = rnd.cost;

  const std::string label = "n=" + std::to_string(n);
  std::vector<CheckResult> checks;
  {
    const WelchResult w = welch_t(eff_rnd, eff_sw);
    CheckResult c;
    c.name = label + ": efficiency(random) > efficiency(small-world), "
                     "|Welch t| > 2.6";
    c.passed = mean_of(eff_rnd) > mean_of(eff_sw) && std::abs(w.t) > 2.6;
    c.detail = "means " + fmt_double(mean_of(eff_rnd)) + " vs " +
               fmt_double(mean_of(eff_sw)) + ", t = " + fmt_double(w.t);
    checks.push_back(c);
  }
  {
    const WelchResult w = welch_t(cost_rnd, cost_sw);
    CheckResult c;
    c.name = label + ": mean cost(random) < mean cost(small-world), "
                     "|Welch t| > 2.6";
    c.passed = mean_of(cost_rnd) < mean_of(cost_sw) && std::abs(w.t) > 2.6;
    c.detail = "means " + fmt_double(mean_of(cost_rnd)) + " vs " +
               fmt_double(mean_of(cost_sw)) + ", t = " + fmt_double(w.t);
    checks.push_back(c);
  }
  return checks;
}

}  // namespace tradenet::repro
