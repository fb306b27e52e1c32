#ifndef TRADENET_REPRO_HPP
#define TRADENET_REPRO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tradenet/analysis.hpp"
#include "tradenet/expt.hpp"

namespace tradenet::repro {

// One pass/fail line of a reproduction report.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

bool all_passed(const std::vector<CheckResult>& checks);
void print_report(const std::vector<CheckResult>& checks);

// Divergence grid: M in {1..5} x hops in {2,3,4} x sigma/rho in
// {0.5, 1.5, 2.4, 3.5, 4.5} (rho = 1), skipping exact boundary cells
// sigma/rho == M-1. Passes when measured divergence equals the predicate
// sigma/rho > M-1 in every cell.
std::vector<CheckResult> check_divergence_grid(int probe_rounds = 1000);

// Checks evaluated on a threshold-free cost survey dataset, grouped by what
// they establish. check_cost_survey concatenates all three groups.
//
// Absorption: final cost exactly 0 on every instance with M >= 4, and mean
// final cost strictly decreasing over M = 1, 2, 3.
std::vector<CheckResult> check_survey_absorption(
    const std::vector<SurveyRow>& rows);
// Path-length effect: Pearson corr(final cost, APL) >= 0.5 within each M in
// {1,2,3}; per size, p=0.1 mean cost > p=1 mean cost with |Welch t| > 2.6.
std::vector<CheckResult> check_survey_apl_effect(
    const std::vector<SurveyRow>& rows);
// Competing cost models: standardized R^2 of the APL model beats the
// clustering model by >= 0.05 on the M <= 3 subset.
std::vector<CheckResult> check_survey_regression(
    const std::vector<SurveyRow>& rows);

std::vector<CheckResult> check_cost_survey(const std::vector<SurveyRow>& rows);

// Threshold-100 batches (15 rounds, sigma 2.6 / rho 1.2, bootstrapped
// initial prices) on WS(n, k, p=0.1) vs WS(n, k, p=1):
//  - efficiency(p=1) > efficiency(p=0.1) with |Welch t| > 2.6
//  - mean cost(p=1) < mean cost(p=0.1) with |Welch t| > 2.6
std::vector<CheckResult> check_threshold_batch(
    int n, int k, int replications, const std::vector<double>& bootstrap,
    std::uint64_t seed, int jobs);

}  // namespace tradenet::repro

#endif  // TRADENET_REPRO_HPP
