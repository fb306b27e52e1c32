#ifndef TRADENET_ANALYSIS_HPP
#define TRADENET_ANALYSIS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "tradenet/centrality.hpp"
#include "tradenet/netgraph.hpp"

namespace tradenet {

struct RegressionResult {
  std::vector<double> coefficients;
  std::vector<double> standard_errors;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  double rmse = 0.0;
  long long n = 0;
};

// Least squares via a rank-revealing QR. With `standardize`, every design
// column and the response are centered and scaled to unit (sample) standard
// deviation and the fit has no intercept; R^2 always uses the centered total
// sum of squares. Throws RankDeficient, TooFewObservations, or
// DegenerateSample (zero response variance).
RegressionResult ols(const std::vector<std::vector<double>>& design,
                     const std::vector<double>& response, bool standardize);

// One threshold-free long run, reduced to what the cost models consume.
struct CostObservation {
  double final_cost = 0.0;
  double clustering = 0.0;
  double apl = 0.0;
  int disjoint_paths = 0;
};

enum class CostPredictor { kClustering, kAveragePathLength };

// Standardized interceptless fit of final cost on the chosen predictor
// interacted with indicator dummies for M in {1,2,3} (three columns).
// The dataset must already be restricted to M <= 3 (MOutOfRange otherwise).
RegressionResult cost_regression(const std::vector<CostObservation>& dataset,
                                 CostPredictor predictor);

// Plain-text report of the two competing cost models side by side, plus a
// machine-readable CSV of the same numbers.
std::string cost_regression_report(const RegressionResult& clustering_model,
                                   const RegressionResult& apl_model);
std::string cost_regression_csv(const RegressionResult& clustering_model,
                                const RegressionResult& apl_model);

struct AlphaSweepPoint {
  double alpha = 0.0;
  double r_squared = 0.0;
};
struct AlphaSweepResult {
  std::vector<AlphaSweepPoint> curve;
  double best_alpha = 0.0;
};

// R^2 of the simple regression of accumulated payoff on sd_alpha across
// intermediaries, for each alpha on the grid; best_alpha is the argmax.
// Throws PathExplosion from the enumeration when the instance is too big.
AlphaSweepResult alpha_sweep(const Graph& g,
                             const std::vector<double>& accumulated_payoffs,
                             const std::vector<double>& alphas,
                             std::size_t cap = 1000000);

std::vector<double> default_alpha_grid();  // 0, 0.5, ..., 50

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
};

// Welch's two-sample t statistic with Welch-Satterthwaite degrees of
// freedom. Throws DegenerateSample (size < 2 or no variance anywhere).
WelchResult welch_t(const std::vector<double>& sample_a,
                    const std::vector<double>& sample_b);

double pearson_correlation(const std::vector<double>& x,
                           const std::vector<double>& y);

}  // namespace tradenet

#endif  // TRADENET_ANALYSIS_HPP
