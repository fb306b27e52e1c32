#include "tradenet/analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "tradenet/format.hpp"

namespace tradenet {

namespace {

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double sample_variance(const std::vector<double>& xs, double mean) {
  double s = 0.0;
  for (double x : xs) s += (x - mean) * (x - mean);
  return s / static_cast<double>(xs.size() - 1);
}

}  // namespace

RegressionResult ols(const std::vector<std::vector<double>>& design,
                     const std::vector<double>& response, bool standardize) {
  const long long n = static_cast<long long>(design.size());
  if (n == 0 || design[0].empty()) throw TooFewObservations("empty design");
  const long long p = static_cast<long long>(design[0].size());
  if (static_cast<long long>(response.size()) != n)
    throw Error("design and response sizes differ");
  if (n <= p)
    throw TooFewObservations("need more observations than coefficients");

  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n);
  for (long long i = 0; i < n; ++i) {
    if (static_cast<long long>(design[i].size()) != p)
      throw Error("ragged design matrix");
    for (long long j = 0; j < p; ++j) X(i, j) = design[i][j];
    y(i) = response[i];
  }

  const double y_mean = y.mean();
  double ss_tot = (y.array() - y_mean).matrix().squaredNorm();
  if (ss_tot <= 0.0)
    throw DegenerateSample("response has zero variance");

  if (standardize) {
    for (long long j = 0; j < p; ++j) {
      const double m = X.col(j).mean();
      const double sd =
          std::sqrt((X.col(j).array() - m).matrix().squaredNorm() / (n - 1));
      if (sd <= 0.0)
        throw RankDeficient("constant design column cannot be standardized");
      X.col(j) = (X.col(j).array() - m) / sd;
    }
    const double y_sd = std::sqrt(ss_tot / (n - 1));
    y = (y.array() - y_mean) / y_sd;
    ss_tot = y.squaredNorm();  // centered and scaled: sum of squares
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < p) throw RankDeficient("design matrix is rank deficient");
  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd residuals = y - X * beta;
  const double ss_res = residuals.squaredNorm();

  RegressionResult result;
  result.n = n;
  result.coefficients.assign(beta.data(), beta.data() + p);
  result.r_squared = 1.0 - ss_res / ss_tot;
  // Standardized fits carry no intercept; raw fits are charged one mean.
  const double dof_scale =
      standardize ? static_cast<double>(n) / static_cast<double>(n - p)
                  : static_cast<double>(n - 1) / static_cast<double>(n - p);
  result.adj_r_squared = 1.0 - (1.0 - result.r_squared) * dof_scale;
  result.rmse = std::sqrt(ss_res / static_cast<double>(n));

  const double sigma2 = ss_res / static_cast<double>(n - p);
  const Eigen::MatrixXd xtx_inv =
      (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  result.standard_errors.resize(p);
  for (long long j = 0; j < p; ++j)
    result.standard_errors[j] = std::sqrt(sigma2 * xtx_inv(j, j));
  return result;
}

RegressionResult cost_regression(const std::vector<CostObservation>& dataset,
                                 CostPredictor predictor) {
  std::vector<std::vector<double>> design;
  std::vector<double> response;
  design.reserve(dataset.size());
  response.reserve(dataset.size());
  for (const CostObservation& obs : dataset) {
    if (obs.disjoint_paths < 1 || obs.disjoint_paths > 3)
      throw MOutOfRange("cost regression expects M in {1,2,3}; got " +
                        std::to_string(obs.disjoint_paths));
    const double value = predictor == CostPredictor::kClustering
                             ? obs.clustering
                             : obs.apl;
    std::vector<double> row(3, 0.0);
    row[obs.disjoint_paths - 1] = value;
    design.push_back(std::move(row));
    response.push_back(obs.final_cost);
  }
  return ols(design, response, /*standardize=*/true);
}

namespace {

void report_block(std::ostringstream& out, const char* label,
                  const RegressionResult& r) {
  out << label << "\n";
  for (std::size_t j = 0; j < r.coefficients.size(); ++j) {
    out << "  coefficient (M=" << (j + 1) << ")  " << std::setw(12)
        << fmt_double(r.coefficients[j]) << "   (se "
        << fmt_double(r.standard_errors[j]) << ")\n";
  }
  out << "  R^2        " << fmt_double(r.r_squared) << "\n";
  out << "  Adj. R^2   " << fmt_double(r.adj_r_squared) << "\n";
  out << "  Num. obs.  " << r.n << "\n";
  out << "  RMSE       " << fmt_double(r.rmse) << "\n";
}

}  // namespace

std::string cost_regression_report(const RegressionResult& clustering_model,
                                   const RegressionResult& apl_model) {
  std::ostringstream out;
  out << "Final cost on M-specific slopes (standardized, no intercept)\n\n";
  report_block(out, "Model: clustering coefficient", clustering_model);
  out << "\n";
  report_block(out, "Model: average path length", apl_model);
  return out.str();
}

std::string cost_regression_csv(const RegressionResult& clustering_model,
                                const RegressionResult& apl_model) {
  std::ostringstream out;
  out << "model,coef_m1,coef_m2,coef_m3,se_m1,se_m2,se_m3,r_squared,"
         "adj_r_squared,rmse,n\n";
  auto row = [&](const char* name, const RegressionResult& r) {
    out << name;
    for (double c : r.coefficients) out << "," << fmt_double(c);
    for (double s : r.standard_errors) out << "," << fmt_double(s);
    out << "," << fmt_double(r.r_squared) << "," << fmt_double(r.adj_r_squared)
        << "," << fmt_double(r.rmse) << "," << r.n << "\n";
  };
  row("clustering", clustering_model);
  row("apl", apl_model);
  return out.str();
}

AlphaSweepResult alpha_sweep(const Graph& g,
                             const std::vector<double>& accumulated_payoffs,
                             const std::vector<double>& alphas,
                             std::size_t cap) {
  if (alphas.empty()) throw Error("alpha grid is empty");
  if (static_cast<int>(accumulated_payoffs.size()) != g.node_count())
    throw Error("payoff vector size must match node count");
  const PathInventory inventory = enumerate_paths(g, cap);

  std::vector<NodeId> intermediaries;
  for (NodeId v = 0; v < g.node_count(); ++v)
    if (!g.is_terminal(v)) intermediaries.push_back(v);

  std::vector<double> payoff;
  payoff.reserve(intermediaries.size());
  for (NodeId v : intermediaries) payoff.push_back(accumulated_payoffs[v]);

  AlphaSweepResult result;
  result.curve.reserve(alphas.size());
  double best_r2 = -1.0;
  for (double alpha : alphas) {
    std::vector<double> x;
    x.reserve(intermediaries.size());
    for (NodeId v : intermediaries)
      x.push_back(sd_alpha(g, v, alpha, inventory));
    const double r = pearson_correlation(x, payoff);
    const double r2 = std::isnan(r) ? 0.0 : r * r;
    result.curve.push_back({alpha, r2});
    if (r2 > best_r2) {
      best_r2 = r2;
      result.best_alpha = alpha;
    }
  }
  return result;
}

std::vector<double> default_alpha_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(i * 0.5);
  return grid;
}

WelchResult welch_t(const std::vector<double>& sample_a,
                    const std::vector<double>& sample_b) {
  if (sample_a.size() < 2 || sample_b.size() < 2)
    throw DegenerateSample("both samples need at least 2 values");
  const double mean_a = mean_of(sample_a);
  const double mean_b = mean_of(sample_b);
  const double var_a = sample_variance(sample_a, mean_a);
  const double var_b = sample_variance(sample_b, mean_b);
  const double na = static_cast<double>(sample_a.size());
  const double nb = static_cast<double>(sample_b.size());
  const double se2 = var_a / na + var_b / nb;
  if (se2 <= 0.0)
    throw DegenerateSample("no variance in either sample");
  WelchResult result;
  result.t = (mean_a - mean_b) / std::sqrt(se2);
  result.df = se2 * se2 /
              (var_a * var_a / (na * na * (na - 1.0)) +
               var_b * var_b / (nb * nb * (nb - 1.0)));
  return result;
}

double pearson_correlation(const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw Error("correlation needs two equal-length samples of size >= 2");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0)
    return std::numeric_limits<double>::quiet_NaN();
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace tradenet
