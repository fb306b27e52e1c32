#ifndef TRADENET_AGENTS_HPP
#define TRADENET_AGENTS_HPP

#include <optional>
#include <string>
#include <vector>

#include "tradenet/market.hpp"

namespace tradenet {

// The behavioral rule of thumb: raise by sigma after a round on the selected
// cheapest path, drop by rho otherwise, never below 0. `cap` (experiment
// fidelity) additionally clamps posted prices from above; the model runs
// uncapped by default. sigma = rho = 0 freezes prices (degenerate run).
struct AgentParams {
  double sigma = 2.6;
  double rho = 1.2;
  std::optional<double> cap;  // e.g. 100 in experiment mode

  void validate() const;
};

// How intermediaries pick their first-round prices.
struct PriceInitializer {
  enum class Mode { kConstant, kBootstrap, kUniformInt };
  Mode mode = Mode::kConstant;
  double constant = 0.0;          // kConstant
  std::vector<double> sample;     // kBootstrap: drawn i.i.d. with replacement

  static PriceInitializer Constant(double value);
  static PriceInitializer Bootstrap(std::vector<double> sample);
  static PriceInitializer UniformInt();  // integers on [0, 100]

  void validate() const;
};

// Round-to-round price changes conditioned on previous-round membership in
// the selected path. On a rule-generated log with no floor or cap events this
// recovers (sigma, -rho, 1, 1) exactly.
struct ConditionalDeltas {
  double mean_delta_on = 0.0;
  double mean_delta_off = 0.0;
  double p_increase_on = 0.0;
  double p_decrease_off = 0.0;
};

PriceAssignment init_prices(const Graph& g, const PriceInitializer& init,
                            Rng& rng);

// Pure: returns the next round's assignment, input untouched.
PriceAssignment update_prices(const Graph& g, const PriceAssignment& prices,
                              const std::vector<NodeId>& selected_path,
                              const AgentParams& params);

// `prices_by_round[t]` is the assignment posted in round t;
// `paths_by_round[t]` the path selected that round. Needs >= 2 rounds.
ConditionalDeltas conditional_deltas(
    const Graph& g, const std::vector<PriceAssignment>& prices_by_round,
    const std::vector<std::vector<NodeId>>& paths_by_round);

// One nonnegative real per line; blank lines skipped. Throws IoError or
// EmptySample.
std::vector<double> load_price_sample(const std::string& path);

}  // namespace tradenet

#endif  // TRADENET_AGENTS_HPP
