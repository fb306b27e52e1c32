#include "tradenet/agents.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace tradenet {

void AgentParams::validate() const {
  // sigma = rho = 0 is allowed as the degenerate frozen-price run.
  if (!(sigma >= 0.0) || !std::isfinite(sigma))
    throw Error("sigma must be finite and nonnegative");
  if (!(rho >= 0.0) || !std::isfinite(rho))
    throw Error("rho must be finite and nonnegative");
  if (cap && (!(*cap > 0.0) || !std::isfinite(*cap)))
    throw Error("price cap must be finite and positive");
}

PriceInitializer PriceInitializer::Constant(double value) {
  PriceInitializer init;
  init.mode = Mode::kConstant;
  init.constant = value;
  return init;
}

PriceInitializer PriceInitializer::Bootstrap(std::vector<double> sample) {
  PriceInitializer init;
  init.mode = Mode::kBootstrap;
  init.sample = std::move(sample);
  return init;
}

PriceInitializer PriceInitializer::UniformInt() {
  PriceInitializer init;
  init.mode = Mode::kUniformInt;
  return init;
}

void PriceInitializer::validate() const {
  switch (mode) {
    case Mode::kConstant:
      if (constant < 0.0 || !std::isfinite(constant))
        throw Error("constant initial price must be nonnegative and finite");
      break;
    case Mode::kBootstrap:
      if (sample.empty())
        throw EmptySample("bootstrap initializer needs a nonempty sample");
      for (double v : sample)
        if (v < 0.0 || !std::isfinite(v))
          throw Error("bootstrap sample values must be nonnegative and finite");
      break;
    case Mode::kUniformInt:
      break;
  }
}

PriceAssignment init_prices(const Graph& g, const PriceInitializer& init,
                            Rng& rng) {
  init.validate();
  PriceAssignment prices(g, 0.0);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.is_terminal(v)) continue;
    switch (init.mode) {
      case PriceInitializer::Mode::kConstant:
        prices.set_token(v, init.constant);
        break;
      case PriceInitializer::Mode::kBootstrap:
        prices.set_token(v, init.sample[uniform_below(rng, init.sample.size())]);
        break;
      case PriceInitializer::Mode::kUniformInt:
        prices.set_token(v, static_cast<double>(uniform_int(rng, 0, 100)));
        break;
    }
  }
  return prices;
}

PriceAssignment update_prices(const Graph& g, const PriceAssignment& prices,
                              const std::vector<NodeId>& selected_path,
                              const AgentParams& params) {
  params.validate();
  const Micro up = to_micro(params.sigma);
  const Micro down = to_micro(params.rho);
  const Micro cap = params.cap ? to_micro(*params.cap)
                               : std::numeric_limits<Micro>::max();
  std::vector<char> on_path(g.node_count(), 0);
  for (NodeId v : selected_path) on_path[v] = 1;

  PriceAssignment next = prices;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.is_terminal(v)) continue;
    const Micro current = prices.micro(v);
    next.set_micro(v, on_path[v] ? std::min(current + up, cap)
                                 : std::max<Micro>(current - down, 0));
  }
  return next;
}

ConditionalDeltas conditional_deltas(
    const Graph& g, const std::vector<PriceAssignment>& prices_by_round,
    const std::vector<std::vector<NodeId>>& paths_by_round) {
  if (prices_by_round.size() < 2)
    throw TooShort("conditional deltas need at least 2 rounds");
  if (paths_by_round.size() < prices_by_round.size() - 1)
    throw TooShort("missing selected path for some round");

  // Micro-exact accumulation: sums of integer deltas divide out exactly,
  // so a flooring-free rule log recovers (sigma, -rho) to the last bit.
  Micro sum_on = 0, sum_off = 0;
  long long n_on = 0, n_off = 0, inc_on = 0, dec_off = 0;
  for (std::size_t t = 0; t + 1 < prices_by_round.size(); ++t) {
    std::vector<char> on_path(g.node_count(), 0);
    for (NodeId v : paths_by_round[t]) on_path[v] = 1;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (g.is_terminal(v)) continue;
      const Micro delta =
          prices_by_round[t + 1].micro(v) - prices_by_round[t].micro(v);
      if (on_path[v]) {
        sum_on += delta;
        ++n_on;
        if (delta > 0) ++inc_on;
      } else {
        sum_off += delta;
        ++n_off;
        if (delta < 0) ++dec_off;
      }
    }
  }
  // One correctly-rounded division of exact integers, so a log whose deltas
  // all equal sigma yields the double sigma itself back.
  auto micro_mean = [](Micro sum, long long n) {
    return static_cast<double>(sum) /
           (static_cast<double>(n) * kMicroPerToken);
  };
  ConditionalDeltas out;
  out.mean_delta_on = n_on ? micro_mean(sum_on, n_on) : 0.0;
  out.mean_delta_off = n_off ? micro_mean(sum_off, n_off) : 0.0;
  out.p_increase_on = n_on ? static_cast<double>(inc_on) / n_on : 0.0;
  out.p_decrease_off = n_off ? static_cast<double>(dec_off) / n_off : 0.0;
  return out;
}

std::vector<double> load_price_sample(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sample file " + path);
  std::vector<double> sample;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    double v;
    if (ls >> v) {
      if (v < 0.0 || !std::isfinite(v))
        throw IoError("sample values must be nonnegative reals: " + line);
      sample.push_back(v);
    } else if (!line.empty() && line.find_first_not_of(" \t\r") !=
                                    std::string::npos) {
      throw IoError("malformed sample line: " + line);
    }
  }
  if (sample.empty()) throw EmptySample("sample file is empty: " + path);
  return sample;
}

}  // namespace tradenet
