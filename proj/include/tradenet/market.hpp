#ifndef TRADENET_MARKET_HPP
#define TRADENET_MARKET_HPP

#include <cstdint>
#include <vector>

#include "tradenet/netgraph.hpp"
#include "tradenet/rng.hpp"

namespace tradenet {

// Prices are kept internally as integer micro-tokens (1e-6 tokens). Token
// values with at most six decimals are represented exactly, so equal-cost
// paths compare equal, sigma/rho updates close exactly, and runs are
// bit-reproducible. The public interface speaks tokens (doubles).
using Micro = std::int64_t;
constexpr Micro kMicroPerToken = 1000000;

Micro to_micro(double tokens);
double to_tokens(Micro m);

// Nonnegative price per intermediary node; S and D implicitly price 0 and
// cannot be assigned.
class PriceAssignment {
 public:
  // Every intermediary starts at `initial` tokens.
  PriceAssignment(const Graph& g, double initial = 0.0);

  int size() const { return static_cast<int>(micro_.size()); }
  double token(NodeId v) const { return to_tokens(micro_[v]); }
  Micro micro(NodeId v) const { return micro_[v]; }
  void set_token(NodeId v, double tokens);
  void set_micro(NodeId v, Micro m);
  bool is_terminal(NodeId v) const { return terminal_[v]; }

  bool operator==(const PriceAssignment& other) const {
    return micro_ == other.micro_;
  }

 private:
  std::vector<Micro> micro_;
  std::vector<char> terminal_;
};

struct PathCost {
  double cost = 0.0;  // sum of intermediary prices on the path, tokens
  int hops = 0;       // edge count
};

// One round of the game: the path that carried (or failed to carry) the
// trade, with per-node payoffs. A path is selected even when infeasible so
// the agents' update rule always has a well-defined on-path set; payoffs are
// all zero then.
struct RoundOutcome {
  std::vector<NodeId> selected_path;  // S ... D
  double cost = 0.0;
  int hops = 0;
  bool feasible = false;
  double threshold = 0.0;
  std::vector<double> payoffs;  // per node, tokens
};

// Lexicographic minimum of (total intermediary price, hop count) over all
// S-D paths. Label-setting search on pair weights; all weights nonnegative.
// Throws Disconnected.
PathCost min_cost(const Graph& g, const PriceAssignment& prices);

// Uniformly random path among those attaining the (cost, hops) minimum.
// Counts optimal paths through the tight-edge predecessor DAG and walks
// backward from D choosing predecessors proportionally; no enumeration.
// Throws Disconnected, or CountOverflow past 128-bit path counts.
std::vector<NodeId> select_cheapest_path(const Graph& g,
                                         const PriceAssignment& prices,
                                         Rng& rng);

// Selects a path, prices it, settles payoffs. When feasible, on-path
// intermediaries earn their price and S and D split the surplus
// (threshold - cost) equally. An infinite threshold models the
// threshold-free long run: trade always happens and the S/D surplus is
// undefined, so their payoffs are reported as 0.
RoundOutcome play_round(const Graph& g, const PriceAssignment& prices,
                        double threshold, Rng& rng);

}  // namespace tradenet

#endif  // TRADENET_MARKET_HPP
