#pragma once

#include <map>
#include <utility>
#include <vector>

#include "hoproute/graph.hpp"

namespace hoproute {

struct OptResult {
  struct WitnessPath {
    RoutePath path;
    double weight;
  };
  double value = 0.0;  // +infinity when some demanded pair has no h-hop path
  std::map<std::pair<NodeId, NodeId>, std::vector<WitnessPath>> witness;
  Eigen::VectorXd dual_prices;  // nonnegative per-edge prices certifying value
  double dual_bound = 0.0;      // certified lower bound from the prices

  bool unroutable() const { return value == kInfiniteDistance; }
};

// Exact min-congestion h-hop routing of d on g, solved by column generation:
// a path-variable master LP priced by hop-limited shortest paths. Witness
// paths are simple and their congestion equals value within 1e-6 relative.
OptResult opt_hop_routing(const CapacitatedGraph& g, const Demand& d, int h);

// Independent oracle: explicit enumeration of all simple <=h-hop paths per
// pair (TooLarge beyond 10^4 paths for one pair) and a one-shot LP.
double brute_force_opt(const CapacitatedGraph& g, const Demand& d, int h);

}  // namespace hoproute
