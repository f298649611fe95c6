#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hoproute/d1_router.hpp"
#include "hoproute/embedding.hpp"
#include "hoproute/graph.hpp"
#include "hoproute/opt_oracle.hpp"

namespace hoproute {

struct RouterParams {
  int completion_exponent = 6;
  int r = 0;               // cover-path tree count; 0 = ceil(2 log2 n)
  int retry_cap = 10000;   // joint rejection draws before giving up
  MwuConfig mwu;           // eps/h are overridden per stage
};

struct ObliviousRouter {
  CapacitatedGraph base;     // the input graph; emitted paths live here
  CapacitatedGraph completed;  // completion with virtual-edge marks
  EmbeddingDistribution t1;  // cover-path router, exclusion eps1 = 1/(4h)
  EmbeddingDistribution t2;  // final router, exclusion eps2 = 1/(2 r dilation1)
  int h = 1;
  int r = 1;
  int retry_cap = 10000;
  int hop_cap = 0;  // certified max hops of any emitted path
  double eps1 = 0.0, eps2 = 0.0;
};

ObliviousRouter build_router(const CapacitatedGraph& g, int h, const RouterParams& params,
                             std::uint64_t seed);

// One oblivious s-t path: r cover paths from t1 trees conditioned on
// containing s and t, then joint rejection sampling of a t2 tree containing
// all cover-path nodes whose simplified s-t route stays on real edges.
// Pure given (router, s, t, seed).
RoutePath sample_path(const ObliviousRouter& router, NodeId s, NodeId t,
                      std::uint64_t seed);

struct RouteReport {
  FlowVector mean_flow;    // indexed by base edges
  FlowVector stderr_flow;  // per-edge standard error of the mean
  double congestion_value = 0.0;
  int max_hops = 0;  // across all sampled paths
};

RouteReport route_demand(const ObliviousRouter& router, const Demand& d,
                         int samples_per_pair, std::uint64_t seed);

struct IntegralReport {
  std::vector<RoutePath> paths;
  double max_congestion = 0.0;
  int max_hops = 0;
};

IntegralReport integral_route(const ObliviousRouter& router,
                              const std::vector<std::pair<NodeId, NodeId>>& requests,
                              std::uint64_t seed);

struct SubflowReport {
  struct PairStats {
    NodeId s, t;
    double gamma_hat = 0.0;    // single-tree witness-cover failure frequency
    double gamma_pred = 0.0;   // (hop(P*) + 1) / (4h)
    double joint_hat = 0.0;    // all r cover trees fail
    double joint_pred = 0.0;   // gamma_hat^r
  };
  std::vector<PairStats> pairs;
};

// Measures the witness-cover failure events of the t1 distribution against
// an optimal decomposition from the oracle.
SubflowReport subflow_diagnostics(const ObliviousRouter& router, const Demand& d,
                                  const OptResult& witness, int samples,
                                  std::uint64_t seed);

nlohmann::json router_to_json(const ObliviousRouter& router);
ObliviousRouter router_from_json(const nlohmann::json& j);

}  // namespace hoproute
