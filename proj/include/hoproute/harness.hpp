#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hoproute/graph.hpp"
#include "hoproute/oblivious.hpp"

namespace hoproute {

// k node-disjoint paths of k nodes, cross edges tying each path to the first
// one position-by-position, and a root joined to every node of the first
// path. Unit capacities, n = k^2 + 1. Canonical demand: one unit between the
// endpoints of every path.
struct LowerBoundFamily {
  CapacitatedGraph graph;
  Demand demand;
  NodeId root;
  std::vector<std::pair<NodeId, NodeId>> endpoints;
};
LowerBoundFamily gen_lower_bound_family(int k);

// name in {grid, cycle, hypercube, random_regular}; unit capacities.
// params: grid rows cols; cycle n; hypercube dim; random_regular n degree.
CapacitatedGraph gen_standard(const std::string& name, const std::vector<int>& params,
                              std::uint64_t seed);

// Demand generators.
Demand demand_uniform_pairs(const CapacitatedGraph& g, int count, double amount,
                            std::uint64_t seed);
Demand demand_permutation(const CapacitatedGraph& g, double amount, std::uint64_t seed);
Demand demand_single_pair(NodeId s, NodeId t, double amount);

// Drop demand entries with no h-hop path in g.
Demand filter_routable(const CapacitatedGraph& g, const Demand& d, int h);

struct ExperimentSpec {
  struct Cell {
    std::string graph_name;
    CapacitatedGraph graph;
    Demand demand;
    int h = 1;
    std::uint64_t seed = 0;
  };
  std::vector<Cell> cells;
  int samples_per_pair = 100;
  RouterParams params;
};

struct ExperimentResult {
  struct Row {
    std::string graph;
    int n = 0, m = 0, h = 0;
    std::uint64_t seed = 0;
    double opt = 0.0, cong_est = 0.0, cong_stderr = 0.0, ratio = 0.0;
    int max_hop = 0, hop_cap = 0;
    long build_ms = 0, sample_ms = 0;
    std::string error;  // empty on success
  };
  std::vector<Row> rows;
};

// Builds a router per cell, compares Monte Carlo congestion against the
// exact oracle. Cells run in parallel up to HOPROUTE_THREADS (default 1);
// rows come back in cell order regardless.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// CSV with the fixed column set; timing columns are the only
// run-to-run-varying fields and can be masked for determinism checks.
std::string result_to_csv(const ExperimentResult& result, bool include_timing = true);
nlohmann::json result_to_json(const ExperimentResult& result);

}  // namespace hoproute
