#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hoproute/errors.hpp"

namespace hoproute {

using NodeId = std::int32_t;

// Canonical unordered pair: u < v.
struct Edge {
  NodeId u;
  NodeId v;
};

inline Edge make_edge(NodeId a, NodeId b) {
  return a < b ? Edge{a, b} : Edge{b, a};
}

// Shared node/edge structure for capacitated and weighted graphs.
class GraphTopology {
 public:
  GraphTopology() = default;
  GraphTopology(int node_count, std::vector<Edge> edges);

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int i) const { return edges_[static_cast<std::size_t>(i)]; }

  // -1 when {u, v} is not an edge.
  int edge_index(NodeId u, NodeId v) const;

  // (neighbor, edge id) pairs.
  const std::vector<std::pair<NodeId, int>>& neighbors(NodeId v) const {
    return adjacency_[static_cast<std::size_t>(v)];
  }

 private:
  int node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::pair<NodeId, int>>> adjacency_;
  std::unordered_map<std::int64_t, int> index_;
};

struct CapacitatedGraph {
  GraphTopology topo;
  Eigen::VectorXd capacity;         // per edge, positive
  std::vector<char> virtual_edge;   // completion marks; empty means none
  double aspect_ratio = 1.0;        // L such that capacities lie in [1/L, L]

  int node_count() const { return topo.node_count(); }
  int edge_count() const { return topo.edge_count(); }
  bool is_virtual(int e) const {
    return !virtual_edge.empty() && virtual_edge[static_cast<std::size_t>(e)] != 0;
  }

  // Merges duplicate unordered pairs into summed capacities; rejects
  // self-loops and non-positive capacities.
  static CapacitatedGraph create(int node_count,
                                 const std::vector<std::tuple<NodeId, NodeId, double>>& edges);
};

struct WeightedGraph {
  GraphTopology topo;
  Eigen::VectorXd weight;  // per edge, strictly positive

  int node_count() const { return topo.node_count(); }
  int edge_count() const { return topo.edge_count(); }
};

struct RoutePath {
  std::vector<NodeId> nodes;  // length >= 1

  int hops() const { return static_cast<int>(nodes.size()) - 1; }
  NodeId source() const { return nodes.front(); }
  NodeId target() const { return nodes.back(); }
  bool is_simple() const;
  bool operator==(const RoutePath&) const = default;
};

using FlowVector = Eigen::VectorXd;

// Sparse (source, target) -> amount map; zero entries omitted.
struct Demand {
  std::map<std::pair<NodeId, NodeId>, double> entries;

  void add(NodeId s, NodeId t, double amount);
  double total() const;
};

constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

FlowVector path_flow(const RoutePath& p, const GraphTopology& topo);
inline FlowVector path_flow(const RoutePath& p, const CapacitatedGraph& g) {
  return path_flow(p, g.topo);
}
inline FlowVector path_flow(const RoutePath& p, const WeightedGraph& g) {
  return path_flow(p, g.topo);
}

double path_weight(const RoutePath& p, const WeightedGraph& g);

double congestion(const FlowVector& f, const CapacitatedGraph& g);

RoutePath simplify_path(const RoutePath& p);

// Minimum weight over u-v paths with at most h hops; +infinity when none.
double hop_distance(const WeightedGraph& g, NodeId u, NodeId v, int h);

Demand d1_demand(const CapacitatedGraph& g);

CapacitatedGraph complete_graph(const CapacitatedGraph& g, int completion_exponent);

// Hop-limited shortest path tree from one source: dist[k][v] is the least
// weight of a source-v walk using exactly at most k hops.
class HopLimitedPaths {
 public:
  HopLimitedPaths(const WeightedGraph& g, NodeId source, int hop_bound);

  NodeId source() const { return source_; }
  int hop_bound() const { return hop_bound_; }

  // Min over all hop budgets up to the bound; +inf when unreachable.
  double distance(NodeId v) const { return best_dist_[static_cast<std::size_t>(v)]; }

  // A minimum-weight walk from source to v with at most hop_bound hops.
  RoutePath path_to(NodeId v) const;

 private:
  NodeId source_;
  int hop_bound_;
  int n_;
  std::vector<double> best_dist_;
  std::vector<int> best_layer_;
  std::vector<std::vector<NodeId>> parent_;  // per layer
};

}  // namespace hoproute
