#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hoproute/graph.hpp"

namespace hoproute {

// Rooted weighted tree on a node subset, with each tree edge mapped to a
// host-graph path. Stored as parent pointers indexed by graph node id.
struct PartialTreeEmbedding {
  int graph_nodes = 0;
  NodeId root = -1;
  std::vector<char> in_tree;          // size graph_nodes
  std::vector<NodeId> parent;         // -1 for root and absent nodes
  std::vector<double> parent_weight;  // w_T of the edge to the parent
  std::vector<RoutePath> parent_path; // host path from node to its parent

  bool contains(NodeId v) const {
    return v >= 0 && v < graph_nodes && in_tree[static_cast<std::size_t>(v)] != 0;
  }
  std::vector<NodeId> tree_nodes() const;
  int tree_node_count() const;

  static PartialTreeEmbedding single_node(int graph_nodes, NodeId v);
};

// Concatenation of mapped paths along the unique tree path from u to v.
RoutePath tree_route(const PartialTreeEmbedding& emb, NodeId u, NodeId v);

// d_T(u, v): sum of tree edge weights along the tree path.
double tree_distance(const PartialTreeEmbedding& emb, NodeId u, NodeId v);

// Max hops of tree_route over all pairs in V(T); 0 for singleton trees.
int max_route_hops(const PartialTreeEmbedding& emb);

struct Violation {
  enum class Kind {
    BrokenTree,
    EndpointMismatch,
    PathNotInGraph,
    DominationViolation,
  };
  Kind kind;
  std::string detail;
};

// Empty result iff the tree is valid, mapped paths live in the host graph
// with matching endpoints, and every tree edge dominates its mapped path
// (1e-9 additive tolerance on weights).
std::vector<Violation> validate_embedding(const PartialTreeEmbedding& emb,
                                          const WeightedGraph& host);

struct EmbedConfig {
  double c_beta = 4.0;        // hop cap = ceil(c_beta * log2(n)^3 / eps) * h
  int beta_cap_override = 0;  // nonzero replaces the formula (total hops)
  int max_retries = 50;       // resamples before giving up on the hop cap
  double guard_scale = 1.0;   // scales the padding guard band
  int level_hop_budget = 0;   // 0 means the routing hop bound h
  int max_levels = 64;
};

int embedding_hop_cap(int n, int h, double eps_target, const EmbedConfig& cfg);

// g with every non-edge added at weight n^2 * aspect; identity for complete graphs.
// Sampled embeddings map tree edges to paths in this completed host.
WeightedGraph completed_weighted(const WeightedGraph& g);

// Sum over graph edges {u,v} with both endpoints embedded of c_uv times the flow
// of the tree route between u and v.
FlowVector d1_load_flow(const PartialTreeEmbedding& emb, const CapacitatedGraph& g);

// Surrogate sampler: hierarchical hop-bounded ball carving at geometric
// weight scales. Dominating by construction; the hop cap is enforced by
// resampling. Nodes that land in a guard band around a cluster boundary are
// left out of the tree.
PartialTreeEmbedding sample_partial_embedding(const WeightedGraph& g, int h,
                                              double eps_target, std::uint64_t seed,
                                              const EmbedConfig& cfg = {});

struct EmbeddingDistribution {
  struct Entry {
    double prob;
    PartialTreeEmbedding embedding;
    // Weights of the host graph the embedding was sampled against, so the
    // dominating property can be re-checked later; empty when unknown.
    Eigen::VectorXd host_weight;
  };
  std::vector<Entry> entries;

  // Annotations; valid once `verified` is set.
  int dilation_hops = 0;  // certified max hops of any tree route
  double epsilon = 0.0;   // exclusion target the builder enforced
  double alpha = 0.0;     // exact D1 congestion
  bool verified = false;
  bool converged = true;
};

struct DistributionReport {
  double beta_emp = 0.0;                 // max hops(route)/h observed
  std::vector<double> epsilon_emp;       // per node exclusion frequency
  double alpha_emp = 0.0;                // congestion of the mean D1 load
  Eigen::MatrixXd stretch_emp;           // per pair; NaN when undefined
};

// Exact measurement over a finite distribution. Stretch compares tree
// distances against h-hop distances in `host`.
DistributionReport measure_distribution(const EmbeddingDistribution& dist,
                                        const WeightedGraph& host,
                                        const CapacitatedGraph& capacities, int h);

// Monte Carlo measurement of a sampler.
DistributionReport measure_sampler(
    const std::function<PartialTreeEmbedding(std::uint64_t)>& sampler, int num_samples,
    const WeightedGraph& host, const CapacitatedGraph& capacities, int h,
    std::uint64_t seed);

// Debug/test dump: tree edges as [u, v, w] plus edge_map node-id arrays.
nlohmann::json embedding_to_json(const PartialTreeEmbedding& emb);
PartialTreeEmbedding embedding_from_json(const nlohmann::json& j);

}  // namespace hoproute
