#pragma once

#include <cstdint>

#include <nlohmann/json_fwd.hpp>

#include "hoproute/embedding.hpp"
#include "hoproute/graph.hpp"

namespace hoproute {

struct MwuConfig {
  double eta = 0.2;            // multiplicative step size, in (0, 1]
  int max_rounds = 0;          // 0 = auto: 64 * ceil(log2 n)
  double alpha_target = 0.0;   // 0 = auto: 4 * best single-round load
  double eps = 0.1;            // per-node exclusion budget, in (0, 1/3)
  int h = 1;                   // hop bound passed to the sampler
  int completion_exponent = 6; // C in the reweighting additive term n^(-C-2)
  int min_rounds = 8;
  int candidates = 4;          // candidate embeddings per round; lowest cost wins
  EmbedConfig embed;
};

// Lagrangian reweighting of G against edge prices l (a probability vector
// over edges): weight_e = l_e / c_e + n^(-C-2).
WeightedGraph reweighted_graph(const CapacitatedGraph& g, const Eigen::VectorXd& prices,
                               int completion_exponent);

// Exact congestion of the expected D1 load of the distribution on G.
double route_d1_congestion(const EmbeddingDistribution& dist, const CapacitatedGraph& g);

// Multiplicative-weights loop: price edges, sample one embedding of the
// reweighted graph per round, penalize loaded edges, and keep the uniform
// ensemble. Per-node exclusion frequencies above eps are repaired by
// price-boosted extra rounds and, as a last resort, by pruning offending
// entries. G should be complete (run complete_graph on general inputs).
EmbeddingDistribution build_d1_router(const CapacitatedGraph& g, int h,
                                      const MwuConfig& cfg, std::uint64_t seed);

nlohmann::json distribution_to_json(const EmbeddingDistribution& dist);
EmbeddingDistribution distribution_from_json(const nlohmann::json& j);

}  // namespace hoproute
