#include <doctest.h>

#include <cmath>

#include <nlohmann/json.hpp>

#include "hoproute/d1_router.hpp"
#include "hoproute/rng.hpp"

using namespace hoproute;

namespace {

CapacitatedGraph unit_cycle_caps(int n) {
  std::vector<std::tuple<NodeId, NodeId, double>> e;
  for (NodeId v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n, 1.0);
  return CapacitatedGraph::create(n, e);
}

}  // namespace

TEST_CASE("reweighted_graph formula") {
  auto g = CapacitatedGraph::create(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 2.0}});
  Eigen::Vector3d l(0.5, 0.3, 0.2);
  // spec order by canonical edge key: (0,1), (0,2), (1,2)
  Eigen::Vector3d by_edge;
  by_edge[g.topo.edge_index(0, 1)] = 0.5;
  by_edge[g.topo.edge_index(1, 2)] = 0.3;
  by_edge[g.topo.edge_index(0, 2)] = 0.2;
  auto w = reweighted_graph(g, by_edge, 2);
  const double floor_w = std::pow(3.0, -4.0);
  CHECK(w.weight[g.topo.edge_index(0, 1)] == doctest::Approx(0.5 + floor_w));
  CHECK(w.weight[g.topo.edge_index(1, 2)] == doctest::Approx(0.3 + floor_w));
  CHECK(w.weight[g.topo.edge_index(0, 2)] == doctest::Approx(0.1 + floor_w));

  // uniform prices, unit caps
  auto cyc = unit_cycle_caps(4);
  auto wu = reweighted_graph(cyc, Eigen::VectorXd::Constant(4, 0.25), 6);
  for (int e = 0; e < 4; ++e)
    CHECK(wu.weight[e] == doctest::Approx(0.25 + std::pow(4.0, -8.0)));

  CHECK_THROWS_AS(reweighted_graph(cyc, Eigen::VectorXd::Constant(4, 0.5), 6),
                  BadDistribution);
  Eigen::VectorXd neg = Eigen::VectorXd::Constant(4, 0.5);
  neg[0] = -0.5;
  CHECK_THROWS_AS(reweighted_graph(cyc, neg, 6), BadDistribution);
}

TEST_CASE("route_d1_congestion on hand-built distributions") {
  auto g = CapacitatedGraph::create(2, {{0, 1, 1.0}});
  PartialTreeEmbedding self = PartialTreeEmbedding::single_node(2, 0);
  self.in_tree[1] = 1;
  self.parent[1] = 0;
  self.parent_weight[1] = 1.0;
  self.parent_path[1] = RoutePath{{1, 0}};
  EmbeddingDistribution dist;
  dist.entries.push_back({1.0, self, Eigen::VectorXd::Ones(1)});
  CHECK(route_d1_congestion(dist, g) == doctest::Approx(1.0));

  // distribution whose trees all exclude node 1: load is zero
  EmbeddingDistribution excl;
  excl.entries.push_back({1.0, PartialTreeEmbedding::single_node(2, 0), Eigen::VectorXd::Ones(1)});
  CHECK(route_d1_congestion(excl, g) == doctest::Approx(0.0));
}

TEST_CASE("route_d1_congestion star embedding of a triangle") {
  auto g = CapacitatedGraph::create(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}});
  // star centered at node 0 over graph edges {0,1} and {0,2}
  PartialTreeEmbedding star = PartialTreeEmbedding::single_node(3, 0);
  for (NodeId v : {1, 2}) {
    star.in_tree[v] = 1;
    star.parent[v] = 0;
    star.parent_weight[v] = 1.0;
    star.parent_path[v] = RoutePath{{v, 0}};
  }
  EmbeddingDistribution dist;
  dist.entries.push_back({1.0, star, Eigen::VectorXd::Ones(3)});
  // demands: {0,1} over (0,1); {0,2} over (0,2); {1,2} over (1,0,2)
  FlowVector load = FlowVector::Zero(3);
  load[g.topo.edge_index(0, 1)] = 2.0;
  load[g.topo.edge_index(0, 2)] = 2.0;
  CHECK(route_d1_congestion(dist, g) == doctest::Approx(2.0));
}

TEST_CASE("build_d1_router on a single edge") {
  auto g = CapacitatedGraph::create(2, {{0, 1, 1.0}});
  MwuConfig cfg;
  cfg.eps = 0.25;
  cfg.h = 1;
  cfg.min_rounds = 1;
  auto dist = build_d1_router(g, 1, cfg, 3);
  CHECK(dist.verified);
  CHECK(dist.alpha == doctest::Approx(1.0));
  for (const auto& e : dist.entries) CHECK(e.embedding.tree_node_count() == 2);
}

TEST_CASE("build_d1_router on the 4-cycle") {
  auto g = complete_graph(unit_cycle_caps(4), 6);
  MwuConfig cfg;
  cfg.eps = 1.0 / 8.0;
  cfg.h = 2;
  auto dist = build_d1_router(g, 2, cfg, 11);
  CHECK(dist.verified);
  CHECK(dist.alpha > 0.0);
  CHECK(dist.alpha == doctest::Approx(route_d1_congestion(dist, g)));
  // ensemble exclusion frequency within budget after repair
  std::vector<double> freq(4, 0.0);
  for (const auto& e : dist.entries)
    for (NodeId v = 0; v < 4; ++v)
      if (!e.embedding.contains(v)) freq[v] += e.prob;
  for (NodeId v = 0; v < 4; ++v) CHECK(freq[v] <= cfg.eps + 1e-12);
  // dilation certainty and validity against recorded hosts
  for (const auto& e : dist.entries) {
    CHECK(max_route_hops(e.embedding) <= dist.dilation_hops);
    WeightedGraph host;
    host.topo = g.topo;
    host.weight = e.host_weight;
    CHECK(validate_embedding(e.embedding, host).empty());
  }
  // determinism
  auto dist2 = build_d1_router(g, 2, cfg, 11);
  CHECK(distribution_to_json(dist) == distribution_to_json(dist2));
}

TEST_CASE("build_d1_router star K_{1,4} is near-optimal") {
  auto star = CapacitatedGraph::create(
      5, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}, {0, 4, 1.0}});
  auto h = complete_graph(star, 6);
  MwuConfig cfg;
  cfg.eps = 1.0 / 8.0;
  cfg.h = 2;
  cfg.alpha_target = 2.0;
  cfg.max_rounds = 400;
  auto dist = build_d1_router(h, 2, cfg, 5);
  // the star itself embeds with D1 congestion 1 on real edges; virtual-edge
  // demand is negligible, so alpha should be within a small factor of 1
  CHECK(dist.converged);
  CHECK(dist.alpha <= 2.0 + 1e-9);
}

TEST_CASE("distribution json round-trip") {
  auto g = complete_graph(unit_cycle_caps(4), 6);
  MwuConfig cfg;
  cfg.eps = 0.2;
  cfg.h = 2;
  cfg.min_rounds = 2;
  cfg.max_rounds = 4;
  auto dist = build_d1_router(g, 2, cfg, 21);
  auto j = distribution_to_json(dist);
  auto back = distribution_from_json(j);
  CHECK(distribution_to_json(back) == j);
  CHECK(back.entries.size() == dist.entries.size());
  CHECK(route_d1_congestion(back, g) == doctest::Approx(dist.alpha));
}
