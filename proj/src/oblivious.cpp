#include "hoproute/oblivious.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "hoproute/io.hpp"
#include "hoproute/rng.hpp"

namespace hoproute {

namespace {

const EmbeddingDistribution::Entry& draw_entry(const EmbeddingDistribution& dist, Rng* rng) {
  double u = rng->next_double();
  double acc = 0.0;
  for (const auto& e : dist.entries) {
    acc += e.prob;
    if (u < acc) return e;
  }
  return dist.entries.back();
}

}  // namespace

ObliviousRouter build_router(const CapacitatedGraph& g, int h, const RouterParams& params,
                             std::uint64_t seed) {
  if (h < 1) throw Error("hop bound must be >= 1");
  ObliviousRouter router;
  router.base = g;
  router.completed = complete_graph(g, params.completion_exponent);
  router.h = h;
  router.retry_cap = params.retry_cap;

  const int n = g.node_count();
  router.r = params.r > 0
                 ? params.r
                 : static_cast<int>(std::ceil(2.0 * std::log2(std::max(2, n))));
  router.eps1 = std::min(1.0 / (4.0 * h), 0.25);

  MwuConfig cfg1 = params.mwu;
  cfg1.eps = router.eps1;
  cfg1.h = h;
  cfg1.completion_exponent = params.completion_exponent;
  router.t1 = build_d1_router(router.completed, h, cfg1, mix_seed(seed, 1));

  const int dil1 = std::max(1, router.t1.dilation_hops);
  router.eps2 = 1.0 / (2.0 * router.r * dil1);

  MwuConfig cfg2 = params.mwu;
  cfg2.eps = router.eps2;
  cfg2.h = h;
  cfg2.completion_exponent = params.completion_exponent;
  router.t2 = build_d1_router(router.completed, h, cfg2, mix_seed(seed, 2));
  router.hop_cap = router.t2.dilation_hops;
  return router;
}

RoutePath sample_path(const ObliviousRouter& router, NodeId s, NodeId t,
                      std::uint64_t seed) {
  const int n = router.base.node_count();
  if (s < 0 || t < 0 || s >= n || t >= n || s == t)
    throw NodePairInvalid("sample_path needs two distinct in-range nodes");
  Rng rng(mix_seed(seed, (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s)) << 32) |
                             static_cast<std::uint32_t>(t)));

  // Cover paths from r independent t1 trees conditioned on s,t membership.
  std::set<NodeId> cover{s, t};
  for (int i = 0; i < router.r; ++i) {
    const PartialTreeEmbedding* tree = nullptr;
    for (int tries = 0; tries < router.retry_cap; ++tries) {
      const auto& e = draw_entry(router.t1, &rng);
      if (e.embedding.contains(s) && e.embedding.contains(t)) {
        tree = &e.embedding;
        break;
      }
    }
    if (!tree) throw RetriesExhausted("no cover tree contains both endpoints");
    for (NodeId v : tree_route(*tree, s, t).nodes) cover.insert(v);
  }

  // Joint rejection of (F, p).
  for (int tries = 0; tries < router.retry_cap; ++tries) {
    const auto& e = draw_entry(router.t2, &rng);
    bool covered = true;
    for (NodeId v : cover)
      if (!e.embedding.contains(v)) {
        covered = false;
        break;
      }
    if (!covered) continue;
    RoutePath p = simplify_path(tree_route(e.embedding, s, t));
    bool real = true;
    for (std::size_t i = 0; i + 1 < p.nodes.size() && real; ++i) {
      int idx = router.completed.topo.edge_index(p.nodes[i], p.nodes[i + 1]);
      if (idx < 0 || router.completed.is_virtual(idx) ||
          router.base.topo.edge_index(p.nodes[i], p.nodes[i + 1]) < 0)
        real = false;
    }
    if (!real) continue;
    if (p.hops() > router.hop_cap) throw Error("emitted path exceeds the hop cap");
    return p;
  }
  throw RetriesExhausted("joint rejection sampling exhausted its retry budget");
}

RouteReport route_demand(const ObliviousRouter& router, const Demand& d,
                         int samples_per_pair, std::uint64_t seed) {
  if (samples_per_pair < 1) throw Error("samples_per_pair must be >= 1");
  const int m = router.base.edge_count();
  RouteReport rep;
  rep.mean_flow = FlowVector::Zero(m);
  FlowVector var_acc = FlowVector::Zero(m);
  for (const auto& [key, amount] : d.entries) {
    if (amount <= 0.0) continue;
    std::uint64_t pair_stream =
        mix_seed(seed, (static_cast<std::uint64_t>(static_cast<std::uint32_t>(key.first)) << 32) |
                           static_cast<std::uint32_t>(key.second));
    FlowVector sum = FlowVector::Zero(m);
    FlowVector sum_sq = FlowVector::Zero(m);
    for (int i = 0; i < samples_per_pair; ++i) {
      auto p = sample_path(router, key.first, key.second,
                           mix_seed(pair_stream, static_cast<std::uint64_t>(i)));
      rep.max_hops = std::max(rep.max_hops, p.hops());
      FlowVector f = path_flow(p, router.base);
      sum += f;
      sum_sq += f.cwiseProduct(f);
    }
    FlowVector mean = sum / samples_per_pair;
    rep.mean_flow += amount * mean;
    if (samples_per_pair > 1) {
      FlowVector var =
          (sum_sq - samples_per_pair * mean.cwiseProduct(mean)) / (samples_per_pair - 1.0);
      var_acc += (amount * amount / samples_per_pair) * var.cwiseMax(0.0);
    }
  }
  rep.stderr_flow = var_acc.cwiseSqrt();
  rep.congestion_value = congestion(rep.mean_flow, router.base);
  return rep;
}

IntegralReport integral_route(const ObliviousRouter& router,
                              const std::vector<std::pair<NodeId, NodeId>>& requests,
                              std::uint64_t seed) {
  IntegralReport rep;
  FlowVector f = FlowVector::Zero(router.base.edge_count());
  for (std::size_t i = 0; i < requests.size(); ++i) {
    auto p = sample_path(router, requests[i].first, requests[i].second,
                         mix_seed(seed, static_cast<std::uint64_t>(i)));
    rep.max_hops = std::max(rep.max_hops, p.hops());
    f += path_flow(p, router.base);
    rep.paths.push_back(std::move(p));
  }
  rep.max_congestion = congestion(f, router.base);
  return rep;
}

SubflowReport subflow_diagnostics(const ObliviousRouter& router, const Demand& d,
                                  const OptResult& witness, int samples,
                                  std::uint64_t seed) {
  SubflowReport rep;
  for (const auto& [key, amount] : d.entries) {
    if (amount <= 0.0) continue;
    auto it = witness.witness.find(key);
    if (it == witness.witness.end() || it->second.empty()) continue;
    // Heaviest witness path represents P* for the pair.
    const OptResult::WitnessPath* best = &it->second.front();
    for (const auto& wp : it->second)
      if (wp.weight > best->weight) best = &wp;

    SubflowReport::PairStats st;
    st.s = key.first;
    st.t = key.second;
    st.gamma_pred = std::min(1.0, (best->path.hops() + 1) / (4.0 * router.h));
    Rng rng(mix_seed(seed, (static_cast<std::uint64_t>(static_cast<std::uint32_t>(key.first)) << 32) |
                               static_cast<std::uint32_t>(key.second)));
    int fails = 0;
    int joint_fails = 0;
    for (int i = 0; i < samples; ++i) {
      int run_fail = 0;
      for (int j = 0; j < router.r; ++j) {
        const auto& e = draw_entry(router.t1, &rng);
        bool cover = true;
        for (NodeId v : best->path.nodes)
          if (!e.embedding.contains(v)) {
            cover = false;
            break;
          }
        if (!cover) ++run_fail;
      }
      // First draw doubles as the single-tree estimate.
      if (run_fail > 0 && run_fail == router.r) ++joint_fails;
      fails += run_fail;
    }
    st.gamma_hat = static_cast<double>(fails) / (samples * router.r);
    st.joint_hat = static_cast<double>(joint_fails) / samples;
    st.joint_pred = std::pow(st.gamma_hat, router.r);
    rep.pairs.push_back(st);
  }
  return rep;
}

namespace {

nlohmann::json graph_to_json(const CapacitatedGraph& g) {
  nlohmann::json j;
  j["n"] = g.node_count();
  nlohmann::json edges = nlohmann::json::array();
  for (int e = 0; e < g.edge_count(); ++e)
    edges.push_back({g.topo.edge(e).u, g.topo.edge(e).v, g.capacity[e]});
  j["edges"] = std::move(edges);
  return j;
}

CapacitatedGraph graph_from_json(const nlohmann::json& j) {
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  for (const auto& e : j.at("edges"))
    edges.emplace_back(e.at(0).get<NodeId>(), e.at(1).get<NodeId>(), e.at(2).get<double>());
  return CapacitatedGraph::create(j.at("n").get<int>(), edges);
}

}  // namespace

nlohmann::json router_to_json(const ObliviousRouter& router) {
  nlohmann::json j;
  j["base"] = graph_to_json(router.base);
  j["completion_exponent_caps"] = std::vector<double>(
      router.completed.capacity.data(),
      router.completed.capacity.data() + router.completed.capacity.size());
  j["virtual"] = router.completed.virtual_edge;
  j["t1"] = distribution_to_json(router.t1);
  j["t2"] = distribution_to_json(router.t2);
  j["h"] = router.h;
  j["r"] = router.r;
  j["retry_cap"] = router.retry_cap;
  j["hop_cap"] = router.hop_cap;
  j["eps1"] = router.eps1;
  j["eps2"] = router.eps2;
  return j;
}

ObliviousRouter router_from_json(const nlohmann::json& j) {
  ObliviousRouter router;
  router.base = graph_from_json(j.at("base"));
  const int n = router.base.node_count();
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) edges.push_back(Edge{u, v});
  router.completed.topo = GraphTopology(n, std::move(edges));
  auto caps = j.at("completion_exponent_caps").get<std::vector<double>>();
  router.completed.capacity =
      Eigen::Map<const Eigen::VectorXd>(caps.data(), static_cast<Eigen::Index>(caps.size()));
  router.completed.virtual_edge = j.at("virtual").get<std::vector<char>>();
  double cmin = router.base.capacity.minCoeff();
  double cmax = router.base.capacity.maxCoeff();
  router.completed.aspect_ratio = std::max({1.0, cmax, 1.0 / cmin});
  router.t1 = distribution_from_json(j.at("t1"));
  router.t2 = distribution_from_json(j.at("t2"));
  router.h = j.at("h").get<int>();
  router.r = j.at("r").get<int>();
  router.retry_cap = j.at("retry_cap").get<int>();
  router.hop_cap = j.at("hop_cap").get<int>();
  router.eps1 = j.at("eps1").get<double>();
  router.eps2 = j.at("eps2").get<double>();
  return router;
}

}  // namespace hoproute
