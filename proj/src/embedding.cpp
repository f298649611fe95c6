#include "hoproute/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

#include "hoproute/rng.hpp"

namespace hoproute {

std::vector<NodeId> PartialTreeEmbedding::tree_nodes() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < graph_nodes; ++v)
    if (in_tree[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

int PartialTreeEmbedding::tree_node_count() const {
  return static_cast<int>(std::count(in_tree.begin(), in_tree.end(), char(1)));
}

PartialTreeEmbedding PartialTreeEmbedding::single_node(int graph_nodes, NodeId v) {
  PartialTreeEmbedding emb;
  emb.graph_nodes = graph_nodes;
  emb.root = v;
  emb.in_tree.assign(static_cast<std::size_t>(graph_nodes), 0);
  emb.in_tree[static_cast<std::size_t>(v)] = 1;
  emb.parent.assign(static_cast<std::size_t>(graph_nodes), -1);
  emb.parent_weight.assign(static_cast<std::size_t>(graph_nodes), 0.0);
  emb.parent_path.assign(static_cast<std::size_t>(graph_nodes), RoutePath{});
  return emb;
}

namespace {

// Node chain from v up to the root (inclusive).
std::vector<NodeId> chain_to_root(const PartialTreeEmbedding& emb, NodeId v) {
  std::vector<NodeId> chain;
  NodeId cur = v;
  while (true) {
    chain.push_back(cur);
    if (cur == emb.root) break;
    NodeId p = emb.parent[static_cast<std::size_t>(cur)];
    if (p < 0 || static_cast<int>(chain.size()) > emb.graph_nodes)
      throw Error("broken parent chain in embedding");
    cur = p;
  }
  return chain;
}

// Chains from u and v to their lowest common ancestor (both end at the LCA).
std::pair<std::vector<NodeId>, std::vector<NodeId>> chains_to_lca(
    const PartialTreeEmbedding& emb, NodeId u, NodeId v) {
  auto cu = chain_to_root(emb, u);
  auto cv = chain_to_root(emb, v);
  // Trim the common suffix, keeping the LCA on both.
  std::size_t i = cu.size(), j = cv.size();
  while (i > 1 && j > 1 && cu[i - 2] == cv[j - 2]) {
    --i;
    --j;
  }
  cu.resize(i);
  cv.resize(j);
  return {std::move(cu), std::move(cv)};
}

}  // namespace

RoutePath tree_route(const PartialTreeEmbedding& emb, NodeId u, NodeId v) {
  if (!emb.contains(u) || !emb.contains(v))
    throw NodeNotEmbedded("tree_route endpoint not in the embedded node set");
  if (u == v) return RoutePath{{u}};
  auto [cu, cv] = chains_to_lca(emb, u, v);
  RoutePath out;
  out.nodes.push_back(u);
  for (std::size_t i = 0; i + 1 < cu.size(); ++i) {
    const RoutePath& seg = emb.parent_path[static_cast<std::size_t>(cu[i])];
    out.nodes.insert(out.nodes.end(), seg.nodes.begin() + 1, seg.nodes.end());
  }
  for (std::size_t j = cv.size() - 1; j-- > 0;) {
    const RoutePath& seg = emb.parent_path[static_cast<std::size_t>(cv[j])];
    out.nodes.insert(out.nodes.end(), seg.nodes.rbegin() + 1, seg.nodes.rend());
  }
  return out;
}

double tree_distance(const PartialTreeEmbedding& emb, NodeId u, NodeId v) {
  if (!emb.contains(u) || !emb.contains(v))
    throw NodeNotEmbedded("tree_distance endpoint not in the embedded node set");
  if (u == v) return 0.0;
  auto [cu, cv] = chains_to_lca(emb, u, v);
  double d = 0.0;
  for (std::size_t i = 0; i + 1 < cu.size(); ++i)
    d += emb.parent_weight[static_cast<std::size_t>(cu[i])];
  for (std::size_t j = 0; j + 1 < cv.size(); ++j)
    d += emb.parent_weight[static_cast<std::size_t>(cv[j])];
  return d;
}

int max_route_hops(const PartialTreeEmbedding& emb) {
  // hops(u, v) = up(u) + up(v) - 2 up(lca); computed from per-node hop depth.
  auto nodes = emb.tree_nodes();
  int worst = 0;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      auto [cu, cv] = chains_to_lca(emb, nodes[a], nodes[b]);
      int hops = 0;
      for (std::size_t i = 0; i + 1 < cu.size(); ++i)
        hops += emb.parent_path[static_cast<std::size_t>(cu[i])].hops();
      for (std::size_t j = 0; j + 1 < cv.size(); ++j)
        hops += emb.parent_path[static_cast<std::size_t>(cv[j])].hops();
      worst = std::max(worst, hops);
    }
  }
  return worst;
}

std::vector<Violation> validate_embedding(const PartialTreeEmbedding& emb,
                                          const WeightedGraph& host) {
  constexpr double kTol = 1e-9;
  std::vector<Violation> out;
  auto broken = [&](const std::string& msg) {
    out.push_back({Violation::Kind::BrokenTree, msg});
  };
  if (emb.graph_nodes != host.node_count()) {
    broken("embedding sized for a different graph");
    return out;
  }
  if (!emb.contains(emb.root)) {
    broken("root missing from the tree node set");
    return out;
  }
  if (emb.parent[static_cast<std::size_t>(emb.root)] != -1) broken("root has a parent");
  for (NodeId v = 0; v < emb.graph_nodes; ++v) {
    if (!emb.contains(v)) {
      if (emb.parent[static_cast<std::size_t>(v)] != -1)
        broken("absent node " + std::to_string(v) + " has a parent");
      continue;
    }
    if (v == emb.root) continue;
    NodeId p = emb.parent[static_cast<std::size_t>(v)];
    if (p < 0 || !emb.contains(p)) {
      broken("node " + std::to_string(v) + " has no embedded parent");
      continue;
    }
    // Acyclicity: the chain must reach the root within n steps.
    NodeId cur = v;
    int steps = 0;
    while (cur != emb.root && steps <= emb.graph_nodes) {
      cur = emb.parent[static_cast<std::size_t>(cur)];
      if (cur < 0) break;
      ++steps;
    }
    if (cur != emb.root) broken("node " + std::to_string(v) + " is disconnected from the root");

    const RoutePath& path = emb.parent_path[static_cast<std::size_t>(v)];
    if (path.nodes.empty() || path.source() != v || path.target() != p) {
      out.push_back({Violation::Kind::EndpointMismatch,
                     "edge_map path of node " + std::to_string(v) +
                         " does not join it to its parent"});
      continue;
    }
    double w = 0.0;
    bool in_graph = true;
    for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
      int e = host.topo.edge_index(path.nodes[i], path.nodes[i + 1]);
      if (e < 0) {
        out.push_back({Violation::Kind::PathNotInGraph,
                       "edge_map path of node " + std::to_string(v) +
                           " uses a non-edge of the host graph"});
        in_graph = false;
        break;
      }
      w += host.weight[e];
    }
    if (in_graph && w > emb.parent_weight[static_cast<std::size_t>(v)] + kTol) {
      out.push_back({Violation::Kind::DominationViolation,
                     "tree edge at node " + std::to_string(v) + " has weight " +
                         std::to_string(emb.parent_weight[static_cast<std::size_t>(v)]) +
                         " < mapped path weight " + std::to_string(w)});
    }
  }
  return out;
}

int embedding_hop_cap(int n, int h, double eps_target, const EmbedConfig& cfg) {
  if (cfg.beta_cap_override > 0) return cfg.beta_cap_override;
  const double lg = std::log2(std::max(2, n));
  const double beta = std::ceil(cfg.c_beta * lg * lg * lg / eps_target);
  return static_cast<int>(beta) * std::max(1, h);
}

WeightedGraph completed_weighted(const WeightedGraph& g) {
  const int n = g.node_count();
  if (g.edge_count() == n * (n - 1) / 2) return g;
  double wmax = 1.0, wmin = 1.0;
  if (g.edge_count() > 0) {
    wmax = g.weight.maxCoeff();
    wmin = g.weight.minCoeff();
  }
  const double aspect = std::max({1.0, wmax, 1.0 / wmin});
  const double heavy = static_cast<double>(n) * n * aspect;
  std::vector<Edge> edges;
  std::vector<double> w;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      int e = g.topo.edge_index(u, v);
      edges.push_back(Edge{u, v});
      w.push_back(e >= 0 ? g.weight[e] : heavy);
    }
  }
  WeightedGraph out;
  out.topo = GraphTopology(n, std::move(edges));
  out.weight = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  return out;
}

namespace {

struct Cluster {
  NodeId center;
  std::vector<NodeId> members;
};

PartialTreeEmbedding carve(const WeightedGraph& host, int hop_budget, double eps,
                           Rng& rng, const EmbedConfig& cfg) {
  const int n = host.node_count();
  std::vector<HopLimitedPaths> sp;
  sp.reserve(static_cast<std::size_t>(n));
  for (NodeId v = 0; v < n; ++v) sp.emplace_back(host, v, hop_budget);

  double dmax = 0.0;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) {
      double d = sp[static_cast<std::size_t>(u)].distance(v);
      if (d < kInfiniteDistance) dmax = std::max(dmax, d);
    }
  const double wmin = host.weight.minCoeff();
  if (dmax <= 0.0) dmax = wmin;
  const double delta0 = std::exp2(std::ceil(std::log2(dmax)));
  const int levels_est = std::clamp(
      static_cast<int>(std::ceil(std::log2(delta0 / (wmin / 2.0)))) + 1, 1, cfg.max_levels);
  const double theta = 0.25 + 0.25 * rng.next_double();

  std::vector<NodeId> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  rng.shuffle(perm);

  PartialTreeEmbedding emb = PartialTreeEmbedding::single_node(n, perm[0]);
  std::vector<char> excluded(static_cast<std::size_t>(n), 0);

  std::vector<NodeId> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  std::vector<Cluster> active{{emb.root, std::move(all)}};

  std::vector<char> eligible(static_cast<std::size_t>(n), 0);
  std::vector<char> taken(static_cast<std::size_t>(n), 0);

  const double guard_denom = 8.0 * levels_est * std::max(1.0, std::log2(std::max(2, n)));

  double delta = delta0;
  for (int level = 1; level <= cfg.max_levels && !active.empty(); ++level) {
    delta = delta0 * std::exp2(-level);
    const double radius = theta * delta;
    const double guard = cfg.guard_scale * eps * delta / guard_denom;
    const double edge_weight = (level == 1) ? delta0 : delta;

    std::vector<Cluster> next_active;
    for (Cluster& cl : active) {
      for (NodeId v : cl.members) {
        eligible[static_cast<std::size_t>(v)] = 1;
        taken[static_cast<std::size_t>(v)] = 0;
      }
      std::vector<std::pair<NodeId, std::vector<NodeId>>> subs;
      for (NodeId u : perm) {
        if (!eligible[static_cast<std::size_t>(u)] || taken[static_cast<std::size_t>(u)] ||
            excluded[static_cast<std::size_t>(u)])
          continue;
        std::vector<NodeId> mem;
        for (NodeId v : cl.members) {
          if (!eligible[static_cast<std::size_t>(v)] || taken[static_cast<std::size_t>(v)] ||
              excluded[static_cast<std::size_t>(v)])
            continue;
          const double d = sp[static_cast<std::size_t>(u)].distance(v);
          if (v != u && std::abs(d - radius) <= guard && !emb.contains(v)) {
            // Unpadded: too close to the carving boundary at this scale.
            excluded[static_cast<std::size_t>(v)] = 1;
            eligible[static_cast<std::size_t>(v)] = 0;
            continue;
          }
          if (d <= radius) {
            taken[static_cast<std::size_t>(v)] = 1;
            mem.push_back(v);
          }
        }
        if (!mem.empty()) subs.emplace_back(u, std::move(mem));
      }
      for (auto& [u, mem] : subs) {
        if (u != cl.center && !emb.contains(u)) {
          const double du = sp[static_cast<std::size_t>(u)].distance(cl.center);
          if (du < kInfiniteDistance) {
            emb.parent[static_cast<std::size_t>(u)] = cl.center;
            emb.parent_weight[static_cast<std::size_t>(u)] = edge_weight;
            emb.parent_path[static_cast<std::size_t>(u)] =
                sp[static_cast<std::size_t>(u)].path_to(cl.center);
            emb.in_tree[static_cast<std::size_t>(u)] = 1;
          } else {
            // Unreachable within the hop budget; cannot embed this subtree.
            excluded[static_cast<std::size_t>(u)] = 1;
            for (NodeId v : mem)
              if (!emb.contains(v)) excluded[static_cast<std::size_t>(v)] = 1;
            for (NodeId v : mem) eligible[static_cast<std::size_t>(v)] = 0;
            continue;
          }
        }
        if (mem.size() > 1) next_active.push_back({u, std::move(mem)});
      }
      for (NodeId v : cl.members) eligible[static_cast<std::size_t>(v)] = 0;
    }
    active.swap(next_active);
  }

  // Level budget exhausted: attach leftover members directly to their center.
  for (Cluster& cl : active) {
    for (NodeId v : cl.members) {
      if (v == cl.center || emb.contains(v) || excluded[static_cast<std::size_t>(v)]) continue;
      emb.parent[static_cast<std::size_t>(v)] = cl.center;
      emb.parent_weight[static_cast<std::size_t>(v)] = delta;
      emb.parent_path[static_cast<std::size_t>(v)] =
          sp[static_cast<std::size_t>(v)].path_to(cl.center);
      emb.in_tree[static_cast<std::size_t>(v)] = 1;
    }
  }
  return emb;
}

}  // namespace

PartialTreeEmbedding sample_partial_embedding(const WeightedGraph& g, int h,
                                              double eps_target, std::uint64_t seed,
                                              const EmbedConfig& cfg) {
  const int n = g.node_count();
  if (n <= 0) throw EmptyGraph("cannot embed an empty graph");
  if (!(eps_target > 0.0 && eps_target < 1.0 / 3.0))
    throw InvalidEpsilon("exclusion target must lie in (0, 1/3)");
  if (n == 1) return PartialTreeEmbedding::single_node(1, 0);

  const WeightedGraph host = completed_weighted(g);
  const int cap = embedding_hop_cap(n, h, eps_target, cfg);
  // Spread the total hop budget across the carving hierarchy so tree edges at
  // coarse scales may map to multi-hop paths instead of single heavy edges.
  const int depth_proxy = 8 * static_cast<int>(std::ceil(std::log2(std::max(2, n))));
  const int hop_budget =
      cfg.level_hop_budget > 0
          ? cfg.level_hop_budget
          : std::min(n - 1, std::max(std::max(1, h), cap / depth_proxy));

  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(attempt)));
    PartialTreeEmbedding emb = carve(host, hop_budget, eps_target, rng, cfg);
    if (max_route_hops(emb) <= cap) return emb;
  }
  throw Error("embedding hop cap unattainable after max_retries resamples");
}

FlowVector d1_load_flow(const PartialTreeEmbedding& emb, const CapacitatedGraph& g) {
  FlowVector f = FlowVector::Zero(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.topo.edge(e);
    if (!emb.contains(ed.u) || !emb.contains(ed.v)) continue;
    f += g.capacity[e] * path_flow(tree_route(emb, ed.u, ed.v), g);
  }
  return f;
}

namespace {

DistributionReport measure_weighted(
    const std::vector<std::pair<double, const PartialTreeEmbedding*>>& samples,
    const WeightedGraph& host, const CapacitatedGraph& capacities, int h) {
  const int n = capacities.node_count();
  DistributionReport rep;
  rep.epsilon_emp.assign(static_cast<std::size_t>(n), 0.0);
  FlowVector mean_load = FlowVector::Zero(capacities.edge_count());
  Eigen::MatrixXd stretch_num = Eigen::MatrixXd::Zero(n, n);

  for (const auto& [w, embp] : samples) {
    const PartialTreeEmbedding& emb = *embp;
    rep.beta_emp = std::max(
        rep.beta_emp, static_cast<double>(max_route_hops(emb)) / std::max(1, h));
    for (NodeId v = 0; v < n; ++v)
      if (!emb.contains(v)) rep.epsilon_emp[static_cast<std::size_t>(v)] += w;
    mean_load += w * d1_load_flow(emb, capacities);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (emb.contains(u) && emb.contains(v))
          stretch_num(u, v) += w * tree_distance(emb, u, v);
  }
  rep.alpha_emp = congestion(mean_load, capacities);

  rep.stretch_emp = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = u + 1; v < n; ++v) {
      double d = hop_distance(host, u, v, h);
      if (d > 0.0 && d < kInfiniteDistance) {
        rep.stretch_emp(u, v) = stretch_num(u, v) / d;
        rep.stretch_emp(v, u) = rep.stretch_emp(u, v);
      }
    }
  return rep;
}

}  // namespace

DistributionReport measure_distribution(const EmbeddingDistribution& dist,
                                        const WeightedGraph& host,
                                        const CapacitatedGraph& capacities, int h) {
  std::vector<std::pair<double, const PartialTreeEmbedding*>> samples;
  samples.reserve(dist.entries.size());
  for (const auto& entry : dist.entries) samples.emplace_back(entry.prob, &entry.embedding);
  return measure_weighted(samples, host, capacities, h);
}

DistributionReport measure_sampler(
    const std::function<PartialTreeEmbedding(std::uint64_t)>& sampler, int num_samples,
    const WeightedGraph& host, const CapacitatedGraph& capacities, int h,
    std::uint64_t seed) {
  if (num_samples < 1) throw Error("num_samples must be at least 1");
  std::vector<PartialTreeEmbedding> draws;
  draws.reserve(static_cast<std::size_t>(num_samples));
  for (int i = 0; i < num_samples; ++i)
    draws.push_back(sampler(mix_seed(seed, static_cast<std::uint64_t>(i))));
  std::vector<std::pair<double, const PartialTreeEmbedding*>> samples;
  for (const auto& emb : draws) samples.emplace_back(1.0 / num_samples, &emb);
  return measure_weighted(samples, host, capacities, h);
}

nlohmann::json embedding_to_json(const PartialTreeEmbedding& emb) {
  nlohmann::json j;
  j["n"] = emb.graph_nodes;
  j["root"] = emb.root;
  nlohmann::json edges = nlohmann::json::array();
  nlohmann::json edge_map = nlohmann::json::array();
  for (NodeId v = 0; v < emb.graph_nodes; ++v) {
    if (!emb.contains(v) || v == emb.root) continue;
    edges.push_back({v, emb.parent[static_cast<std::size_t>(v)],
                     emb.parent_weight[static_cast<std::size_t>(v)]});
    edge_map.push_back(emb.parent_path[static_cast<std::size_t>(v)].nodes);
  }
  j["edges"] = std::move(edges);
  j["edge_map"] = std::move(edge_map);
  return j;
}

PartialTreeEmbedding embedding_from_json(const nlohmann::json& j) {
  PartialTreeEmbedding emb =
      PartialTreeEmbedding::single_node(j.at("n").get<int>(), j.at("root").get<NodeId>());
  const auto& edges = j.at("edges");
  const auto& edge_map = j.at("edge_map");
  if (edges.size() != edge_map.size()) throw ParseError("embedding json: edge/map size mismatch");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    NodeId v = edges[i].at(0).get<NodeId>();
    emb.parent[static_cast<std::size_t>(v)] = edges[i].at(1).get<NodeId>();
    emb.parent_weight[static_cast<std::size_t>(v)] = edges[i].at(2).get<double>();
    emb.parent_path[static_cast<std::size_t>(v)] =
        RoutePath{edge_map[i].get<std::vector<NodeId>>()};
    emb.in_tree[static_cast<std::size_t>(v)] = 1;
  }
  return emb;
}

}  // namespace hoproute
