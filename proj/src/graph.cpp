#include "hoproute/graph.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace hoproute {

namespace {
std::int64_t pair_key(NodeId u, NodeId v, int n) {
  return static_cast<std::int64_t>(u) * n + v;
}
}  // namespace

GraphTopology::GraphTopology(int node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count_ <= 0) throw Error("graph must have at least one node");
  adjacency_.resize(static_cast<std::size_t>(node_count_));
  index_.reserve(edges_.size() * 2);
  for (int i = 0; i < static_cast<int>(edges_.size()); ++i) {
    Edge& e = edges_[static_cast<std::size_t>(i)];
    if (e.u > e.v) std::swap(e.u, e.v);
    if (e.u == e.v) throw Error("self-loops are not allowed");
    if (e.u < 0 || e.v >= node_count_) throw Error("edge endpoint out of range");
    if (!index_.emplace(pair_key(e.u, e.v, node_count_), i).second)
      throw Error("duplicate edge in topology");
    adjacency_[static_cast<std::size_t>(e.u)].emplace_back(e.v, i);
    adjacency_[static_cast<std::size_t>(e.v)].emplace_back(e.u, i);
  }
}

int GraphTopology::edge_index(NodeId u, NodeId v) const {
  if (u > v) std::swap(u, v);
  if (u < 0 || v >= node_count_ || u == v) return -1;
  auto it = index_.find(pair_key(u, v, node_count_));
  return it == index_.end() ? -1 : it->second;
}

CapacitatedGraph CapacitatedGraph::create(
    int node_count, const std::vector<std::tuple<NodeId, NodeId, double>>& edges) {
  // Multi-edges merge into summed capacities.
  std::map<std::pair<NodeId, NodeId>, double> merged;
  for (const auto& [a, b, c] : edges) {
    if (a == b) throw Error("self-loops are not allowed");
    if (!(c > 0.0) || !std::isfinite(c)) throw Error("capacities must be positive and finite");
    merged[{std::min(a, b), std::max(a, b)}] += c;
  }
  std::vector<Edge> es;
  Eigen::VectorXd cap(static_cast<Eigen::Index>(merged.size()));
  Eigen::Index i = 0;
  for (const auto& [uv, c] : merged) {
    es.push_back(Edge{uv.first, uv.second});
    cap[i++] = c;
  }
  CapacitatedGraph g;
  g.topo = GraphTopology(node_count, std::move(es));
  g.capacity = std::move(cap);
  if (g.capacity.size() > 0) {
    const double cmax = g.capacity.maxCoeff();
    const double cmin = g.capacity.minCoeff();
    g.aspect_ratio = std::max({1.0, cmax, 1.0 / cmin});
  }
  return g;
}

bool RoutePath::is_simple() const {
  std::unordered_set<NodeId> seen(nodes.begin(), nodes.end());
  return seen.size() == nodes.size();
}

void Demand::add(NodeId s, NodeId t, double amount) {
  if (amount < 0.0 || !std::isfinite(amount)) throw Error("demand amounts must be nonnegative");
  if (amount == 0.0) return;
  entries[{s, t}] += amount;
}

double Demand::total() const {
  double sum = 0.0;
  for (const auto& [st, d] : entries) sum += d;
  return sum;
}

FlowVector path_flow(const RoutePath& p, const GraphTopology& topo) {
  FlowVector f = FlowVector::Zero(topo.edge_count());
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
    int e = topo.edge_index(p.nodes[i], p.nodes[i + 1]);
    if (e < 0)
      throw UnknownEdge("path step {" + std::to_string(p.nodes[i]) + "," +
                        std::to_string(p.nodes[i + 1]) + "} is not a graph edge");
    f[e] += 1.0;
  }
  return f;
}

double path_weight(const RoutePath& p, const WeightedGraph& g) {
  double w = 0.0;
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
    int e = g.topo.edge_index(p.nodes[i], p.nodes[i + 1]);
    if (e < 0)
      throw UnknownEdge("path step {" + std::to_string(p.nodes[i]) + "," +
                        std::to_string(p.nodes[i + 1]) + "} is not a graph edge");
    w += g.weight[e];
  }
  return w;
}

double congestion(const FlowVector& f, const CapacitatedGraph& g) {
  if (f.size() != g.capacity.size()) throw Error("flow vector not indexed by the graph's edges");
  double worst = 0.0;
  for (Eigen::Index e = 0; e < f.size(); ++e)
    worst = std::max(worst, f[e] / g.capacity[e]);
  return worst;
}

RoutePath simplify_path(const RoutePath& p) {
  std::vector<NodeId> out;
  std::unordered_map<NodeId, std::size_t> pos;
  for (NodeId v : p.nodes) {
    auto it = pos.find(v);
    if (it != pos.end()) {
      // Drop the cycle back to the previous occurrence.
      while (out.size() > it->second + 1) {
        pos.erase(out.back());
        out.pop_back();
      }
    } else {
      pos.emplace(v, out.size());
      out.push_back(v);
    }
  }
  return RoutePath{std::move(out)};
}

HopLimitedPaths::HopLimitedPaths(const WeightedGraph& g, NodeId source, int hop_bound)
    : source_(source), hop_bound_(hop_bound), n_(g.node_count()) {
  if (hop_bound < 0) throw Error("hop bound must be nonnegative");
  std::vector<double> cur(static_cast<std::size_t>(n_), kInfiniteDistance);
  cur[static_cast<std::size_t>(source)] = 0.0;
  best_dist_ = cur;
  best_layer_.assign(static_cast<std::size_t>(n_), 0);
  parent_.assign(static_cast<std::size_t>(hop_bound) + 1,
                 std::vector<NodeId>(static_cast<std::size_t>(n_), -1));
  for (int k = 1; k <= hop_bound; ++k) {
    std::vector<double> next = cur;
    auto& par = parent_[static_cast<std::size_t>(k)];
    par = parent_[static_cast<std::size_t>(k - 1)];
    for (int e = 0; e < g.edge_count(); ++e) {
      const Edge& ed = g.topo.edge(e);
      const double w = g.weight[e];
      const double du = cur[static_cast<std::size_t>(ed.u)];
      const double dv = cur[static_cast<std::size_t>(ed.v)];
      if (du + w < next[static_cast<std::size_t>(ed.v)] ||
          (du + w == next[static_cast<std::size_t>(ed.v)] &&
           ed.u < par[static_cast<std::size_t>(ed.v)])) {
        next[static_cast<std::size_t>(ed.v)] = du + w;
        par[static_cast<std::size_t>(ed.v)] = ed.u;
      }
      if (dv + w < next[static_cast<std::size_t>(ed.u)] ||
          (dv + w == next[static_cast<std::size_t>(ed.u)] &&
           ed.v < par[static_cast<std::size_t>(ed.u)])) {
        next[static_cast<std::size_t>(ed.u)] = dv + w;
        par[static_cast<std::size_t>(ed.u)] = ed.v;
      }
    }
    cur.swap(next);
    for (int v = 0; v < n_; ++v) {
      if (cur[static_cast<std::size_t>(v)] < best_dist_[static_cast<std::size_t>(v)]) {
        best_dist_[static_cast<std::size_t>(v)] = cur[static_cast<std::size_t>(v)];
        best_layer_[static_cast<std::size_t>(v)] = k;
      }
    }
  }
}

RoutePath HopLimitedPaths::path_to(NodeId v) const {
  if (!(best_dist_[static_cast<std::size_t>(v)] < kInfiniteDistance))
    throw Error("node unreachable within the hop bound");
  std::vector<NodeId> rev;
  NodeId cur = v;
  int layer = best_layer_[static_cast<std::size_t>(v)];
  rev.push_back(cur);
  while (cur != source_) {
    NodeId p = parent_[static_cast<std::size_t>(layer)][static_cast<std::size_t>(cur)];
    if (p < 0) throw Error("broken shortest-path parent chain");
    rev.push_back(p);
    cur = p;
    layer = std::max(0, layer - 1);
  }
  std::reverse(rev.begin(), rev.end());
  return RoutePath{std::move(rev)};
}

double hop_distance(const WeightedGraph& g, NodeId u, NodeId v, int h) {
  if (u == v) return 0.0;
  if (h <= 0) return kInfiniteDistance;
  // Bellman-Ford over hop layers; exact by construction.
  const int n = g.node_count();
  std::vector<double> cur(static_cast<std::size_t>(n), kInfiniteDistance);
  cur[static_cast<std::size_t>(u)] = 0.0;
  double best = kInfiniteDistance;
  for (int k = 1; k <= h; ++k) {
    std::vector<double> next = cur;
    for (int e = 0; e < g.edge_count(); ++e) {
      const Edge& ed = g.topo.edge(e);
      const double w = g.weight[e];
      next[static_cast<std::size_t>(ed.v)] =
          std::min(next[static_cast<std::size_t>(ed.v)], cur[static_cast<std::size_t>(ed.u)] + w);
      next[static_cast<std::size_t>(ed.u)] =
          std::min(next[static_cast<std::size_t>(ed.u)], cur[static_cast<std::size_t>(ed.v)] + w);
    }
    cur.swap(next);
    best = std::min(best, cur[static_cast<std::size_t>(v)]);
  }
  return best;
}

Demand d1_demand(const CapacitatedGraph& g) {
  Demand d;
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.topo.edge(e);
    d.add(ed.u, ed.v, g.capacity[e]);
  }
  return d;
}

CapacitatedGraph complete_graph(const CapacitatedGraph& g, int completion_exponent) {
  if (g.edge_count() == 0) throw DegenerateGraph("cannot complete a graph with no edges");
  const int n = g.node_count();
  const double c_min = g.capacity.minCoeff();
  const double c_virtual = c_min * std::pow(static_cast<double>(n), -completion_exponent);
  if (!(c_virtual > 0.0)) throw Error("completion capacity underflows");
  std::vector<Edge> edges;
  std::vector<double> caps;
  std::vector<char> virt;
  edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      int e = g.topo.edge_index(u, v);
      edges.push_back(Edge{u, v});
      caps.push_back(e >= 0 ? g.capacity[e] : c_virtual);
      virt.push_back(e >= 0 ? 0 : 1);
    }
  }
  CapacitatedGraph h;
  h.topo = GraphTopology(n, std::move(edges));
  h.capacity = Eigen::Map<const Eigen::VectorXd>(caps.data(), static_cast<Eigen::Index>(caps.size()));
  // n == 2 completes to itself; otherwise virtual edges exist.
  bool any_virtual = false;
  for (char c : virt) any_virtual = any_virtual || c != 0;
  if (any_virtual) h.virtual_edge = std::move(virt);
  const double cmax = h.capacity.maxCoeff();
  const double cmin = h.capacity.minCoeff();
  h.aspect_ratio = std::max({1.0, cmax, 1.0 / cmin});
  return h;
}

}  // namespace hoproute
