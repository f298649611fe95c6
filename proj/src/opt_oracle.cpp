#include "hoproute/opt_oracle.hpp"

#include <algorithm>
#include <cmath>

#include "hoproute/simplex.hpp"

namespace hoproute {

namespace {

struct Commodity {
  NodeId s, t;
  double amount;
};

// Master LP over explicit path columns: min lambda subject to per-commodity
// demand satisfaction and per-edge load <= lambda * capacity.
struct Master {
  const CapacitatedGraph& g;
  std::vector<Commodity> commodities;
  std::vector<std::vector<RoutePath>> paths;  // per commodity

  explicit Master(const CapacitatedGraph& graph) : g(graph) {}

  LpSolution solve() const {
    const int m = g.edge_count();
    const int k = static_cast<int>(commodities.size());
    int nvar = 1;  // lambda first
    for (const auto& pl : paths) nvar += static_cast<int>(pl.size());

    LpProblem lp;
    lp.objective = Eigen::VectorXd::Zero(nvar);
    lp.objective[0] = 1.0;
    lp.eq_lhs = Eigen::MatrixXd::Zero(k, nvar);
    lp.eq_rhs = Eigen::VectorXd::Zero(k);
    lp.le_lhs = Eigen::MatrixXd::Zero(m, nvar);
    lp.le_rhs = Eigen::VectorXd::Zero(m);
    lp.le_lhs.col(0) = -g.capacity;

    int col = 1;
    for (int c = 0; c < k; ++c) {
      lp.eq_rhs[c] = commodities[static_cast<std::size_t>(c)].amount;
      for (const auto& p : paths[static_cast<std::size_t>(c)]) {
        lp.eq_lhs(c, col) = 1.0;
        lp.le_lhs.col(col) = path_flow(p, g);
        ++col;
      }
    }
    auto sol = solve_lp(lp);
    if (!sol.feasible || !sol.bounded) throw SolverFailure("master LP did not solve");
    return sol;
  }
};

std::vector<Commodity> gather(const Demand& d) {
  std::vector<Commodity> out;
  for (const auto& [key, amount] : d.entries)
    if (amount > 0.0) out.push_back({key.first, key.second, amount});
  return out;
}

bool routable(const CapacitatedGraph& g, const std::vector<Commodity>& cs, int h) {
  WeightedGraph unit;
  unit.topo = g.topo;
  unit.weight = Eigen::VectorXd::Ones(g.edge_count());
  for (const auto& c : cs)
    if (hop_distance(unit, c.s, c.t, h) == kInfiniteDistance) return false;
  return true;
}

void extract(const Master& master, const LpSolution& sol, OptResult* out) {
  int col = 1;
  for (std::size_t c = 0; c < master.commodities.size(); ++c) {
    const auto& com = master.commodities[c];
    auto key = std::make_pair(com.s, com.t);
    for (const auto& p : master.paths[c]) {
      double w = sol.x[col++];
      if (w > 1e-12) out->witness[key].push_back({simplify_path(p), w});
    }
  }
}

}  // namespace

OptResult opt_hop_routing(const CapacitatedGraph& g, const Demand& d, int h) {
  if (h < 1) throw Error("hop bound must be >= 1");
  OptResult out;
  auto commodities = gather(d);
  if (commodities.empty()) return out;
  if (!routable(g, commodities, h)) {
    out.value = kInfiniteDistance;
    return out;
  }

  const int m = g.edge_count();
  Master master(g);
  master.commodities = commodities;
  master.paths.resize(commodities.size());

  // Initial columns: fewest-hop paths.
  WeightedGraph unit;
  unit.topo = g.topo;
  unit.weight = Eigen::VectorXd::Ones(m);
  for (std::size_t c = 0; c < commodities.size(); ++c) {
    HopLimitedPaths sp(unit, commodities[c].s, h);
    master.paths[c].push_back(sp.path_to(commodities[c].t));
  }

  LpSolution sol;
  for (int iter = 0;; ++iter) {
    if (iter > 500) throw SolverFailure("column generation did not converge");
    sol = master.solve();
    Eigen::VectorXd price = (-sol.le_dual).cwiseMax(0.0);
    WeightedGraph priced;
    priced.topo = g.topo;
    const double floor_w = std::max(1e-12, price.maxCoeff() * 1e-12);
    priced.weight = price.array() + floor_w;

    bool improved = false;
    for (std::size_t c = 0; c < commodities.size(); ++c) {
      HopLimitedPaths sp(priced, commodities[c].s, h);
      double sigma = sol.eq_dual[static_cast<Eigen::Index>(c)];
      double dist = sp.distance(commodities[c].t);
      if (dist < sigma - 1e-9) {
        auto p = sp.path_to(commodities[c].t);
        // Skip duplicates (can appear near the tolerance boundary).
        bool dup = false;
        for (const auto& q : master.paths[c]) dup = dup || q == p;
        if (!dup) {
          master.paths[c].push_back(std::move(p));
          improved = true;
        }
      }
    }
    if (!improved) break;
  }

  out.value = sol.value;
  extract(master, sol, &out);

  // Certificate: normalized prices lower-bound the optimum by
  // sum_k d_k dist_price^h(s_k, t_k) when sum_e c_e price_e = 1.
  Eigen::VectorXd price = (-sol.le_dual).cwiseMax(0.0);
  double scale = g.capacity.dot(price);
  if (scale > 1e-12) {
    out.dual_prices = price / scale;
    WeightedGraph priced;
    priced.topo = g.topo;
    priced.weight = out.dual_prices.array() + 1e-15;
    double bound = 0.0;
    for (const auto& c : commodities) {
      HopLimitedPaths sp(priced, c.s, h);
      bound += c.amount * sp.distance(c.t);
    }
    out.dual_bound = bound;
  } else {
    out.dual_prices = Eigen::VectorXd::Zero(m);
    out.dual_bound = 0.0;
  }
  if (out.value - out.dual_bound > 1e-6 * std::max(1.0, out.value))
    throw SolverFailure("primal-dual gap above tolerance");

  // Witness congestion must equal the value.
  FlowVector f = FlowVector::Zero(m);
  for (const auto& [key, list] : out.witness)
    for (const auto& wp : list) f += wp.weight * path_flow(wp.path, g);
  if (std::abs(congestion(f, g) - out.value) > 1e-6 * std::max(1.0, out.value))
    throw SolverFailure("witness congestion mismatch");
  return out;
}

namespace {

void enumerate_paths(const GraphTopology& topo, NodeId t, int h, RoutePath* cur,
                     std::vector<char>* used, std::vector<RoutePath>* out) {
  NodeId v = cur->target();
  if (v == t) {
    out->push_back(*cur);
    if (out->size() > 10000) throw TooLarge("path enumeration bound exceeded");
    return;
  }
  if (cur->hops() == h) return;
  for (auto [nbr, e] : topo.neighbors(v)) {
    if ((*used)[static_cast<std::size_t>(nbr)]) continue;
    (*used)[static_cast<std::size_t>(nbr)] = 1;
    cur->nodes.push_back(nbr);
    enumerate_paths(topo, t, h, cur, used, out);
    cur->nodes.pop_back();
    (*used)[static_cast<std::size_t>(nbr)] = 0;
  }
}

}  // namespace

double brute_force_opt(const CapacitatedGraph& g, const Demand& d, int h) {
  if (h < 1) throw Error("hop bound must be >= 1");
  auto commodities = gather(d);
  if (commodities.empty()) return 0.0;

  Master master(g);
  master.commodities = commodities;
  master.paths.resize(commodities.size());
  for (std::size_t c = 0; c < commodities.size(); ++c) {
    RoutePath cur{{commodities[c].s}};
    std::vector<char> used(static_cast<std::size_t>(g.node_count()), 0);
    used[static_cast<std::size_t>(commodities[c].s)] = 1;
    enumerate_paths(g.topo, commodities[c].t, h, &cur, &used, &master.paths[c]);
    if (master.paths[c].empty()) return kInfiniteDistance;
  }
  return master.solve().value;
}

}  // namespace hoproute
