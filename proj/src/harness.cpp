#include "hoproute/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "hoproute/opt_oracle.hpp"
#include "hoproute/rng.hpp"

namespace hoproute {

LowerBoundFamily gen_lower_bound_family(int k) {
  if (k < 2) throw Error("lower-bound family needs k >= 2");
  const NodeId root = static_cast<NodeId>(k * k);
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  auto id = [k](int i, int j) { return static_cast<NodeId>(i * k + j); };
  for (int i = 0; i < k; ++i)
    for (int j = 0; j + 1 < k; ++j) edges.emplace_back(id(i, j), id(i, j + 1), 1.0);
  for (int i = 1; i < k; ++i)
    for (int j = 0; j < k; ++j) edges.emplace_back(id(i, j), id(0, j), 1.0);
  for (int j = 0; j < k; ++j) edges.emplace_back(root, id(0, j), 1.0);

  LowerBoundFamily fam;
  fam.graph = CapacitatedGraph::create(k * k + 1, edges);
  fam.root = root;
  for (int i = 0; i < k; ++i) {
    fam.endpoints.emplace_back(id(i, 0), id(i, k - 1));
    fam.demand.add(id(i, 0), id(i, k - 1), 1.0);
  }
  return fam;
}

CapacitatedGraph gen_standard(const std::string& name, const std::vector<int>& params,
                              std::uint64_t seed) {
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  if (name == "grid") {
    if (params.size() != 2 || params[0] < 1 || params[1] < 1)
      throw UnknownGenerator("grid needs rows cols");
    int rows = params[0], cols = params[1];
    auto id = [cols](int r, int c) { return static_cast<NodeId>(r * cols + c); };
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        if (c + 1 < cols) edges.emplace_back(id(r, c), id(r, c + 1), 1.0);
        if (r + 1 < rows) edges.emplace_back(id(r, c), id(r + 1, c), 1.0);
      }
    return CapacitatedGraph::create(rows * cols, edges);
  }
  if (name == "cycle") {
    if (params.size() != 1 || params[0] < 3) throw UnknownGenerator("cycle needs n >= 3");
    int n = params[0];
    for (NodeId v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n, 1.0);
    return CapacitatedGraph::create(n, edges);
  }
  if (name == "hypercube") {
    if (params.size() != 1 || params[0] < 1 || params[0] > 16)
      throw UnknownGenerator("hypercube needs dim in 1..16");
    int n = 1 << params[0];
    for (NodeId v = 0; v < n; ++v)
      for (int b = 0; b < params[0]; ++b)
        if (v < (v ^ (1 << b))) edges.emplace_back(v, v ^ (1 << b), 1.0);
    return CapacitatedGraph::create(n, edges);
  }
  if (name == "random_regular") {
    if (params.size() != 2 || params[1] < 2 || params[0] <= params[1] ||
        (params[0] * params[1]) % 2 != 0)
      throw UnknownGenerator("random_regular needs n degree with n*degree even");
    int n = params[0], d = params[1];
    Rng rng(seed);
    // Pairing model; resample until the multigraph is simple and connected.
    for (int attempt = 0; attempt < 1000; ++attempt) {
      std::vector<NodeId> stubs;
      for (NodeId v = 0; v < n; ++v)
        for (int i = 0; i < d; ++i) stubs.push_back(v);
      rng.shuffle(stubs);
      bool ok = true;
      std::vector<std::pair<NodeId, NodeId>> pairs;
      for (std::size_t i = 0; i < stubs.size() && ok; i += 2) {
        NodeId a = stubs[i], b = stubs[i + 1];
        if (a == b) ok = false;
        pairs.emplace_back(std::min(a, b), std::max(a, b));
      }
      if (ok) {
        std::sort(pairs.begin(), pairs.end());
        ok = std::adjacent_find(pairs.begin(), pairs.end()) == pairs.end();
      }
      if (ok) {
        // connectivity
        std::vector<std::vector<NodeId>> adj(static_cast<std::size_t>(n));
        for (auto [a, b] : pairs) {
          adj[static_cast<std::size_t>(a)].push_back(b);
          adj[static_cast<std::size_t>(b)].push_back(a);
        }
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        std::vector<NodeId> stack{0};
        seen[0] = 1;
        std::size_t cnt = 1;
        while (!stack.empty()) {
          NodeId v = stack.back();
          stack.pop_back();
          for (NodeId w : adj[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(w)]) {
              seen[static_cast<std::size_t>(w)] = 1;
              ++cnt;
              stack.push_back(w);
            }
        }
        ok = cnt == static_cast<std::size_t>(n);
      }
      if (ok) {
        for (auto [a, b] : pairs) edges.emplace_back(a, b, 1.0);
        return CapacitatedGraph::create(n, edges);
      }
    }
    throw Error("random_regular generation failed");
  }
  throw UnknownGenerator("unknown generator: " + name);
}

Demand demand_uniform_pairs(const CapacitatedGraph& g, int count, double amount,
                            std::uint64_t seed) {
  const int n = g.node_count();
  if (n < 2) throw Error("need at least two nodes");
  Rng rng(seed);
  Demand d;
  for (int i = 0; i < count; ++i) {
    NodeId s = static_cast<NodeId>(rng.next_below(n));
    NodeId t = static_cast<NodeId>(rng.next_below(n));
    if (s == t) {
      --i;
      continue;
    }
    d.add(std::min(s, t), std::max(s, t), amount);
  }
  return d;
}

Demand demand_permutation(const CapacitatedGraph& g, double amount, std::uint64_t seed) {
  const int n = g.node_count();
  std::vector<NodeId> perm(static_cast<std::size_t>(n));
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);
  Demand d;
  for (NodeId v = 0; v < n; ++v) {
    NodeId w = perm[static_cast<std::size_t>(v)];
    if (v < w) d.add(v, w, amount);
    else if (w < v) d.add(w, v, amount);
  }
  return d;
}

Demand demand_single_pair(NodeId s, NodeId t, double amount) {
  Demand d;
  d.add(std::min(s, t), std::max(s, t), amount);
  return d;
}

Demand filter_routable(const CapacitatedGraph& g, const Demand& d, int h) {
  WeightedGraph unit;
  unit.topo = g.topo;
  unit.weight = Eigen::VectorXd::Ones(g.edge_count());
  Demand out;
  for (const auto& [key, amount] : d.entries)
    if (hop_distance(unit, key.first, key.second, h) < kInfiniteDistance)
      out.add(key.first, key.second, amount);
  return out;
}

namespace {

int thread_budget() {
  const char* env = std::getenv("HOPROUTE_THREADS");
  if (!env) return 1;
  int v = std::atoi(env);
  return std::max(1, v);
}

ExperimentResult::Row run_cell(const ExperimentSpec& spec, const ExperimentSpec::Cell& cell) {
  using clock = std::chrono::steady_clock;
  ExperimentResult::Row row;
  row.graph = cell.graph_name;
  row.n = cell.graph.node_count();
  row.m = cell.graph.edge_count();
  row.h = cell.h;
  row.seed = cell.seed;
  try {
    Demand d = filter_routable(cell.graph, cell.demand, cell.h);
    auto t0 = clock::now();
    auto router = build_router(cell.graph, cell.h, spec.params, cell.seed);
    auto t1 = clock::now();
    row.hop_cap = router.hop_cap;
    auto opt = opt_hop_routing(cell.graph, d, cell.h);
    auto rep = route_demand(router, d, spec.samples_per_pair, mix_seed(cell.seed, 0xE));
    auto t2 = clock::now();
    row.opt = opt.value;
    row.cong_est = rep.congestion_value;
    row.max_hop = rep.max_hops;
    // standard error at the arg-max edge of the mean load
    Eigen::Index worst = 0;
    if (rep.mean_flow.size() > 0)
      (rep.mean_flow.array() / cell.graph.capacity.array()).maxCoeff(&worst);
    row.cong_stderr =
        rep.mean_flow.size() > 0 ? rep.stderr_flow[worst] / cell.graph.capacity[worst] : 0.0;
    row.ratio = row.opt > 0.0 ? row.cong_est / row.opt : 0.0;
    row.build_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    row.sample_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(t2 - t1).count();
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  ExperimentResult result;
  result.rows.resize(spec.cells.size());
  const int threads = std::min<int>(thread_budget(), static_cast<int>(spec.cells.size()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < spec.cells.size(); ++i)
      result.rows[i] = run_cell(spec, spec.cells[i]);
    return result;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= spec.cells.size()) return;
        result.rows[i] = run_cell(spec, spec.cells[i]);
      }
    });
  for (auto& th : pool) th.join();
  return result;
}

std::string result_to_csv(const ExperimentResult& result, bool include_timing) {
  std::ostringstream os;
  os << "graph,n,m,h,seed,opt,cong_est,cong_stderr,ratio,max_hop,hop_cap,build_ms,sample_ms\n";
  os.precision(12);
  for (const auto& r : result.rows) {
    os << r.graph << ',' << r.n << ',' << r.m << ',' << r.h << ',' << r.seed << ','
       << r.opt << ',' << r.cong_est << ',' << r.cong_stderr << ',' << r.ratio << ','
       << r.max_hop << ',' << r.hop_cap << ',';
    if (include_timing)
      os << r.build_ms << ',' << r.sample_ms;
    else
      os << "-,-";
    os << '\n';
  }
  return os.str();
}

nlohmann::json result_to_json(const ExperimentResult& result) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : result.rows) {
    nlohmann::json j;
    j["graph"] = r.graph;
    j["n"] = r.n;
    j["m"] = r.m;
    j["h"] = r.h;
    j["seed"] = r.seed;
    j["opt"] = r.opt;
    j["cong_est"] = r.cong_est;
    j["cong_stderr"] = r.cong_stderr;
    j["ratio"] = r.ratio;
    j["max_hop"] = r.max_hop;
    j["hop_cap"] = r.hop_cap;
    j["build_ms"] = r.build_ms;
    j["sample_ms"] = r.sample_ms;
    if (!r.error.empty()) j["error"] = r.error;
    rows.push_back(std::move(j));
  }
  return nlohmann::json{{"rows", std::move(rows)}};
}

}  // namespace hoproute
