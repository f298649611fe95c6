// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Everything is seeded, so a green run is reproducible bit-for-bit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hoproute/harness.hpp"
#include "hoproute/rng.hpp"
#include "hoproute/sched.hpp"

using namespace hoproute;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool g_all_pass = true;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  if (!pass) g_all_pass = false;
}

struct Cell {
  std::string name;
  CapacitatedGraph g;
  int h;
  ObliviousRouter router;
};

std::vector<std::pair<std::string, CapacitatedGraph>> corpus_graphs() {
  return {{"grid4x4", gen_standard("grid", {4, 4}, 0)},
          {"cycle16", gen_standard("cycle", {16}, 0)},
          {"hypercube4", gen_standard("hypercube", {4}, 0)},
          {"random_regular16_3", gen_standard("random_regular", {16, 3}, 7)}};
}

std::vector<std::pair<NodeId, NodeId>> routable_pairs(const CapacitatedGraph& g, int h) {
  Demand all;
  for (NodeId s = 0; s < g.node_count(); ++s)
    for (NodeId t = s + 1; t < g.node_count(); ++t) all.add(s, t, 1.0);
  auto kept = filter_routable(g, all, h);
  std::vector<std::pair<NodeId, NodeId>> out;
  for (const auto& [pair, amount] : kept.entries) out.push_back(pair);
  return out;
}

bool path_on_real_edges(const RoutePath& p, const CapacitatedGraph& base) {
  for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i)
    if (base.topo.edge_index(p.nodes[i], p.nodes[i + 1]) < 0) return false;
  return true;
}

bool path_is_simple(const RoutePath& p) {
  std::set<NodeId> seen(p.nodes.begin(), p.nodes.end());
  return seen.size() == p.nodes.size();
}

// --- criterion 1: oracle vs brute force on small random instances ----------

void criterion1() {
  auto t0 = Clock::now();
  Rng rng(12345);
  int done = 0, matched = 0;
  while (done < 25) {
    const int n = 3 + static_cast<int>(rng.next_below(4));
    std::vector<std::tuple<NodeId, NodeId, double>> edges;
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = u + 1; v < n; ++v)
        if (rng.next_double() < 0.6) edges.push_back({u, v, 0.5 + 1.5 * rng.next_double()});
    if (edges.empty()) continue;
    auto g = CapacitatedGraph::create(n, edges);
    Demand d;
    const int pairs = 1 + static_cast<int>(rng.next_below(3));
    for (int i = 0; i < pairs; ++i) {
      NodeId s = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(n)));
      NodeId t = static_cast<NodeId>(rng.next_below(static_cast<std::uint64_t>(n)));
      if (s == t) continue;
      d.add(std::min(s, t), std::max(s, t), 0.5 + rng.next_double());
    }
    if (d.entries.empty()) continue;
    const int h = 1 + static_cast<int>(rng.next_below(3));
    const double bf = brute_force_opt(g, d, h);
    const auto lp = opt_hop_routing(g, d, h);
    ++done;
    if (std::isinf(bf) && lp.unroutable()) {
      ++matched;
    } else if (!std::isinf(bf) && !lp.unroutable() &&
               std::abs(bf - lp.value) <= 1e-6 * std::max(1.0, std::abs(bf))) {
      ++matched;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream msg;
  msg << "oracle matches brute force on " << matched << "/" << done
      << " random instances (n<=6, h<=3) in " << secs << " s";
  report(1, matched == done && secs < 10.0, msg.str());
}

// --- criterion 2: hop cap, real edges only, simplicity ---------------------

void criterion2(const std::vector<Cell>& cells) {
  long total = 0, over_cap = 0, non_real = 0, non_simple = 0;
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const Cell& cell = cells[ci];
    auto pool = routable_pairs(cell.g, cell.h);
    for (int i = 0; i < 850; ++i) {
      const auto [s, t] = pool[static_cast<std::size_t>(i) % pool.size()];
      auto p = sample_path(cell.router, s, t,
                           mix_seed(777, ci * 1000000 + static_cast<std::uint64_t>(i)));
      ++total;
      if (p.hops() > cell.router.hop_cap) ++over_cap;
      if (!path_on_real_edges(p, cell.g)) ++non_real;
      if (!path_is_simple(p)) ++non_simple;
    }
  }
  std::ostringstream msg;
  msg << total << " sampled paths: " << over_cap << " over hop_cap, " << non_real
      << " on virtual edges, " << non_simple << " non-simple";
  report(2, total >= 10000 && over_cap == 0 && non_real == 0 && non_simple == 0, msg.str());
}

// --- criteria 3 and 4: embedding validity and flow triangle ----------------

struct SampledEmbedding {
  PartialTreeEmbedding emb;
  WeightedGraph host;
};

std::vector<SampledEmbedding> sample_embeddings() {
  std::vector<SampledEmbedding> out;
  for (const auto& [name, g] : corpus_graphs()) {
    WeightedGraph w;
    w.topo = g.topo;
    w.weight = Eigen::VectorXd::Ones(g.edge_count());
    const WeightedGraph host = completed_weighted(w);
    for (int i = 0; i < 25; ++i)
      out.push_back({sample_partial_embedding(w, 4, 0.1, mix_seed(4242, static_cast<std::uint64_t>(i)), {}), host});
  }
  return out;
}

void criterion3(const std::vector<Cell>& cells, const std::vector<SampledEmbedding>& sampled) {
  long checked = 0, bad = 0;
  for (const Cell& cell : cells) {
    for (const EmbeddingDistribution* dist : {&cell.router.t1, &cell.router.t2}) {
      for (const auto& entry : dist->entries) {
        WeightedGraph host;
        host.topo = cell.router.completed.topo;
        host.weight = entry.host_weight;
        ++checked;
        if (!validate_embedding(entry.embedding, host).empty()) ++bad;
      }
    }
  }
  for (const auto& se : sampled) {
    ++checked;
    if (!validate_embedding(se.emb, se.host).empty()) ++bad;
  }
  std::ostringstream msg;
  msg << checked << " embeddings validated, " << bad << " with violations";
  report(3, checked > 0 && bad == 0, msg.str());
}

void criterion4(const std::vector<SampledEmbedding>& sampled) {
  long embeddings = 0, violations = 0;
  for (const auto& se : sampled) {
    ++embeddings;
    const auto nodes = se.emb.tree_nodes();
    const int k = static_cast<int>(nodes.size());
    const Eigen::Index m = se.host.topo.edge_count();
    // F[i][j] = edge flow of the tree route from nodes[i] to nodes[j].
    std::vector<FlowVector> flows(static_cast<std::size_t>(k * k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        flows[static_cast<std::size_t>(i * k + j)] =
            i == j ? FlowVector::Zero(m)
                   : path_flow(tree_route(se.emb, nodes[i], nodes[j]), se.host.topo);
    for (int a = 0; a < k; ++a)
      for (int b = 0; b < k; ++b)
        for (int c = 0; c < k; ++c) {
          const auto& fac = flows[static_cast<std::size_t>(a * k + c)];
          const auto& fab = flows[static_cast<std::size_t>(a * k + b)];
          const auto& fbc = flows[static_cast<std::size_t>(b * k + c)];
          if (((fab + fbc - fac).array() < -1e-9).any()) ++violations;
        }
  }
  std::ostringstream msg;
  msg << "flow triangle inequality exhaustive over " << embeddings << " embeddings, "
      << violations << " violating triples";
  report(4, embeddings >= 100 && violations == 0, msg.str());
}

// --- criterion 5: D1-router certification ----------------------------------

void criterion5() {
  const double alpha_target = 16.0;
  const double eps = 0.05;
  bool ok = true;
  double worst_alpha = 0.0, worst_excl = 0.0;
  for (const auto& [name, g] : corpus_graphs()) {
    auto gc = complete_graph(g, 6);
    MwuConfig cfg;
    cfg.eps = eps;
    cfg.alpha_target = alpha_target;
    cfg.max_rounds = 400;
    auto dist = build_d1_router(gc, 1, cfg, 99);
    const double cong = route_d1_congestion(dist, gc);
    worst_alpha = std::max(worst_alpha, cong);
    if (!dist.converged || cong > alpha_target + 1e-9) ok = false;

    // Per-node exclusion frequency over 1000 categorical draws.
    Rng rng(mix_seed(5151, static_cast<std::uint64_t>(name.size())));
    const int draws = 1000;
    std::vector<int> absent(static_cast<std::size_t>(gc.node_count()), 0);
    for (int i = 0; i < draws; ++i) {
      double u = rng.next_double(), acc = 0.0;
      const auto* picked = &dist.entries.back();
      for (const auto& e : dist.entries) {
        acc += e.prob;
        if (u < acc) { picked = &e; break; }
      }
      for (NodeId v = 0; v < gc.node_count(); ++v)
        if (!picked->embedding.contains(v)) ++absent[static_cast<std::size_t>(v)];
    }
    const double bound = eps + 3.0 * std::sqrt(eps * (1.0 - eps) / draws);
    for (int c : absent) {
      const double freq = static_cast<double>(c) / draws;
      worst_excl = std::max(worst_excl, freq);
      if (freq > bound) ok = false;
    }
  }
  std::ostringstream msg;
  msg << "D1 congestion <= " << alpha_target << " on all corpus graphs (worst " << worst_alpha
      << "), worst per-node exclusion " << worst_excl << " vs bound "
      << eps + 3.0 * std::sqrt(eps * (1.0 - eps) / 1000.0);
  report(5, ok, msg.str());
}

// --- criterion 6: congestion competitiveness on the corpus -----------------

void criterion6() {
  auto t0 = Clock::now();
  ExperimentSpec spec;
  spec.samples_per_pair = 100;
  for (const auto& [name, g] : corpus_graphs()) {
    for (int h : {2, 4, 8}) {
      ExperimentSpec::Cell c;
      c.graph_name = name;
      c.graph = g;
      c.h = h;
      c.seed = 1000 + static_cast<std::uint64_t>(h);
      c.demand = demand_uniform_pairs(g, 20, 1.0, mix_seed(7, static_cast<std::uint64_t>(h)));
      spec.cells.push_back(c);
    }
  }
  auto res = run_experiment(spec);
  std::vector<double> ratios;
  bool errors = false;
  for (const auto& row : res.rows) {
    if (!row.error.empty()) errors = true;
    else ratios.push_back(row.ratio);
  }
  std::sort(ratios.begin(), ratios.end());
  const double secs = seconds_since(t0);
  std::ostringstream msg;
  msg << "rho over " << ratios.size() << " cells [";
  for (std::size_t i = 0; i < ratios.size(); ++i)
    msg << (i ? " " : "") << std::round(ratios[i] * 100.0) / 100.0;
  const double median = ratios.empty() ? 1e18 : ratios[ratios.size() / 2];
  msg << "], median " << median << ", " << secs << " s";
  const bool ok = !errors && ratios.size() == spec.cells.size() &&
                  ratios.back() <= 50.0 && median <= 10.0 && secs < 1800.0;
  report(6, ok, msg.str());
}

// --- criterion 7: lower-bound family separation ----------------------------

void criterion7() {
  auto t0 = Clock::now();
  bool ok = true;
  std::ostringstream detail;
  for (int k : {4, 6, 8}) {
    auto fam = gen_lower_bound_family(k);
    const int h = 2;
    auto hop = opt_hop_routing(fam.graph, fam.demand, h);
    const double opt_h = hop.unroutable() ? kInfiniteDistance : hop.value;
    auto free_h = opt_hop_routing(fam.graph, fam.demand, fam.graph.node_count() - 1);
    // The family admits the identity routing (one unit along each path) at
    // congestion 1; the LP may balance slightly below it, never above.
    if (!(opt_h >= static_cast<double>(k) / (2 * h))) ok = false;
    if (free_h.unroutable() || free_h.value > 1.0 + 1e-6) ok = false;
    detail << " k=" << k << ":(opt2=" << (std::isinf(opt_h) ? "inf" : std::to_string(opt_h))
           << ",opt_free=" << free_h.value << ")";
  }
  const double secs = seconds_since(t0);
  if (secs >= 60.0) ok = false;
  std::ostringstream msg;
  msg << "lower-bound family separation" << detail.str() << ", " << secs << " s";
  report(7, ok, msg.str());
}

// --- criterion 8: subflow cover failure rates ------------------------------

void criterion8(const std::vector<Cell>& cells) {
  const int samples = 200;
  bool ok = true;
  double worst_gamma = 0.0, worst_joint_excess = 0.0;
  int pairs_checked = 0;
  for (const Cell& cell : cells) {
    if (cell.h != 2) continue;
    auto d = filter_routable(cell.g, demand_uniform_pairs(cell.g, 6, 1.0, 808), cell.h);
    if (d.entries.empty()) continue;
    auto witness = opt_hop_routing(cell.g, d, cell.h);
    auto diag = subflow_diagnostics(cell.router, d, witness, samples, 909);
    const double sigma_single = std::sqrt(0.25 / samples);
    for (const auto& p : diag.pairs) {
      ++pairs_checked;
      worst_gamma = std::max(worst_gamma, p.gamma_hat);
      if (p.gamma_hat > 0.5 + 3.0 * sigma_single) ok = false;
      const double jp = p.joint_pred;  // gamma_hat^r
      const double sigma_joint = std::sqrt(std::max(jp * (1.0 - jp), 0.0) / samples);
      worst_joint_excess = std::max(worst_joint_excess, p.joint_hat - jp);
      if (p.joint_hat > jp + 3.0 * sigma_joint + 1e-12) ok = false;
    }
  }
  std::ostringstream msg;
  msg << pairs_checked << " pairs: worst single-cover failure " << worst_gamma
      << " (bound " << 0.5 + 3.0 * std::sqrt(0.25 / samples) << "), worst joint excess "
      << worst_joint_excess;
  report(8, ok && pairs_checked > 0, msg.str());
}

// --- criterion 9: random-delay scheduling ----------------------------------

void criterion9(const std::vector<Cell>& cells) {
  long runs = 0, lower_bad = 0, upper_ok = 0;
  for (const Cell& cell : cells) {
    if (cell.h != 4) continue;
    auto pool = routable_pairs(cell.g, cell.h);
    const double factor = 4.0 * std::ceil(std::log2(std::max(2, cell.g.node_count())));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      Rng rng(mix_seed(616, seed));
      std::vector<std::pair<NodeId, NodeId>> requests;
      for (int i = 0; i < 50; ++i)
        requests.push_back(pool[rng.next_below(pool.size())]);
      auto integral = integral_route(cell.router, requests, mix_seed(seed, 3));
      auto sched = random_delay_schedule(integral.paths, cell.g, mix_seed(seed, 4));
      auto rep = schedule_report(sched);
      ++runs;
      if (rep.completion < std::max(rep.congestion, rep.dilation)) ++lower_bad;
      if (rep.completion <= factor * (rep.congestion + rep.dilation)) ++upper_ok;
    }
  }
  std::ostringstream msg;
  msg << runs << " schedules: " << lower_bad << " below max(C,D), " << upper_ok
      << " within 4*ceil(log2 n)*(C+D)";
  report(9, runs >= 80 && lower_bad == 0 &&
             static_cast<double>(upper_ok) >= 0.95 * static_cast<double>(runs),
         msg.str());
}

// --- criterion 10: determinism and obliviousness ---------------------------

void criterion10(const std::vector<Cell>& cells) {
  bool ok = true;
  std::string why = "byte-identical rebuilds, paths, reports; pair sampling demand-independent";

  const Cell* grid4 = nullptr;
  for (const Cell& c : cells)
    if (c.name == "grid4x4" && c.h == 4) grid4 = &c;
  if (grid4 == nullptr) { report(10, false, "grid cell missing"); return; }

  auto rebuilt = build_router(grid4->g, grid4->h, RouterParams{}, mix_seed(31337, 4));
  if (router_to_json(rebuilt).dump() != router_to_json(grid4->router).dump()) {
    ok = false;
    why = "router rebuild differs";
  }
  auto pool = routable_pairs(grid4->g, grid4->h);
  for (std::uint64_t i = 0; i < 50 && ok; ++i) {
    const auto [s, t] = pool[static_cast<std::size_t>(i) % pool.size()];
    auto a = sample_path(grid4->router, s, t, i);
    auto b = sample_path(rebuilt, s, t, i);
    if (a.nodes != b.nodes) { ok = false; why = "sampled paths differ across rebuilds"; }
  }

  ExperimentSpec spec;
  spec.samples_per_pair = 40;
  ExperimentSpec::Cell c;
  c.graph_name = "grid4x4";
  c.graph = grid4->g;
  c.h = 4;
  c.seed = 5;
  c.demand = demand_uniform_pairs(grid4->g, 8, 1.0, 55);
  spec.cells.push_back(c);
  c.graph_name = "cycle16";
  c.graph = gen_standard("cycle", {16}, 0);
  c.seed = 6;
  spec.cells.push_back(c);
  const std::string serial = result_to_csv(run_experiment(spec), false);
  setenv("HOPROUTE_THREADS", "4", 1);
  const std::string threaded = result_to_csv(run_experiment(spec), false);
  unsetenv("HOPROUTE_THREADS");
  if (serial != threaded) { ok = false; why = "experiment report depends on thread count"; }

  // Obliviousness: routing extra demand must not change the flow any
  // sub-demand receives.
  Demand da, db, dboth;
  da.add(pool[0].first, pool[0].second, 1.0);
  da.add(pool[3].first, pool[3].second, 0.5);
  db.add(pool[7].first, pool[7].second, 2.0);
  for (const Demand* part : {&da, &db})
    for (const auto& [pair, amount] : part->entries) dboth.add(pair.first, pair.second, amount);
  auto ra = route_demand(grid4->router, da, 60, 2024);
  auto rb = route_demand(grid4->router, db, 60, 2024);
  auto rboth = route_demand(grid4->router, dboth, 60, 2024);
  if ((rboth.mean_flow - ra.mean_flow - rb.mean_flow).cwiseAbs().maxCoeff() > 1e-9) {
    ok = false;
    why = "pair sampling changed by presence of other demands";
  }
  report(10, ok, why);
}

// --- criterion 11: integral rounding on the grid ---------------------------

void criterion11(const std::vector<Cell>& cells) {
  const Cell* grid4 = nullptr;
  for (const Cell& c : cells)
    if (c.name == "grid4x4" && c.h == 4) grid4 = &c;
  if (grid4 == nullptr) { report(11, false, "grid cell missing"); return; }
  auto pool = routable_pairs(grid4->g, grid4->h);
  const double slack = 2.0 * std::log2(std::max(2, grid4->g.node_count()));
  int runs = 0, within = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(mix_seed(1111, seed));
    std::vector<std::pair<NodeId, NodeId>> requests;
    Demand dem;
    for (int i = 0; i < 50; ++i) {
      auto pr = pool[rng.next_below(pool.size())];
      requests.push_back(pr);
      dem.add(pr.first, pr.second, 1.0);
    }
    auto frac = route_demand(grid4->router, dem, 200, mix_seed(seed, 5));
    auto cstar = opt_hop_routing(grid4->g, dem, grid4->h);
    auto integral = integral_route(grid4->router, requests, mix_seed(seed, 9));
    // 8 * (alpha estimate) * C* + 2 log2 n with alpha = cong_est / C*.
    const double bound = 8.0 * (frac.congestion_value / cstar.value) * cstar.value + slack;
    ++runs;
    if (integral.max_congestion <= bound) ++within;
  }
  std::ostringstream msg;
  msg << within << "/" << runs << " integral 50-request batches within 8*alpha*C* + 2 log2 n";
  report(11, runs == 20 && static_cast<double>(within) >= 0.95 * runs, msg.str());
}

}  // namespace

int main() {
  try {
    std::vector<Cell> cells;
    for (const auto& [name, g] : corpus_graphs())
      for (int h : {2, 4, 8})
        cells.push_back({name, g, h, build_router(g, h, RouterParams{}, mix_seed(31337, static_cast<std::uint64_t>(h)))});

    criterion1();
    criterion2(cells);
    auto sampled = sample_embeddings();
    criterion3(cells, sampled);
    criterion4(sampled);
    criterion5();
    criterion6();
    criterion7();
    criterion8(cells);
    criterion9(cells);
    criterion10(cells);
    criterion11(cells);
  } catch (const std::exception& ex) {
    std::printf("[FAIL] acceptance run aborted: %s\n", ex.what());
    return 1;
  }
  return g_all_pass ? 0 : 1;
}
