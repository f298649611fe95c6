#include "hoproute/d1_router.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <nlohmann/json.hpp>

#include "hoproute/rng.hpp"

namespace hoproute {

WeightedGraph reweighted_graph(const CapacitatedGraph& g, const Eigen::VectorXd& prices,
                               int completion_exponent) {
  const int m = g.edge_count();
  if (prices.size() != m) throw BadDistribution("price vector size mismatch");
  if (m > 0 && prices.minCoeff() < 0.0)
    throw BadDistribution("negative edge price");
  if (m > 0 && std::abs(prices.sum() - 1.0) > 1e-9)
    throw BadDistribution("edge prices must sum to 1");
  const double floor_w =
      std::pow(static_cast<double>(std::max(2, g.node_count())),
               -static_cast<double>(completion_exponent) - 2.0);
  WeightedGraph out;
  out.topo = g.topo;
  out.weight = (prices.array() / g.capacity.array() + floor_w).matrix();
  return out;
}

double route_d1_congestion(const EmbeddingDistribution& dist, const CapacitatedGraph& g) {
  FlowVector load = FlowVector::Zero(g.edge_count());
  for (const auto& entry : dist.entries) load += entry.prob * d1_load_flow(entry.embedding, g);
  return congestion(load, g);
}

namespace {

void check_valid(const PartialTreeEmbedding& emb, const WeightedGraph& host) {
  auto violations = validate_embedding(emb, host);
  if (!violations.empty())
    throw Error("sampled embedding failed validation: " + violations.front().detail);
}

// Sample an embedding of the reweighted graph guaranteed to contain `v`:
// boost prices of edges at v and shrink the guard band until it is included.
EmbeddingDistribution::Entry boosted_sample(const CapacitatedGraph& g,
                                            const Eigen::VectorXd& prices, NodeId v,
                                            const MwuConfig& cfg, std::uint64_t seed) {
  Eigen::VectorXd boosted = prices;
  for (auto [nbr, e] : g.topo.neighbors(v)) boosted[e] *= 10.0;
  boosted /= boosted.sum();
  WeightedGraph host = reweighted_graph(g, boosted, cfg.completion_exponent);
  for (int attempt = 0; attempt < 50; ++attempt) {
    EmbedConfig ec = cfg.embed;
    // Past a few tries, force full inclusion by dropping the guard band.
    ec.guard_scale = attempt >= 4 ? 0.0 : cfg.embed.guard_scale / (1 << attempt);
    auto emb = sample_partial_embedding(host, cfg.h, cfg.eps, mix_seed(seed, attempt), ec);
    if (emb.contains(v)) {
      check_valid(emb, host);
      return {0.0, std::move(emb), host.weight};
    }
  }
  throw Error("boosted resampling failed to include a node");
}

std::vector<double> exclusion_freq(const std::vector<EmbeddingDistribution::Entry>& entries,
                                   int n) {
  std::vector<double> freq(static_cast<std::size_t>(n), 0.0);
  for (const auto& entry : entries)
    for (NodeId v = 0; v < n; ++v)
      if (!entry.embedding.contains(v)) freq[static_cast<std::size_t>(v)] += 1.0;
  for (double& f : freq) f /= std::max<std::size_t>(1, entries.size());
  return freq;
}

}  // namespace

EmbeddingDistribution build_d1_router(const CapacitatedGraph& g, int h,
                                      const MwuConfig& cfg, std::uint64_t seed) {
  const int n = g.node_count();
  const int m = g.edge_count();
  if (n <= 0 || m <= 0) throw EmptyGraph("router needs a nonempty graph");
  if (!(cfg.eps > 0.0 && cfg.eps < 1.0 / 3.0))
    throw InvalidEpsilon("exclusion budget must lie in (0, 1/3)");
  const int max_rounds =
      cfg.max_rounds > 0
          ? cfg.max_rounds
          : 64 * static_cast<int>(std::ceil(std::log2(std::max(2, n))));

  Eigen::VectorXd prices = Eigen::VectorXd::Constant(m, 1.0 / m);
  std::vector<EmbeddingDistribution::Entry> entries;
  std::vector<FlowVector> loads;
  FlowVector total_load = FlowVector::Zero(m);
  double best_single = std::numeric_limits<double>::infinity();
  bool converged = true;

  const double mix = 1.0 / (static_cast<double>(n) * n);
  int round = 0;
  for (; round < max_rounds; ++round) {
    WeightedGraph host = reweighted_graph(g, prices, cfg.completion_exponent);
    // Fan out candidate samples and keep the one with the lowest
    // price-weighted relative load (the Lagrangian best response).
    PartialTreeEmbedding emb;
    FlowVector load;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int c = 0; c < std::max(1, cfg.candidates); ++c) {
      auto cand = sample_partial_embedding(
          host, h, cfg.eps,
          mix_seed(seed, static_cast<std::uint64_t>(round) * 97 + c), cfg.embed);
      FlowVector cload = d1_load_flow(cand, g);
      double cost = prices.dot((cload.array() / g.capacity.array()).matrix());
      if (cost < best_cost) {
        best_cost = cost;
        emb = std::move(cand);
        load = std::move(cload);
      }
    }
    check_valid(emb, host);
    best_single = std::min(best_single, congestion(load, g));
    entries.push_back({0.0, std::move(emb), host.weight});
    loads.push_back(load);
    total_load += load;

    Eigen::ArrayXd rel = load.array() / g.capacity.array();
    double width = rel.maxCoeff();
    if (width > 0.0) {
      prices = (prices.array() * (cfg.eta * rel / width).exp()).matrix();
      prices /= prices.sum();
      // Keep every price bounded away from zero so rarely-loaded (virtual)
      // edges stay expensive and off the sampled shortest paths.
      prices = ((1.0 - mix) * prices).array() + mix / m;
    }

    if (round + 1 >= cfg.min_rounds) {
      double ensemble = congestion(total_load / entries.size(), g);
      double target = cfg.alpha_target > 0.0 ? cfg.alpha_target : 4.0 * best_single;
      if (ensemble <= target) {
        ++round;
        break;
      }
    }
  }
  if (cfg.alpha_target > 0.0 &&
      congestion(total_load / entries.size(), g) > cfg.alpha_target)
    converged = false;

  // Exclusion repair: first add price-boosted rounds that include the most
  // deficient node, then prune entries that still break a node's budget.
  for (int iter = 0; iter < 2 * n; ++iter) {
    auto freq = exclusion_freq(entries, n);
    NodeId worst = -1;
    for (NodeId v = 0; v < n; ++v)
      if (freq[static_cast<std::size_t>(v)] > cfg.eps &&
          (worst < 0 || freq[v] > freq[worst]))
        worst = v;
    if (worst < 0) break;
    entries.push_back(boosted_sample(g, prices, worst, cfg,
                                     mix_seed(seed, 0x9000 + static_cast<std::uint64_t>(iter))));
  }
  for (;;) {
    auto freq = exclusion_freq(entries, n);
    std::vector<char> deficient(static_cast<std::size_t>(n), 0);
    bool any = false;
    for (NodeId v = 0; v < n; ++v)
      if (freq[static_cast<std::size_t>(v)] > cfg.eps) deficient[v] = 1, any = true;
    if (!any) break;
    std::size_t before = entries.size();
    std::erase_if(entries, [&](const EmbeddingDistribution::Entry& e) {
      for (NodeId v = 0; v < n; ++v)
        if (deficient[static_cast<std::size_t>(v)] && !e.embedding.contains(v)) return true;
      return false;
    });
    if (entries.empty() || entries.size() == before)
      throw Error("exclusion repair failed to meet the budget");
  }

  EmbeddingDistribution dist;
  dist.entries = std::move(entries);
  for (auto& e : dist.entries) e.prob = 1.0 / dist.entries.size();
  dist.epsilon = cfg.eps;
  dist.dilation_hops = 0;
  for (const auto& e : dist.entries)
    dist.dilation_hops = std::max(dist.dilation_hops, max_route_hops(e.embedding));
  dist.alpha = route_d1_congestion(dist, g);
  dist.verified = true;
  dist.converged = converged;
  return dist;
}

nlohmann::json distribution_to_json(const EmbeddingDistribution& dist) {
  nlohmann::json j;
  j["dilation_hops"] = dist.dilation_hops;
  j["epsilon"] = dist.epsilon;
  j["alpha"] = dist.alpha;
  j["verified"] = dist.verified;
  j["converged"] = dist.converged;
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : dist.entries) {
    nlohmann::json je;
    je["prob"] = e.prob;
    je["embedding"] = embedding_to_json(e.embedding);
    je["host_weight"] =
        std::vector<double>(e.host_weight.data(), e.host_weight.data() + e.host_weight.size());
    entries.push_back(std::move(je));
  }
  j["entries"] = std::move(entries);
  return j;
}

EmbeddingDistribution distribution_from_json(const nlohmann::json& j) {
  EmbeddingDistribution dist;
  dist.dilation_hops = j.at("dilation_hops").get<int>();
  dist.epsilon = j.at("epsilon").get<double>();
  dist.alpha = j.at("alpha").get<double>();
  dist.verified = j.at("verified").get<bool>();
  dist.converged = j.at("converged").get<bool>();
  for (const auto& je : j.at("entries")) {
    EmbeddingDistribution::Entry e;
    e.prob = je.at("prob").get<double>();
    e.embedding = embedding_from_json(je.at("embedding"));
    auto w = je.at("host_weight").get<std::vector<double>>();
    e.host_weight = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
    dist.entries.push_back(std::move(e));
  }
  return dist;
}

}  // namespace hoproute
