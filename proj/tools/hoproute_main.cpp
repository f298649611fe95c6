#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "hoproute/harness.hpp"
#include "hoproute/io.hpp"
#include "hoproute/oblivious.hpp"
#include "hoproute/opt_oracle.hpp"
#include "hoproute/rng.hpp"
#include "hoproute/sched.hpp"

namespace {

using namespace hoproute;

// Reserve -h for hop bounds; help stays available as --help.
CLI::App* add_sub(CLI::App& app, const std::string& name, const std::string& desc) {
  CLI::App* sub = app.add_subcommand(name, desc);
  sub->set_help_flag("--help", "print help");
  return sub;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

void write_json(const std::string& path, const nlohmann::json& j) {
  write_text(path, j.dump(2) + "\n");
}

nlohmann::json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  return nlohmann::json::parse(in);
}

std::string path_line(const RoutePath& p) {
  std::string line;
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    if (i) line += ' ';
    line += std::to_string(p.nodes[i]);
  }
  return line;
}

CapacitatedGraph graph_from_spec(const nlohmann::json& j) {
  if (j.contains("file")) return read_graph_file(j.at("file").get<std::string>());
  auto name = j.at("gen").get<std::string>();
  std::uint64_t seed = j.value("seed", 0);
  if (name == "lower_bound")
    return gen_lower_bound_family(j.at("params").at(0).get<int>()).graph;
  return gen_standard(name, j.at("params").get<std::vector<int>>(), seed);
}

Demand demand_from_spec(const nlohmann::json& j, const CapacitatedGraph& g,
                        std::uint64_t seed) {
  if (j.contains("file")) return read_demand_file(j.at("file").get<std::string>());
  auto name = j.at("gen").get<std::string>();
  double amount = j.value("amount", 1.0);
  if (name == "uniform")
    return demand_uniform_pairs(g, j.at("pairs").get<int>(), amount,
                                mix_seed(seed, 0xD));
  if (name == "permutation") return demand_permutation(g, amount, mix_seed(seed, 0xD));
  if (name == "single")
    return demand_single_pair(j.at("s").get<NodeId>(), j.at("t").get<NodeId>(), amount);
  if (name == "d1") return d1_demand(g);
  throw UnknownGenerator("unknown demand generator: " + name);
}

int run(int argc, char** argv) {
  CLI::App app{"hop-constrained oblivious routing toolkit"};
  app.require_subcommand(1);

  // build
  auto* build = add_sub(app, "build", "build a router and serialize it");
  std::string g_path, out_path;
  int hop = 1, completion_c = 6;
  std::uint64_t seed = 1;
  build->add_option("-g,--graph", g_path)->required();
  build->add_option("-h,--hops", hop)->required();
  build->add_option("-C,--completion", completion_c);
  build->add_option("--seed", seed);
  build->add_option("-o,--out", out_path)->required();

  // sample
  auto* sample = add_sub(app, "sample", "sample s-t paths from a router");
  std::string router_path;
  NodeId src = 0, dst = 0;
  int count = 1;
  sample->add_option("-r,--router", router_path)->required();
  sample->add_option("-s,--source", src)->required();
  sample->add_option("-t,--target", dst)->required();
  sample->add_option("-n,--count", count);
  sample->add_option("--seed", seed);

  // route
  auto* route = add_sub(app, "route", "Monte Carlo route a demand file");
  std::string demand_path;
  int samples = 100;
  route->add_option("-r,--router", router_path)->required();
  route->add_option("-d,--demand", demand_path)->required();
  route->add_option("--samples", samples);
  route->add_option("--seed", seed);
  route->add_option("-o,--out", out_path)->required();

  // opt
  auto* opt = add_sub(app, "opt", "exact optimal hop-constrained routing");
  opt->add_option("-g,--graph", g_path)->required();
  opt->add_option("-d,--demand", demand_path)->required();
  opt->add_option("-h,--hops", hop)->required();
  opt->add_option("-o,--out", out_path)->required();

  // schedule
  auto* sched = add_sub(app, "schedule", "random-delay schedule for a path set");
  std::string paths_path;
  sched->add_option("-g,--graph", g_path)->required();
  sched->add_option("--paths", paths_path)->required();
  sched->add_option("--seed", seed);
  sched->add_option("-o,--out", out_path)->required();

  // gen
  auto* gen = add_sub(app, "gen", "generate a benchmark graph");
  std::string family;
  std::vector<int> params;
  std::string demand_out;
  gen->add_option("family", family)->required();
  gen->add_option("params", params);
  gen->add_option("--seed", seed);
  gen->add_option("-o,--out", out_path)->required();
  gen->add_option("--demand-out", demand_out);

  // eval
  auto* eval = add_sub(app, "eval", "run an experiment spec");
  std::string spec_path, out_dir;
  eval->add_option("-c,--spec", spec_path)->required();
  eval->add_option("-o,--outdir", out_dir)->required();

  CLI11_PARSE(app, argc, argv);

  if (build->parsed()) {
    auto g = read_graph_file(g_path);
    RouterParams params_;
    params_.completion_exponent = completion_c;
    auto router = build_router(g, hop, params_, seed);
    write_json(out_path, router_to_json(router));
  } else if (sample->parsed()) {
    auto router = router_from_json(load_json(router_path));
    for (int i = 0; i < count; ++i)
      std::cout << path_line(sample_path(router, src, dst,
                                         mix_seed(seed, static_cast<std::uint64_t>(i))))
                << '\n';
  } else if (route->parsed()) {
    auto router = router_from_json(load_json(router_path));
    auto d = read_demand_file(demand_path);
    auto rep = route_demand(router, d, samples, seed);
    nlohmann::json j;
    j["congestion"] = rep.congestion_value;
    j["max_hops"] = rep.max_hops;
    j["mean_flow"] = std::vector<double>(rep.mean_flow.data(),
                                         rep.mean_flow.data() + rep.mean_flow.size());
    j["stderr_flow"] = std::vector<double>(
        rep.stderr_flow.data(), rep.stderr_flow.data() + rep.stderr_flow.size());
    write_json(out_path, j);
  } else if (opt->parsed()) {
    auto g = read_graph_file(g_path);
    auto d = read_demand_file(demand_path);
    auto res = opt_hop_routing(g, d, hop);
    nlohmann::json j;
    if (res.unroutable()) {
      j["value"] = "inf";
    } else {
      j["value"] = res.value;
      j["dual_bound"] = res.dual_bound;
      j["dual_prices"] = std::vector<double>(
          res.dual_prices.data(), res.dual_prices.data() + res.dual_prices.size());
      nlohmann::json witness = nlohmann::json::array();
      for (const auto& [key, list] : res.witness)
        for (const auto& wp : list)
          witness.push_back({{"s", key.first},
                             {"t", key.second},
                             {"weight", wp.weight},
                             {"path", wp.path.nodes}});
      j["witness"] = std::move(witness);
    }
    write_json(out_path, j);
  } else if (sched->parsed()) {
    auto g = read_graph_file(g_path);
    auto paths = read_paths_file(paths_path);
    auto s = random_delay_schedule(paths, g, seed);
    auto rep = schedule_report(s);
    nlohmann::json j;
    j["completion"] = rep.completion;
    j["congestion"] = rep.congestion;
    j["dilation"] = rep.dilation;
    j["ratio"] = rep.ratio;
    j["delays"] = s.delay;
    write_json(out_path, j);
  } else if (gen->parsed()) {
    if (family == "lower_bound") {
      if (params.size() != 1) throw UnknownGenerator("lower_bound needs k");
      auto fam = gen_lower_bound_family(params[0]);
      write_graph_file(out_path, fam.graph);
      if (!demand_out.empty()) write_demand_file(demand_out, fam.demand);
    } else {
      write_graph_file(out_path, gen_standard(family, params, seed));
    }
  } else if (eval->parsed()) {
    auto spec_json = load_json(spec_path);
    ExperimentSpec spec;
    spec.samples_per_pair = spec_json.value("samples", 100);
    for (const auto& cj : spec_json.at("cells")) {
      ExperimentSpec::Cell cell;
      cell.graph = graph_from_spec(cj.at("graph"));
      cell.graph_name = cj.at("graph").value("gen", cj.at("graph").value("file", "graph"));
      cell.h = cj.at("h").get<int>();
      cell.seed = cj.value("seed", 1);
      cell.demand = demand_from_spec(cj.at("demand"), cell.graph, cell.seed);
      spec.cells.push_back(std::move(cell));
    }
    auto result = run_experiment(spec);
    std::filesystem::create_directories(out_dir);
    write_text((std::filesystem::path(out_dir) / "report.csv").string(),
               result_to_csv(result));
    write_json((std::filesystem::path(out_dir) / "report.json").string(),
               result_to_json(result));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
