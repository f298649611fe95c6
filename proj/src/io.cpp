#include "hoproute/io.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace hoproute {

namespace {
std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  return out;
}
}  // namespace

CapacitatedGraph read_graph(std::istream& in) {
  int n = 0, m = 0;
  if (!(in >> n >> m)) throw ParseError("graph file: missing 'n m' header");
  if (n <= 0 || m < 0) throw ParseError("graph file: invalid header");
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  edges.reserve(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    NodeId u, v;
    double c;
    if (!(in >> u >> v >> c)) throw ParseError("graph file: truncated edge list");
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError("graph file: node id out of range");
    if (std::isnan(c) || c <= 0.0) throw ParseError("graph file: capacity must be positive");
    edges.emplace_back(u, v, c);
  }
  return CapacitatedGraph::create(n, edges);
}

CapacitatedGraph read_graph_file(const std::string& path) {
  auto in = open_input(path);
  return read_graph(in);
}

void write_graph(std::ostream& out, const CapacitatedGraph& g) {
  out << g.node_count() << ' ' << g.edge_count() << '\n';
  out << std::setprecision(17);
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.topo.edge(e);
    out << ed.u << ' ' << ed.v << ' ' << g.capacity[e] << '\n';
  }
}

void write_graph_file(const std::string& path, const CapacitatedGraph& g) {
  auto out = open_output(path);
  write_graph(out, g);
}

Demand read_demand(std::istream& in) {
  Demand d;
  NodeId s, t;
  double a;
  while (in >> s >> t >> a) {
    if (s < 0 || t < 0) throw ParseError("demand file: node id out of range");
    if (std::isnan(a) || a < 0.0) throw ParseError("demand file: amount must be nonnegative");
    d.add(s, t, a);
  }
  if (!in.eof()) throw ParseError("demand file: malformed line");
  return d;
}

Demand read_demand_file(const std::string& path) {
  auto in = open_input(path);
  return read_demand(in);
}

void write_demand(std::ostream& out, const Demand& d) {
  out << std::setprecision(17);
  for (const auto& [st, a] : d.entries)
    out << st.first << ' ' << st.second << ' ' << a << '\n';
}

void write_demand_file(const std::string& path, const Demand& d) {
  auto out = open_output(path);
  write_demand(out, d);
}

std::vector<RoutePath> read_paths_file(const std::string& path) {
  auto in = open_input(path);
  std::vector<RoutePath> out;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    RoutePath p;
    NodeId v;
    while (ls >> v) p.nodes.push_back(v);
    if (!p.nodes.empty()) out.push_back(std::move(p));
  }
  return out;
}

}  // namespace hoproute
