#pragma once

#include <iosfwd>
#include <string>

#include "hoproute/graph.hpp"

namespace hoproute {

// Text format: header "n m", then m lines "u v capacity" (0-based ids).
CapacitatedGraph read_graph(std::istream& in);
CapacitatedGraph read_graph_file(const std::string& path);
void write_graph(std::ostream& out, const CapacitatedGraph& g);
void write_graph_file(const std::string& path, const CapacitatedGraph& g);

// Demand format: lines "s t amount".
Demand read_demand(std::istream& in);
Demand read_demand_file(const std::string& path);
void write_demand(std::ostream& out, const Demand& d);
void write_demand_file(const std::string& path, const Demand& d);

// Paths format: one path per line, space-separated node ids.
std::vector<RoutePath> read_paths_file(const std::string& path);

}  // namespace hoproute
