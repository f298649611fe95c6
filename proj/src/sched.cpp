#include "hoproute/sched.hpp"

#include <algorithm>
#include <cmath>

#include "hoproute/rng.hpp"

namespace hoproute {

Schedule random_delay_schedule(const std::vector<RoutePath>& paths,
                               const CapacitatedGraph& g, std::uint64_t seed) {
  Schedule s;
  s.paths = paths;
  const int m = g.edge_count();
  std::vector<int> budget(static_cast<std::size_t>(m));
  for (int e = 0; e < m; ++e)
    budget[static_cast<std::size_t>(e)] =
        std::max(1, static_cast<int>(std::floor(g.capacity[e])));

  // C and D of the path set.
  std::vector<int> load(static_cast<std::size_t>(m), 0);
  for (const auto& p : paths) {
    s.dilation = std::max(s.dilation, p.hops());
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
      int e = g.topo.edge_index(p.nodes[i], p.nodes[i + 1]);
      if (e < 0) throw UnknownEdge("schedule path leaves the graph");
      ++load[static_cast<std::size_t>(e)];
    }
  }
  for (int e = 0; e < m; ++e)
    s.congestion = std::max(
        s.congestion, static_cast<int>(std::ceil(
                          static_cast<double>(load[static_cast<std::size_t>(e)]) /
                          budget[static_cast<std::size_t>(e)])));

  Rng rng(seed);
  const int cbar = std::max(1, s.congestion);
  s.delay.resize(paths.size());
  for (auto& d : s.delay) d = static_cast<int>(rng.next_below(cbar));

  // Time-stepped simulation; FIFO by packet id on oversubscribed edges.
  std::vector<int> pos(paths.size(), 0);
  std::size_t remaining = 0;
  for (std::size_t i = 0; i < paths.size(); ++i)
    if (paths[i].hops() > 0) ++remaining;
  std::vector<int> used(static_cast<std::size_t>(m));
  const long cap_steps = 4L * (cbar + s.dilation + 2) * (s.dilation + 1) + cbar + 16;
  int t = 0;
  for (; remaining > 0 && t < cap_steps; ++t) {
    std::fill(used.begin(), used.end(), 0);
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (pos[i] >= paths[i].hops() || s.delay[i] > t) continue;
      int e = g.topo.edge_index(paths[i].nodes[static_cast<std::size_t>(pos[i])],
                                paths[i].nodes[static_cast<std::size_t>(pos[i]) + 1]);
      if (used[static_cast<std::size_t>(e)] < budget[static_cast<std::size_t>(e)]) {
        ++used[static_cast<std::size_t>(e)];
        if (++pos[i] == paths[i].hops()) --remaining;
      }
    }
  }
  if (remaining > 0) throw Error("schedule simulation failed to drain");
  s.completion_time = t;
  return s;
}

ScheduleReport schedule_report(const Schedule& s) {
  ScheduleReport r;
  r.completion = s.completion_time;
  r.congestion = s.congestion;
  r.dilation = s.dilation;
  r.ratio = (s.congestion + s.dilation) > 0
                ? static_cast<double>(s.completion_time) / (s.congestion + s.dilation)
                : 0.0;
  return r;
}

}  // namespace hoproute
