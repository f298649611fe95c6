#pragma once

#include <cstdint>
#include <vector>

#include "hoproute/graph.hpp"

namespace hoproute {

struct Schedule {
  std::vector<int> delay;        // per-packet start delay
  std::vector<RoutePath> paths;  // per-packet route
  int completion_time = 0;
  int congestion = 0;  // C: max over edges of ceil(load / floor(capacity))
  int dilation = 0;    // D: max hops among the paths
};

// Each packet draws a uniform integer delay in [0, Cbar) with Cbar the max
// edge congestion of the path set, then moves one hop per step; oversubscribed
// edges stall the excess packets, FIFO by packet id.
Schedule random_delay_schedule(const std::vector<RoutePath>& paths,
                               const CapacitatedGraph& g, std::uint64_t seed);

struct ScheduleReport {
  int completion = 0;
  int congestion = 0;
  int dilation = 0;
  double ratio = 0.0;  // completion / (C + D)
};

ScheduleReport schedule_report(const Schedule& s);

}  // namespace hoproute
