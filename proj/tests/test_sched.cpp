#include <doctest.h>

#include "hoproute/sched.hpp"

using namespace hoproute;

TEST_CASE("single packet completes in dilation steps") {
  auto g = CapacitatedGraph::create(4, {{0, 1, 1.0}, {1, 2, 1.0}, {2, 3, 1.0}});
  auto s = random_delay_schedule({RoutePath{{0, 1, 2, 3}}}, g, 5);
  CHECK(s.congestion == 1);
  CHECK(s.dilation == 3);
  CHECK(s.delay[0] == 0);  // Cbar = 1 forces zero delay
  CHECK(s.completion_time == 3);
  auto r = schedule_report(s);
  CHECK(r.ratio == doctest::Approx(3.0 / 4.0));
}

TEST_CASE("k packets over one shared unit edge serialize") {
  auto g = CapacitatedGraph::create(2, {{0, 1, 1.0}});
  const int k = 6;
  std::vector<RoutePath> paths(k, RoutePath{{0, 1}});
  auto s = random_delay_schedule(paths, g, 9);
  CHECK(s.congestion == k);
  CHECK(s.completion_time >= k);
  auto r = schedule_report(s);
  CHECK(r.completion >= std::max(r.congestion, r.dilation));
  CHECK(r.ratio >= 0.5 - 1e-12);
}

TEST_CASE("disjoint cycle paths complete at dilation") {
  const int n = 8;
  std::vector<std::tuple<NodeId, NodeId, double>> e;
  for (NodeId v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n, 1.0);
  auto g = CapacitatedGraph::create(n, e);
  // 8 packets, each a single distinct edge: no contention
  std::vector<RoutePath> paths;
  for (NodeId v = 0; v < n; ++v)
    paths.push_back(RoutePath{{v, static_cast<NodeId>((v + 1) % n)}});
  auto s = random_delay_schedule(paths, g, 13);
  CHECK(s.congestion == 1);
  CHECK(s.completion_time == s.dilation);
}

TEST_CASE("capacity admits parallel packets") {
  auto g = CapacitatedGraph::create(2, {{0, 1, 3.0}});
  std::vector<RoutePath> paths(6, RoutePath{{0, 1}});
  auto s = random_delay_schedule(paths, g, 21);
  CHECK(s.congestion == 2);  // ceil(6 / 3)
  CHECK(s.completion_time >= 2);
  CHECK(s.completion_time <= 4);
}

TEST_CASE("determinism given seed") {
  auto g = CapacitatedGraph::create(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  std::vector<RoutePath> paths(4, RoutePath{{0, 1, 2}});
  auto a = random_delay_schedule(paths, g, 33);
  auto b = random_delay_schedule(paths, g, 33);
  CHECK(a.delay == b.delay);
  CHECK(a.completion_time == b.completion_time);
}
