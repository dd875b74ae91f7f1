#include <algorithm>

#include "doctest.h"
#include "fixture.hpp"
#include "mcc/sim.hpp"
#include "mcc/timing.hpp"

using namespace mcc;

namespace {

Time max_of(const std::vector<Time>& xs) { return xs.empty() ? 0 : *std::max_element(xs.begin(), xs.end()); }

ReleaseScenario synchronous(const TaskGraph& g, Time horizon) {
  ReleaseScenario sc;
  sc.chains.resize(g.chains.size());
  sc.horizon = horizon;
  return sc;
}

std::size_t index_of(const TaskGraph& g, const std::string& root) {
  for (std::size_t i = 0; i < g.chains.size(); ++i)
    if (g.chains[i].root.str() == root) return i;
  FAIL("no chain " << root);
  return 0;
}

}  // namespace

TEST_CASE("park chain alone takes its wcet sum") {
  auto sys = fixture::pre_system();
  auto g = build_task_graph(sys.software, sys.config, Mode::Normal);
  auto r = simulate(g, sys.config, synchronous(g, 1000));
  REQUIRE(r.latencies.size() == 1);
  CHECK(r.latencies[0].size() == 5);
  CHECK(std::all_of(r.latencies[0].begin(), r.latencies[0].end(), [](Time l) { return l == 30; }));
  CHECK(max_of(r.requirement_latencies[0][1]) == 10);
  CHECK(!r.partial);
  auto o = worst_observed(g, sys.config, 1);
  CHECK(o.chain_max == std::vector<Time>{30});
}

TEST_CASE("synchronous release reaches the busy-window bound") {
  auto sw = fixture::post_software();
  auto cfg = fixture::post_config("O1", "O2", fixture::lane_first);
  auto g = build_task_graph(sw, cfg, Mode::Normal);
  std::size_t park = index_of(g, "P.park_assist"), lane = index_of(g, "L.lane_assist");
  auto r = simulate(g, cfg, synchronous(g, 200), true);
  CHECK(r.latencies[park].front() == 170);
  CHECK(r.latencies[lane].front() == 50);
  CHECK(chain_latency_bound(g, park, 0, 5, cfg, InterferenceModel::BusyWindow) == 170);

  // lane runs 0-50 and 100-150, park runs 50-100 and 150-170
  auto has = [&](const std::string& line) { return std::find(r.trace.begin(), r.trace.end(), line) != r.trace.end(); };
  CHECK(has("t=0 release L.lane_assist#0"));
  CHECK(has("t=0 dispatch L.la1"));
  CHECK(has("t=50 finish L.lane_assist#0 latency=50"));
  CHECK(has("t=50 dispatch P.p1"));
  CHECK(has("t=100 preempt O1.or1"));
  CHECK(has("t=150 finish L.lane_assist#1 latency=50"));
  CHECK(has("t=170 finish P.park_assist#0 latency=170"));

  auto o = worst_observed(g, cfg, 1);
  CHECK(o.chain_max[park] == 170);
  CHECK(o.chain_max[lane] == 50);
}

TEST_CASE("single task with an offset") {
  auto sw = load_software_model(
      {"component A\n threads\n  thread a\n   on time (period=20 jitter=3)\n    task t\n     onto cpu\n      wcet=4 bcet=1\n"},
      "");
  auto cfg = parse_configuration("[selected]\nA\n[mapping]\nA.t -> R\n[priorities]\n0 A.a\n");
  auto g = build_task_graph(sw, cfg, Mode::Normal);
  auto sc = synchronous(g, 20);
  sc.chains[0].offset = 7;
  auto r = simulate(g, cfg, sc, true);
  CHECK(r.latencies[0] == std::vector<Time>{4});
  CHECK(r.trace.back() == "t=11 finish A.a#0 latency=4");
  CHECK(worst_observed(g, cfg, 1).chain_max == std::vector<Time>{4});
}

TEST_CASE("jitter delays the release") {
  auto sw = load_software_model(
      {"component A\n threads\n  thread a\n   on time (period=20 jitter=3)\n    task t\n     onto cpu\n      wcet=4 bcet=1\n",
       "component B\n threads\n  thread b\n   on time (period=20 jitter=0)\n    task u\n     onto cpu\n      wcet=5 bcet=1\n"},
      "");
  auto cfg = parse_configuration("[selected]\nA\nB\n[mapping]\nA.t -> R\nB.u -> R\n[priorities]\n0 A.a\n1 B.b\n");
  auto g = build_task_graph(sw, cfg, Mode::Normal);
  auto sc = synchronous(g, 20);
  sc.chains[0].jitter = {3};
  auto r = simulate(g, cfg, sc);
  // B starts at 0, is preempted at 3 by A (3-7), finishes at 9; latency counts from the delayed release.
  CHECK(r.latencies[1] == std::vector<Time>{9});
  CHECK(r.latencies[0] == std::vector<Time>{4});
}

TEST_CASE("disjoint offsets never interfere") {
  auto sw = load_software_model(
      {"component A\n threads\n  thread a\n   on time (period=20 jitter=0)\n    task t\n     onto cpu\n      wcet=5 bcet=1\n",
       "component B\n threads\n  thread b\n   on time (period=20 jitter=0)\n    task u\n     onto cpu\n      wcet=6 bcet=1\n"},
      "");
  auto cfg = parse_configuration("[selected]\nA\nB\n[mapping]\nA.t -> R\nB.u -> R\n[priorities]\n0 A.a\n1 B.b\n");
  auto g = build_task_graph(sw, cfg, Mode::Normal);
  auto sc = synchronous(g, 40);
  sc.chains[1].offset = 10;
  auto r = simulate(g, cfg, sc);
  CHECK(max_of(r.latencies[0]) == 5);
  CHECK(max_of(r.latencies[1]) == 6);
  CHECK(worst_observed(g, cfg, 1).chain_max == std::vector<Time>{5, 11});
}

TEST_CASE("short horizon marks the result partial") {
  auto sys = fixture::pre_system();
  auto g = build_task_graph(sys.software, sys.config, Mode::Normal);
  auto sc = synchronous(g, 10);
  sc.stop_at_horizon = true;
  CHECK(simulate(g, sys.config, sc).partial);
  sc.chains.pop_back();
  CHECK_THROWS_AS(simulate(g, sys.config, sc), AnalysisError);
}

TEST_CASE("offset grid") {
  auto sw = fixture::post_software();
  auto cfg = fixture::post_config("O1", "O2", fixture::lane_first);
  auto g = build_task_graph(sw, cfg, Mode::Normal);
  CHECK(hyperperiod(g) == 200);
  CHECK(grid_size(g, 1) == 200);
  CHECK(grid_size(g, 7) == 29);
  auto sc = grid_scenario(g, 1, 37);
  CHECK(sc.horizon == 400);
  std::size_t lane = index_of(g, "L.lane_assist"), park = index_of(g, "P.park_assist");
  CHECK(sc.chains[lane].offset == 0);
  CHECK(sc.chains[park].offset == 37);
  CHECK(sc.chains[park].jitter == std::vector<Time>{5});
  CHECK(hyperperiod(TaskGraph{}) == 1);
}

TEST_CASE("serial and parallel grid searches agree") {
  auto sw = fixture::post_software();
  for (const auto& [t_or, l_or] : {std::pair<std::string, std::string>{"O1", "O2"}, {"O2", "O1"}}) {
    auto cfg = fixture::post_config(t_or, l_or, fixture::lane_first);
    for (Mode m : {Mode::Initialization, Mode::Normal}) {
      auto g = build_task_graph(sw, cfg, m);
      for (Time step : {1, 3}) CHECK(worst_observed(g, cfg, step) == worst_observed_serial(g, cfg, step));
    }
  }
}
