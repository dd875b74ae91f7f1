#include "doctest.h"
#include "fixture.hpp"
#include "mcc/taskgraph.hpp"

using namespace mcc;

namespace {

std::vector<std::string> node_names(const Chain& c) {
  std::vector<std::string> out;
  for (const auto& n : c.nodes) out.push_back(n.id.name);
  return out;
}

const Chain& chain_of(const TaskGraph& g, const std::string& root) {
  for (const auto& c : g.chains)
    if (c.root.str() == root) return c;
  FAIL("no chain " << root);
  return g.chains.front();
}

}  // namespace

TEST_CASE("running deployment, normal mode") {
  auto sys = fixture::pre_system();
  auto g = build_task_graph(sys.software, sys.config, Mode::Normal);
  REQUIRE(g.chains.size() == 1);
  const Chain& park = g.chains[0];
  CHECK(park.root.str() == "P.park_assist");
  CHECK(node_names(park) == std::vector<std::string>{"p1", "tc1", "or2", "tc2", "p2"});
  CHECK(park.event.period == 200);
  CHECK(park.event.jitter == 5);
  REQUIRE(park.requirements.size() == 2);
  CHECK(park.requirements[0].bound == 150);
  CHECK(park.requirements[0].begin == 0);
  CHECK(park.requirements[0].end == 5);
  CHECK(park.requirements[1].bound == 100);
  CHECK(park.requirements[1].begin == 2);
  CHECK(park.requirements[1].end == 3);
  CHECK(total_wcet(park) == 30);
  CHECK(range_wcet(park, 2, 3) == 10);
  CHECK(range_wcet(park, 2, 2) == 0);
}

TEST_CASE("running deployment, initialization mode") {
  auto sys = fixture::pre_system();
  auto g = build_task_graph(sys.software, sys.config, Mode::Initialization);
  REQUIRE(g.chains.size() == 1);
  CHECK(g.chains[0].root.str() == "P.init");
  CHECK(node_names(g.chains[0]) == std::vector<std::string>{"tci"});
  CHECK(g.chains[0].event.one_shot());
  CHECK(g.chains[0].event.eta(1000) == 1);
  CHECK(render_chains(g) == "chain P.init mode=initialization period=- jitter=-: tci(10/5)\n");
}

TEST_CASE("never-activated tasks are omitted") {
  auto sys = fixture::pre_system();
  for (Mode m : {Mode::Initialization, Mode::Normal})
    CHECK(!build_task_graph(sys.software, sys.config, m).locate({"O2", "om"}));
  auto post = build_task_graph(fixture::post_software(), fixture::post_config("O2", "O1", fixture::lane_first),
                               Mode::Normal);
  int count = 0;
  for (const auto& c : post.chains)
    for (const auto& n : c.nodes) count += n.id == TaskId{"O2", "om"};
  CHECK(count == 1);
}

TEST_CASE("post-update chains for both functional configurations") {
  auto sw = fixture::post_software();
  auto g = build_task_graph(sw, fixture::post_config("O2", "O1", fixture::lane_first), Mode::Normal);
  REQUIRE(g.chains.size() == 2);
  const Chain& lane = chain_of(g, "L.lane_assist");
  const Chain& park = chain_of(g, "P.park_assist");
  CHECK(node_names(lane) == std::vector<std::string>{"la1", "or1", "la2", "om", "la3", "s", "la4"});
  CHECK(lane.event.period == 100);
  CHECK(total_wcet(lane) == 90);
  CHECK(total_wcet(park) == 30);

  auto swapped = build_task_graph(sw, fixture::post_config("O1", "O2", fixture::lane_first), Mode::Normal);
  const Chain& park2 = chain_of(swapped, "P.park_assist");
  CHECK(node_names(park2) == std::vector<std::string>{"p1", "tc1", "or1", "tc2", "p2"});
  CHECK(total_wcet(chain_of(swapped, "L.lane_assist")) == 50);
  CHECK(total_wcet(park2) == 70);

  // Changing conn[T,or] swaps exactly one park node.
  int differing = 0;
  for (std::size_t i = 0; i < park.nodes.size(); ++i) differing += park.nodes[i].id != park2.nodes[i].id;
  CHECK(differing == 1);
}

TEST_CASE("chain text dump") {
  auto g = build_task_graph(fixture::post_software(), fixture::post_config("O1", "O2", fixture::lane_first),
                            Mode::Normal);
  CHECK(render_chains(g) ==
        "chain L.lane_assist mode=normal period=100 jitter=5: la1(3/1) -> or2(10/1) -> la2(3/1) -> om(10/1) -> "
        "la3(10/5) -> s(10/1) -> la4(4/1)\n"
        "  L: timing 75 lane_assist range=[0,7)\n"
        "chain P.park_assist mode=normal period=200 jitter=5: p1(3/1) -> tc1(5/1) -> or1(50/1) -> tc2(5/1) -> "
        "p2(7/1)\n"
        "  P: timing 150 park_assist range=[0,5)\n"
        "  T: timing 100 object_recognition.get() range=[2,3)\n");
}

TEST_CASE("signals fork chains with the trigger's event model") {
  auto sw = load_software_model(
      {"component A\n services\n  requires x\n threads\n  thread a\n   on time (period=50 jitter=2)\n"
       "    task a1\n     onto cpu\n      wcet=2 bcet=1\n    SIGNAL x.f()\n    task a2\n     onto cpu\n      wcet=3 bcet=1\n",
       "component B\n services\n  provides x\n threads\n  thread b\n   on RPC x.f()\n"
       "    task b1\n     onto cpu\n      wcet=4 bcet=1\n timings\n  timing 20\n   b\n"},
      "service x\n  method f()\n");
  auto cfg = parse_configuration(
      "[selected]\nA\nB\n[connections]\nA -> x -> B\n[mapping]\nA.a1 -> R\nA.a2 -> R\nB.b1 -> R\n"
      "[priorities]\n0 A.a\n1 B.b\n");
  auto g = build_task_graph(sw, cfg, Mode::Normal);
  REQUIRE(g.chains.size() == 2);
  CHECK(node_names(g.chains[0]) == std::vector<std::string>{"a1", "a2"});
  CHECK(node_names(g.chains[1]) == std::vector<std::string>{"b1"});
  CHECK(g.chains[1].event.period == 50);
  CHECK(g.chains[1].event.jitter == 2);
  REQUIRE(g.chains[1].trigger);
  CHECK(*g.chains[1].trigger == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(g.chains[0].signals == std::vector<std::pair<std::size_t, std::size_t>>{{1, 1}});
  REQUIRE(g.chains[1].requirements.size() == 1);
  CHECK(g.chains[1].requirements[0].bound == 20);
}

TEST_CASE("structural unfolding errors") {
  const char* repo = "service x\n  method f()\nservice y\n  method g()\n";
  SUBCASE("call cycle") {
    auto sw = load_software_model(
        {"component A\n services\n  requires x\n threads\n  thread a\n   on time (period=50 jitter=0)\n    RPC x.f()\n",
         "component B\n services\n  provides x\n  requires y\n threads\n  thread b\n   on RPC x.f()\n    RPC y.g()\n",
         "component C\n services\n  provides y\n  requires x\n threads\n  thread c\n   on RPC y.g()\n    RPC x.f()\n"},
        repo);
    auto cfg = parse_configuration(
        "[selected]\nA\nB\nC\n[connections]\nA -> x -> B\nB -> y -> C\nC -> x -> B\n[priorities]\n0 A.a\n1 B.b\n2 C.c\n");
    CHECK_THROWS_AS(build_task_graph(sw, cfg, Mode::Normal), AnalysisError);
  }
  SUBCASE("entry thread reached twice") {
    auto sw = fixture::post_software();
    auto cfg = fixture::post_config("O1", "O1", fixture::lane_first);
    CHECK_THROWS_AS(build_task_graph(sw, cfg, Mode::Normal), AnalysisError);
  }
  SUBCASE("unconnected call") {
    auto sys = fixture::pre_system();
    sys.config.connections.erase({"T", "object_recognition", "O2"});
    CHECK_THROWS_AS(build_task_graph(sys.software, sys.config, Mode::Normal), AnalysisError);
  }
}

TEST_CASE("event model activation count") {
  EventModel e{200, 5};
  CHECK(e.eta(0) == 1);
  CHECK(e.eta(195) == 1);
  CHECK(e.eta(196) == 2);
  CHECK(e.eta(170) == 1);
  EventModel lane{100, 5};
  CHECK(lane.eta(120) == 2);
  CHECK(lane.eta(170) == 2);
  CHECK(lane.eta(196) == 3);
}
