#include <algorithm>

#include "doctest.h"
#include "fixture.hpp"
#include "mcc/negotiator.hpp"

using namespace mcc;

namespace {

constexpr auto BW = InterferenceModel::BusyWindow;
constexpr auto SB = InterferenceModel::SingleBlocking;

const ThreadId kOr1{"O1", "object_recognition_get"};

bool traced(const NegotiationResult& r, const std::string& needle) {
  return std::any_of(r.trace.lines.begin(), r.trace.lines.end(),
                     [&](const std::string& l) { return l.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("lane assist upload under single-blocking is accepted") {
  auto sys = fixture::pre_system();
  auto r = negotiate(sys, fixture::lane_requests(), {SB});
  REQUIRE(r.answer.yes);
  const Configuration& cfg = *r.answer.config;
  CHECK(cfg.components == std::set<std::string>{"L", "O1", "O2", "P", "S", "T"});
  CHECK(cfg.connections == std::set<Connection>{{"L", "object_masking", "O2"},
                                                {"L", "object_recognition", "O2"},
                                                {"L", "steering", "S"},
                                                {"P", "trajectory_calculation", "T"},
                                                {"T", "object_recognition", "O1"}});
  CHECK(std::all_of(cfg.mapping.begin(), cfg.mapping.end(), [](const auto& m) { return m.second == "CPU1"; }));
  for (const char* t : {"L.lane_assist", "O2.object_masking_get", "O2.object_recognition_get", "S.steering_set_angle"}) {
    auto lane = *cfg.rank_of(QualifiedName::parse(t));
    CHECK(lane < *cfg.rank_of(kOr1));
    CHECK(lane < *cfg.rank_of({"P", "park_assist"}));
    CHECK(lane < *cfg.rank_of({"T", "trajectory_calculation_get"}));
  }

  bool pass = false;
  evaluate(r.software, sys.platform, cfg, SB, pass);
  CHECK(pass);
  CHECK(r.answer.previous == sys.config);
  CHECK(r.trace.lines.back().rfind("ACCEPT", 0) == 0);
  CHECK(traced(r, "U=21/20 OVERLOAD"));
  CHECK(traced(r, "timing 75 lane_assist: bound=50 PASS model=single-blocking"));
  CHECK(traced(r, "timing 150 park_assist: bound=120 PASS model=single-blocking"));
  CHECK(traced(r, "timing 100 object_recognition.get(): bound=100 PASS model=single-blocking"));
  auto text = render_answer(r.answer);
  CHECK(text.rfind("answer yes\n", 0) == 0);
}

TEST_CASE("lane assist upload under busy-window is refused") {
  auto sys = fixture::pre_system();
  auto r = negotiate(sys, fixture::lane_requests(), {BW});
  CHECK(!r.answer.yes);
  CHECK(r.answer.reason == "exhausted");
  CHECK(!r.answer.config);
  CHECK(r.trace.lines.back().rfind("EXHAUSTED", 0) == 0);
  CHECK(traced(r, "timing 150 park_assist: bound=170 FAIL model=busy-window"));
  CHECK(!r.answer.constraints.empty());
  CHECK(render_answer(r.answer).rfind("answer no (exhausted)\n", 0) == 0);
}

TEST_CASE("removing O2 reroutes trajectory calculation to O1") {
  auto sys = fixture::pre_system();
  auto r = negotiate(sys, load_requests(fixture::corpus("requests/remove_o2.req")), {BW});
  REQUIRE(r.answer.yes);
  CHECK(r.answer.config->components == std::set<std::string>{"O1", "P", "T"});
  CHECK(r.answer.config->connections ==
        std::set<Connection>{{"P", "trajectory_calculation", "T"}, {"T", "object_recognition", "O1"}});
  CHECK(!r.software.has("O2"));
  CHECK(sys.software.has("O2"));
}

TEST_CASE("empty request keeps the running configuration") {
  auto sys = fixture::pre_system();
  for (auto m : {BW, SB}) {
    auto r = negotiate(sys, {}, {m});
    REQUIRE(r.answer.yes);
    CHECK(*r.answer.config == sys.config);
    CHECK(r.trace.candidates == 2);
  }
}

TEST_CASE("mutant without init is refused by control flow") {
  auto sys = fixture::pre_system();
  UpdateRequest up{ChangeType::Update, load_contract_file(fixture::corpus("mutants/P_noinit.contract"))};
  sys.config.priorities.erase(std::find(sys.config.priorities.begin(), sys.config.priorities.end(), ThreadId{"P", "init"}));
  auto r = negotiate(sys, {up}, {BW});
  CHECK(!r.answer.yes);
  CHECK(traced(r, "control_flow: T.trajectory_calculation.get() reachable before trajectory_calculation.init()"));
  REQUIRE(r.answer.constraints.size() == 1);
  CHECK(r.answer.constraints[0].str() == "control_flow: forbid true");
}

TEST_CASE("budget stops the search") {
  auto sys = fixture::pre_system();
  auto r = negotiate(sys, fixture::lane_requests(), {BW, 1});
  CHECK(!r.answer.yes);
  CHECK(r.answer.reason == "budget-exhausted");
  CHECK(r.trace.lines.back().rfind("BUDGET", 0) == 0);
}

TEST_CASE("negotiation is deterministic") {
  auto sys = fixture::pre_system();
  for (auto m : {BW, SB}) {
    auto a = negotiate(sys, fixture::lane_requests(), {m});
    auto b = negotiate(sys, fixture::lane_requests(), {m});
    CHECK(a.trace.str() == b.trace.str());
    CHECK(render_answer(a.answer) == render_answer(b.answer));
  }
}

TEST_CASE("request errors propagate") {
  auto sys = fixture::pre_system();
  auto reqs = fixture::lane_requests();
  reqs.push_back(reqs.front());
  CHECK_THROWS_AS(negotiate(sys, reqs), ModelError);
  CHECK_THROWS_AS(parse_requests("frobnicate X\n", "."), ParseError);
  CHECK_THROWS_AS(parse_requests("remove\n", "."), ParseError);
}
