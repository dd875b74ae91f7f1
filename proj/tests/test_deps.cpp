#include "doctest.h"
#include "fixture.hpp"
#include "mcc/deps.hpp"

using namespace mcc;

namespace {

/// Brute force: every choice of providers for every requirement pair of the reachable
/// components, keeping assignments whose chosen providers are exactly the lazily pulled
/// in ones and that honour max_clients.
std::uint64_t brute_force(const SoftwareModel& sw, const std::set<std::string>& pinned) {
  std::vector<Requirement> pairs;
  std::vector<std::vector<std::string>> options;
  for (const auto& [name, c] : sw.contracts)
    for (const auto& s : c.required) {
      std::vector<std::string> ps;
      for (const auto& [pname, p] : sw.contracts)
        if (compatible_provider(c, p, s)) ps.push_back(pname);
      pairs.push_back({name, s});
      options.push_back(ps);
    }
  std::uint64_t count = 0;
  std::vector<std::size_t> pick(pairs.size(), 0);
  std::set<std::vector<std::pair<Requirement, std::string>>> seen;
  for (;;) {
    bool valid = true;
    std::set<std::string> sel = pinned;
    std::vector<std::pair<Requirement, std::string>> chosen;
    bool changed = true, missing = false;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!sel.count(pairs[i].client)) continue;
        if (options[i].empty()) { missing = true; continue; }
        if (sel.insert(options[i][pick[i]]).second) changed = true;
      }
    }
    for (std::size_t i = 0; i < pairs.size(); ++i)
      if (sel.count(pairs[i].client) && !options[i].empty()) chosen.push_back({pairs[i], options[i][pick[i]]});
    std::map<std::pair<std::string, std::string>, int> clients;
    for (const auto& [r, p] : chosen) ++clients[{p, r.service}];
    for (const auto& [k, n] : clients) {
      auto mc = sw.services.at(k.second).max_clients;
      if (mc && n > *mc) valid = false;
    }
    if (valid && !missing && seen.insert(chosen).second) ++count;
    std::size_t i = 0;
    for (; i < pairs.size(); ++i) {
      if (options[i].empty()) continue;
      if (++pick[i] < options[i].size()) break;
      pick[i] = 0;
    }
    if (i == pairs.size()) break;
  }
  return count;
}

}  // namespace

TEST_CASE("must/may connections of the six-contract model") {
  auto sw = fixture::post_software();
  auto cc = connection_candidates(sw, {"L", "P"});
  CHECK(cc.must == std::vector<Connection>{{"L", "object_masking", "O2"}, {"L", "steering", "S"},
                                           {"P", "trajectory_calculation", "T"}});
  REQUIRE(cc.may.size() == 2);
  CHECK(cc.may[0] == MayEdge{"L", "object_recognition", {"O1", "O2"}});
  CHECK(cc.may[1] == MayEdge{"T", "object_recognition", {"O1", "O2"}});
  CHECK(cc.unsatisfiable.empty());
  CHECK(cc.reachable == std::set<std::string>{"L", "O1", "O2", "P", "S", "T"});
  CHECK(count_solutions(cc, sw.services) == 2);
  CHECK(count_solutions(cc, sw.services) == brute_force(sw, {"L", "P"}));

  auto unbounded = sw.services;
  unbounded.at("object_recognition").max_clients.reset();
  CHECK(count_solutions(cc, unbounded) == 4);
  auto sw2 = sw;
  sw2.services = unbounded;
  CHECK(brute_force(sw2, {"L", "P"}) == 4);
}

TEST_CASE("running deployment has only must connections") {
  auto sw = fixture::pre_software();
  UpdateRequest drop{ChangeType::Remove, {}};
  drop.contract.component = "O1";
  sw = apply_update(sw, drop);
  auto cc = connection_candidates(sw, {"P"});
  CHECK(cc.must == std::vector<Connection>{{"P", "trajectory_calculation", "T"}, {"T", "object_recognition", "O2"}});
  CHECK(cc.may.empty());
  CHECK(count_solutions(cc, sw.services) == 1);
}

TEST_CASE("requirement without provider is unsatisfiable") {
  SoftwareModel sw;
  sw.services = fixture::pre_software().services;
  sw.contracts.emplace("P", fixture::pre_software().contract("P"));
  auto cc = connection_candidates(sw, {"P"});
  CHECK(cc.must.empty());
  CHECK(cc.may.empty());
  CHECK(cc.unsatisfiable == std::vector<Requirement>{{"P", "trajectory_calculation"}});
  CHECK(count_solutions(cc, sw.services) == 0);
  CHECK(render_edge_list(cc) == "unsatisfiable P -> trajectory_calculation\n");
  CHECK_THROWS_AS(connection_candidates(sw, {"Q"}), ModelError);
}

TEST_CASE("lazy expansion counts only the chosen providers' requirements") {
  auto sw = load_software_model(
      {"component A\n services\n  requires x\n threads\n  thread a\n   on time (period=10 jitter=0)\n    RPC x.f()\n",
       "component B\n services\n  provides x\n  requires y\n threads\n  thread b\n   on RPC x.f()\n    RPC y.g()\n",
       "component C\n services\n  provides x\n threads\n  thread c\n   on RPC x.f()\n    task t\n     onto cpu\n      wcet=1 bcet=1\n",
       "component D\n services\n  provides y\n threads\n  thread d\n   on RPC y.g()\n    task t\n     onto cpu\n      wcet=1 bcet=1\n",
       "component E\n services\n  provides y\n threads\n  thread e\n   on RPC y.g()\n    task t\n     onto cpu\n      wcet=1 bcet=1\n"},
      "service x\n method f()\nservice y\n method g()\n");
  auto cc = connection_candidates(sw, {"A"});
  // A->x->C, A->x->B->y->D, A->x->B->y->E
  CHECK(count_solutions(cc, sw.services) == 3);
  CHECK(brute_force(sw, {"A"}) == 3);
}

TEST_CASE("adding a contract never shrinks may sets") {
  auto pre = fixture::pre_software();
  auto post = fixture::post_software();
  auto before = connection_candidates(pre, {"P"});
  auto after = connection_candidates(post, {"L", "P"});
  for (const auto& [req, providers] : before.domains) {
    REQUIRE(after.domains.count(req));
    for (const auto& p : providers)
      CHECK(std::find(after.domains.at(req).begin(), after.domains.at(req).end(), p) != after.domains.at(req).end());
  }
}

TEST_CASE("edge list and dot output") {
  auto cc = connection_candidates(fixture::post_software(), {"L", "P"});
  CHECK(render_edge_list(cc) ==
        "must L -> object_masking -> O2\n"
        "must L -> steering -> S\n"
        "must P -> trajectory_calculation -> T\n"
        "may L -> object_recognition -> O1 | O2\n"
        "may T -> object_recognition -> O1 | O2\n");
  std::string dot = render_dot(cc);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("dashed") != std::string::npos);
}
