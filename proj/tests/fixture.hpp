// Shared loaders for the automotive corpus.
#pragma once

#include <string>
#include <vector>

#include "mcc/io.hpp"
#include "mcc/model.hpp"

namespace fixture {

inline std::string corpus(const std::string& rel) { return std::string(MCC_CORPUS) + "/" + rel; }

inline mcc::SoftwareModel pre_software() {
  return mcc::load_contract_dir(corpus("contracts"), corpus("services.repo"));
}

inline mcc::PlatformModel platform() { return mcc::load_platform(corpus("platform.txt")); }

inline mcc::Configuration current() { return mcc::load_configuration(corpus("current.cfg")); }

inline mcc::SystemModel pre_system() { return {pre_software(), platform(), current()}; }

inline std::vector<mcc::UpdateRequest> lane_requests() { return mcc::load_requests(corpus("requests/add_lane_assist.req")); }

inline mcc::SoftwareModel post_software() {
  auto sw = pre_software();
  for (const auto& r : lane_requests()) sw = mcc::apply_update(sw, r);
  return sw;
}

/// Post-update configuration, all tasks on CPU1. `t_or` / `l_or` pick the object
/// recognition providers of T and L; `priorities` lists threads highest first.
inline mcc::Configuration post_config(const std::string& t_or, const std::string& l_or,
                                      const std::vector<std::string>& priorities) {
  std::string text = "[selected]\nL\nO1\nO2\nP\nS\nT\n[connections]\n";
  text += "L -> object_masking -> O2\nL -> object_recognition -> " + l_or + "\nL -> steering -> S\n";
  text += "P -> trajectory_calculation -> T\nT -> object_recognition -> " + t_or + "\n[mapping]\n";
  for (const char* t : {"L.la1", "L.la2", "L.la3", "L.la4", "O1.or1", "O2.om", "O2.or2", "P.p1", "P.p2", "S.s",
                        "T.tc1", "T.tc2", "T.tci"})
    text += std::string(t) + " -> CPU1\n";
  text += "[priorities]\n";
  for (std::size_t i = 0; i < priorities.size(); ++i) text += std::to_string(i) + " " + priorities[i] + "\n";
  return mcc::parse_configuration(text);
}

/// Lane-chain threads first, then the park chain, then the init threads.
inline const std::vector<std::string> lane_first = {
    "L.lane_assist",  "O2.object_masking_get",        "O2.object_recognition_get",
    "S.steering_set_angle", "O1.object_recognition_get", "P.park_assist",
    "T.trajectory_calculation_get", "P.init", "T.trajectory_calculation_init"};

}  // namespace fixture
