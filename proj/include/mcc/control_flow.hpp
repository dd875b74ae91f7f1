#pragma once

#include <set>
#include <string>
#include <vector>

#include "mcc/constraints.hpp"
#include "mcc/taskgraph.hpp"

namespace mcc {

/// One call step of a selected component, for one mode its thread runs in.
struct CallSite {
  std::string client;
  ThreadId thread;
  MethodRef method;
  Mode mode = Mode::Normal;
  std::size_t step = 0;  // index in the thread's step sequence
  std::string provider;  // connected provider, empty if unconnected
};

/// Call sites of all selected components, ordered by (client, thread, step, mode).
/// RPC-entry threads run in every mode of their callers.
std::vector<CallSite> call_profile(const SoftwareModel& software, const Configuration& cfg);

/// Modes in which each selected thread can run.
std::map<ThreadId, std::set<Mode>> thread_modes(const SoftwareModel& software, const Configuration& cfg);

struct CfViolation {
  std::string provider;
  MethodRef forbidden;
  MethodRef prerequisite;
  std::string client;
  ThreadId thread;

  /// `control_flow: <provider>.<X> reachable before <Y> via <client>/<thread>`
  std::string str() const;
};

struct CfVerdict {
  std::vector<CfViolation> violations;
  std::vector<Constraint> feedback;

  bool pass() const { return violations.empty(); }
};

/// `not X until Y`: a call to X is allowed if its thread called Y on the same provider
/// earlier in its step sequence; otherwise an initialization-mode call is a violation,
/// and a normal-mode call needs some selected component to call Y on that provider in
/// initialization mode. Each violation forbids the offending connection.
CfVerdict check_not_until(const SoftwareModel& software, const Configuration& cfg);

}  // namespace mcc
