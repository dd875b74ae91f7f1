#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcc/taskgraph.hpp"

namespace mcc {

struct ChainRelease {
  Time offset = 0;
  /// Release delay of activation k (missing entries = 0); each draw must lie in [0, J].
  std::vector<Time> jitter;
};

/// One entry per chain of the graph; signal-forked chains ignore theirs (they are
/// released by their trigger).
struct ReleaseScenario {
  std::vector<ChainRelease> chains;
  /// Periodic chains release while the nominal release time is below the horizon.
  Time horizon = 0;
  /// Stop the clock at the horizon instead of draining outstanding activations.
  bool stop_at_horizon = false;
};

struct SimResult {
  /// Whole-chain latency of every completed activation, per chain.
  std::vector<std::vector<Time>> latencies;
  /// Observed latencies per chain, per requirement (same order as Chain::requirements).
  std::vector<std::vector<std::vector<Time>>> requirement_latencies;
  /// `t=<time> <event> <task>` lines (empty unless requested).
  std::vector<std::string> trace;
  bool partial = false;
};

/// Fixed-priority preemptive schedule of the graph on the configuration's resources,
/// every task running for its wcet. Activations of one chain are served in order, node
/// k+1 becoming ready when node k completes.
SimResult simulate(const TaskGraph& g, const Configuration& cfg, const ReleaseScenario& scenario,
                   bool record_trace = false);

struct Observed {
  std::vector<Time> chain_max;
  std::vector<std::vector<Time>> requirement_max;
  std::uint64_t scenarios = 0;
  bool partial = false;

  friend bool operator==(const Observed&, const Observed&) = default;
};

/// Least common multiple of the periodic chains' periods (1 if none).
Time hyperperiod(const TaskGraph& g);

/// Number of grid points of worst_observed for the given step.
std::uint64_t grid_size(const TaskGraph& g, Time step);

/// Offsets of grid point `index`: first periodic root at 0, every other periodic root
/// over [0, P) in `step` increments; maximal jitter on the first activation only.
ReleaseScenario grid_scenario(const TaskGraph& g, Time step, std::uint64_t index);

/// Maximum latencies over the offset grid, horizon two hyperperiods. Serial reference.
Observed worst_observed_serial(const TaskGraph& g, const Configuration& cfg, Time step);
/// Same result, grid points distributed over OpenMP threads.
Observed worst_observed(const TaskGraph& g, const Configuration& cfg, Time step);

}  // namespace mcc
