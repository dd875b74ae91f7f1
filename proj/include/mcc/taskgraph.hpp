#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcc/model.hpp"

namespace mcc {

enum class Mode { Initialization, Normal };

std::string mode_str(Mode m);

struct TaskNode {
  TaskId id;
  /// Thread whose step sequence contains the task (after inlining, the callee's thread).
  ThreadId thread;
  Time wcet = 0;
  Time bcet = 0;
  std::string resource_type;
};

/// Periodic (period, jitter); a missing period marks a one-shot chain
/// (initialization mode: activated exactly once).
struct EventModel {
  std::optional<Time> period;
  Time jitter = 0;

  bool one_shot() const { return !period.has_value(); }
  /// Activations in a window of length `delta`: ceil((delta + J) / P), 1 for one-shot chains.
  std::int64_t eta(Time delta) const;
};

/// A latency requirement attached to the node range [begin, end) of a chain.
struct LatencyReq {
  std::string component;
  Time bound = 0;
  std::string target;  // as written in the contract
  std::size_t begin = 0;
  std::size_t end = 0;

  std::string str() const { return "timing " + std::to_string(bound) + " " + target; }
};

/// An inlined RPC / signal callee: `caller` invoked `target`, served by `entry`.
struct InlinedCall {
  ThreadId caller;
  MethodRef target;
  ThreadId entry;
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Chain {
  ThreadId root;
  Mode mode = Mode::Normal;
  std::vector<TaskNode> nodes;
  EventModel event;
  /// Set for signal-forked chains: parent chain index and the node position after
  /// which the signal fires (it is emitted once nodes [0, position) complete).
  std::optional<std::pair<std::size_t, std::size_t>> trigger;
  /// Children forked by signals: (node position, chain index).
  std::vector<std::pair<std::size_t, std::size_t>> signals;
  std::vector<LatencyReq> requirements;
  std::vector<InlinedCall> calls;
  /// Connections traversed while unfolding (sorted, unique).
  std::vector<Connection> via;

  /// Threads contributing nodes or calls, first occurrence order.
  std::vector<ThreadId> threads() const;
};

struct TaskGraph {
  Mode mode = Mode::Normal;
  std::vector<Chain> chains;

  /// Chain index and position of a task, if it is activated in this mode.
  std::optional<std::pair<std::size_t, std::size_t>> locate(const TaskId& t) const;
};

/// Unfolds time-activated (normal) or initialization-activated roots of the selected
/// components. RPC steps are replaced by the connected provider's entry-thread tasks,
/// signals fork chains inheriting the trigger's event model. Throws AnalysisError on
/// call cycles, missing connections / entry threads, or an entry thread reached twice
/// in one mode.
TaskGraph build_task_graph(const SoftwareModel& software, const Configuration& cfg, Mode mode);

Time total_wcet(const Chain& chain);
Time range_wcet(const Chain& chain, std::size_t begin, std::size_t end);

/// `chain <thread> mode=<m> period=<p> jitter=<j>: t1(wcet/bcet) -> ...`, requirement
/// lines indented below their chain.
std::string render_chains(const TaskGraph& g);

}  // namespace mcc
