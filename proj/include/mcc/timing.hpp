#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "mcc/constraints.hpp"
#include "mcc/taskgraph.hpp"

namespace mcc {

enum class InterferenceModel { BusyWindow, SingleBlocking };

std::string model_str(InterferenceModel m);
/// "busy-window" | "single-blocking"; throws ModelError otherwise.
InterferenceModel parse_model(std::string_view text);

using Rational = boost::rational<std::int64_t>;

std::string rational_str(const Rational& r);

/// Per-resource load of the periodic chains: sum over chains of (wcet on r) / P.
/// One-shot chains contribute nothing. Resources without tasks are absent.
std::map<std::string, Rational> utilization(const TaskGraph& g, const std::map<TaskId, std::string>& mapping);

/// Worst-case latency of nodes [begin, end) of chain `chain` under `cfg`'s priorities and
/// mapping; nullopt = unbounded. Interference comes from tasks of other chains on the
/// range's resources whose thread outranks the range's lowest thread on that resource.
/// Busy-window: least fixed point of w = C + sum_j (eta_j(w) C_j + K_j), where K_j is the
/// interfering work queued behind chain j's first non-interfering task (carry-in); the
/// whole mode is unbounded if some periodic chain's own bound plus jitter exceeds its period.
/// Single-blocking: C + the wcet of every interfering task, once.
std::optional<Time> chain_latency_bound(const TaskGraph& g, std::size_t chain, std::size_t begin, std::size_t end,
                                        const Configuration& cfg, InterferenceModel model);

struct RequirementVerdict {
  std::size_t chain = 0;
  LatencyReq req;
  std::optional<Time> bound;
  bool pass = false;

  /// `timing <bound> <target>: bound=<B> <PASS|FAIL> model=<m>`
  std::string str(InterferenceModel m) const;
};

struct TimingVerdict {
  Mode mode = Mode::Normal;
  InterferenceModel model = InterferenceModel::BusyWindow;
  std::map<std::string, Rational> utilization;
  std::vector<std::string> overloaded;
  /// Empty when the mode is overloaded (latencies are not analysed then).
  std::vector<RequirementVerdict> requirements;
  /// Whole-chain bound of every chain, for reporting.
  std::vector<std::pair<ThreadId, std::optional<Time>>> chain_bounds;
  std::vector<Constraint> feedback;

  bool pass() const;
  std::vector<std::string> lines() const;
};

/// Utilization test, then every latency requirement of the graph. Feedback: one
/// ForbidConjunction per overloaded resource (the literals that put those chains
/// there), or one PriorityNogood per missed requirement.
TimingVerdict check_timing(const TaskGraph& g, const Configuration& cfg, InterferenceModel model);

/// Priority-independent necessary precedences: if a requirement range cannot absorb even
/// one activation of thread t's tasks on a resource, every range thread on that resource
/// must outrank t.
std::vector<Constraint> derive_precedences(const TaskGraph& g, const std::map<TaskId, std::string>& mapping);

/// Literals under which the chain exists with its current content.
std::vector<Literal> chain_context(const TaskGraph& g, std::size_t chain);

/// Deadline used for ordering: the smallest requirement bound covering one of the
/// thread's tasks; nullopt if none.
std::map<ThreadId, Time> thread_deadlines(const std::vector<const TaskGraph*>& graphs);

/// Deadline-monotonic order (shortest deadline first, ties by name).
PriorityOrder deadline_monotonic(const std::vector<const TaskGraph*>& graphs, std::vector<ThreadId> threads);

/// Exact lowest-priority-first search for an order over `threads` that meets every
/// requirement of `graphs` (and, for busy-window, keeps every periodic chain's bound
/// plus jitter within its period) while honouring `pc`. nullopt if none exists or the
/// node budget runs out.
std::optional<PriorityOrder> synthesize_priorities(const std::vector<const TaskGraph*>& graphs,
                                                   const std::map<TaskId, std::string>& mapping,
                                                   const std::vector<ThreadId>& threads,
                                                   const PriorityConstraints& pc, InterferenceModel model,
                                                   std::uint64_t node_budget = 2'000'000);

}  // namespace mcc
