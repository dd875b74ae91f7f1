#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mcc/constraints.hpp"
#include "mcc/timing.hpp"

namespace mcc {

struct NegotiationOptions {
  InterferenceModel model = InterferenceModel::BusyWindow;
  /// Cap on drawn candidates (structures plus priority orders).
  std::size_t budget = 10'000;
};

/// Append-only log; the last line is `ACCEPT ...`, `EXHAUSTED ...` or `BUDGET ...`.
struct NegotiationTrace {
  std::vector<std::string> lines;
  std::size_t candidates = 0;

  std::string str() const;
};

struct Answer {
  bool yes = false;
  /// For No: "exhausted" or "budget-exhausted".
  std::string reason;
  /// For No: the feedback constraints that emptied the space.
  std::vector<Constraint> constraints;
  std::optional<Configuration> config;
  /// The running configuration, kept alongside the new one.
  Configuration previous;
  /// Per-viewpoint evidence from a standalone re-check of `config`.
  std::vector<std::string> report;
};

struct NegotiationResult {
  Answer answer;
  NegotiationTrace trace;
  SoftwareModel software;  // after the requests
};

/// Standalone evaluation of a complete configuration: well-formedness, control flow,
/// then timing of both modes. `pass` receives the overall verdict.
std::vector<std::string> evaluate(const SoftwareModel& software, const PlatformModel& platform,
                                  const Configuration& cfg, InterferenceModel model, bool& pass);

/// Applies the requests atomically, then searches the configuration space pinned on every
/// component with a time-activated thread, preferring the running configuration.
NegotiationResult negotiate(const SystemModel& sys, const std::vector<UpdateRequest>& requests,
                            const NegotiationOptions& options = {});

std::string render_answer(const Answer& a);

}  // namespace mcc
