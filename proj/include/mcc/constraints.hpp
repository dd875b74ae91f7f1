#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "mcc/deps.hpp"
#include "mcc/model.hpp"

namespace mcc {

struct SelLit {
  std::string component;
  friend auto operator<=>(const SelLit&, const SelLit&) = default;
};
struct ConnLit {
  std::string client;
  std::string service;
  std::string provider;
  friend auto operator<=>(const ConnLit&, const ConnLit&) = default;
};
struct MapLit {
  TaskId task;
  std::string resource;
  friend auto operator<=>(const MapLit&, const MapLit&) = default;
};

/// A decision literal over the (C, SC, M) part of a configuration.
using Literal = std::variant<SelLit, ConnLit, MapLit>;

std::string literal_str(const Literal& l);
/// Evaluated against a (possibly partial) configuration; unset variables read as false.
bool holds(const Literal& l, const Configuration& cfg);
bool holds_all(const std::vector<Literal>& ls, const Configuration& cfg);

struct ThreadPair {
  ThreadId above;
  ThreadId below;
  std::string str() const { return above.str() + " above " + below.str(); }
  friend auto operator<=>(const ThreadPair&, const ThreadPair&) = default;
};

/// Built-in structural rule (listed for dumps; enforced by the enumerator itself).
struct Structural {
  Condition condition;
  friend bool operator==(const Structural&, const Structural&) = default;
};
/// Forbids every configuration in which all literals hold. Empty = contradiction.
struct ForbidConjunction {
  std::vector<Literal> literals;
  friend bool operator==(const ForbidConjunction&, const ForbidConjunction&) = default;
};
struct PriorityPrecedence {
  ThreadPair pair;
  friend bool operator==(const PriorityPrecedence&, const PriorityPrecedence&) = default;
};
/// Where the context holds, at least one pair must be inverted.
struct PriorityNogood {
  std::vector<Literal> context;
  std::vector<ThreadPair> pairs;
  friend bool operator==(const PriorityNogood&, const PriorityNogood&) = default;
};

struct Constraint {
  std::variant<Structural, ForbidConjunction, PriorityPrecedence, PriorityNogood> kind;
  /// Viewpoint that produced it, e.g. "timing" or "control_flow".
  std::string origin;

  std::string str() const;
  friend bool operator==(const Constraint&, const Constraint&) = default;
};

/// Whether `k` forces `above` to outrank `below` (precedence, or single-pair nogood
/// forbidding the inverse) whenever its context holds.
bool implies_precedence(const Constraint& k, const ThreadId& above, const ThreadId& below);

/// Priority constraints that apply to one (C, SC, M) structure.
struct PriorityConstraints {
  std::vector<ThreadPair> precedences;
  std::vector<std::vector<ThreadPair>> nogoods;

  bool admits(const PriorityOrder& order) const;
};

/// A candidate without priorities, plus the threads Π must order.
struct Structure {
  Configuration config;
  std::vector<ThreadId> threads;
};

class PriorityProvider {
 public:
  virtual ~PriorityProvider() = default;
  /// An order over `s.threads` admitted by `pc`, or nullopt when there is none left.
  virtual std::optional<PriorityOrder> propose(const Structure& s, const PriorityConstraints& pc) = 0;
};

/// Lexicographically smallest admitted permutation (threads compared by name).
class LexicographicPriorities : public PriorityProvider {
 public:
  std::optional<PriorityOrder> propose(const Structure& s, const PriorityConstraints& pc) override;
};

/// The configuration space: decision variables, constraints, and a resumable
/// depth-first enumeration cursor.
///
/// Structures are enumerated by always branching on the smallest open
/// (client, service) pair, providers in name order, then on task mappings in
/// task order, resources in name order. When a preferred (running)
/// configuration is supplied, its provider / resource for a variable is tried
/// first. Components are selected iff pinned or reached through a chosen
/// connection.
class ConstraintStore {
 public:
  static ConstraintStore init_space(const SoftwareModel& software, const PlatformModel& platform,
                                    const std::set<std::string>& pinned,
                                    std::optional<Configuration> preferred = std::nullopt);

  void add_constraint(Constraint k);
  const std::vector<Constraint>& constraints() const { return constraints_; }

  /// Moves to the next structure satisfying all (C, SC, M) constraints.
  std::optional<Structure> next_structure();
  /// Next untried priority order for the current structure, or nullopt when that
  /// structure is exhausted (or has been pruned by a later constraint).
  std::optional<Configuration> next_priority(PriorityProvider& provider);
  /// Full candidate (C, SC, M, Π); nullopt = Exhausted.
  std::optional<Configuration> next_candidate(PriorityProvider& provider);
  std::optional<Configuration> next_candidate();

  /// Priority constraints whose context holds in `structure`, including exclusions
  /// of orders already emitted for the current structure.
  PriorityConstraints priority_constraints_for(const Configuration& structure) const;

  /// Normalized form the store keeps: singleton-domain literals become selection
  /// literals, selections implied by pins or by other literals are dropped.
  std::vector<Literal> normalize(std::vector<Literal> literals) const;

  const ConnectionCandidates& candidates() const { return candidates_; }
  const std::set<std::string>& always_selected() const { return always_selected_; }
  const std::vector<std::string>& resources_for(const TaskId& task) const;

  /// Stable textual listing of variables, domains and constraints.
  std::string dump() const;

 private:
  struct State {
    Configuration cfg;
    std::set<Requirement> open;
    std::map<std::pair<std::string, std::string>, int> clients;
  };
  struct Variable {
    std::optional<Requirement> pair;
    std::optional<TaskId> task;
  };
  struct Frame {
    Variable var;
    std::vector<std::string> options;
    std::size_t idx = 0;
    State state;
  };

  std::optional<State> apply(const State& s, const Variable& v, const std::string& option) const;
  std::optional<Variable> next_variable(const State& s) const;
  std::vector<std::string> options_for(const Variable& v) const;
  bool pruned(const Configuration& partial) const;
  bool descend(State s);
  std::optional<State> try_next(Frame& f) const;

  const SoftwareModel* software_ = nullptr;
  const PlatformModel* platform_ = nullptr;
  std::optional<Configuration> preferred_;
  ConnectionCandidates candidates_;
  std::set<std::string> always_selected_;
  std::map<TaskId, std::vector<std::string>> task_domains_;
  std::vector<Constraint> constraints_;

  std::optional<State> initial_;
  bool started_ = false;
  std::vector<Frame> stack_;
  std::optional<Structure> current_;
  std::vector<PriorityOrder> emitted_;
};

}  // namespace mcc
